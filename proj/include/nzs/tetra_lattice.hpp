// Points of the (n-1)-triangulation of a tetrahedron, the skew form on them
// and the associated modules J and J*.
#pragma once

#include "nzs/lattice.hpp"

#include <array>
#include <string>
#include <vector>

namespace nzs {

using Weights = std::array<int, 4>;

struct BarycentricPoint {
    int tet = 0;
    Weights weights{};
    std::string id() const;
    bool on_face(int f) const { return weights[f] == 0; }
    bool is_edge_point() const;
};

// Weight quadruples with sum n and one or two zeros, lexicographic.
std::vector<Weights> enumerate_points(int n);

// Ω² on the points of one tetrahedron, in enumerate_points order.
IntMatrix epsilon_matrix(int n);

// v_i(m) for i = 0..3, m = 1..n-1 (in that nesting order). Independent, but
// they span a sublattice of index n in the kernel.
std::vector<IntVector> kernel_vectors(int n);
// v_i(m) for m = 0..n-1, the face planes included. Generates the kernel over Z.
std::vector<IntVector> plane_vectors(int n);

// A free module Z^d with a skew form and the quotient J = Z^d / ker.
// J is presented in coordinates through a projection Q (kills the kernel)
// and a section S with Q S = I; J* = image of p = E S.
struct SkewLatticeModule {
    IntMatrix form;
    IntMatrix kernel;       // saturated basis of ker(form), columns
    IntMatrix projection;   // Q: Z^d -> J
    IntMatrix section;      // S: J -> Z^d
    IntMatrix omega;        // Ω on J in the chosen coordinates
    IntMatrix dual_basis;   // columns p(S e_k), a basis of J*

    std::size_t dimension() const { return omega.rows(); }
    // p(u) = Ω²(·, u)
    IntVector p(const IntVector& u) const { return form * u; }
    // Ω* on J* computed from integer preimages under p.
    Int omega_star(const IntVector& v, const IntVector& w) const;
};

SkewLatticeModule make_skew_module(const IntMatrix& form);

struct TetraLattice {
    int n = 0;
    std::vector<Weights> points;
    SkewLatticeModule module;
    std::vector<IntVector> kernel_generators;

    int index_of(const Weights& w) const;
};

TetraLattice build_module(int n);

}  // namespace nzs
