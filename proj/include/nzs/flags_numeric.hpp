// Complex layer: affine flags, their a- and z-coordinates, the Lagrangian
// and Neumann-Zagier checks, the n = 2 gluing solver and rigidity ranks.
#pragma once

#include "nzs/gluing.hpp"
#include "nzs/peripheral.hpp"
#include "nzs/tetra_lattice.hpp"
#include "nzs/triangulation.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <array>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace nzs {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

struct Tolerances {
    double svd_gap = 1e6;            // Lagrangian rank gap
    double isotropy = 1e-9;
    double invariance = 1e-10;
    double nz_relative = 1e-4;
    double fd_step = 1e-5;
    double solve_residual = 1e-12;
    double reject_residual = 1e-2;
    double dedup = 1e-8;
    double completeness = 1e-8;
    double rigidity_zero = 1e-7;
    double rigidity_gap = 1e4;
    int newton_iterations = 100;
    int newton_starts = 48;
    int lagrangian_samples = 20;

    nlohmann::json to_json() const;
};

class DegenerateConfiguration : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Each flag is an n x (n-1) matrix; level k is spanned by its first k columns.
struct AffineFlagTuple {
    int n = 0;
    std::array<CMatrix, 4> flags;
};

CVector a_coordinates(const AffineFlagTuple& flags);
// log z = Ω² log a, evaluated multiplicatively.
CVector z_of_tetrahedron(const CVector& a, int n);

AffineFlagTuple random_flags(int n, std::mt19937_64& rng);
AffineFlagTuple veronese_flags(Complex cross_ratio, int n);
AffineFlagTuple transform(const AffineFlagTuple& flags, const CMatrix& g);

// d log a / d(flag parameters), 2n(n-1) parameters: each generator column c
// of flag v moves by sum_{r>c} N_rc G_v[:, r] for a completed basis G_v.
CMatrix log_a_jacobian(const AffineFlagTuple& flags);
CMatrix log_a_jacobian_fd(const AffineFlagTuple& flags, double step);

struct LagrangianReport {
    int n = 0;
    int samples = 0;
    int resampled = 0;
    int expected_rank = 0;
    int min_rank = 0;
    int max_rank = 0;
    double min_gap = 0;
    double max_isotropy = 0;
    double fd_order = 0;  // observed convergence order of the finite-difference cross-check
    bool passed = false;
    nlohmann::json to_json() const;
};

LagrangianReport lagrangian_check(int n, int samples, std::uint64_t seed, const Tolerances& tol = {});

// Classical shape (cross-ratio) at edge (i,j) of four points of CP^1 given
// as vectors in C^2.
Complex cross_ratio_shape(const std::array<Eigen::Vector2cd, 4>& pts, int i, int j);
// Shape at edge {i,j} of a tetrahedron with parameter x at edge {0,1}.
Complex edge_shape(Complex x, int i, int j);

struct NzFactorReport {
    int n = 0;
    Complex cross_ratio;
    double step = 0;
    double expected = 0;
    double ratio = 0;
    double ratio_half_step = 0;
    double imag_part = 0;
    double nz_positivity = 0;  // i Ω_NZ(ξ, ξ̄)
    bool stable = false;
    bool passed = false;
    nlohmann::json to_json() const;
};

NzFactorReport nz_factor_check(int n, Complex cross_ratio, double step = 1e-5, const Tolerances& tol = {});

struct GluingSolution {
    std::vector<Complex> shapes;  // per tetrahedron, at edge {0,1}
    double residual = 0;
    bool positive = false;
};

struct SolveReport {
    std::vector<GluingSolution> solutions;
    int starts = 0;
    int converged = 0;
    std::uint64_t seed = 0;
    std::vector<std::string> diagnostics;
};

// Classical residual max |prod ζ^e - 1| over edge and cusp equations.
double gluing_residual(const Triangulation& tri, const std::vector<Complex>& shapes);
SolveReport solve_gluing_n2(const Triangulation& tri, std::uint64_t seed = 1, const Tolerances& tol = {});
std::optional<GluingSolution> geometric_solution(const SolveReport& rep);

// z values over the global point set at given shapes, using Veronese flags.
CVector glued_z(const GluedComplex& g, const std::vector<Complex>& shapes);
// Classical shape divided by module z at each point of one tetrahedron, n = 2.
std::vector<int> classical_sign_table();
// C_1 of a closed walk from the exponent vector, sign-corrected to the classical value.
Complex evaluate_c1(const Triangulation& tri, const std::vector<Complex>& shapes, const PeripheralPath& path);

struct RigidityReport {
    int n = 0;
    int cusps = 0;
    int expected = 0;
    int tangent_dimension = 0;
    int trivial_directions = 0;
    int peripheral_rank = 0;
    double tangent_gap = 0;
    double constraint_gap = 0;
    double peripheral_gap = 0;
    double face_edge_residual = 0;          // max |prod z^F - 1|
    double face_edge_residual_squared = 0;  // max |(prod z^F)^2 - 1|
    double lemma_shadow = 0;                // max |z^h ∓ (z^w)^2|, best sign
    std::string status = "fail";            // pass | fail | inconclusive
    nlohmann::json to_json() const;
};

// Ranks from per-tetrahedron tangent blocks (columns span the tangent of
// log z), linear equations on log z, and peripheral exponent rows.
RigidityReport rigidity_ranks(const std::vector<CMatrix>& tangents, const IntMatrix& equations,
                              const IntMatrix& peripheral, int expected, const Tolerances& tol = {});
RigidityReport rigidity_rank_check(const Triangulation& tri, int n, const std::vector<Complex>& shapes,
                                   const Tolerances& tol = {});

}  // namespace nzs
