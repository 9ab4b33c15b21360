// Global modules over a triangulation: the orthogonal sum of the tetrahedron
// modules, the internal points, the maps F, F', G and the face/edge system.
#pragma once

#include "nzs/lattice.hpp"
#include "nzs/tetra_lattice.hpp"
#include "nzs/triangulation.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace nzs {

struct InternalPointClass {
    enum class Kind { face, edge };
    int id = 0;
    Kind kind = Kind::face;
    std::vector<int> members;  // global point indices, ascending
    int edge_class = -1;       // edge points only
    int level = 0;             // edge points: weight at the terminal vertex
    std::string label;
};

struct GluedComplex {
    int n = 0;
    int tets = 0;
    TetraLattice local;
    std::vector<BarycentricPoint> points;  // global index = tet * |I_T| + local
    IntMatrix form;                        // block diagonal Ω²
    IntMatrix kernel;                      // block diagonal ker p
    IntMatrix projection;                  // J² -> J
    IntMatrix section;                     // J -> J²
    IntMatrix omega;                       // Ω on J
    std::vector<InternalPointClass> internal;
    IntMatrix F;

    std::size_t size() const { return points.size(); }
    int index_of(int tet, const Weights& w) const;
    std::vector<std::string> point_ids() const;
};

GluedComplex build_glued(const Triangulation& tri, int n);

std::vector<InternalPointClass> internal_points(const Triangulation& tri, int n);
IntMatrix F_matrix(const Triangulation& tri, int n);

struct ComplexReport {
    int n = 0;
    bool composition_vanishes = false;  // F* p F = 0
    bool orthogonality_holds = false;   // Ker G = Im(F')^⊥
    std::size_t rank_F_prime = 0;
    std::size_t rank_G = 0;
    std::size_t dim_ker_G = 0;
    std::size_t dim_H = 0;
    std::vector<Int> torsion;  // invariant factors > 1 of Im F' in its saturation
    std::vector<std::string> failures;
    bool passed() const { return composition_vanishes && orthogonality_holds; }
};

ComplexReport verify_complex(const Triangulation& tri, int n);
ComplexReport verify_complex(const GluedComplex& g);

struct ExponentSystem {
    struct Row {
        std::string label;
        IntVector exponents;
        int rhs = 1;
    };
    std::vector<std::string> variables;
    std::vector<Row> rows;

    IntMatrix matrix() const;  // rows x variables
};

ExponentSystem face_edge_equations(const Triangulation& tri, int n);
ExponentSystem face_edge_equations(const GluedComplex& g);

struct SigmaProjection {
    std::vector<std::vector<int>> points;  // members (global indices) per Σ point
    IntMatrix form;                        // Ω_Σ
    SkewLatticeModule module;
    IntMatrix exponent_map;                // rows Σ points, columns global points
    bool empty() const { return points.empty(); }
    std::size_t dim_J() const { return empty() ? 0 : rank(form); }
};

SigmaProjection sigma_projection(const Triangulation& tri, int n);

nlohmann::json to_json(const ExponentSystem& s);
std::string to_csv(const IntMatrix& m, const std::vector<std::string>& header);
nlohmann::json to_json(const ComplexReport& r);

}  // namespace nzs
