// Peripheral structure: Cartan lattice, corner-turn walks on the links,
// holonomy exponents, the maps h and g, and the exact theorem checks.
#pragma once

#include "nzs/gluing.hpp"
#include "nzs/lattice.hpp"
#include "nzs/triangulation.hpp"

#include <json.hpp>

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace nzs {

struct CartanLattice {
    int rank = 0;
    IntMatrix gram;                            // [v_a, v_b]
    std::vector<std::vector<Rational>> inverse;  // dual basis w_a = sum inverse[a][b] v_b
    Rational pairing(int b, int a) const;      // [v_b, w_a]
};

CartanLattice cartan_lattice(int n);

// Global index of a corner (t,i,j) among the 12 per tetrahedron.
int corner_index(const Corner& c);
Corner corner_at(int index);

// One step of a walk on a link: turning around the corner (t,i,j), to the
// left (+1, along c_ij) or to the right (-1, against it).
struct Turn {
    Corner corner;
    int sign = 1;
    bool operator==(const Turn&) const = default;
};

struct PeripheralPath {
    std::vector<Turn> turns;

    IntVector chain(int tets) const;  // over global corners
    PeripheralPath reversed() const;
    PeripheralPath then(const PeripheralPath& other) const;
    PeripheralPath power(int k) const;
};

// Throws std::invalid_argument when consecutive turns do not cross a glued
// side into the next triangle, including the wrap-around.
void require_closed(const Triangulation& tri, const PeripheralPath& path);
bool is_closed(const Triangulation& tri, const PeripheralPath& path);

// Closed walks from a root side, one per non-tree step of a search tree.
std::vector<PeripheralPath> fundamental_walks(const Triangulation& tri, const LinkChainComplex& link);

// Left turns around one end of an interior edge: a nullhomotopic loop.
PeripheralPath corner_loop(const Triangulation& tri, const Corner& start);

// Coordinates of cycles in the free part of H1 of a link.
class LinkHomology {
public:
    explicit LinkHomology(const LinkChainComplex& link);
    std::size_t rank() const { return rank_; }
    IntVector local_chain(const IntVector& global_chain) const;
    IntVector coordinates(const IntVector& global_chain) const;

private:
    std::vector<int> global_;  // global corner index per local corner
    IntMatrix cycles_;
    IntMatrix U_;
    std::size_t boundary_rank_ = 0;
    std::size_t rank_ = 0;
};

struct PeripheralBasis {
    int link = 0;
    LinkKind kind = LinkKind::disc;
    std::vector<PeripheralPath> generators;  // torus: (l, m); annulus: (s)
    Int intersection = 0;                    // ι(l, m') for tori
};

std::vector<PeripheralBasis> peripheral_bases(const Triangulation& tri);

// w(c, m) for m = 1..n-1: C_m = ± z^{w(c,m)}.
std::vector<IntVector> hol_exponents(const Triangulation& tri, const GluedComplex& g, const PeripheralPath& path);
std::vector<IntVector> hol_exponents(const Triangulation& tri, int n, const PeripheralPath& path);

enum class HVariant { symmetric, signed_literal, one_face, reflected };
std::string to_string(HVariant v);
extern const std::array<HVariant, 4> kAllVariants;

// Columns indexed by corner_index * (n-1) + (m-1); rows by global points.
IntMatrix build_h(const GluedComplex& g, HVariant variant = HVariant::symmetric);
// Rows indexed like the columns of h, in dual-basis coordinates of L'.
IntMatrix build_g(const GluedComplex& g, const IntMatrix& h);
IntMatrix build_g(const Triangulation& tri, int n);
IntVector tensor(const IntVector& chain, int level, int n);  // chain ⊗ v_level

struct CheckReport {
    std::string check;
    int n = 0;
    std::string status = "pass";  // pass | fail | skipped
    nlohmann::json details = nlohmann::json::object();
    bool passed() const { return status == "pass"; }
    bool failed() const { return status == "fail"; }
    nlohmann::json to_json() const;
};

CheckReport check_g_identity(const Triangulation& tri, int n, HVariant variant = HVariant::symmetric);
CheckReport check_hol_lemma(const Triangulation& tri, int n, HVariant variant = HVariant::symmetric);
// Lemma check with an explicit h matrix (used for mutation tests).
CheckReport check_hol_lemma(const Triangulation& tri, const GluedComplex& g, const IntMatrix& h);
CheckReport check_times4(const Triangulation& tri, int n, HVariant variant = HVariant::symmetric);
CheckReport check_tetrahedron_identities(int n, HVariant variant = HVariant::symmetric);
CheckReport dim_formula_check(const Triangulation& tri, int n);

struct HomologyHJ {
    std::size_t dim = 0;
    IntMatrix basis;  // representatives in J coordinates, columns
    IntMatrix gram;
    std::size_t dual_dim = 0;
    IntMatrix dual_basis;  // representatives in (J²)* coordinates
    IntMatrix dual_gram;
    bool forms_match = false;
};

HomologyHJ homology_HJ(const Triangulation& tri, int n);
HomologyHJ homology_HJ(const GluedComplex& g);

struct ConventionSelection {
    std::vector<int> ns;
    std::vector<std::pair<HVariant, bool>> results;
    std::optional<HVariant> selected;
    nlohmann::json to_json() const;
};

ConventionSelection select_h_convention(const Triangulation& tri, const std::vector<int>& ns);

}  // namespace nzs
