// Abstract triangulations: tetrahedra glued along faces by orientation
// reversing matchings, their edge classes, vertex links and the two cell
// decompositions of each link.
#pragma once

#include "nzs/lattice.hpp"

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nzs {

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class TopologyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Perm4 = std::array<int, 4>;

int parity(const Perm4& p);
Perm4 inverse(const Perm4& p);

// Oriented boundary faces of the standard tetrahedron (0,1,2,3), indexed by
// the opposite vertex.
extern const std::array<std::array<int, 3>, 4> kFaceOrientation;

// (k,l) such that (i,j,k,l) is an even permutation.
std::pair<int, int> even_completion(int i, int j);

struct FaceGluing {
    int tet = 0;
    int face = 0;
    int to_tet = 0;
    int to_face = 0;
    Perm4 vertex_map{};
};

struct Neighbor {
    int tet;
    Perm4 perm;
};

class Triangulation {
public:
    Triangulation(int tetrahedra, std::vector<FaceGluing> gluings);

    int size() const { return n_tets_; }
    const std::vector<FaceGluing>& gluings() const { return gluings_; }
    const std::optional<Neighbor>& neighbor(int tet, int face) const { return nbr_[tet * 4 + face]; }
    bool is_glued(int tet, int face) const { return nbr_[tet * 4 + face].has_value(); }
    int free_face_count() const;

private:
    int n_tets_;
    std::vector<FaceGluing> gluings_;
    std::vector<std::optional<Neighbor>> nbr_;
};

Triangulation parse_triangulation(std::string_view text);
std::string to_json(const Triangulation& tri);

Triangulation figure_eight();
Triangulation single_tetrahedron();
// Resolves "fig8"/"single"; nullopt for other names.
std::optional<Triangulation> fixture(std::string_view name);

// A tetrahedron edge with an ordered vertex pair.
struct TetEdge {
    int tet;
    int i;
    int j;
    bool operator==(const TetEdge&) const = default;
};

struct EdgeClass {
    std::vector<TetEdge> representatives;
    bool interior = false;
};

std::vector<EdgeClass> edge_classes(const Triangulation& tri);

enum class LinkKind { disc, torus, annulus, other };
std::string to_string(LinkKind k);

struct LinkSurface {
    int vertex_class = 0;
    std::vector<std::pair<int, int>> triangles;  // (tet, vertex)
    int euler_characteristic = 0;
    int boundary_circles = 0;
    LinkKind kind = LinkKind::other;
};

std::vector<LinkSurface> vertex_links(const Triangulation& tri);

// A corner of a link triangle: in the link of vertex i of tetrahedron tet,
// near edge (i,j).
struct Corner {
    int tet;
    int i;
    int j;
    bool operator==(const Corner&) const = default;
    auto operator<=>(const Corner&) const = default;
};

// Cell structures on one link. The edges of the first complex are the
// corner segments c_ij, those of the second the dual segments c'_ij; both
// are indexed by the same corner list, and the intersection pairing is the
// identity on that index.
struct LinkChainComplex {
    int link = 0;
    LinkKind kind = LinkKind::other;
    std::vector<Corner> corners;
    IntMatrix d1;       // sides -> corners
    IntMatrix d2;       // corners <- central triangles and vertex polygons
    IntMatrix dual_d1;  // dual vertices -> dual edges
    IntMatrix dual_d2;  // dual edges <- quads across glued sides
    IntMatrix iota;

    int index_of(const Corner& c) const;
    // Carries a cycle of corner segments to a homotopic dual chain.
    IntVector to_dual(const IntVector& chain) const;
    // ι(d, φ(c)) for chains d, c of corner segments.
    Int intersection(const IntVector& d, const IntVector& c) const;

    // side class root per (tet, vertex, face), and the face matchings
    // needed to walk from a root side into its neighbours
    std::map<std::array<int, 3>, std::array<int, 3>> side_root;
    std::map<std::pair<int, int>, Neighbor> matching;
};

std::vector<LinkChainComplex> build_link_complexes(const Triangulation& tri);

// Rank of the free part of H1 = ker d1 / im d2.
std::size_t betti1(const IntMatrix& d1, const IntMatrix& d2);

struct BoundarySurface {
    std::vector<std::pair<int, int>> triangles;  // free (tet, face)
    bool empty() const { return triangles.empty(); }
};

BoundarySurface boundary_surface(const Triangulation& tri);

}  // namespace nzs
