#include "nzs/triangulation.hpp"

#include "nzs/union_find.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>

namespace nzs {

const std::array<std::array<int, 3>, 4> kFaceOrientation = {{{1, 2, 3}, {0, 3, 2}, {0, 1, 3}, {0, 2, 1}}};

int parity(const Perm4& p)
{
    int s = 0;
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b)
            if (p[a] > p[b]) ++s;
    return s % 2;
}

Perm4 inverse(const Perm4& p)
{
    Perm4 q{};
    for (int a = 0; a < 4; ++a) q[p[a]] = a;
    return q;
}

std::pair<int, int> even_completion(int i, int j)
{
    int rest[2], n = 0;
    for (int x = 0; x < 4; ++x)
        if (x != i && x != j) rest[n++] = x;
    if (parity({i, j, rest[0], rest[1]}) == 0) return {rest[0], rest[1]};
    return {rest[1], rest[0]};
}

Triangulation::Triangulation(int tetrahedra, std::vector<FaceGluing> gluings)
    : n_tets_(tetrahedra), gluings_(std::move(gluings)), nbr_(static_cast<std::size_t>(std::max(tetrahedra, 0)) * 4)
{
    if (tetrahedra <= 0) throw ParseError("tetrahedra count must be positive");
    auto in_range = [&](int t, int f) { return t >= 0 && t < n_tets_ && f >= 0 && f < 4; };
    for (const auto& g : gluings_) {
        if (!in_range(g.tet, g.face) || !in_range(g.to_tet, g.to_face))
            throw ParseError("gluing refers to a missing tetrahedron or face");
        if (g.tet == g.to_tet && g.face == g.to_face)
            throw ParseError("self-gluing of face (" + std::to_string(g.tet) + "," + std::to_string(g.face) + ")");
        std::array<bool, 4> hit{};
        for (int v : g.vertex_map) {
            if (v < 0 || v > 3 || hit[v]) throw ParseError("vertex_map is not a bijection");
            hit[v] = true;
        }
        if (g.vertex_map[g.face] != g.to_face) throw ParseError("vertex_map must send face to to_face");
        if (parity(g.vertex_map) != 1)
            throw ParseError("orientation-preserving matching on face (" + std::to_string(g.tet) + "," +
                             std::to_string(g.face) + "); matchings must reverse orientation");
        auto& a = nbr_[g.tet * 4 + g.face];
        auto& b = nbr_[g.to_tet * 4 + g.to_face];
        if (a || b) throw ParseError("face glued twice");
        a = Neighbor{g.to_tet, g.vertex_map};
        b = Neighbor{g.tet, inverse(g.vertex_map)};
    }
    // rejects edges identified with themselves reversed
    edge_classes(*this);
}

int Triangulation::free_face_count() const
{
    return static_cast<int>(std::count_if(nbr_.begin(), nbr_.end(), [](const auto& n) { return !n; }));
}

Triangulation parse_triangulation(std::string_view text)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("malformed document: ") + e.what());
    }
    try {
        if (!doc.is_object() || doc.value("format", "") != "nz-tri-1")
            throw ParseError("malformed document: expected format \"nz-tri-1\"");
        if (!doc.contains("tetrahedra") || !doc["tetrahedra"].is_number_integer())
            throw ParseError("malformed document: missing tetrahedra count");
        std::vector<FaceGluing> gl;
        if (doc.contains("gluings")) {
            if (!doc["gluings"].is_array()) throw ParseError("malformed document: gluings must be a list");
            for (const auto& g : doc["gluings"]) {
                FaceGluing f;
                f.tet = g.at("tet").get<int>();
                f.face = g.at("face").get<int>();
                f.to_tet = g.at("to_tet").get<int>();
                f.to_face = g.at("to_face").get<int>();
                const auto& vm = g.at("vertex_map");
                if (!vm.is_array() || vm.size() != 4) throw ParseError("vertex_map must have 4 entries");
                for (int v = 0; v < 4; ++v) f.vertex_map[v] = vm[v].get<int>();
                gl.push_back(f);
            }
        }
        return Triangulation(doc["tetrahedra"].get<int>(), std::move(gl));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed document: ") + e.what());
    }
}

std::string to_json(const Triangulation& tri)
{
    nlohmann::json doc;
    doc["format"] = "nz-tri-1";
    doc["tetrahedra"] = tri.size();
    doc["gluings"] = nlohmann::json::array();
    for (const auto& g : tri.gluings())
        doc["gluings"].push_back({{"tet", g.tet},
                                  {"face", g.face},
                                  {"to_tet", g.to_tet},
                                  {"to_face", g.to_face},
                                  {"vertex_map", g.vertex_map}});
    return doc.dump();
}

Triangulation figure_eight()
{
    return Triangulation(2, {{0, 0, 1, 0, {0, 2, 1, 3}},
                             {0, 1, 1, 1, {2, 1, 0, 3}},
                             {0, 2, 1, 3, {1, 2, 3, 0}},
                             {0, 3, 1, 2, {1, 3, 0, 2}}});
}

Triangulation single_tetrahedron()
{
    return Triangulation(1, {});
}

std::optional<Triangulation> fixture(std::string_view name)
{
    if (name == "fig8") return figure_eight();
    if (name == "single") return single_tetrahedron();
    return std::nullopt;
}

namespace {

// Crossing the face opposite k (forward) or l (backward) keeps (i,j,k,l) even.
std::optional<TetEdge> step(const Triangulation& tri, const TetEdge& e, bool forward)
{
    auto [k, l] = even_completion(e.i, e.j);
    const auto& nb = tri.neighbor(e.tet, forward ? k : l);
    if (!nb) return std::nullopt;
    return TetEdge{nb->tet, nb->perm[e.i], nb->perm[e.j]};
}

}  // namespace

std::vector<EdgeClass> edge_classes(const Triangulation& tri)
{
    std::vector<EdgeClass> out;
    std::set<std::array<int, 3>> seen;
    auto key = [](const TetEdge& e) { return std::array<int, 3>{e.tet, std::min(e.i, e.j), std::max(e.i, e.j)}; };
    for (int t = 0; t < tri.size(); ++t)
        for (int a = 0; a < 4; ++a)
            for (int b = a + 1; b < 4; ++b) {
                TetEdge start{t, a, b};
                if (seen.count(key(start))) continue;
                EdgeClass cls;
                std::vector<TetEdge> fwd{start};
                std::set<std::array<int, 3>> local{key(start)};
                bool closed = false;
                auto bad = [] { throw ParseError("edge identified with itself in reverse"); };
                for (auto cur = step(tri, start, true); cur; cur = step(tri, *cur, true)) {
                    if (*cur == start) {
                        closed = true;
                        break;
                    }
                    if (!local.insert(key(*cur)).second) bad();
                    fwd.push_back(*cur);
                }
                std::vector<TetEdge> back;
                if (!closed)
                    for (auto cur = step(tri, start, false); cur; cur = step(tri, *cur, false)) {
                        if (!local.insert(key(*cur)).second) bad();
                        back.push_back(*cur);
                    }
                cls.representatives.assign(back.rbegin(), back.rend());
                cls.representatives.insert(cls.representatives.end(), fwd.begin(), fwd.end());
                cls.interior = closed;
                for (const auto& e : cls.representatives) seen.insert(key(e));
                out.push_back(std::move(cls));
            }
    return out;
}

std::string to_string(LinkKind k)
{
    switch (k) {
    case LinkKind::disc: return "disc";
    case LinkKind::torus: return "torus";
    case LinkKind::annulus: return "annulus";
    default: return "other";
    }
}

namespace {

struct LinkData {
    UnionFind<std::pair<int, int>> vertices;
    UnionFind<std::array<int, 3>> corners;
    UnionFind<std::array<int, 3>> sides;
};

LinkData link_data(const Triangulation& tri)
{
    LinkData d;
    for (int t = 0; t < tri.size(); ++t)
        for (int i = 0; i < 4; ++i) {
            d.vertices.find({t, i});
            for (int j = 0; j < 4; ++j)
                if (j != i) {
                    d.corners.find({t, i, j});
                    d.sides.find({t, i, j});
                }
        }
    for (int t = 0; t < tri.size(); ++t)
        for (int f = 0; f < 4; ++f) {
            const auto& nb = tri.neighbor(t, f);
            if (!nb) continue;
            const Perm4& p = nb->perm;
            for (int i = 0; i < 4; ++i) {
                if (i == f) continue;
                d.vertices.unite({t, i}, {nb->tet, p[i]});
                d.sides.unite({t, i, f}, {nb->tet, p[i], p[f]});
                for (int j = 0; j < 4; ++j)
                    if (j != i && j != f) d.corners.unite({t, i, j}, {nb->tet, p[i], p[j]});
            }
        }
    return d;
}

}  // namespace

std::vector<LinkSurface> vertex_links(const Triangulation& tri)
{
    LinkData d = link_data(tri);
    std::map<std::pair<int, int>, int> cls_of;
    std::vector<LinkSurface> out;
    for (int t = 0; t < tri.size(); ++t)
        for (int i = 0; i < 4; ++i) {
            auto root = d.vertices.find({t, i});
            auto [it, fresh] = cls_of.try_emplace(root, static_cast<int>(out.size()));
            if (fresh) {
                out.emplace_back();
                out.back().vertex_class = it->second;
            }
            out[it->second].triangles.emplace_back(t, i);
        }
    for (auto& link : out) {
        std::set<std::array<int, 3>> corner_cls, side_cls;
        // boundary graph: free sides joining the corner classes at their ends
        UnionFind<std::array<int, 3>> boundary;
        std::set<std::array<int, 3>> boundary_nodes;
        for (auto [t, i] : link.triangles)
            for (int x = 0; x < 4; ++x) {
                if (x == i) continue;
                corner_cls.insert(d.corners.find({t, i, x}));
                side_cls.insert(d.sides.find({t, i, x}));
                if (!tri.is_glued(t, x)) {
                    int ends[2], n = 0;
                    for (int y = 0; y < 4; ++y)
                        if (y != i && y != x) ends[n++] = y;
                    auto a = d.corners.find({t, i, ends[0]});
                    auto b = d.corners.find({t, i, ends[1]});
                    boundary.unite(a, b);
                    boundary_nodes.insert(a);
                    boundary_nodes.insert(b);
                }
            }
        std::set<std::array<int, 3>> circles;
        for (const auto& v : boundary_nodes) circles.insert(boundary.find(v));
        link.boundary_circles = static_cast<int>(circles.size());
        link.euler_characteristic = static_cast<int>(corner_cls.size()) - static_cast<int>(side_cls.size()) +
                                    static_cast<int>(link.triangles.size());
        const int chi = link.euler_characteristic, b = link.boundary_circles;
        if (chi == 1 && b == 1)
            link.kind = LinkKind::disc;
        else if (chi == 0 && b == 0)
            link.kind = LinkKind::torus;
        else if (chi == 0 && b == 2)
            link.kind = LinkKind::annulus;
        else
            link.kind = LinkKind::other;
    }
    return out;
}

int LinkChainComplex::index_of(const Corner& c) const
{
    auto it = std::lower_bound(corners.begin(), corners.end(), c);
    if (it == corners.end() || !(*it == c)) return -1;
    return static_cast<int>(it - corners.begin());
}

IntVector LinkChainComplex::to_dual(const IntVector& chain) const
{
    IntVector out(corners.size());
    // path from the centre of the root triangle of a side to the centre of (t,i)
    auto to_centre = [&](int t, int i, int f, const Int& sgn) {
        const auto& r = side_root.at({t, i, f});
        if (r == std::array<int, 3>{t, i, f}) return;
        const Neighbor& nb = matching.at({t, f});
        int a = 0;
        while (a == i || a == f) ++a;
        out[index_of({r[0], r[1], nb.perm[a]})] += sgn;
        out[index_of({t, i, a})] -= sgn;
    };
    for (std::size_t c = 0; c < chain.size(); ++c) {
        if (chain[c] == 0) continue;
        const Corner& cr = corners[c];
        auto [k, l] = even_completion(cr.i, cr.j);
        to_centre(cr.tet, cr.i, l, chain[c]);
        to_centre(cr.tet, cr.i, k, -chain[c]);
    }
    return out;
}

Int LinkChainComplex::intersection(const IntVector& d, const IntVector& c) const
{
    return bilinear(d, iota, to_dual(c));
}

std::size_t betti1(const IntMatrix& d1, const IntMatrix& d2)
{
    std::size_t z = d1.cols() - rank(d1);
    return z - rank(d2);
}

std::vector<LinkChainComplex> build_link_complexes(const Triangulation& tri)
{
    LinkData d = link_data(tri);
    std::vector<LinkSurface> links = vertex_links(tri);
    std::vector<EdgeClass> edges = edge_classes(tri);
    std::set<std::array<int, 3>> interior_corner;
    for (const auto& e : edges)
        if (e.interior)
            for (const auto& r : e.representatives) {
                interior_corner.insert(d.corners.find({r.tet, r.i, r.j}));
                interior_corner.insert(d.corners.find({r.tet, r.j, r.i}));
            }

    std::vector<LinkChainComplex> out;
    for (std::size_t li = 0; li < links.size(); ++li) {
        const LinkSurface& link = links[li];
        if (link.kind == LinkKind::other)
            throw TopologyError("link " + std::to_string(li) + " is neither a disc, a torus nor an annulus");
        LinkChainComplex cx;
        cx.link = static_cast<int>(li);
        cx.kind = link.kind;
        std::vector<std::array<int, 3>> side_roots, corner_roots;
        for (auto [t, i] : link.triangles)
            for (int j = 0; j < 4; ++j) {
                if (j == i) continue;
                cx.corners.push_back({t, i, j});
                auto sr = d.sides.find({t, i, j});
                cx.side_root[{t, i, j}] = sr;
                side_roots.push_back(sr);
                corner_roots.push_back(d.corners.find({t, i, j}));
                if (const auto& nb = tri.neighbor(t, j)) cx.matching[{t, j}] = *nb;
            }
        std::sort(cx.corners.begin(), cx.corners.end());
        auto uniq = [](std::vector<std::array<int, 3>>& v) {
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
        };
        uniq(side_roots);
        uniq(corner_roots);
        auto pos = [](const std::vector<std::array<int, 3>>& v, const std::array<int, 3>& x) {
            return static_cast<std::size_t>(std::lower_bound(v.begin(), v.end(), x) - v.begin());
        };
        const std::size_t ne = cx.corners.size();

        cx.d1 = IntMatrix(side_roots.size(), ne);
        for (std::size_t c = 0; c < ne; ++c) {
            const Corner& cr = cx.corners[c];
            auto [k, l] = even_completion(cr.i, cr.j);
            cx.d1(pos(side_roots, d.sides.find({cr.tet, cr.i, l})), c) -= 1;
            cx.d1(pos(side_roots, d.sides.find({cr.tet, cr.i, k})), c) += 1;
        }

        std::vector<IntVector> cells;
        for (auto [t, i] : link.triangles) {
            IntVector col(ne);
            for (int j = 0; j < 4; ++j)
                if (j != i) col[cx.index_of({t, i, j})] += 1;
            cells.push_back(col);
        }
        for (const auto& root : corner_roots) {
            if (!interior_corner.count(root)) continue;
            IntVector col(ne);
            for (std::size_t c = 0; c < ne; ++c) {
                const Corner& cr = cx.corners[c];
                if (d.corners.find({cr.tet, cr.i, cr.j}) == root) col[c] += 1;
            }
            cells.push_back(col);
        }
        cx.d2 = IntMatrix::from_columns(cells, ne);

        const std::size_t ntri = link.triangles.size();
        cx.dual_d1 = IntMatrix(ntri + corner_roots.size(), ne);
        for (std::size_t c = 0; c < ne; ++c) {
            const Corner& cr = cx.corners[c];
            auto tri_pos = std::find(link.triangles.begin(), link.triangles.end(), std::make_pair(cr.tet, cr.i)) -
                           link.triangles.begin();
            cx.dual_d1(static_cast<std::size_t>(tri_pos), c) -= 1;
            cx.dual_d1(ntri + pos(corner_roots, d.corners.find({cr.tet, cr.i, cr.j})), c) += 1;
        }

        std::vector<IntVector> quads;
        for (auto [t, i] : link.triangles)
            for (int f = 0; f < 4; ++f) {
                if (f == i) continue;
                const auto& nb = tri.neighbor(t, f);
                if (!nb) continue;
                if (std::make_pair(t, f) > std::make_pair(nb->tet, nb->perm[f])) continue;
                int ab[2], n = 0;
                for (int x = 0; x < 4; ++x)
                    if (x != i && x != f) ab[n++] = x;
                const Perm4& p = nb->perm;
                IntVector col(ne);
                col[cx.index_of({t, i, ab[0]})] += 1;
                col[cx.index_of({nb->tet, p[i], p[ab[0]]})] -= 1;
                col[cx.index_of({nb->tet, p[i], p[ab[1]]})] += 1;
                col[cx.index_of({t, i, ab[1]})] -= 1;
                quads.push_back(col);
            }
        cx.dual_d2 = IntMatrix::from_columns(quads, ne);
        cx.iota = IntMatrix::identity(ne);
        out.push_back(std::move(cx));
    }
    return out;
}

BoundarySurface boundary_surface(const Triangulation& tri)
{
    BoundarySurface s;
    for (int t = 0; t < tri.size(); ++t)
        for (int f = 0; f < 4; ++f)
            if (!tri.is_glued(t, f)) s.triangles.emplace_back(t, f);
    return s;
}

}  // namespace nzs
