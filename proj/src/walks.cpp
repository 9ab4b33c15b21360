#include "nzs/peripheral.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <stdexcept>

namespace nzs {

int corner_index(const Corner& c)
{
    return c.tet * 12 + c.i * 3 + (c.j < c.i ? c.j : c.j - 1);
}

Corner corner_at(int index)
{
    int t = index / 12, r = index % 12, i = r / 3, j = r % 3;
    return {t, i, j < i ? j : j + 1};
}

IntVector PeripheralPath::chain(int tets) const
{
    IntVector c(static_cast<std::size_t>(tets) * 12);
    for (const auto& t : turns) c[corner_index(t.corner)] += t.sign;
    return c;
}

PeripheralPath PeripheralPath::reversed() const
{
    PeripheralPath p;
    for (auto it = turns.rbegin(); it != turns.rend(); ++it) p.turns.push_back({it->corner, -it->sign});
    return p;
}

PeripheralPath PeripheralPath::then(const PeripheralPath& other) const
{
    PeripheralPath p = *this;
    p.turns.insert(p.turns.end(), other.turns.begin(), other.turns.end());
    return p;
}

PeripheralPath PeripheralPath::power(int k) const
{
    PeripheralPath base = k < 0 ? reversed() : *this, p;
    for (int r = 0; r < std::abs(k); ++r) p = p.then(base);
    return p;
}

namespace {

// Sides a turn enters through and leaves by, in the triangle (tet, i).
std::pair<int, int> entry_exit(const Turn& t)
{
    auto [k, l] = even_completion(t.corner.i, t.corner.j);
    return t.sign > 0 ? std::make_pair(l, k) : std::make_pair(k, l);
}

using Side = std::array<int, 3>;  // (tet, vertex, face): triangle (tet, vertex) entered through face

std::optional<std::pair<Turn, Side>> advance(const Triangulation& tri, const Side& s, int around)
{
    auto [t, i, f] = s;
    auto [k, l] = even_completion(i, around);
    Turn turn{{t, i, around}, l == f ? 1 : -1};
    int exit = l == f ? k : l;
    const auto& nb = tri.neighbor(t, exit);
    if (!nb) return std::nullopt;
    return std::make_pair(turn, Side{nb->tet, nb->perm[i], nb->perm[exit]});
}

}  // namespace

bool is_closed(const Triangulation& tri, const PeripheralPath& path)
{
    if (path.turns.empty()) return false;
    for (std::size_t a = 0; a < path.turns.size(); ++a) {
        const Turn& cur = path.turns[a];
        const Turn& nxt = path.turns[(a + 1) % path.turns.size()];
        const Corner& c = cur.corner;
        if (c.tet < 0 || c.tet >= tri.size() || c.i == c.j || nxt.corner.i == nxt.corner.j) return false;
        if (std::abs(cur.sign) != 1) return false;
        int exit = entry_exit(cur).second;
        const auto& nb = tri.neighbor(c.tet, exit);
        if (!nb) return false;
        if (nxt.corner.tet != nb->tet || nxt.corner.i != nb->perm[c.i]) return false;
        if (entry_exit(nxt).first != nb->perm[exit]) return false;
    }
    return true;
}

void require_closed(const Triangulation& tri, const PeripheralPath& path)
{
    if (!is_closed(tri, path)) throw std::invalid_argument("input chain not a cycle: turns do not form a closed walk");
}

std::vector<PeripheralPath> fundamental_walks(const Triangulation& tri, const LinkChainComplex& link)
{
    std::vector<Side> nodes;
    for (const auto& c : link.corners) nodes.push_back({c.tet, c.i, c.j});
    std::sort(nodes.begin(), nodes.end());
    struct Step {
        Side from;
        Turn turn;
        Side to;
    };
    std::vector<Step> steps;
    for (const auto& s : nodes)
        for (int a = 0; a < 4; ++a) {
            if (a == s[1] || a == s[2]) continue;
            if (auto nx = advance(tri, s, a)) steps.push_back({s, nx->first, nx->second});
        }
    if (nodes.empty()) return {};
    const Side root = nodes.front();

    // forward tree: path root -> node
    std::map<Side, PeripheralPath> to_node{{root, {}}};
    std::deque<Side> q{root};
    while (!q.empty()) {
        Side u = q.front();
        q.pop_front();
        for (const auto& st : steps)
            if (st.from == u && !to_node.count(st.to)) {
                to_node[st.to] = to_node[u];
                to_node[st.to].turns.push_back(st.turn);
                q.push_back(st.to);
            }
    }
    // backward tree: path node -> root
    std::map<Side, PeripheralPath> to_root{{root, {}}};
    q = {root};
    while (!q.empty()) {
        Side v = q.front();
        q.pop_front();
        for (const auto& st : steps)
            if (st.to == v && !to_root.count(st.from)) {
                PeripheralPath p;
                p.turns.push_back(st.turn);
                to_root[st.from] = p.then(to_root[v]);
                q.push_back(st.from);
            }
    }
    std::vector<PeripheralPath> out;
    for (const auto& st : steps) {
        if (!to_node.count(st.from) || !to_root.count(st.to)) continue;
        PeripheralPath w = to_node[st.from];
        w.turns.push_back(st.turn);
        w = w.then(to_root[st.to]);
        if (std::find_if(out.begin(), out.end(), [&](const auto& x) { return x.turns == w.turns; }) == out.end())
            out.push_back(std::move(w));
    }
    return out;
}

PeripheralPath corner_loop(const Triangulation& tri, const Corner& start)
{
    PeripheralPath p;
    Corner c = start;
    for (int guard = 0; guard < 12 * tri.size() + 1; ++guard) {
        p.turns.push_back({c, 1});
        auto [k, l] = even_completion(c.i, c.j);
        (void)l;
        const auto& nb = tri.neighbor(c.tet, k);
        if (!nb) throw std::invalid_argument("corner loop around a boundary edge");
        c = {nb->tet, nb->perm[c.i], nb->perm[c.j]};
        if (c == start) return p;
    }
    throw std::logic_error("corner loop did not close");
}

LinkHomology::LinkHomology(const LinkChainComplex& link)
{
    for (const auto& c : link.corners) global_.push_back(corner_index(c));
    cycles_ = kernel_basis(link.d1);
    const std::size_t z = cycles_.cols();
    IntMatrix bz(z, link.d2.cols());
    for (std::size_t c = 0; c < link.d2.cols(); ++c) {
        auto x = solve_integer(cycles_, link.d2.column(c));
        if (!x) throw std::logic_error("boundary outside the cycle lattice");
        bz.set_column(c, *x);
    }
    if (bz.cols() > 0 && z > 0) {
        SmithForm s = smith_normal_form(bz);
        U_ = s.U;
        boundary_rank_ = s.rank();
    } else {
        U_ = IntMatrix::identity(z);
    }
    rank_ = z - boundary_rank_;
}

IntVector LinkHomology::local_chain(const IntVector& global_chain) const
{
    IntVector local(global_.size());
    for (std::size_t a = 0; a < global_.size(); ++a) local[a] = global_chain[global_[a]];
    return local;
}

IntVector LinkHomology::coordinates(const IntVector& global_chain) const
{
    auto y = solve_integer(cycles_, local_chain(global_chain));
    if (!y) throw std::invalid_argument("chain is not a cycle of this link");
    IntVector u = U_ * *y;
    return IntVector(u.begin() + static_cast<long>(boundary_rank_), u.end());
}

namespace {

Int det2(const IntVector& a, const IntVector& b)
{
    return a[0] * b[1] - a[1] * b[0];
}

// Combines walks by unimodular row operations until their coordinates are
// the standard basis.
std::vector<PeripheralPath> echelon_basis(const std::vector<PeripheralPath>& walks,
                                          const std::vector<IntVector>& coords, std::size_t r)
{
    IntMatrix m(walks.size(), r);
    for (std::size_t w = 0; w < walks.size(); ++w)
        for (std::size_t c = 0; c < r; ++c) m(w, c) = coords[w][c];
    RowEchelon e = row_echelon(m);
    if (e.rank != r) throw TopologyError("walks do not span the link homology");
    std::vector<PeripheralPath> out;
    for (std::size_t k = 0; k < r; ++k) {
        if (e.R(k, k) != 1) throw TopologyError("walks generate a proper sublattice of the link homology");
        PeripheralPath p;
        for (std::size_t w = 0; w < walks.size(); ++w)
            if (e.V(k, w) != 0) p = p.then(walks[w].power(static_cast<int>(to_long(e.V(k, w)))));
        out.push_back(p);
    }
    return out;
}

}  // namespace

std::vector<PeripheralBasis> peripheral_bases(const Triangulation& tri)
{
    std::vector<PeripheralBasis> out;
    for (const auto& link : build_link_complexes(tri)) {
        if (link.kind != LinkKind::torus && link.kind != LinkKind::annulus) continue;
        LinkHomology hom(link);
        auto walks = fundamental_walks(tri, link);
        std::vector<IntVector> coords;
        for (const auto& w : walks) coords.push_back(hom.coordinates(w.chain(tri.size())));
        std::vector<std::size_t> order(walks.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](auto a, auto b) { return walks[a].turns.size() < walks[b].turns.size(); });
        PeripheralBasis b;
        b.link = link.link;
        b.kind = link.kind;
        const std::size_t r = hom.rank();
        if (r == 1) {
            for (auto w : order)
                if (abs(coords[w][0]) == 1) {
                    b.generators.push_back(coords[w][0] > 0 ? walks[w] : walks[w].reversed());
                    break;
                }
        } else if (r == 2) {
            std::size_t best = 0;
            std::optional<std::pair<std::size_t, std::size_t>> pick;
            for (std::size_t x = 0; x < order.size(); ++x)
                for (std::size_t y = x + 1; y < order.size(); ++y) {
                    auto a = order[x], c = order[y];
                    if (abs(det2(coords[a], coords[c])) != 1) continue;
                    std::size_t len = walks[a].turns.size() + walks[c].turns.size();
                    if (!pick || len < best) {
                        pick = std::make_pair(a, c);
                        best = len;
                    }
                }
            if (pick) b.generators = {walks[pick->first], walks[pick->second]};
        }
        if (b.generators.size() != r) b.generators = echelon_basis(walks, coords, r);
        if (link.kind == LinkKind::torus) {
            auto l = hom.local_chain(b.generators[0].chain(tri.size()));
            auto m = hom.local_chain(b.generators[1].chain(tri.size()));
            b.intersection = link.intersection(l, m);
            if (b.intersection == -1) {
                std::swap(b.generators[0], b.generators[1]);
                b.intersection = 1;
            }
            if (b.intersection != 1) throw TopologyError("torus generators do not meet once");
        }
        out.push_back(std::move(b));
    }
    return out;
}

std::vector<IntVector> hol_exponents(const Triangulation& tri, const GluedComplex& g, const PeripheralPath& path)
{
    require_closed(tri, path);
    const int n = g.n;
    std::vector<IntVector> out;
    for (int m = 1; m < n; ++m) {
        IntVector w(g.size());
        for (const auto& turn : path.turns) {
            const auto& c = turn.corner;
            if (turn.sign > 0) {
                Weights x{};
                x[c.i] = m;
                x[c.j] = n - m;
                w[g.index_of(c.tet, x)] += 1;
            } else {
                for (std::size_t a = 0; a < g.local.points.size(); ++a) {
                    const Weights& p = g.local.points[a];
                    if (p[c.i] == m && p[c.j] >= 1) w[g.index_of(c.tet, p)] -= 1;
                }
            }
        }
        out.push_back(std::move(w));
    }
    return out;
}

std::vector<IntVector> hol_exponents(const Triangulation& tri, int n, const PeripheralPath& path)
{
    return hol_exponents(tri, build_glued(tri, n), path);
}

}  // namespace nzs
