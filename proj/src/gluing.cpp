#include "nzs/gluing.hpp"

#include "nzs/union_find.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace nzs {

namespace {

using PointKey = std::pair<int, Weights>;

// Identification of points across all glued faces.
UnionFind<PointKey> point_classes(const Triangulation& tri, const std::vector<Weights>& pts)
{
    UnionFind<PointKey> uf;
    for (int t = 0; t < tri.size(); ++t)
        for (const auto& w : pts) uf.find({t, w});
    for (int t = 0; t < tri.size(); ++t)
        for (int f = 0; f < 4; ++f) {
            const auto& nb = tri.neighbor(t, f);
            if (!nb) continue;
            for (const auto& w : pts) {
                if (w[f] != 0) continue;
                Weights q{};
                for (int v = 0; v < 4; ++v) q[nb->perm[v]] = w[v];
                uf.unite({t, w}, {nb->tet, q});
            }
        }
    return uf;
}

std::map<PointKey, std::vector<PointKey>> group(UnionFind<PointKey>& uf)
{
    std::map<PointKey, std::vector<PointKey>> g;
    std::vector<PointKey> keys;
    for (const auto& [k, _] : uf.entries()) keys.push_back(k);
    for (const auto& k : keys) g[uf.find(k)].push_back(k);
    return g;
}

std::pair<int, int> support_pair(const Weights& w)
{
    int a = -1, b = -1;
    for (int v = 0; v < 4; ++v)
        if (w[v] != 0) (a < 0 ? a : b) = v;
    return {a, b};
}

std::vector<InternalPointClass> internal_classes(const Triangulation& tri, const TetraLattice& local)
{
    const int P = static_cast<int>(local.points.size());
    auto uf = point_classes(tri, local.points);
    auto groups = group(uf);
    auto edges = edge_classes(tri);
    std::map<std::array<int, 3>, int> edge_of;
    for (std::size_t e = 0; e < edges.size(); ++e)
        for (const auto& r : edges[e].representatives)
            edge_of[{r.tet, std::min(r.i, r.j), std::max(r.i, r.j)}] = static_cast<int>(e);

    std::vector<InternalPointClass> faces, edgeps;
    for (const auto& [root, mem] : groups) {
        InternalPointClass c;
        for (const auto& [t, w] : mem) c.members.push_back(t * P + local.index_of(w));
        std::sort(c.members.begin(), c.members.end());
        const auto& [t0, w0] = mem.front();
        if (std::count(w0.begin(), w0.end(), 0) == 1) {
            if (mem.size() != 2) continue;
            c.kind = InternalPointClass::Kind::face;
            faces.push_back(c);
        } else {
            auto [a, b] = support_pair(w0);
            int e = edge_of.at({t0, a, b});
            if (!edges[e].interior) continue;
            c.kind = InternalPointClass::Kind::edge;
            c.edge_class = e;
            const TetEdge& r = edges[e].representatives.front();
            for (const auto& [t, w] : mem)
                if (t == r.tet && w[r.i] != 0 && w[r.j] != 0) c.level = w[r.j];
            edgeps.push_back(c);
        }
    }
    std::sort(faces.begin(), faces.end(),
              [](const auto& x, const auto& y) { return x.members.front() < y.members.front(); });
    std::sort(edgeps.begin(), edgeps.end(), [](const auto& x, const auto& y) {
        return std::make_pair(x.edge_class, x.level) < std::make_pair(y.edge_class, y.level);
    });
    std::vector<InternalPointClass> out;
    for (auto& c : faces) {
        c.id = static_cast<int>(out.size());
        int t = c.members.front() / P;
        BarycentricPoint bp{t, local.points[c.members.front() % P]};
        c.label = "face:" + std::to_string(c.id) + "/" + bp.id();
        out.push_back(std::move(c));
    }
    for (auto& c : edgeps) {
        c.id = static_cast<int>(out.size());
        c.label = "edge:" + std::to_string(c.edge_class) + "/m=" + std::to_string(c.level);
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace

int GluedComplex::index_of(int tet, const Weights& w) const
{
    int k = local.index_of(w);
    if (k < 0) return -1;
    return tet * static_cast<int>(local.points.size()) + k;
}

std::vector<std::string> GluedComplex::point_ids() const
{
    std::vector<std::string> ids;
    for (const auto& p : points) ids.push_back(p.id());
    return ids;
}

GluedComplex build_glued(const Triangulation& tri, int n)
{
    GluedComplex g;
    g.n = n;
    g.tets = tri.size();
    g.local = build_module(n);
    for (int t = 0; t < tri.size(); ++t)
        for (const auto& w : g.local.points) g.points.push_back({t, w});
    const auto& m = g.local.module;
    std::vector<IntMatrix> fb(tri.size(), m.form), kb(tri.size(), m.kernel), qb(tri.size(), m.projection),
        sb(tri.size(), m.section), ob(tri.size(), m.omega);
    g.form = block_diagonal(fb);
    g.kernel = block_diagonal(kb);
    g.projection = block_diagonal(qb);
    g.section = block_diagonal(sb);
    g.omega = block_diagonal(ob);
    g.internal = internal_classes(tri, g.local);
    g.F = IntMatrix(g.size(), g.internal.size());
    for (std::size_t c = 0; c < g.internal.size(); ++c)
        for (int x : g.internal[c].members) g.F(x, c) += 1;
    return g;
}

std::vector<InternalPointClass> internal_points(const Triangulation& tri, int n)
{
    return internal_classes(tri, build_module(n));
}

IntMatrix F_matrix(const Triangulation& tri, int n)
{
    return build_glued(tri, n).F;
}

ComplexReport verify_complex(const Triangulation& tri, int n)
{
    return verify_complex(build_glued(tri, n));
}

ComplexReport verify_complex(const GluedComplex& g)
{
    ComplexReport r;
    r.n = g.n;
    const std::size_t dimJ = g.omega.rows();
    IntMatrix fpf = g.F.transpose() * g.form * g.F;
    r.composition_vanishes = true;
    for (std::size_t a = 0; a < fpf.rows(); ++a)
        for (std::size_t b = 0; b < fpf.cols(); ++b)
            if (fpf(a, b) != 0) {
                r.composition_vanishes = false;
                r.failures.push_back("F*pF nonzero at (" + g.internal[a].label + ", " + g.internal[b].label + ")");
            }

    // G = F* ∘ p on J, through lifts S
    IntMatrix G = g.F.transpose() * g.form * g.section;
    IntMatrix Fp = g.projection * g.F;
    IntMatrix kerG = G.rows() ? kernel_basis(G) : IntMatrix::identity(dimJ);
    IntMatrix perp_eq = Fp.transpose() * g.omega;
    IntMatrix perp = perp_eq.rows() ? kernel_basis(perp_eq) : IntMatrix::identity(dimJ);
    r.rank_G = rank(G);
    r.rank_F_prime = rank(Fp);
    r.dim_ker_G = kerG.cols();
    r.orthogonality_holds = true;
    for (std::size_t c = 0; c < kerG.cols(); ++c)
        if (!in_lattice(perp, kerG.column(c))) {
            r.orthogonality_holds = false;
            r.failures.push_back("Ker G vector " + to_string(kerG.column(c)) + " not orthogonal to Im F'");
        }
    for (std::size_t c = 0; c < perp.cols(); ++c)
        if (!in_lattice(kerG, perp.column(c))) {
            r.orthogonality_holds = false;
            r.failures.push_back("orthogonal vector " + to_string(perp.column(c)) + " outside Ker G");
        }
    // Im F' must lie in Ker G for the quotient to make sense
    for (std::size_t c = 0; c < Fp.cols(); ++c)
        if (!is_zero(G * Fp.column(c))) {
            r.orthogonality_holds = false;
            r.failures.push_back("F' column " + g.internal[c].label + " outside Ker G");
        }
    r.dim_H = r.dim_ker_G - r.rank_F_prime;
    r.torsion = torsion_factors(Fp);
    return r;
}

IntMatrix ExponentSystem::matrix() const
{
    IntMatrix m(rows.size(), variables.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < variables.size(); ++c) m(r, c) = rows[r].exponents[c];
    return m;
}

ExponentSystem face_edge_equations(const Triangulation& tri, int n)
{
    return face_edge_equations(build_glued(tri, n));
}

ExponentSystem face_edge_equations(const GluedComplex& g)
{
    ExponentSystem s;
    s.variables = g.point_ids();
    for (std::size_t c = 0; c < g.internal.size(); ++c)
        s.rows.push_back({g.internal[c].label, g.F.column(c), 1});
    return s;
}

SigmaProjection sigma_projection(const Triangulation& tri, int n)
{
    SigmaProjection s;
    TetraLattice local = build_module(n);
    const int P = static_cast<int>(local.points.size());
    auto uf = point_classes(tri, local.points);
    auto groups = group(uf);
    std::map<PointKey, int> sigma_index;
    for (const auto& [root, mem] : groups) {
        bool on_free = false;
        for (const auto& [t, w] : mem)
            for (int f = 0; f < 4; ++f)
                if (w[f] == 0 && !tri.is_glued(t, f)) on_free = true;
        if (!on_free) continue;
        sigma_index[root] = static_cast<int>(s.points.size());
        std::vector<int> members;
        for (const auto& [t, w] : mem) members.push_back(t * P + local.index_of(w));
        std::sort(members.begin(), members.end());
        s.points.push_back(members);
    }
    if (s.points.empty()) return s;

    const std::size_t m = s.points.size();
    s.form = IntMatrix(m, m);
    static const int kDirs[3][3] = {{-1, 1, 0}, {0, -1, 1}, {1, 0, -1}};
    for (auto [t, f] : boundary_surface(tri).triangles) {
        const auto& o = kFaceOrientation[f];
        for (const auto& w : local.points) {
            if (w[f] != 0) continue;
            for (const auto& d : kDirs) {
                Weights q = w;
                for (int x = 0; x < 3; ++x) q[o[x]] += d[x];
                if (local.index_of(q) < 0) continue;
                int a = sigma_index.at(uf.find({t, w}));
                int b = sigma_index.at(uf.find({t, q}));
                s.form(a, b) += 1;
                s.form(b, a) -= 1;
            }
        }
    }
    s.module = make_skew_module(s.form);
    s.exponent_map = IntMatrix(m, static_cast<std::size_t>(tri.size()) * P);
    for (std::size_t a = 0; a < m; ++a)
        for (int x : s.points[a]) s.exponent_map(a, x) = -1;
    return s;
}

nlohmann::json to_json(const ExponentSystem& s)
{
    nlohmann::json j;
    j["variables"] = s.variables;
    j["rows"] = nlohmann::json::array();
    for (const auto& r : s.rows) {
        nlohmann::json ex = nlohmann::json::object();
        for (std::size_t c = 0; c < r.exponents.size(); ++c)
            if (r.exponents[c] != 0) ex[s.variables[c]] = to_long(r.exponents[c]);
        j["rows"].push_back({{"label", r.label}, {"exponents", ex}, {"rhs", r.rhs}});
    }
    return j;
}

std::string to_csv(const IntMatrix& m, const std::vector<std::string>& header)
{
    std::ostringstream os;
    for (std::size_t c = 0; c < header.size(); ++c) os << (c ? "," : "") << header[c];
    if (!header.empty()) os << "\n";
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) os << (c ? "," : "") << m(r, c);
        os << "\n";
    }
    return os.str();
}

nlohmann::json to_json(const ComplexReport& r)
{
    std::vector<std::string> torsion;
    for (const auto& t : r.torsion) torsion.push_back(t.str());
    return {{"check", "complex"},
            {"n", r.n},
            {"status", r.passed() ? "pass" : "fail"},
            {"details",
             {{"composition_vanishes", r.composition_vanishes},
              {"orthogonality_holds", r.orthogonality_holds},
              {"rank_F_prime", r.rank_F_prime},
              {"rank_G", r.rank_G},
              {"dim_ker_G", r.dim_ker_G},
              {"dim_H", r.dim_H},
              {"torsion", torsion},
              {"failures", r.failures}}}};
}

}  // namespace nzs
