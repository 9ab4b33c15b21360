#include "nzs/peripheral.hpp"

#include <algorithm>
#include <stdexcept>

namespace nzs {

CartanLattice cartan_lattice(int n)
{
    CartanLattice c;
    c.rank = n - 1;
    const int r = c.rank;
    c.gram = IntMatrix(r, r);
    for (int a = 0; a < r; ++a) {
        c.gram(a, a) = 2;
        if (a + 1 < r) c.gram(a, a + 1) = c.gram(a + 1, a) = -1;
    }
    // inverse of the A_{n-1} Cartan matrix: min(a,b) (n - max(a,b)) / n, 1-based
    c.inverse.assign(r, std::vector<Rational>(r));
    for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b) c.inverse[a][b] = Rational(std::min(a, b) + 1) * (n - std::max(a, b) - 1) / n;
    return c;
}

Rational CartanLattice::pairing(int b, int a) const
{
    Rational s = 0;
    for (int c = 0; c < rank; ++c) s += Rational(gram(b, c)) * inverse[a][c];
    return s;
}

const std::array<HVariant, 4> kAllVariants = {HVariant::symmetric, HVariant::signed_literal, HVariant::one_face,
                                              HVariant::reflected};

std::string to_string(HVariant v)
{
    switch (v) {
    case HVariant::symmetric: return "symmetric";
    case HVariant::signed_literal: return "signed-literal";
    case HVariant::one_face: return "one-face";
    case HVariant::reflected: return "reflected";
    }
    return "?";
}

namespace {

// Coefficient of h at signed position pos on level with s = n - m.
int h_coefficient(HVariant v, int pos, int s)
{
    auto two_sided = [&](int p) { return 2 * std::abs(p) < s ? 2 : (2 * std::abs(p) == s ? 1 : 0); };
    switch (v) {
    case HVariant::symmetric: return two_sided(pos);
    case HVariant::signed_literal: return (2 * pos < s ? 2 : 0) + (2 * pos == s || 2 * pos == -s ? 1 : 0);
    case HVariant::one_face: return pos >= 0 ? two_sided(pos) : 0;
    case HVariant::reflected: return pos <= 0 ? two_sided(pos) : 0;
    }
    return 0;
}

std::size_t chain_dim(const GluedComplex& g)
{
    return static_cast<std::size_t>(g.tets) * 12 * (g.n - 1);
}

IntVector level_slice(const IntVector& y, int a, int n)
{
    IntVector out(y.size() / (n - 1));
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = y[k * (n - 1) + (a - 1)];
    return out;
}

IntVector restrict_to(const LinkChainComplex& link, const IntVector& global)
{
    IntVector local(link.corners.size());
    for (std::size_t a = 0; a < link.corners.size(); ++a) local[a] = global[corner_index(link.corners[a])];
    return local;
}

IntVector extend_from(const LinkChainComplex& link, const IntVector& local, std::size_t size)
{
    IntVector global(size);
    for (std::size_t a = 0; a < link.corners.size(); ++a) global[corner_index(link.corners[a])] = local[a];
    return global;
}

bool dual_cycle(const std::vector<LinkChainComplex>& links, const IntVector& global)
{
    for (const auto& l : links)
        if (!is_zero(l.dual_d1 * restrict_to(l, global))) return false;
    return true;
}

bool dual_boundary(const std::vector<LinkChainComplex>& links, const IntVector& global)
{
    for (const auto& l : links) {
        IntVector local = restrict_to(l, global);
        if (l.dual_d2.cols() == 0) {
            if (!is_zero(local)) return false;
        } else if (!in_lattice(l.dual_d2, local)) {
            return false;
        }
    }
    return true;
}

bool closed_torus_case(const Triangulation& tri)
{
    if (!boundary_surface(tri).empty()) return false;
    auto links = vertex_links(tri);
    return !links.empty() &&
           std::all_of(links.begin(), links.end(), [](const auto& l) { return l.kind == LinkKind::torus; });
}

nlohmann::json vec_json(const IntVector& v)
{
    nlohmann::json j = nlohmann::json::array();
    for (const auto& x : v) j.push_back(to_long(x));
    return j;
}

nlohmann::json sparse_json(const IntVector& v, const std::vector<std::string>& ids)
{
    nlohmann::json j = nlohmann::json::object();
    for (std::size_t a = 0; a < v.size(); ++a)
        if (v[a] != 0) j[ids[a]] = to_long(v[a]);
    return j;
}

nlohmann::json path_json(const PeripheralPath& p)
{
    nlohmann::json j = nlohmann::json::array();
    for (const auto& t : p.turns) j.push_back({t.corner.tet, t.corner.i, t.corner.j, t.sign});
    return j;
}

const char* generator_name(LinkKind k, std::size_t idx)
{
    if (k == LinkKind::torus) return idx == 0 ? "l" : "m";
    return "s";
}

}  // namespace

IntVector tensor(const IntVector& chain, int level, int n)
{
    IntVector out(chain.size() * (n - 1));
    for (std::size_t k = 0; k < chain.size(); ++k) out[k * (n - 1) + (level - 1)] = chain[k];
    return out;
}

IntMatrix build_h(const GluedComplex& g, HVariant variant)
{
    const int n = g.n;
    IntMatrix h(g.size(), chain_dim(g));
    for (int t = 0; t < g.tets; ++t)
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                if (i == j) continue;
                auto [k, l] = even_completion(i, j);
                const int ci = corner_index({t, i, j});
                for (int m = 1; m < n; ++m) {
                    const int s = n - m;
                    for (int pos = -s; pos <= s; ++pos) {
                        int c = h_coefficient(variant, pos, s);
                        if (c == 0) continue;
                        Weights w{};
                        w[i] = m;
                        if (pos >= 0) {
                            w[k] = pos;
                            w[j] = s - pos;
                        } else {
                            w[l] = -pos;
                            w[j] = s + pos;
                        }
                        int x = g.index_of(t, w);
                        if (x >= 0) h(x, ci * (n - 1) + (m - 1)) += c;
                    }
                }
            }
    return h;
}

IntMatrix build_g(const GluedComplex& g, const IntMatrix& h)
{
    // g(e) on (c', a) is ι(c, c') Ω²(e, h(c ⊗ v_a)); ι is the identity pairing
    // and Ω² is skew, so g = -hᵀ Ω².
    return Int(-1) * (h.transpose() * g.form);
}

IntMatrix build_g(const Triangulation& tri, int n)
{
    GluedComplex g = build_glued(tri, n);
    return build_g(g, build_h(g));
}

nlohmann::json CheckReport::to_json() const
{
    return {{"check", check}, {"n", n}, {"status", status}, {"details", details}};
}

CheckReport check_g_identity(const Triangulation& tri, int n, HVariant variant)
{
    CheckReport rep{"g_identity", n};
    GluedComplex g = build_glued(tri, n);
    IntMatrix h = build_h(g, variant);
    IntMatrix gm = build_g(g, h);
    CartanLattice cart = cartan_lattice(n);
    const int r = n - 1;
    const std::size_t corners = static_cast<std::size_t>(g.tets) * 12;
    std::size_t pairs = 0, mismatches = 0;
    nlohmann::json first = nullptr;
    for (std::size_t e = 0; e < g.size(); ++e)
        for (std::size_t k = 0; k < corners; ++k)
            for (int b = 0; b < r; ++b) {
                // ω(c_k ⊗ v_b, g(e)) with ι(c_k, c'_k) = 1
                Rational lhs = 0;
                for (int a = 0; a < r; ++a) lhs += cart.pairing(b, a) * Rational(gm(k * r + a, e));
                // Ω²(e, h(c_k ⊗ v_b)) entry by entry
                Int rhs = 0;
                for (std::size_t x = 0; x < g.size(); ++x)
                    if (g.form(e, x) != 0) rhs += g.form(e, x) * h(x, k * r + b);
                ++pairs;
                if (lhs != Rational(rhs)) {
                    ++mismatches;
                    if (first.is_null())
                        first = {{"point", g.points[e].id()}, {"corner", static_cast<int>(k)}, {"level", b + 1}};
                }
            }
    // g vanishes on ker p
    bool kills_kernel = (gm * g.kernel).is_zero();
    // g(F e_α) is a boundary, and g(Ker F* p) consists of cycles
    auto links = build_link_complexes(tri);
    bool f_boundaries = true, cycles = true;
    IntMatrix gF = gm * g.F;
    for (std::size_t c = 0; c < gF.cols(); ++c)
        for (int a = 1; a <= r; ++a)
            if (!dual_boundary(links, level_slice(gF.column(c), a, n))) f_boundaries = false;
    // with free faces these are only relative cycles
    const bool closed = tri.free_face_count() == 0;
    if (closed) {
        IntMatrix fp = g.F.transpose() * g.form;
        IntMatrix kfp = fp.rows() ? kernel_basis(fp) : IntMatrix::identity(g.size());
        IntMatrix gk = gm * kfp;
        for (std::size_t c = 0; c < gk.cols(); ++c)
            for (int a = 1; a <= r; ++a)
                if (!dual_cycle(links, level_slice(gk.column(c), a, n))) cycles = false;
    }
    rep.details = {{"pairs_checked", pairs},
                   {"mismatches", mismatches},
                   {"first_mismatch", first},
                   {"g_kills_ker_p", kills_kernel},
                   {"g_of_F_in_boundaries", f_boundaries},
                   {"g_of_cycles_in_cycles", closed ? nlohmann::json(cycles) : nlohmann::json("not applicable")},
                   {"variant", to_string(variant)}};
    if (mismatches || !kills_kernel || !f_boundaries || !cycles) rep.status = "fail";
    return rep;
}

CheckReport check_hol_lemma(const Triangulation& tri, int n, HVariant variant)
{
    GluedComplex g = build_glued(tri, n);
    CheckReport rep = check_hol_lemma(tri, g, build_h(g, variant));
    rep.details["variant"] = to_string(variant);
    return rep;
}

CheckReport check_hol_lemma(const Triangulation& tri, const GluedComplex& g, const IntMatrix& h)
{
    const int n = g.n;
    CheckReport rep{"hol_lemma", n};
    auto bases = peripheral_bases(tri);
    if (bases.empty()) {
        rep.status = "skipped";
        rep.details["reason"] = "no torus or annulus links";
        return rep;
    }
    IntMatrix span = hconcat(g.kernel, g.F);
    IntMatrix certificate = left_kernel_basis(span).transpose();
    IntMatrix fp = g.F.transpose() * g.form;
    auto ids = g.point_ids();
    nlohmann::json gens = nlohmann::json::array();
    bool all_ok = true;
    for (const auto& b : bases)
        for (std::size_t gi = 0; gi < b.generators.size(); ++gi) {
            const auto& path = b.generators[gi];
            IntVector chain = path.chain(tri.size());
            auto w = hol_exponents(tri, g, path);
            for (int m = 1; m < n; ++m) {
                IntVector hc = h * tensor(chain, m, n);
                IntVector res = sub(hc, scale(2, w[m - 1]));
                IntVector cert = certificate * res;
                bool ok = is_zero(cert);
                bool in_cycles = fp.rows() == 0 || is_zero(fp * hc);
                nlohmann::json item = {{"link", b.link},
                                       {"generator", generator_name(b.kind, gi)},
                                       {"m", m},
                                       {"member", ok},
                                       {"h_of_cycle_in_ker_Fp", in_cycles}};
                if (ok) {
                    item["torsion_only"] = !solve_integer(span, res).has_value();
                } else {
                    item["residual"] = sparse_json(res, ids);
                    item["certificate"] = vec_json(cert);
                    item["turns"] = path_json(path);
                }
                all_ok = all_ok && ok && in_cycles;
                gens.push_back(item);
            }
        }
    // h of boundaries lands in ker p + Im F over Q
    bool boundaries_ok = true;
    for (const auto& link : build_link_complexes(tri))
        for (std::size_t c = 0; c < link.d2.cols(); ++c) {
            IntVector chain = extend_from(link, link.d2.column(c), static_cast<std::size_t>(tri.size()) * 12);
            for (int m = 1; m < n; ++m)
                if (!is_zero(certificate * (h * tensor(chain, m, n)))) boundaries_ok = false;
        }
    rep.details["generators"] = gens;
    rep.details["h_of_boundaries_in_span"] = boundaries_ok;
    if (!all_ok || !boundaries_ok) rep.status = "fail";
    return rep;
}

CheckReport check_tetrahedron_identities(int n, HVariant variant)
{
    CheckReport rep{"tetrahedron_identities", n};
    GluedComplex g = build_glued(single_tetrahedron(), n);
    IntMatrix h = build_h(g, variant);
    IntMatrix gm = build_g(g, h);
    CartanLattice cart = cartan_lattice(n);
    const int r = n - 1;
    auto col = [&](int i, int j, int m) { return h.column(corner_index({0, i, j}) * r + (m - 1)); };
    std::size_t bracket_fail = 0, shape_fail = 0;
    bool integral_v = true;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            if (i == j) continue;
            // with the face orientations used here, (i,j,l,k) is the even ordering
            auto [ek, el] = even_completion(i, j);
            const int k = el, l = ek;
            for (int m = 1; m < n; ++m) {
                IntVector hij = col(i, j, m);
                for (int mp = 1; mp < n; ++mp) {
                    Int c2 = 2 * cart.gram(m - 1, mp - 1);
                    if (bilinear(hij, g.form, col(i, k, mp)) != c2) ++bracket_fail;
                    if (bilinear(hij, g.form, col(i, l, mp)) != -c2) ++bracket_fail;
                    if (bilinear(hij, g.form, col(j, i, mp)) != 0) ++bracket_fail;
                    if (bilinear(hij, g.form, col(k, l, mp)) != 0) ++bracket_fail;
                    if (bilinear(hij, g.form, col(l, k, mp)) != 0) ++bracket_fail;
                }
                IntVector gh = gm * hij;
                auto coef = [&](int x, int y) {
                    IntVector v(r);
                    for (int a = 0; a < r; ++a) v[a] = gh[corner_index({0, x, y}) * r + a];
                    return v;
                };
                IntVector cv(r);
                for (int a = 0; a < r; ++a) cv[a] = 2 * cart.gram(a, m - 1);
                IntVector six = coef(k, i);
                for (auto& x : six) {
                    if (x % 2 != 0) integral_v = false;
                }
                bool ok = coef(i, k) == cv && coef(i, l) == scale(-1, cv) && coef(k, j) == scale(-1, six) &&
                          coef(j, l) == six && coef(j, k) == scale(-1, six) && coef(l, j) == six &&
                          coef(l, i) == scale(-1, six) && is_zero(coef(i, j)) && is_zero(coef(j, i)) &&
                          is_zero(coef(k, l)) && is_zero(coef(l, k));
                if (!ok) ++shape_fail;
            }
        }
    rep.details = {{"bracket_failures", bracket_fail},
                   {"decomposition_failures", shape_fail},
                   {"v_prime_in_weight_lattice", integral_v},
                   {"variant", to_string(variant)}};
    if (bracket_fail || shape_fail) rep.status = "fail";
    return rep;
}

CheckReport check_times4(const Triangulation& tri, int n, HVariant variant)
{
    CheckReport rep{"times4", n};
    rep.details["variant"] = to_string(variant);
    if (!closed_torus_case(tri)) {
        rep.status = "skipped";
        rep.details["reason"] = "Σ nonempty / no torus links";
        return rep;
    }
    GluedComplex g = build_glued(tri, n);
    IntMatrix h = build_h(g, variant);
    IntMatrix gm = build_g(g, h);
    CartanLattice cart = cartan_lattice(n);
    auto links = build_link_complexes(tri);
    auto bases = peripheral_bases(tri);
    const std::size_t corners = static_cast<std::size_t>(tri.size()) * 12;
    const int r = n - 1;
    bool all_ok = true;
    nlohmann::json classes = nlohmann::json::array();
    for (const auto& b : bases) {
        const auto& link = links[b.link];
        std::vector<IntVector> chains;
        for (const auto& p : b.generators) chains.push_back(p.chain(tri.size()));
        for (std::size_t gi = 0; gi < chains.size(); ++gi) {
            IntVector phi = extend_from(link, link.to_dual(restrict_to(link, chains[gi])), corners);
            for (int lv = 1; lv <= r; ++lv) {
                IntVector x = gm * (h * tensor(chains[gi], lv, n));
                bool ok = true;
                nlohmann::json bad = nlohmann::json::array();
                for (int a = 1; a <= r; ++a) {
                    IntVector xa = level_slice(x, a, n);
                    IntVector res = sub(xa, scale(4 * cart.gram(a - 1, lv - 1), phi));
                    bool cyc = dual_cycle(links, xa), bd = dual_boundary(links, res);
                    if (!cyc || !bd) {
                        ok = false;
                        bad.push_back({{"component", a}, {"cycle", cyc}, {"homologous", bd}, {"residual", vec_json(res)}});
                    }
                }
                nlohmann::json item = {
                    {"link", b.link}, {"class", generator_name(b.kind, gi)}, {"level", lv}, {"times4", ok}};
                if (!ok) item["failures"] = bad;
                classes.push_back(item);
                all_ok = all_ok && ok;
            }
        }
        // h̄*Ω = -4ω on the (class ⊗ Cartan basis) Gram matrix
        bool gram_ok = true;
        for (std::size_t c1 = 0; c1 < chains.size(); ++c1)
            for (std::size_t c2 = 0; c2 < chains.size(); ++c2) {
                Int inter = link.intersection(restrict_to(link, chains[c1]), restrict_to(link, chains[c2]));
                for (int b1 = 1; b1 <= r; ++b1)
                    for (int b2 = 1; b2 <= r; ++b2) {
                        Int lhs = bilinear(h * tensor(chains[c1], b1, n), g.form, h * tensor(chains[c2], b2, n));
                        Int rhs = -4 * inter * cart.gram(b1 - 1, b2 - 1);
                        if (lhs != rhs) gram_ok = false;
                    }
            }
        rep.details["gram_minus4_omega"] = gram_ok;
        all_ok = all_ok && gram_ok;
    }
    CheckReport tet = check_tetrahedron_identities(n, variant);
    rep.details["classes"] = classes;
    rep.details["tetrahedron_identities"] = tet.details;
    if (!all_ok || tet.failed()) rep.status = "fail";
    return rep;
}

HomologyHJ homology_HJ(const Triangulation& tri, int n)
{
    return homology_HJ(build_glued(tri, n));
}

namespace {

struct Quotient {
    IntMatrix reps;    // representatives of a free basis, columns
    IntMatrix cycles;  // Z
    IntMatrix U;
    std::size_t boundary_rank = 0;

    // Free coordinates of a cycle.
    IntVector coords(const IntVector& z) const
    {
        auto y = solve_integer(cycles, z);
        if (!y) throw std::logic_error("vector is not a cycle");
        IntVector u = U * *y;
        return IntVector(u.begin() + static_cast<long>(boundary_rank), u.end());
    }
};

// Free part of span(cycles) / span(bounds); bounds must lie in the cycles.
Quotient free_quotient(const IntMatrix& cycles, const IntMatrix& bounds)
{
    Quotient q;
    q.cycles = cycles;
    const std::size_t k = cycles.cols();
    IntMatrix bz(k, bounds.cols());
    for (std::size_t c = 0; c < bounds.cols(); ++c) {
        auto x = solve_integer(cycles, bounds.column(c));
        if (!x) throw std::logic_error("boundary outside cycles");
        bz.set_column(c, *x);
    }
    SmithForm s = smith_normal_form(bz);
    q.U = s.U;
    q.boundary_rank = s.rank();
    IntMatrix uinv = k ? row_echelon(s.U).V : IntMatrix(0, 0);
    q.reps = cycles * uinv.columns(q.boundary_rank, k - q.boundary_rank);
    return q;
}

}  // namespace

HomologyHJ homology_HJ(const GluedComplex& g)
{
    HomologyHJ out;
    const std::size_t r = g.omega.rows();
    IntMatrix G = g.F.transpose() * g.form * g.section;
    IntMatrix Z = G.rows() ? kernel_basis(G) : IntMatrix::identity(r);
    Quotient qj = free_quotient(Z, g.projection * g.F);
    out.basis = qj.reps;
    out.dim = qj.reps.cols();
    out.gram = out.basis.transpose() * g.omega * out.basis;

    // Ker F* ∩ Im p over Im(p F), in (J²)* coordinates
    IntMatrix P = image_basis(g.form);
    IntMatrix FP = g.F.transpose() * P;
    IntMatrix zs = P * (FP.rows() ? kernel_basis(FP) : IntMatrix::identity(P.cols()));
    Quotient qd = free_quotient(zs, g.form * g.F);
    out.dual_basis = qd.reps;
    out.dual_dim = qd.reps.cols();
    out.dual_gram = IntMatrix(out.dual_dim, out.dual_dim);
    std::vector<IntVector> pre;
    for (std::size_t a = 0; a < out.dual_dim; ++a) {
        auto u = solve_integer(g.form, out.dual_basis.column(a));
        if (!u) throw std::logic_error("dual representative outside Im p");
        pre.push_back(*u);
    }
    for (std::size_t a = 0; a < out.dual_dim; ++a)
        for (std::size_t b = 0; b < out.dual_dim; ++b) out.dual_gram(a, b) = bilinear(pre[a], g.form, pre[b]);

    // p carries H(J) onto H(J*); the forms must agree through it
    out.forms_match = false;
    if (out.dim == out.dual_dim) {
        IntMatrix M(out.dual_dim, out.dim);
        for (std::size_t k = 0; k < out.dim; ++k) M.set_column(k, qd.coords(g.form * (g.section * out.basis.column(k))));
        out.forms_match = rank(M) == out.dim && M.transpose() * out.dual_gram * M == out.gram;
    }
    return out;
}

CheckReport dim_formula_check(const Triangulation& tri, int n)
{
    CheckReport rep{"dim_formula", n};
    auto links = vertex_links(tri);
    int nu_t = 0, nu_a = 0, nu_d = 0;
    for (const auto& l : links) {
        if (l.kind == LinkKind::torus) ++nu_t;
        if (l.kind == LinkKind::annulus) ++nu_a;
        if (l.kind == LinkKind::disc) ++nu_d;
        if (l.kind == LinkKind::other) {
            rep.status = "fail";
            rep.details["reason"] = "link of unsupported kind";
            return rep;
        }
    }
    SigmaProjection sigma = sigma_projection(tri, n);
    ComplexReport cx = verify_complex(tri, n);
    const long dim_sigma = static_cast<long>(sigma.dim_J());
    const long formula = 2L * (n - 1) * nu_t + static_cast<long>(n - 1) * nu_a + dim_sigma;
    rep.details = {{"nu_t", nu_t},
                   {"nu_a", nu_a},
                   {"discs", nu_d},
                   {"dim_J_sigma", dim_sigma},
                   {"sigma_points", sigma.points.size()},
                   {"dim_H", cx.dim_H},
                   {"formula", formula},
                   {"dim_ker_G", cx.dim_ker_G},
                   {"rank_F_prime", cx.rank_F_prime},
                   {"rank_G", cx.rank_G}};
    if (static_cast<long>(cx.dim_H) != formula) rep.status = "fail";
    return rep;
}

nlohmann::json ConventionSelection::to_json() const
{
    nlohmann::json v = nlohmann::json::object();
    for (const auto& [var, ok] : results) v[to_string(var)] = ok;
    return {{"ns", ns}, {"variants", v}, {"selected", selected ? nlohmann::json(to_string(*selected)) : nullptr}};
}

ConventionSelection select_h_convention(const Triangulation& tri, const std::vector<int>& ns)
{
    ConventionSelection sel;
    sel.ns = ns;
    std::vector<HVariant> passing;
    for (HVariant v : kAllVariants) {
        bool ok = true;
        for (int n : ns) {
            if (check_hol_lemma(tri, n, v).failed() || check_times4(tri, n, v).failed()) {
                ok = false;
                break;
            }
        }
        sel.results.emplace_back(v, ok);
        if (ok) passing.push_back(v);
    }
    if (passing.size() == 1) sel.selected = passing.front();
    return sel;
}

}  // namespace nzs
