#include "nzs/flags_numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace nzs {

namespace {

constexpr Complex kTwoPiI(0, 2 * std::numbers::pi);

struct LogEquation {
    std::vector<std::pair<TetEdge, int>> terms;  // edge of a tetrahedron, exponent
    Complex target;
    bool winding = false;  // target is the nearest multiple of 2πi
    std::string label;
};

std::vector<LogEquation> classical_equations(const Triangulation& tri)
{
    std::vector<LogEquation> eqs;
    auto classes = edge_classes(tri);
    for (std::size_t e = 0; e < classes.size(); ++e) {
        if (!classes[e].interior) continue;
        LogEquation q;
        q.label = "edge:" + std::to_string(e);
        q.target = kTwoPiI;
        for (const auto& r : classes[e].representatives) q.terms.push_back({r, 1});
        eqs.push_back(std::move(q));
    }
    for (const auto& b : peripheral_bases(tri)) {
        if (b.kind != LinkKind::torus) continue;
        for (std::size_t k = 0; k < b.generators.size(); ++k) {
            LogEquation q;
            q.label = "cusp:" + std::to_string(b.link) + (k == 0 ? "/l" : "/m");
            q.target = 0;
            q.winding = true;
            for (const auto& t : b.generators[k].turns) q.terms.push_back({{t.corner.tet, t.corner.i, t.corner.j}, t.sign});
            eqs.push_back(std::move(q));
        }
    }
    return eqs;
}

// d Log ζ / d log x for the shape at edge {i,j}.
Complex shape_derivative(Complex x, int i, int j)
{
    int a = std::min(i, j), b = std::max(i, j);
    if ((a == 0 && b == 1) || (a == 2 && b == 3)) return 1.0;
    if ((a == 0 && b == 3) || (a == 1 && b == 2)) return x / (1.0 - x);
    return 1.0 / (x - 1.0);
}

CVector log_residual(const std::vector<LogEquation>& eqs, const std::vector<Complex>& x)
{
    CVector r(eqs.size());
    for (std::size_t q = 0; q < eqs.size(); ++q) {
        Complex s = -eqs[q].target;
        for (const auto& [e, k] : eqs[q].terms) s += double(k) * std::log(edge_shape(x[e.tet], e.i, e.j));
        if (eqs[q].winding) s -= kTwoPiI * std::round(s.imag() / (2 * std::numbers::pi));
        r(q) = s;
    }
    return r;
}

double multiplicative_residual(const std::vector<LogEquation>& eqs, const std::vector<Complex>& x)
{
    double worst = 0;
    for (const auto& q : eqs) {
        Complex s = 0;
        for (const auto& [e, k] : q.terms) s += double(k) * std::log(edge_shape(x[e.tet], e.i, e.j));
        worst = std::max(worst, std::abs(std::exp(s) - 1.0));
    }
    return worst;
}

Complex power_product(const CVector& z, const IntVector& w)
{
    Complex s = 0;
    for (std::size_t k = 0; k < w.size(); ++k)
        if (w[k] != 0) s += double(to_long(w[k])) * std::log(z(k));
    return std::exp(s);
}

CMatrix to_complex(const IntMatrix& m)
{
    CMatrix c(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t k = 0; k < m.cols(); ++k) c(r, k) = double(to_long(m(r, k)));
    return c;
}

struct RankInfo {
    int rank = 0;
    double gap = std::numeric_limits<double>::infinity();
};

RankInfo numerical_rank(const CMatrix& m, double zero)
{
    RankInfo info;
    if (m.rows() == 0 || m.cols() == 0) return info;
    Eigen::JacobiSVD<CMatrix> svd(m);
    const auto& s = svd.singularValues();
    const double scale = std::max(1.0, s(0));
    for (int k = 0; k < s.size(); ++k)
        if (s(k) > zero * scale) ++info.rank;
    if (info.rank > 0 && info.rank < s.size()) info.gap = s(info.rank - 1) / std::max(s(info.rank), 1e-300);
    return info;
}

}  // namespace

double gluing_residual(const Triangulation& tri, const std::vector<Complex>& shapes)
{
    return multiplicative_residual(classical_equations(tri), shapes);
}

SolveReport solve_gluing_n2(const Triangulation& tri, std::uint64_t seed, const Tolerances& tol)
{
    SolveReport rep;
    rep.seed = seed;
    const auto eqs = classical_equations(tri);
    if (eqs.empty()) throw std::invalid_argument("no gluing equations: no interior edges and no torus links");
    const int N = tri.size();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> re(-1.0, 2.0), im(0.2, 2.0);
    for (int start = 0; start < tol.newton_starts; ++start) {
        ++rep.starts;
        std::vector<Complex> x(N);
        for (auto& v : x) v = Complex(re(rng), im(rng));
        bool ok = true;
        for (int it = 0; it < tol.newton_iterations; ++it) {
            CVector r = log_residual(eqs, x);
            if (r.norm() < 1e-14) break;
            CMatrix jac = CMatrix::Zero(eqs.size(), N);
            for (std::size_t q = 0; q < eqs.size(); ++q)
                for (const auto& [e, k] : eqs[q].terms) jac(q, e.tet) += double(k) * shape_derivative(x[e.tet], e.i, e.j);
            CVector du = jac.completeOrthogonalDecomposition().solve(-r);
            for (int t = 0; t < N; ++t) {
                Complex step = du(t);
                if (std::abs(step) > 1.0) step /= std::abs(step);  // damp large jumps
                x[t] *= std::exp(step);
                if (!std::isfinite(std::abs(x[t])) || std::abs(x[t]) < 1e-12 || std::abs(x[t] - 1.0) < 1e-12) ok = false;
            }
            if (!ok) break;
        }
        if (!ok) continue;
        double res = multiplicative_residual(eqs, x);
        if (res >= tol.solve_residual) {
            if (res < tol.reject_residual)
                rep.diagnostics.push_back("start " + std::to_string(start) + " stalled at residual " + std::to_string(res));
            continue;
        }
        ++rep.converged;
        bool dup = std::any_of(rep.solutions.begin(), rep.solutions.end(), [&](const GluingSolution& s) {
            for (int t = 0; t < N; ++t)
                if (std::abs(s.shapes[t] - x[t]) > tol.dedup) return false;
            return true;
        });
        if (dup) continue;
        GluingSolution sol;
        sol.shapes = x;
        sol.residual = res;
        sol.positive = std::all_of(x.begin(), x.end(), [](Complex v) { return v.imag() > 0; });
        rep.solutions.push_back(std::move(sol));
    }
    return rep;
}

std::optional<GluingSolution> geometric_solution(const SolveReport& rep)
{
    for (const auto& s : rep.solutions)
        if (s.positive) return s;
    return std::nullopt;
}

CVector glued_z(const GluedComplex& g, const std::vector<Complex>& shapes)
{
    const std::size_t P = g.local.points.size();
    CVector z(g.size());
    for (int t = 0; t < g.tets; ++t)
        z.segment(t * P, P) = z_of_tetrahedron(a_coordinates(veronese_flags(shapes[t], g.n)), g.n);
    return z;
}

std::vector<int> classical_sign_table()
{
    const Complex x(0.3, 0.7);
    const auto pts = enumerate_points(2);
    CVector z = z_of_tetrahedron(a_coordinates(veronese_flags(x, 2)), 2);
    std::vector<int> sign;
    for (std::size_t k = 0; k < pts.size(); ++k) {
        int i = -1, j = -1;
        for (int v = 0; v < 4; ++v)
            if (pts[k][v] != 0) (i < 0 ? i : j) = v;
        Complex ratio = edge_shape(x, i, j) / z(k);
        sign.push_back(ratio.real() > 0 ? 1 : -1);
    }
    return sign;
}

Complex evaluate_c1(const Triangulation& tri, const std::vector<Complex>& shapes, const PeripheralPath& path)
{
    GluedComplex g = build_glued(tri, 2);
    IntVector w = hol_exponents(tri, g, path).front();
    CVector z = glued_z(g, shapes);
    auto sign = classical_sign_table();
    const std::size_t P = sign.size();
    for (std::size_t k = 0; k < g.size(); ++k) z(k) *= double(sign[k % P]);
    return power_product(z, w);
}

nlohmann::json RigidityReport::to_json() const
{
    auto finite = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json("inf"); };
    return {{"check", "rigidity"},
            {"n", n},
            {"status", status},
            {"details",
             {{"cusps", cusps},
              {"expected", expected},
              {"tangent_dimension", tangent_dimension},
              {"trivial_directions", trivial_directions},
              {"peripheral_rank", peripheral_rank},
              {"tangent_gap", finite(tangent_gap)},
              {"constraint_gap", finite(constraint_gap)},
              {"peripheral_gap", finite(peripheral_gap)},
              {"face_edge_residual", face_edge_residual},
              {"face_edge_residual_squared", face_edge_residual_squared},
              {"lemma_shadow", lemma_shadow}}}};
}

RigidityReport rigidity_ranks(const std::vector<CMatrix>& tangents, const IntMatrix& equations,
                              const IntMatrix& peripheral, int expected, const Tolerances& tol)
{
    RigidityReport rep;
    rep.expected = expected;
    Eigen::Index rows = 0, cols = 0;
    for (const auto& t : tangents) {
        rows += t.rows();
        cols += t.cols();
    }
    CMatrix tangent = CMatrix::Zero(rows, cols);
    Eigen::Index r0 = 0, c0 = 0;
    for (const auto& t : tangents) {
        tangent.block(r0, c0, t.rows(), t.cols()) = t;
        r0 += t.rows();
        c0 += t.cols();
    }
    CMatrix constraint = to_complex(equations) * tangent;
    Eigen::JacobiSVD<CMatrix> svd(constraint, Eigen::ComputeFullV);
    RankInfo c = numerical_rank(constraint, tol.rigidity_zero);
    rep.constraint_gap = c.gap;
    rep.tangent_dimension = static_cast<int>(cols) - c.rank;
    CMatrix null_space = svd.matrixV().rightCols(rep.tangent_dimension);
    CMatrix image = to_complex(peripheral) * tangent * null_space;
    RankInfo p = numerical_rank(image, tol.rigidity_zero);
    rep.peripheral_rank = p.rank;
    rep.peripheral_gap = p.gap;
    rep.trivial_directions = rep.tangent_dimension - rep.peripheral_rank;
    rep.tangent_gap = std::numeric_limits<double>::infinity();

    const bool counts = rep.tangent_dimension == expected && rep.peripheral_rank == expected;
    const bool separated = rep.constraint_gap >= tol.rigidity_gap && rep.peripheral_gap >= tol.rigidity_gap;
    rep.status = !separated ? "inconclusive" : counts ? "pass" : "fail";
    return rep;
}

RigidityReport rigidity_rank_check(const Triangulation& tri, int n, const std::vector<Complex>& shapes,
                                   const Tolerances& tol)
{
    GluedComplex g = build_glued(tri, n);
    const int r = (n - 1) * (n - 1);
    CMatrix e = to_complex(epsilon_matrix(n));
    std::vector<CMatrix> tangents;
    double tangent_gap = std::numeric_limits<double>::infinity();
    for (int t = 0; t < g.tets; ++t) {
        CMatrix jz = e * log_a_jacobian(veronese_flags(shapes[t], n));
        Eigen::JacobiSVD<CMatrix> svd(jz, Eigen::ComputeThinU);
        const auto& s = svd.singularValues();
        if (r < s.size()) tangent_gap = std::min(tangent_gap, s(r - 1) / std::max(s(r), 1e-300));
        tangents.push_back(svd.matrixU().leftCols(r));
    }

    auto bases = peripheral_bases(tri);
    std::vector<IntVector> rows;
    int cusps = 0;
    for (const auto& b : bases) {
        if (b.kind != LinkKind::torus) continue;
        ++cusps;
        for (auto& w : hol_exponents(tri, g, b.generators.front())) rows.push_back(std::move(w));
    }
    IntMatrix peripheral(rows.size(), g.size());
    for (std::size_t k = 0; k < rows.size(); ++k)
        for (std::size_t c = 0; c < g.size(); ++c) peripheral(k, c) = rows[k][c];

    RigidityReport rep = rigidity_ranks(tangents, g.F.transpose(), peripheral, (n - 1) * cusps, tol);
    rep.n = n;
    rep.cusps = cusps;
    rep.tangent_gap = tangent_gap;
    if (tangent_gap < tol.rigidity_gap) rep.status = "inconclusive";

    CVector z = glued_z(g, shapes);
    for (std::size_t c = 0; c < g.F.cols(); ++c) {
        Complex v = power_product(z, g.F.column(c));
        rep.face_edge_residual = std::max(rep.face_edge_residual, std::abs(v - 1.0));
        rep.face_edge_residual_squared = std::max(rep.face_edge_residual_squared, std::abs(v * v - 1.0));
    }
    IntMatrix h = build_h(g);
    for (const auto& b : bases) {
        if (b.kind != LinkKind::torus) continue;
        for (const auto& path : b.generators) {
            auto ws = hol_exponents(tri, g, path);
            IntVector chain = path.chain(tri.size());
            for (int m = 1; m < n; ++m) {
                Complex zh = power_product(z, h * tensor(chain, m, n));
                Complex zw = power_product(z, ws[m - 1]);
                rep.lemma_shadow = std::max(rep.lemma_shadow, std::min(std::abs(zh - zw * zw), std::abs(zh + zw * zw)));
            }
        }
    }
    return rep;
}

}  // namespace nzs
