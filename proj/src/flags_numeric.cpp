#include "nzs/flags_numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nzs {

nlohmann::json Tolerances::to_json() const
{
    return {{"svd_gap", svd_gap},
            {"isotropy", isotropy},
            {"invariance", invariance},
            {"nz_relative", nz_relative},
            {"fd_step", fd_step},
            {"solve_residual", solve_residual},
            {"reject_residual", reject_residual},
            {"dedup", dedup},
            {"completeness", completeness},
            {"rigidity_zero", rigidity_zero},
            {"rigidity_gap", rigidity_gap},
            {"newton_iterations", newton_iterations},
            {"newton_starts", newton_starts},
            {"lagrangian_samples", lagrangian_samples}};
}

namespace {

struct Block {
    int vertex;
    int width;
};

// Blocks stacked into the determinant defining a_α.
std::vector<Block> blocks_of(const Weights& w)
{
    int zeros = static_cast<int>(std::count(w.begin(), w.end(), 0));
    if (zeros == 1) {
        int f = static_cast<int>(std::find(w.begin(), w.end(), 0) - w.begin());
        const auto& o = kFaceOrientation[f];
        return {{o[0], w[o[0]]}, {o[1], w[o[1]]}, {o[2], w[o[2]]}};
    }
    int i = -1, j = -1;
    for (int v = 0; v < 4; ++v)
        if (w[v] != 0) (i < 0 ? i : j) = v;
    // smaller weight first; equal weights keep the lower vertex first
    if (w[j] < w[i]) std::swap(i, j);
    return {{i, w[i]}, {j, w[j]}};
}

CMatrix stacked(const AffineFlagTuple& f, const std::vector<Block>& blocks)
{
    CMatrix m(f.n, f.n);
    int pos = 0;
    for (const auto& b : blocks) {
        m.middleCols(pos, b.width) = f.flags[b.vertex].leftCols(b.width);
        pos += b.width;
    }
    return m;
}

CMatrix epsilon_complex(int n)
{
    IntMatrix e = epsilon_matrix(n);
    CMatrix d(e.rows(), e.cols());
    for (std::size_t r = 0; r < e.rows(); ++r)
        for (std::size_t c = 0; c < e.cols(); ++c) d(r, c) = static_cast<double>(to_long(e(r, c)));
    return d;
}

// Completes the generators of a flag to a basis by the best standard vector.
CMatrix completed(const CMatrix& gens)
{
    const int n = static_cast<int>(gens.rows());
    CMatrix best;
    double best_det = -1;
    for (int k = 0; k < n; ++k) {
        CMatrix g(n, n);
        g.leftCols(n - 1) = gens;
        g.col(n - 1) = CVector::Unit(n, k);
        double d = std::abs(g.determinant());
        if (d > best_det) {
            best_det = d;
            best = g;
        }
    }
    return best;
}

int parameter_count(int n)
{
    return 2 * n * (n - 1);
}

// Parameter index of (flag v, column c, direction r > c).
int parameter_index(int n, int v, int c, int r)
{
    int idx = v * (n * (n - 1) / 2);
    for (int cc = 0; cc < c; ++cc) idx += n - 1 - cc;
    return idx + (r - c - 1);
}

}  // namespace

CVector a_coordinates(const AffineFlagTuple& flags)
{
    const auto pts = enumerate_points(flags.n);
    CVector a(pts.size());
    for (std::size_t k = 0; k < pts.size(); ++k) {
        a(k) = stacked(flags, blocks_of(pts[k])).determinant();
        if (std::abs(a(k)) < 1e-300 || !std::isfinite(std::abs(a(k))))
            throw DegenerateConfiguration("degenerate flag configuration at point " +
                                          BarycentricPoint{0, pts[k]}.id());
    }
    return a;
}

CVector z_of_tetrahedron(const CVector& a, int n)
{
    CMatrix e = epsilon_complex(n);
    CVector loga = a.array().log().matrix();
    CVector logz = e * loga;
    return logz.array().exp().matrix();
}

AffineFlagTuple random_flags(int n, std::mt19937_64& rng)
{
    std::normal_distribution<double> d;
    AffineFlagTuple f;
    f.n = n;
    for (auto& m : f.flags) {
        m.resize(n, n - 1);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n - 1; ++c) m(r, c) = Complex(d(rng), d(rng));
    }
    return f;
}

AffineFlagTuple veronese_flags(Complex x, int n)
{
    if (std::abs(x) < 1e-14 || std::abs(x - 1.0) < 1e-14 || !std::isfinite(std::abs(x)))
        throw DegenerateConfiguration("cross-ratio must avoid 0, 1 and infinity");
    auto osculating = [n](Complex t) {
        CMatrix m = CMatrix::Zero(n, n);
        for (int c = 0; c < n; ++c) {
            double binom = 1;
            for (int r = c; r < n; ++r) {
                m(r, c) = binom * std::pow(t, r - c);
                binom = binom * (r + 1) / (r + 1 - c);
            }
        }
        return m;
    };
    AffineFlagTuple f;
    f.n = n;
    CMatrix inf = CMatrix::Zero(n, n);
    for (int c = 0; c < n; ++c) inf(n - 1 - c, c) = 1;
    f.flags[0] = osculating(0.0).leftCols(n - 1);
    f.flags[1] = inf.leftCols(n - 1);
    f.flags[2] = osculating(1.0).leftCols(n - 1);
    f.flags[3] = osculating(x).leftCols(n - 1);
    return f;
}

AffineFlagTuple transform(const AffineFlagTuple& flags, const CMatrix& g)
{
    AffineFlagTuple f = flags;
    for (auto& m : f.flags) m = g * m;
    return f;
}

CMatrix log_a_jacobian(const AffineFlagTuple& flags)
{
    const int n = flags.n;
    const auto pts = enumerate_points(n);
    std::array<CMatrix, 4> basis;
    for (int v = 0; v < 4; ++v) basis[v] = completed(flags.flags[v]);
    CMatrix jac = CMatrix::Zero(pts.size(), parameter_count(n));
    for (std::size_t k = 0; k < pts.size(); ++k) {
        auto blocks = blocks_of(pts[k]);
        CMatrix minv = stacked(flags, blocks).inverse();
        int pos = 0;
        for (const auto& b : blocks) {
            for (int c = 0; c < b.width; ++c)
                for (int r = c + 1; r < n; ++r)
                    jac(k, parameter_index(n, b.vertex, c, r)) += (minv.row(pos + c) * basis[b.vertex].col(r))(0, 0);
            pos += b.width;
        }
    }
    return jac;
}

CMatrix log_a_jacobian_fd(const AffineFlagTuple& flags, double step)
{
    const int n = flags.n;
    std::array<CMatrix, 4> basis;
    for (int v = 0; v < 4; ++v) basis[v] = completed(flags.flags[v]);
    const auto npts = enumerate_points(n).size();
    CMatrix jac(npts, parameter_count(n));
    for (int v = 0; v < 4; ++v)
        for (int c = 0; c < n - 1; ++c)
            for (int r = c + 1; r < n; ++r) {
                AffineFlagTuple plus = flags, minus = flags;
                plus.flags[v].col(c) += step * basis[v].col(r);
                minus.flags[v].col(c) -= step * basis[v].col(r);
                CVector ap = a_coordinates(plus), am = a_coordinates(minus);
                jac.col(parameter_index(n, v, c, r)) = (ap.array() / am.array()).log().matrix() / (2 * step);
            }
    return jac;
}

nlohmann::json LagrangianReport::to_json() const
{
    return {{"check", "lagrangian"},
            {"n", n},
            {"status", passed ? "pass" : "fail"},
            {"details",
             {{"samples", samples},
              {"resampled", resampled},
              {"expected_rank", expected_rank},
              {"min_rank", min_rank},
              {"max_rank", max_rank},
              {"min_gap", min_gap},
              {"max_isotropy", max_isotropy},
              {"fd_order", fd_order}}}};
}

LagrangianReport lagrangian_check(int n, int samples, std::uint64_t seed, const Tolerances& tol)
{
    LagrangianReport rep;
    rep.n = n;
    rep.expected_rank = (n - 1) * (n - 1);
    rep.min_rank = std::numeric_limits<int>::max();
    rep.min_gap = std::numeric_limits<double>::infinity();
    std::mt19937_64 rng(seed);
    CMatrix e = epsilon_complex(n);
    bool gaps_ok = true;
    while (rep.samples < samples) {
        AffineFlagTuple f = random_flags(n, rng);
        CMatrix ja;
        try {
            a_coordinates(f);
            ja = log_a_jacobian(f);
        } catch (const DegenerateConfiguration&) {
            ++rep.resampled;
            continue;
        }
        CMatrix jz = e * ja;
        Eigen::JacobiSVD<CMatrix> svd(jz);
        const auto& s = svd.singularValues();
        int rank = 0;
        for (int k = 0; k < s.size(); ++k)
            if (s(k) > s(0) * 1e-9) ++rank;
        const int r = rep.expected_rank;
        double gap = r < s.size() ? (s(r) > 0 ? s(r - 1) / s(r) : std::numeric_limits<double>::infinity())
                                  : std::numeric_limits<double>::infinity();
        rep.min_rank = std::min(rep.min_rank, rank);
        rep.max_rank = std::max(rep.max_rank, rank);
        rep.min_gap = std::min(rep.min_gap, gap);
        if (gap < tol.svd_gap) gaps_ok = false;
        // Ω*(ξ_a, ξ_b) = Ω²(u_a, u_b) with ξ = p(u), u = d log a
        CMatrix iso = ja.transpose() * e * ja;
        for (int a = 0; a < ja.cols(); ++a)
            for (int b = 0; b < ja.cols(); ++b) {
                double scale = ja.col(a).norm() * ja.col(b).norm();
                if (scale > 0) rep.max_isotropy = std::max(rep.max_isotropy, std::abs(iso(a, b)) / scale);
            }
        if (rep.samples == 0) {
            double h = 1e-3;
            double e1 = (log_a_jacobian_fd(f, h) - ja).norm();
            double e2 = (log_a_jacobian_fd(f, h / 2) - ja).norm();
            rep.fd_order = (e1 > 0 && e2 > 0) ? std::log2(e1 / e2) : 2.0;
        }
        ++rep.samples;
    }
    const bool fd_ok = rep.fd_order > 1.5 && rep.fd_order < 2.5;
    rep.passed = gaps_ok && rep.min_rank == rep.expected_rank && rep.max_rank == rep.expected_rank &&
                 rep.max_isotropy < tol.isotropy && fd_ok;
    return rep;
}

Complex cross_ratio_shape(const std::array<Eigen::Vector2cd, 4>& pts, int i, int j)
{
    auto [k, l] = even_completion(i, j);
    auto br = [&](int a, int b) { return pts[a](0) * pts[b](1) - pts[a](1) * pts[b](0); };
    return br(i, l) * br(j, k) / (br(i, k) * br(j, l));
}

Complex edge_shape(Complex x, int i, int j)
{
    int a = std::min(i, j), b = std::max(i, j);
    if ((a == 0 && b == 1) || (a == 2 && b == 3)) return x;
    if ((a == 0 && b == 3) || (a == 1 && b == 2)) return 1.0 / (1.0 - x);
    return 1.0 - 1.0 / x;
}

nlohmann::json NzFactorReport::to_json() const
{
    return {{"check", "nz_factor"},
            {"n", n},
            {"status", passed ? "pass" : "fail"},
            {"details",
             {{"cross_ratio", {cross_ratio.real(), cross_ratio.imag()}},
              {"step", step},
              {"expected", expected},
              {"ratio", ratio},
              {"ratio_half_step", ratio_half_step},
              {"ratio_imag", imag_part},
              {"nz_positivity", nz_positivity},
              {"stable", stable}}}};
}

namespace {

struct NzRatio {
    Complex ratio;
    double positivity;
};

NzRatio nz_ratio(int n, Complex x, double h, const CMatrix& e)
{
    // tangent of log a along the Veronese curve; log(a+/a-) avoids branch cuts
    CVector ap = a_coordinates(veronese_flags(x + h, n));
    CVector am = a_coordinates(veronese_flags(x - h, n));
    CVector u = (ap.array() / am.array()).log().matrix() / (2 * h);
    Complex omega_star = u.transpose() * e * u.conjugate();

    // classical shape at edge 01 from the four points of CP^1
    auto shape = [](Complex t) {
        auto f = veronese_flags(t, 2);
        std::array<Eigen::Vector2cd, 4> p;
        for (int v = 0; v < 4; ++v) p[v] = f.flags[v].col(0);
        return cross_ratio_shape(p, 0, 1);
    };
    Complex zp = shape(x + h), zm = shape(x - h);
    Complex dz = std::log(zp / zm) / (2 * h);
    Complex dzp = std::log((1.0 - zm) / (1.0 - zp)) / (2 * h);  // Z' = -log(1 - z)
    Complex omega_nz = dz * std::conj(dzp) - dzp * std::conj(dz);
    return {omega_star / omega_nz, (Complex(0, 1) * omega_nz).real()};
}

}  // namespace

NzFactorReport nz_factor_check(int n, Complex cross_ratio, double step, const Tolerances& tol)
{
    NzFactorReport rep;
    rep.n = n;
    rep.cross_ratio = cross_ratio;
    rep.step = step;
    rep.expected = n * (n * n - 1) / 6.0;
    CMatrix e = epsilon_complex(n);
    NzRatio full = nz_ratio(n, cross_ratio, step, e);
    NzRatio half = nz_ratio(n, cross_ratio, step / 2, e);
    rep.ratio = full.ratio.real();
    rep.imag_part = full.ratio.imag();
    rep.ratio_half_step = half.ratio.real();
    rep.nz_positivity = full.positivity;
    rep.stable = std::abs(rep.ratio - rep.ratio_half_step) < tol.nz_relative * rep.expected;
    rep.passed = rep.stable && std::abs(rep.ratio - rep.expected) < tol.nz_relative * rep.expected &&
                 std::abs(rep.imag_part) < tol.nz_relative * rep.expected && rep.nz_positivity > 0;
    return rep;
}

}  // namespace nzs
