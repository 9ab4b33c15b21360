#include "nzs/tetra_lattice.hpp"

#include "nzs/triangulation.hpp"

#include <algorithm>
#include <stdexcept>

namespace nzs {

std::string BarycentricPoint::id() const
{
    return "T" + std::to_string(tet) + ":" + std::to_string(weights[0]) + "," + std::to_string(weights[1]) + "," +
           std::to_string(weights[2]) + "," + std::to_string(weights[3]);
}

bool BarycentricPoint::is_edge_point() const
{
    return std::count(weights.begin(), weights.end(), 0) == 2;
}

std::vector<Weights> enumerate_points(int n)
{
    if (n < 2) throw std::invalid_argument("n must be at least 2");
    std::vector<Weights> out;
    for (int a = 0; a <= n; ++a)
        for (int b = 0; a + b <= n; ++b)
            for (int c = 0; a + b + c <= n; ++c) {
                Weights w{a, b, c, n - a - b - c};
                auto zeros = std::count(w.begin(), w.end(), 0);
                if (zeros == 1 || zeros == 2) out.push_back(w);
            }
    return out;  // loop order is already lexicographic
}

namespace {

int find_point(const std::vector<Weights>& pts, const Weights& w)
{
    auto it = std::lower_bound(pts.begin(), pts.end(), w);
    if (it == pts.end() || *it != w) return -1;
    return static_cast<int>(it - pts.begin());
}

}  // namespace

IntMatrix epsilon_matrix(int n)
{
    auto pts = enumerate_points(n);
    IntMatrix e(pts.size(), pts.size());
    static const int kDirs[3][3] = {{-1, 1, 0}, {0, -1, 1}, {1, 0, -1}};
    for (int f = 0; f < 4; ++f) {
        const auto& o = kFaceOrientation[f];
        for (std::size_t a = 0; a < pts.size(); ++a) {
            if (pts[a][f] != 0) continue;
            for (const auto& d : kDirs) {
                Weights q = pts[a];
                for (int x = 0; x < 3; ++x) q[o[x]] += d[x];
                if (std::any_of(q.begin(), q.end(), [](int v) { return v < 0; })) continue;
                int b = find_point(pts, q);
                if (b < 0) continue;
                e(a, b) += 1;
                e(b, a) -= 1;
            }
        }
    }
    return e;
}

namespace {

std::vector<IntVector> planes(int n, int first)
{
    auto pts = enumerate_points(n);
    std::vector<IntVector> out;
    for (int i = 0; i < 4; ++i)
        for (int m = first; m < n; ++m) {
            IntVector v(pts.size());
            for (std::size_t a = 0; a < pts.size(); ++a)
                if (pts[a][i] == m) v[a] = 1;
            out.push_back(v);
        }
    return out;
}

}  // namespace

std::vector<IntVector> kernel_vectors(int n) { return planes(n, 1); }

std::vector<IntVector> plane_vectors(int n) { return planes(n, 0); }

Int SkewLatticeModule::omega_star(const IntVector& v, const IntVector& w) const
{
    auto u = solve_integer(form, v);
    auto u2 = solve_integer(form, w);
    if (!u || !u2) throw std::invalid_argument("omega_star: argument outside the image of p");
    return bilinear(*u, form, *u2);
}

SkewLatticeModule make_skew_module(const IntMatrix& form)
{
    SkewLatticeModule m;
    m.form = form;
    m.kernel = kernel_basis(form);
    Complement c = complement_of(m.kernel);
    m.projection = c.projection;
    m.section = c.section;
    m.omega = m.section.transpose() * form * m.section;
    m.dual_basis = form * m.section;
    return m;
}

int TetraLattice::index_of(const Weights& w) const
{
    return find_point(points, w);
}

TetraLattice build_module(int n)
{
    TetraLattice t;
    t.n = n;
    t.points = enumerate_points(n);
    t.module = make_skew_module(epsilon_matrix(n));
    t.kernel_generators = plane_vectors(n);
    return t;
}

}  // namespace nzs
