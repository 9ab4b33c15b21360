#include "nzs/tetra_lattice.hpp"

#include <doctest.h>

#include <random>

using namespace nzs;

TEST_CASE("point counts by brute force")
{
    for (int n = 2; n <= 5; ++n) {
        int count = 0;
        for (int a = 0; a <= n; ++a)
            for (int b = 0; a + b <= n; ++b)
                for (int c = 0; a + b + c <= n; ++c) {
                    int d = n - a - b - c;
                    int zeros = (a == 0) + (b == 0) + (c == 0) + (d == 0);
                    if (zeros == 1 || zeros == 2) ++count;
                }
        CHECK(static_cast<int>(enumerate_points(n).size()) == count);
        CHECK(count == 2 * (n * n - 1));
    }
    CHECK_THROWS(enumerate_points(1));
}

TEST_CASE("points are lexicographic")
{
    auto pts = enumerate_points(4);
    for (std::size_t k = 1; k < pts.size(); ++k) CHECK(pts[k - 1] < pts[k]);
}

TEST_CASE("skew form rank and kernel")
{
    for (int n = 2; n <= 5; ++n) {
        IntMatrix e = epsilon_matrix(n);
        CHECK(e.transpose() == scaled(Int(-1), e));
        CHECK(rank(e) == static_cast<std::size_t>(2 * (n - 1) * (n - 1)));
        auto kv = kernel_vectors(n);
        CHECK(kv.size() == static_cast<std::size_t>(4 * (n - 1)));
        IntMatrix k = IntMatrix::from_columns(kv, e.rows());
        CHECK((e * k).is_zero());
        IntMatrix kb = kernel_basis(e);
        CHECK(rank(k) == kb.cols());
        for (std::size_t c = 0; c < kb.cols(); ++c) CHECK(in_rational_span(k, kb.column(c)));
        // m >= 1 alone misses the all-ones vector, which is the sum over m of each family
        CHECK(torsion_factors(k) == std::vector<Int>{Int(n)});
        IntMatrix full = IntMatrix::from_columns(plane_vectors(n), e.rows());
        CHECK((e * full).is_zero());
        CHECK(same_lattice(full, kb));
    }
}

TEST_CASE("n = 2 form by hand")
{
    // points 0011 0101 0110 1001 1010 1100: opposite edges carry the same
    // coordinate, and z z' z'' appears as a 3-cycle in the form
    IntMatrix e = epsilon_matrix(2);
    CHECK(e(0, 5) == 0);
    CHECK(e(1, 4) == 0);
    CHECK(e(2, 3) == 0);
    for (std::size_t a = 0; a < 6; ++a) CHECK(e(a, a) == 0);
}

TEST_CASE("module J and its dual")
{
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> d(-3, 3);
    for (int n = 2; n <= 4; ++n) {
        TetraLattice t = build_module(n);
        const auto& m = t.module;
        CHECK(m.dimension() == static_cast<std::size_t>(2 * (n - 1) * (n - 1)));
        CHECK((m.projection * m.kernel).is_zero());
        CHECK(m.projection * m.section == IntMatrix::identity(m.dimension()));
        for (int trial = 0; trial < 5; ++trial) {
            IntVector u(t.points.size()), v(t.points.size());
            for (auto& x : u) x = d(rng);
            for (auto& x : v) x = d(rng);
            CHECK(m.omega_star(m.p(u), m.p(v)) == bilinear(u, m.form, v));
        }
        CHECK(t.index_of(t.points.back()) == static_cast<int>(t.points.size()) - 1);
    }
}

TEST_CASE("barycentric point ids")
{
    BarycentricPoint p{1, {0, 1, 2, 0}};
    CHECK(p.id() == "T1:0,1,2,0");
    CHECK(p.is_edge_point());
    CHECK(p.on_face(0));
    CHECK_FALSE(p.on_face(1));
}
