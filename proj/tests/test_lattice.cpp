#include "nzs/lattice.hpp"

#include <doctest.h>

#include <random>

using namespace nzs;

namespace {

IntMatrix random_matrix(std::size_t r, std::size_t c, std::mt19937& rng)
{
    std::uniform_int_distribution<int> d(-4, 4);
    IntMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = d(rng);
    return m;
}

Int det3(const IntMatrix& m)
{
    return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
           m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

}  // namespace

TEST_CASE("smith form of a textbook matrix")
{
    IntMatrix a{{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}};
    SmithForm s = smith_normal_form(a);
    REQUIRE(s.diagonal.size() == 3);
    CHECK(s.diagonal[0] == 2);
    CHECK(s.diagonal[1] == 6);
    CHECK(s.diagonal[2] == 12);
    CHECK(s.U * a * s.V == s.D);
    CHECK(abs(det3(s.U)) == 1);
    CHECK(abs(det3(s.V)) == 1);
}

TEST_CASE("smith form on random matrices")
{
    std::mt19937 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        IntMatrix a = random_matrix(3 + trial % 3, 2 + trial % 4, rng);
        SmithForm s = smith_normal_form(a);
        CHECK(s.U * a * s.V == s.D);
        for (std::size_t k = 1; k < s.diagonal.size(); ++k) CHECK(s.diagonal[k] % s.diagonal[k - 1] == 0);
        CHECK(s.rank() == rank(a));
    }
}

TEST_CASE("kernel and left kernel")
{
    std::mt19937 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        IntMatrix a = random_matrix(3, 6, rng);
        IntMatrix k = kernel_basis(a);
        CHECK(k.cols() == 6 - rank(a));
        CHECK((a * k).is_zero());
        IntMatrix l = left_kernel_basis(a.transpose());
        CHECK((l.transpose() * a.transpose()).is_zero());
        CHECK(same_lattice(k, l));
    }
}

TEST_CASE("kernel of a rank one matrix is saturated")
{
    IntMatrix a{{2, 4, 6}};
    IntMatrix k = kernel_basis(a);
    CHECK(k.cols() == 2);
    // (1,1,-1) is in the kernel but only reachable with integer coefficients if saturated
    CHECK(in_lattice(k, IntVector{1, 1, -1}));
    CHECK(torsion_factors(k).empty());
}

TEST_CASE("integer and rational solving")
{
    IntMatrix a{{2, 0}, {0, 3}};
    auto x = solve_integer(a, {4, 9});
    REQUIRE(x);
    CHECK(*x == IntVector{2, 3});
    CHECK_FALSE(solve_integer(a, {1, 3}));
    auto q = solve_rational(a, {1, 3});
    REQUIRE(q);
    CHECK((*q)[0] == Rational(1, 2));
    CHECK_FALSE(in_lattice(a, {1, 0}));
    CHECK(in_rational_span(a, {1, 0}));
}

TEST_CASE("saturation and torsion")
{
    IntMatrix g{{2, 0}, {0, 2}, {0, 0}};
    auto t = torsion_factors(g);
    REQUIRE(t.size() == 2);
    CHECK(t[0] == 2);
    CHECK(t[1] == 2);
    IntMatrix s = saturation(g);
    CHECK(in_lattice(s, {1, 0, 0}));
    CHECK_FALSE(in_lattice(s, {0, 0, 1}));
}

TEST_CASE("complement of a saturated sublattice")
{
    IntMatrix k{{1, 0}, {1, 1}, {0, 2}, {3, 1}};
    Complement c = complement_of(k);
    CHECK((c.projection * k).is_zero());
    CHECK(c.projection * c.section == IntMatrix::identity(2));
}

TEST_CASE("row echelon transform")
{
    IntMatrix a{{0, 2, 4}, {1, 1, 1}, {2, 4, 6}};
    RowEchelon e = row_echelon(a);
    CHECK(e.V * a == e.R);
    CHECK(e.V * e.Vinv == IntMatrix::identity(3));
    CHECK(e.rank == 2);
}
