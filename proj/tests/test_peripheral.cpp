#include "nzs/peripheral.hpp"

#include <doctest.h>

using namespace nzs;

namespace {

// w(c, 1) at n = 2 by the classical rule: each turn contributes the shape of
// the corner it passes, with exponent +1 for a left turn and -1 for a right turn.
IntVector classical_exponents(const GluedComplex& g, const PeripheralPath& p)
{
    IntVector w(g.size());
    for (const auto& t : p.turns) {
        Weights x{};
        x[t.corner.i] = 1;
        x[t.corner.j] = 1;
        w[g.index_of(t.corner.tet, x)] += t.sign;
    }
    return w;
}

}  // namespace

TEST_CASE("cartan lattice")
{
    for (int n = 2; n <= 5; ++n) {
        CartanLattice c = cartan_lattice(n);
        CHECK(c.rank == n - 1);
        for (int a = 0; a < n - 1; ++a)
            for (int b = 0; b < n - 1; ++b) {
                int expect = a == b ? 2 : (std::abs(a - b) == 1 ? -1 : 0);
                CHECK(c.gram(a, b) == expect);
                CHECK(c.pairing(b, a) == Rational(a == b ? 1 : 0));
            }
    }
}

TEST_CASE("corner indexing")
{
    for (int k = 0; k < 24; ++k) CHECK(corner_index(corner_at(k)) == k);
}

TEST_CASE("figure-eight peripheral basis")
{
    Triangulation tri = figure_eight();
    auto bases = peripheral_bases(tri);
    REQUIRE(bases.size() == 1);
    CHECK(bases[0].kind == LinkKind::torus);
    REQUIRE(bases[0].generators.size() == 2);
    CHECK(bases[0].intersection == 1);
    for (const auto& p : bases[0].generators) {
        CHECK(is_closed(tri, p));
        CHECK(is_closed(tri, p.reversed()));
        CHECK(is_closed(tri, p.power(2)));
    }
    auto links = build_link_complexes(tri);
    LinkHomology hom(links[0]);
    CHECK(hom.rank() == 2);
    auto l = hom.coordinates(bases[0].generators[0].chain(2));
    auto m = hom.coordinates(bases[0].generators[1].chain(2));
    CHECK(abs(l[0] * m[1] - l[1] * m[0]) == 1);
}

TEST_CASE("open walks are rejected")
{
    Triangulation tri = figure_eight();
    auto p = peripheral_bases(tri)[0].generators[0];
    p.turns.pop_back();
    CHECK_FALSE(is_closed(tri, p));
    CHECK_THROWS_WITH_AS(hol_exponents(tri, 2, p), doctest::Contains("not a cycle"), std::invalid_argument);
}

TEST_CASE("n = 2 exponents agree with the classical rule")
{
    Triangulation tri = figure_eight();
    GluedComplex g = build_glued(tri, 2);
    const auto bases = peripheral_bases(tri);
    for (const auto& p : bases[0].generators) CHECK(hol_exponents(tri, g, p)[0] == classical_exponents(g, p));
}

TEST_CASE("a loop around an edge end is trivial")
{
    Triangulation tri = figure_eight();
    for (int n = 2; n <= 4; ++n) {
        GluedComplex g = build_glued(tri, n);
        PeripheralPath loop = corner_loop(tri, {0, 0, 1});
        CHECK(is_closed(tri, loop));
        for (const auto& w : hol_exponents(tri, g, loop)) CHECK(in_lattice(image_basis(g.F), w));
    }
}

TEST_CASE("holonomy lemma")
{
    Triangulation tri = figure_eight();
    for (int n = 2; n <= 4; ++n) CHECK(check_hol_lemma(tri, n).passed());
    CHECK(check_hol_lemma(single_tetrahedron(), 2).status == "skipped");
}

TEST_CASE("holonomy lemma detects a corrupted h")
{
    Triangulation tri = figure_eight();
    GluedComplex g = build_glued(tri, 3);
    IntMatrix h = build_h(g);
    IntVector chain = peripheral_bases(tri)[0].generators[0].chain(2);
    std::size_t k = 0;
    while (chain[k] == 0) ++k;
    h(0, k * 2) += 1;
    CheckReport r = check_hol_lemma(tri, g, h);
    CHECK(r.failed());
}

TEST_CASE("duality identity for g")
{
    for (int n = 2; n <= 3; ++n) {
        CheckReport r = check_g_identity(figure_eight(), n);
        CHECK(r.passed());
        CHECK(r.details["mismatches"] == 0);
    }
    CHECK(check_g_identity(single_tetrahedron(), 2).passed());
}

TEST_CASE("multiplication by four")
{
    for (int n = 2; n <= 4; ++n) CHECK(check_times4(figure_eight(), n).passed());
    CheckReport skipped = check_times4(single_tetrahedron(), 3);
    CHECK(skipped.status == "skipped");
    CHECK(skipped.details["reason"] == "Σ nonempty / no torus links");
}

TEST_CASE("per-tetrahedron identities")
{
    for (int n = 2; n <= 4; ++n) {
        CheckReport r = check_tetrahedron_identities(n);
        CHECK(r.passed());
        CHECK(r.details["bracket_failures"] == 0);
    }
    // the decomposition vector leaves the weight lattice at n = 4
    CHECK(check_tetrahedron_identities(4).details["v_prime_in_weight_lattice"] == false);
}

TEST_CASE("dimension formula")
{
    for (int n = 2; n <= 5; ++n) {
        CheckReport r = dim_formula_check(figure_eight(), n);
        CHECK(r.passed());
        CHECK(r.details["dim_H"] == 2 * (n - 1));
    }
    Triangulation folded(1, {{0, 0, 0, 1, {1, 0, 2, 3}}});
    Triangulation twisted(1, {{0, 0, 0, 1, {1, 2, 3, 0}}});
    for (int n = 2; n <= 3; ++n) {
        CHECK(dim_formula_check(folded, n).passed());
        CHECK(dim_formula_check(twisted, n).passed());
        CHECK(dim_formula_check(single_tetrahedron(), n).passed());
    }
}

TEST_CASE("annulus links contribute twice the predicted amount")
{
    Triangulation tri(2, {{0, 0, 1, 0, {0, 2, 1, 3}}, {0, 1, 1, 1, {2, 1, 0, 3}}});
    const int measured[] = {4, 12, 24}, predicted[] = {3, 10, 21};
    for (int n = 2; n <= 4; ++n) {
        CheckReport r = dim_formula_check(tri, n);
        CHECK(r.details["nu_a"] == 1);
        CHECK(r.details["dim_H"] == measured[n - 2]);
        CHECK(r.details["formula"] == predicted[n - 2]);
        CHECK(r.details["dim_H"].get<int>() - r.details["dim_J_sigma"].get<int>() == 2 * (n - 1));
        CHECK(r.failed());
    }
}

TEST_CASE("forms on the homology")
{
    HomologyHJ h = homology_HJ(figure_eight(), 2);
    CHECK(h.dim == 2);
    CHECK(h.dual_dim == 2);
    CHECK(h.forms_match);
    CHECK(abs(h.gram(0, 1)) == 1);
    CHECK(h.gram(0, 1) == -h.gram(1, 0));
}

TEST_CASE("convention selection")
{
    ConventionSelection s = select_h_convention(figure_eight(), {2, 3, 4});
    REQUIRE(s.selected);
    CHECK(*s.selected == HVariant::symmetric);
    int passing = 0;
    for (const auto& [v, ok] : s.results) passing += ok;
    CHECK(passing == 1);
    // n = 2 alone does not single out a convention
    CHECK_FALSE(select_h_convention(figure_eight(), {2}).selected);
    CHECK(s.to_json()["selected"] == "symmetric");
}
