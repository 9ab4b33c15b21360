#include "nzs/gluing.hpp"

#include <doctest.h>

using namespace nzs;

namespace {

int glued_face_pairs(const Triangulation& tri)
{
    return static_cast<int>(tri.gluings().size());
}

int interior_edges(const Triangulation& tri)
{
    int k = 0;
    for (const auto& c : edge_classes(tri)) k += c.interior;
    return k;
}

}  // namespace

TEST_CASE("internal point classes of the figure-eight")
{
    Triangulation tri = figure_eight();
    for (int n = 2; n <= 4; ++n) {
        auto cls = internal_points(tri, n);
        int faces = 0, edges = 0;
        for (const auto& c : cls) (c.kind == InternalPointClass::Kind::face ? faces : edges)++;
        // interior points of a glued face: (n-1)(n-2)/2, and n-1 points per interior edge
        CHECK(faces == glued_face_pairs(tri) * (n - 1) * (n - 2) / 2);
        CHECK(edges == interior_edges(tri) * (n - 1));
        IntMatrix f = F_matrix(tri, n);
        CHECK(f.cols() == cls.size());
        CHECK(f.rows() == static_cast<std::size_t>(tri.size() * 2 * (n * n - 1)));
    }
}

TEST_CASE("figure-eight n = 3 counts")
{
    auto s = face_edge_equations(figure_eight(), 3);
    CHECK(s.rows.size() == 8);
    CHECK(s.variables.size() == 32);
    int face_rows = 0;
    for (const auto& r : s.rows) face_rows += r.label.rfind("face:", 0) == 0;
    CHECK(face_rows == 4);
}

TEST_CASE("figure-eight n = 2 equations")
{
    auto s = face_edge_equations(figure_eight(), 2);
    CHECK(s.rows.size() == 2);
    CHECK(s.variables.size() == 12);
    // each edge class has six tetrahedron edges, each contributing one point
    for (const auto& r : s.rows) {
        int total = 0;
        for (const auto& x : r.exponents) total += static_cast<int>(to_long(x));
        CHECK(total == 6);
    }
    auto j = to_json(s);
    CHECK(j["rows"].size() == 2);
    CHECK(to_csv(s.matrix(), s.variables).find("T0:0,0,1,1") == 0);
}

TEST_CASE("complex identities on the figure-eight")
{
    for (int n = 2; n <= 4; ++n) {
        GluedComplex g = build_glued(figure_eight(), n);
        // F* p F computed directly
        CHECK((g.F.transpose() * g.form * g.F).is_zero());
        ComplexReport r = verify_complex(g);
        CHECK(r.composition_vanishes);
        CHECK(r.orthogonality_holds);
        CHECK(r.failures.empty());
        CHECK(r.dim_H == static_cast<std::size_t>(2 * (n - 1)));
        CHECK(r.rank_F_prime == r.rank_G);
    }
}

TEST_CASE("single tetrahedron has no internal points")
{
    for (int n = 2; n <= 3; ++n) {
        Triangulation tri = single_tetrahedron();
        CHECK(internal_points(tri, n).empty());
        ComplexReport r = verify_complex(tri, n);
        CHECK(r.passed());
        CHECK(r.dim_H == static_cast<std::size_t>(2 * (n - 1) * (n - 1)));
        SigmaProjection s = sigma_projection(tri, n);
        CHECK(s.points.size() == static_cast<std::size_t>(2 * (n * n - 1)));
        CHECK(s.dim_J() == r.dim_H);
    }
}

TEST_CASE("sigma for two tetrahedra sharing a face")
{
    Triangulation tri(2, {{0, 3, 1, 3, {1, 0, 2, 3}}});
    SigmaProjection s = sigma_projection(tri, 2);
    // 9 edge classes, each carrying one point, all on free faces
    CHECK(s.points.size() == 9);
    CHECK(s.exponent_map.rows() == 9);
    CHECK(s.exponent_map.cols() == 12);
    CHECK(verify_complex(tri, 3).passed());
}

TEST_CASE("global point ids")
{
    GluedComplex g = build_glued(figure_eight(), 2);
    auto ids = g.point_ids();
    CHECK(ids.size() == 12);
    CHECK(ids.front() == "T0:0,0,1,1");
    CHECK(ids.back() == "T1:1,1,0,0");
    CHECK(g.index_of(1, {1, 1, 0, 0}) == 11);
    CHECK(g.index_of(0, {4, 0, 0, 0}) == -1);
}
