#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>

#include "morseflow/operators.hpp"

using namespace morseflow;

TEST_CASE("laplacian preset") {
    TriangulatedSurface s = build_surface(SurfaceKind::rectangle, 4, {1.0, 1.0});
    OperatorSpec spec = make_laplacian(s);
    for (int v = 0; v < s.vertex_count(); ++v) {
        CHECK(spec.a_field[v] == Eigen::Matrix2d::Identity());
        CHECK(spec.c_field[v] == 0.0);
    }
    CHECK(check_ellipticity(spec).alpha == 1.0);
}

TEST_CASE("shifted laplacian stores c = -c0") {
    TriangulatedSurface s = build_surface(SurfaceKind::rectangle, 4, {1.0, 1.0});
    OperatorSpec spec = make_shifted_laplacian(s, 50.0);
    for (double c : spec.c_field) CHECK(c == -50.0);
}

TEST_CASE("custom fields and ellipticity") {
    TriangulatedSurface s = build_surface(SurfaceKind::rectangle, 4, {1.0, 1.0});
    std::vector<Eigen::Matrix2d> a(s.vertex_count(), Eigen::Matrix2d::Identity());
    std::vector<double> c(s.vertex_count(), 0.0);

    SUBCASE("diag(2,1) has ellipticity constant 1") {
        Eigen::Matrix2d d;
        d << 2.0, 0.0, 0.0, 1.0;
        std::vector<Eigen::Matrix2d> a2(s.vertex_count(), d);
        OperatorSpec spec = make_custom(s, a2, c);
        CHECK(check_ellipticity(spec).alpha == doctest::Approx(1.0));
    }

    SUBCASE("one weaker vertex drives the minimum") {
        a[7] << 3.0, 0.0, 0.0, 0.5;
        OperatorSpec spec = make_custom(s, a, c);
        EllipticityReport rep = check_ellipticity(spec);
        CHECK(rep.alpha == doctest::Approx(0.5));
        CHECK(rep.argmin_vertex == 7);
        CHECK(rep.strongly_elliptic);
    }

    SUBCASE("an indefinite vertex is flagged, not thrown") {
        // eigenvalues {2, -0.1}
        a[3] << 2.0, 0.0, 0.0, -0.1;
        OperatorSpec spec = make_custom(s, a, c);
        EllipticityReport rep = check_ellipticity(spec);
        CHECK(rep.alpha == doctest::Approx(-0.1));
        CHECK_FALSE(rep.strongly_elliptic);
        CHECK(rep.argmin_vertex == 3);
    }

    SUBCASE("non-symmetric a lists the offending vertices") {
        a[2](0, 1) = 0.3;
        a[9](1, 0) = -0.4;
        CHECK_THROWS_WITH_AS(make_custom(s, a, c), doctest::Contains("2 9"),
                             ValidationError);
    }

    SUBCASE("size mismatch") {
        a.pop_back();
        CHECK_THROWS_AS(make_custom(s, a, c), ValidationError);
    }
}

TEST_CASE("cmc cylinder stability operator") {
    auto cylinder_for = [](double radius) {
        return build_surface(SurfaceKind::cylinder, 16, {2.0 * M_PI * radius, 1.0});
    };

    OperatorSpec unit = cmc_cylinder_stability(1.0, cylinder_for(1.0));
    for (double c : unit.c_field) CHECK(c == doctest::Approx(-1.0));

    OperatorSpec wide = cmc_cylinder_stability(2.0, cylinder_for(2.0));
    for (double c : wide.c_field) CHECK(c == doctest::Approx(-0.25));

    // flat limit: c -> 0
    OperatorSpec flat = cmc_cylinder_stability(1e6, cylinder_for(1e6));
    for (double c : flat.c_field) CHECK(std::abs(c) < 1e-11);

    CHECK(check_ellipticity(unit).alpha == 1.0);

    SUBCASE("rejects non-cylinder surfaces") {
        TriangulatedSurface rect = build_surface(SurfaceKind::rectangle, 8, {1.0, 1.0});
        CHECK_THROWS_AS(cmc_cylinder_stability(1.0, rect), ValidationError);
    }
    SUBCASE("rejects mismatched circumference") {
        CHECK_THROWS_AS(cmc_cylinder_stability(1.0, cylinder_for(1.5)), ValidationError);
    }
}

TEST_CASE("presets are bit-identical across rebuilds") {
    TriangulatedSurface s = build_surface(SurfaceKind::cylinder, 8, {1.0, 1.0});
    OperatorSpec a = cmc_cylinder_stability(1.0 / (2.0 * M_PI), s);
    OperatorSpec b = cmc_cylinder_stability(1.0 / (2.0 * M_PI), s);
    REQUIRE(a.c_field.size() == b.c_field.size());
    CHECK(std::memcmp(a.c_field.data(), b.c_field.data(),
                      a.c_field.size() * sizeof(double)) == 0);
    for (std::size_t v = 0; v < a.a_field.size(); ++v)
        CHECK(std::memcmp(a.a_field[v].data(), b.a_field[v].data(), 4 * sizeof(double)) == 0);
}
