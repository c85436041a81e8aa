#include <doctest.h>

#include <random>

#include "geocanvas/geom3d.hpp"
#include "oracles.hpp"

using namespace geocanvas;

namespace {

Solid3 unit_cube() {
    return make_cube({0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}, {1.0, 1.0, 0.0});
}

}  // namespace

TEST_CASE("volumes") {
    CHECK(volume(unit_cube()) == doctest::Approx(1.0));
    CHECK(volume(make_cylinder({0, 0, 0}, 1.0, {0, 0, 1})) == doctest::Approx(kPi));
    // unit-square base, apex 3 above: V = b*h/3 = 1
    Solid3 pyr = make_pyramid({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}}, {0.5, 0.5, 3.0});
    CHECK(volume(pyr) == doctest::Approx(1.0));
    CHECK(volume(make_sphere({0, 0, 0}, 2.0)) == doctest::Approx(4.0 / 3.0 * kPi * 8.0));
    CHECK(volume(make_cone({0, 0, 0}, 1.0, {0, 0, 3})) == doctest::Approx(kPi));
    // regular tetrahedron, edge 1: a^3 / (6 sqrt 2)
    Solid3 tet = make_tetrahedron({0, 0, 0}, {1, 0, 0}, {0.5, std::sqrt(3.0) / 2.0, 0});
    CHECK(volume(tet) == doctest::Approx(1.0 / (6.0 * std::sqrt(2.0))));
    // oblique prism: translation with lateral offset, V = base * height along normal
    Solid3 prism = make_prism({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}}, {0.5, 0.0, 2.0});
    CHECK(volume(prism) == doctest::Approx(2.0));
}

TEST_CASE("surface areas") {
    CHECK(surface_area(make_sphere({0, 0, 0}, 1.0)) == doctest::Approx(4.0 * kPi));
    CHECK(surface_area(unit_cube()) == doctest::Approx(6.0));
    CHECK(surface_area(make_cylinder({0, 0, 0}, 1.0, {0, 0, 2})) ==
          doctest::Approx(6.0 * kPi));  // caps included
    // cone r=3 h=4: slant 5, base + lateral = 9pi + 15pi
    CHECK(surface_area(make_cone({0, 0, 0}, 3.0, {0, 0, 4})) == doctest::Approx(24.0 * kPi));
    CHECK(surface_area(make_tetrahedron({0, 0, 0}, {1, 0, 0},
                                        {0.5, std::sqrt(3.0) / 2.0, 0})) ==
          doctest::Approx(std::sqrt(3.0)));
}

TEST_CASE("3D distances from the worked figure") {
    CHECK(std::fabs(distance3({0, 0, 0}, {15, 11, 0}) - 18.60) <= 0.01);
    CHECK(std::fabs(distance3({0, 0, 0}, {15, 11, 11}) - 21.61) <= 0.01);
    CHECK(distance3({2, 3, 4}, {2, 3, 4}) == 0.0);
}

TEST_CASE("distance helpers") {
    Plane3 xy = make_plane({0, 0, 0}, {1, 0, 0}, {0, 1, 0});
    CHECK(point_plane_distance({0, 0, 5}, xy) == doctest::Approx(5.0));
    Line3 axis{{0, 0, 0}, {0, 0, 1}};
    CHECK(point_line3_distance({3, 4, 7}, axis) == doctest::Approx(5.0));
    Line3 skew{{1, 0, 0}, {1, 1, 0}};
    CHECK(line3_line3_distance(axis, skew) == doctest::Approx(1.0));
    Plane3 z2 = make_plane({0, 0, 2}, {1, 0, 2}, {0, 1, 2});
    CHECK(plane_plane_distance(xy, z2) == doctest::Approx(2.0));
}

TEST_CASE("cross-sections of the unit cube") {
    const Solid3 cube = unit_cube();

    Plane3 mid = make_plane_point_normal({0, 0, 0.5}, {0, 0, 1});
    Polygon3 square = cross_section(mid, cube);
    CHECK(square.vertices.size() == 4);
    CHECK(polygon3_area(square) == doctest::Approx(1.0));

    Plane3 above = make_plane_point_normal({0, 0, 2.0}, {0, 0, 1});
    CHECK_THROWS_AS(cross_section(above, cube), ToolError);

    // x + y + z = 0.5 cuts a corner triangle; check against the edge-clipping oracle
    Plane3 corner = make_plane_point_normal({0.5, 0, 0}, normalize3({1, 1, 1}));
    Polygon3 tri = cross_section(corner, cube);
    REQUIRE(tri.vertices.size() == 3);
    const auto expected =
        oracle::clip_edges_by_plane(oracle::unit_cube_edges(), 1, 1, 1, 0.5);
    REQUIRE(expected.size() == 3);
    for (const Point3& v : tri.vertices) {
        bool found = false;
        for (const auto& e : expected)
            if (std::fabs(v.x - e.x) + std::fabs(v.y - e.y) + std::fabs(v.z - e.z) < 1e-9)
                found = true;
        CHECK(found);
    }

    // plane z = c for any c in (0,1) cuts area exactly 1
    for (double c : {0.1, 0.25, 0.5, 0.75, 0.9}) {
        Plane3 cut = make_plane_point_normal({0, 0, c}, {0, 0, 1});
        CHECK(polygon3_area(cross_section(cut, cube)) == doctest::Approx(1.0));
    }

    CHECK_THROWS_AS(cross_section(mid, make_sphere({0, 0, 0}, 1.0)), ToolError);
}

TEST_CASE("random plane sections of the cube agree with the clipping oracle") {
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const Solid3 cube = unit_cube();
    int checked = 0;
    while (checked < 50) {
        const Vec3 n{u(rng), u(rng), u(rng)};
        if (n.norm() < 0.3) continue;
        const Point3 through{0.5 + 0.3 * u(rng), 0.5 + 0.3 * u(rng), 0.5 + 0.3 * u(rng)};
        const Vec3 un = normalize3(n);
        const double d = un.x * through.x + un.y * through.y + un.z * through.z;
        const auto expected =
            oracle::clip_edges_by_plane(oracle::unit_cube_edges(), un.x, un.y, un.z, d);
        if (expected.size() < 3) continue;
        ++checked;
        Polygon3 section = cross_section(make_plane_point_normal(through, un), cube);
        REQUIRE(section.vertices.size() == expected.size());
        for (const Point3& v : section.vertices) {
            bool found = false;
            for (const auto& e : expected)
                if (std::fabs(v.x - e.x) + std::fabs(v.y - e.y) + std::fabs(v.z - e.z) < 1e-7)
                    found = true;
            CHECK(found);
        }
    }
}

TEST_CASE("scaling a solid scales volume by k^3 and area by k^2") {
    std::mt19937 rng(43);
    std::uniform_real_distribution<double> u(0.5, 3.0);
    for (int i = 0; i < 20; ++i) {
        const double k = u(rng);
        Solid3 cube = unit_cube();
        Solid3 scaled = make_cube({0, 0, 0}, {k, 0, 0}, {k, k, 0});
        CHECK(volume(scaled) == doctest::Approx(volume(cube) * k * k * k).epsilon(1e-9));
        CHECK(surface_area(scaled) ==
              doctest::Approx(surface_area(cube) * k * k).epsilon(1e-9));

        Solid3 cone = make_cone({0, 0, 0}, 1.0, {0, 0, 2});
        Solid3 cone_k = make_cone({0, 0, 0}, k, {0, 0, 2 * k});
        CHECK(volume(cone_k) == doctest::Approx(volume(cone) * k * k * k).epsilon(1e-9));
        CHECK(surface_area(cone_k) ==
              doctest::Approx(surface_area(cone) * k * k).epsilon(1e-9));
    }
}

TEST_CASE("cube seed points must form a square corner") {
    CHECK_THROWS_AS(make_cube({0, 0, 0}, {1, 0, 0}, {1, 2, 0}), ToolError);  // unequal edges
    CHECK_THROWS_AS(make_cube({0, 0, 0}, {1, 0, 0}, {2, 1, 0}), ToolError);  // not perpendicular
    CHECK_NOTHROW(make_cube({0, 0, 0}, {0, 1, 0}, {0, 1, 1}));
}

TEST_CASE("tetrahedron seed face must be equilateral") {
    CHECK_THROWS_AS(make_tetrahedron({0, 0, 0}, {1, 0, 0}, {0, 1, 0}), ToolError);
    CHECK_NOTHROW(make_tetrahedron({0, 0, 0}, {2, 0, 0}, {1, std::sqrt(3.0), 0}));
}

TEST_CASE("degenerate solid constructors") {
    CHECK_THROWS_AS(make_pyramid({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}}, {0, 0, 1}), ToolError);
    CHECK_THROWS_AS(make_pyramid({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}}, {0.5, 0.5, 0.0}),
                    ToolError);
    CHECK_THROWS_AS(make_prism({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}}, {1.0, 0.0, 0.0}), ToolError);
    CHECK_THROWS_AS(make_cylinder({0, 0, 0}, -1.0, {0, 0, 1}), ToolError);
    // non-coplanar base
    CHECK_THROWS_AS(make_pyramid({{0, 0, 0}, {1, 0, 0}, {1, 1, 0.3}, {0, 1, 0}}, {0, 0, 3}),
                    ToolError);
}
