#include <doctest.h>

#include <random>

#include "geocanvas/geom2d.hpp"
#include "oracles.hpp"

using namespace geocanvas;

namespace {

CurveRef as_curve(const Line2& l) {
    CurveRef c;
    c.line = &l;
    return c;
}
CurveRef as_curve(const Circle2& c2) {
    CurveRef c;
    c.circle = &c2;
    return c;
}
CurveRef as_curve(const Conic2& c2) {
    CurveRef c;
    c.conic = &c2;
    return c;
}

}  // namespace

TEST_CASE("line-circle intersection ordered by parameter along the first operand") {
    // vertical line through the origin, circle of radius 3 at the origin
    const Line2 line = make_line(LineKind::line, {0.0, 0.0}, {0.0, 1.0});
    const Circle2 circle = make_circle({0.0, 0.0}, 3.0);
    auto pts = intersect(as_curve(line), as_curve(circle));
    REQUIRE(pts.size() == 2);
    // ascending signed parameter along (0,1): index 1 is the lower point
    CHECK(pts[0].x == doctest::Approx(0.0));
    CHECK(pts[0].y == doctest::Approx(-3.0));
    CHECK(pts[1].y == doctest::Approx(3.0));
}

TEST_CASE("line-line intersection and parallel rejection") {
    const Line2 h = make_line(LineKind::line, {0.0, 0.0}, {1.0, 0.0});
    const Line2 v = make_line(LineKind::line, {0.0, 0.0}, {0.0, 1.0});
    auto pts = intersect(as_curve(h), as_curve(v));
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].x == doctest::Approx(0.0));
    CHECK(pts[0].y == doctest::Approx(0.0));

    const Line2 h2 = make_line(LineKind::line, {0.0, 1.0}, {1.0, 1.0});
    CHECK(intersect(as_curve(h), as_curve(h2)).empty());

    const Line2 same = make_line(LineKind::line, {2.0, 0.0}, {5.0, 0.0});
    CHECK_THROWS_AS(intersect(as_curve(h), as_curve(same)), ToolError);  // coincident
}

TEST_CASE("segment parameter ranges filter intersections") {
    const Line2 seg = make_line(LineKind::segment, {0.0, 0.0}, {1.0, 0.0});
    const Line2 cross_far = make_line(LineKind::line, {2.0, -1.0}, {2.0, 1.0});
    CHECK(intersect(as_curve(seg), as_curve(cross_far)).empty());
    const Line2 inside = make_line(LineKind::line, {0.5, -1.0}, {0.5, 1.0});
    CHECK(intersect(as_curve(seg), as_curve(inside)).size() == 1);
}

TEST_CASE("intersection ordering is stable across repeated calls") {
    const Circle2 a = make_circle({0.0, 0.0}, 2.0);
    const Circle2 b = make_circle({2.0, 0.0}, 2.0);
    auto first = intersect(as_curve(a), as_curve(b));
    REQUIRE(first.size() == 2);
    for (int i = 0; i < 5; ++i) {
        auto again = intersect(as_curve(a), as_curve(b));
        REQUIRE(again.size() == 2);
        CHECK(again[0].x == first[0].x);
        CHECK(again[0].y == first[0].y);
        CHECK(again[1].y == first[1].y);
    }
    // swapped operands may reorder but the point set matches
    auto swapped = intersect(as_curve(b), as_curve(a));
    REQUIRE(swapped.size() == 2);
    TolerancePolicy policy;
    for (const Point2& p : first) {
        bool found = false;
        for (const Point2& q : swapped)
            if (policy.pass(p.x, q.x) && policy.pass(p.y, q.y)) found = true;
        CHECK(found);
    }
}

TEST_CASE("line-conic intersection") {
    const Conic2 ellipse = make_ellipse({-3.0, 0.0}, {3.0, 0.0}, {5.0, 0.0});
    const Line2 x_axis = make_line(LineKind::line, {0.0, 0.0}, {1.0, 0.0});
    auto pts = intersect(as_curve(x_axis), as_curve(ellipse));
    REQUIRE(pts.size() == 2);
    CHECK(pts[0].x == doctest::Approx(-5.0));
    CHECK(pts[1].x == doctest::Approx(5.0));

    // residual of every returned point vanishes
    for (const Point2& p : pts) CHECK(std::fabs(conic_residual(ellipse, p)) < 1e-9);
}

TEST_CASE("function graph intersections go through the numeric solver") {
    FunctionGraph g;
    g.body = parse_expr("x^2");
    const Line2 line = make_line(LineKind::line, {0.0, 4.0}, {1.0, 4.0});
    CurveRef gc;
    gc.graph = &g;
    auto pts = intersect(gc, as_curve(line));
    REQUIRE(pts.size() == 2);
    CHECK(pts[0].x == doctest::Approx(-2.0).epsilon(1e-7));
    CHECK(pts[1].x == doctest::Approx(2.0).epsilon(1e-7));
}

TEST_CASE("perpendicular line uses the CCW quarter turn") {
    const Line2 base = make_line(LineKind::segment, {0.0, 0.0}, {4.0, 0.0});
    const Line2 perp = perpendicular_line({0.0, 0.0}, base);
    CHECK(perp.direction().x == doctest::Approx(0.0));
    CHECK(perp.direction().y == doctest::Approx(1.0));

    // point on the line: still defined, foot is the point itself
    const Line2 perp2 = perpendicular_line({2.0, 0.0}, base);
    CHECK(point_line_distance({2.0, 0.0}, perp2) == doctest::Approx(0.0));

    // a ray yields the same answer as its underlying line
    const Line2 ray = make_line(LineKind::ray, {0.0, 0.0}, {4.0, 0.0});
    const Line2 perp3 = perpendicular_line({1.0, 2.0}, ray);
    CHECK(perp3.direction().y == doctest::Approx(1.0));
}

TEST_CASE("angle measure sweeps counter-clockwise") {
    CHECK(angle_measure({1.0, 0.0}, {0.0, 0.0}, {0.0, 1.0}) == doctest::Approx(90.0));
    CHECK(angle_measure({0.0, 1.0}, {0.0, 0.0}, {1.0, 0.0}) == doctest::Approx(270.0));
    CHECK_THROWS_AS(angle_measure({0.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}), ToolError);
}

TEST_CASE("Thales angle at a semicircle point") {
    // C on the unit semicircle over diameter A(-1,0) B(1,0)
    const Point2 a{-1.0, 0.0}, b{1.0, 0.0}, c{0.0, 1.0};
    CHECK(angle_measure(a, c, b) == doctest::Approx(90.0).epsilon(1e-9));
}

TEST_CASE("distances") {
    CHECK(distance({4.0, 0.0}, {0.0, -3.0}) == doctest::Approx(5.0));
    CHECK(distance({1.0, 1.0}, {1.0, 1.0}) == 0.0);
    const Line2 y1 = make_line(LineKind::line, {0.0, 1.0}, {1.0, 1.0});
    CHECK(point_line_distance({0.0, 0.0}, y1) == doctest::Approx(1.0));
    // segments clamp to their endpoints
    const Line2 seg = make_line(LineKind::segment, {0.0, 0.0}, {1.0, 0.0});
    CHECK(point_line_distance({3.0, 0.0}, seg) == doctest::Approx(2.0));
}

TEST_CASE("incircle of the 3-4-5 right triangle against the analytic oracle") {
    // right triangle with legs a=3, b=4, hypotenuse c=5: r = (a + b - c)/2 = 1,
    // incenter at (r, r) for legs along the axes
    const double r_expected = (3.0 + 4.0 - 5.0) / 2.0;
    const Circle2 inc = incircle({0.0, 0.0}, {4.0, 0.0}, {0.0, 3.0});
    CHECK(inc.radius == doctest::Approx(r_expected).epsilon(1e-9));
    CHECK(inc.center.x == doctest::Approx(r_expected).epsilon(1e-9));
    CHECK(inc.center.y == doctest::Approx(r_expected).epsilon(1e-9));
}

TEST_CASE("circumcircle and collinear rejection") {
    const Circle2 c = circle_through_3({1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0});
    CHECK(c.center.x == doctest::Approx(0.0));
    CHECK(c.center.y == doctest::Approx(0.0));
    CHECK(c.radius == doctest::Approx(1.0));
    CHECK_THROWS_AS(circle_through_3({0.0, 0.0}, {1.0, 1.0}, {2.0, 2.0}), ToolError);
}

TEST_CASE("tangents from an external point against the brute-force oracle") {
    const Circle2 unit = make_circle({0.0, 0.0}, 1.0);
    const Point2 p{2.0, 0.0};

    // oracle: scan circle points, keep those whose line from p has center
    // distance ~ r (tangency residual)
    std::vector<Point2> touches;
    for (int i = 0; i < 500000; ++i) {
        const double ang = 2.0 * kPi * i / 500000.0;
        const Point2 q{std::cos(ang), std::sin(ang)};
        const double cr = std::fabs((q.x - p.x) * (0.0 - p.y) - (q.y - p.y) * (0.0 - p.x)) /
                          std::hypot(q.x - p.x, q.y - p.y);
        if (std::fabs(cr - 1.0) < 1e-9) touches.push_back(q);
    }
    REQUIRE(touches.size() >= 2);

    auto lines = tangent_lines(p, as_curve(unit));
    REQUIRE(lines.size() == 2);
    // touch points at (1/2, +-sqrt(3)/2)
    for (const Line2& l : lines) {
        CHECK(std::fabs(point_line_distance({0.0, 0.0}, l) - 1.0) < 1e-9);
        CHECK(l.p2.x == doctest::Approx(0.5).epsilon(1e-9));
        CHECK(std::fabs(l.p2.y) == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-9));
        bool matched = false;
        for (const Point2& q : touches)
            if (std::hypot(q.x - l.p2.x, q.y - l.p2.y) < 1e-4) matched = true;
        CHECK(matched);
    }

    CHECK_THROWS_AS(tangent_lines({0.2, 0.0}, as_curve(unit)), ToolError);  // inside
    CHECK(tangent_lines({1.0, 0.0}, as_curve(unit)).size() == 1);           // on the circle
}

TEST_CASE("tangents from a point to an ellipse via the polar line") {
    const Conic2 ellipse = make_ellipse({-3.0, 0.0}, {3.0, 0.0}, {5.0, 0.0});
    auto lines = tangent_lines({0.0, 10.0}, as_curve(ellipse));
    REQUIRE(lines.size() == 2);
    for (const Line2& l : lines) CHECK(is_tangent_line(l, as_curve(ellipse)));
}

TEST_CASE("common tangents of circle pairs") {
    const Circle2 a = make_circle({0.0, 0.0}, 1.0);
    const Circle2 b = make_circle({5.0, 0.0}, 1.0);
    CHECK(common_tangents(a, b).size() == 4);  // disjoint: 2 external + 2 internal
    const Circle2 c = make_circle({1.5, 0.0}, 1.0);
    CHECK(common_tangents(a, c).size() == 2);  // overlapping: external only
    const Circle2 inside = make_circle({0.1, 0.0}, 0.2);
    CHECK(common_tangents(a, inside).empty());
}

TEST_CASE("transforms") {
    const Line2 vertical = make_line(LineKind::line, {0.0, 0.0}, {0.0, 1.0});
    const Transform2 mirror = reflect_about_line(vertical);
    const Point2 image = mirror.apply({-2.5, 4.33});
    CHECK(image.x == doctest::Approx(2.5));
    CHECK(image.y == doctest::Approx(4.33));

    const Transform2 quarter = rotation_about({0.0, 0.0}, deg_to_rad(90.0));
    const Point2 r = quarter.apply({1.0, 0.0});
    CHECK(r.x == doctest::Approx(0.0));
    CHECK(r.y == doctest::Approx(1.0));

    // reflection is an involution
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int i = 0; i < 100; ++i) {
        const Point2 ax1{u(rng), u(rng)};
        Point2 ax2{u(rng), u(rng)};
        if (distance(ax1, ax2) < 1e-3) ax2.x += 1.0;
        const Transform2 m = reflect_about_line(make_line(LineKind::line, ax1, ax2));
        const Point2 p{u(rng), u(rng)};
        const Point2 back = m.apply(m.apply(p));
        CHECK(std::fabs(back.x - p.x) <= 1e-12 * std::fmax(1.0, std::fabs(p.x)) + 1e-12);
        CHECK(std::fabs(back.y - p.y) <= 1e-12 * std::fmax(1.0, std::fabs(p.y)) + 1e-12);
    }

    CHECK_THROWS_AS(dilation_about({0.0, 0.0}, 0.0), ToolError);
}

TEST_CASE("isometries preserve pairwise distances within 1e-12 relative") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> u(-50.0, 50.0);
    for (int i = 0; i < 200; ++i) {
        const Point2 ax1{u(rng), u(rng)};
        Point2 ax2{u(rng), u(rng)};
        if (distance(ax1, ax2) < 1e-3) ax2.y += 1.0;
        const Transform2 maps[] = {
            rotation_about({u(rng), u(rng)}, u(rng)),
            reflect_about_line(make_line(LineKind::line, ax1, ax2)),
            translation({u(rng), u(rng)}),
            reflect_about_point({u(rng), u(rng)}),
        };
        const Point2 p{u(rng), u(rng)}, q{u(rng), u(rng)};
        const double d = distance(p, q);
        for (const Transform2& t : maps) {
            const double dt = distance(t.apply(p), t.apply(q));
            CHECK(std::fabs(dt - d) <= 1e-12 * std::fmax(1.0, d));
        }
    }
}

TEST_CASE("measures") {
    Polygon2 square = make_polygon({{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}});
    CHECK(polygon_area(square) == doctest::Approx(1.0));
    CHECK(polygon_perimeter(square) == doctest::Approx(4.0));
    const Line2 vertical = make_line(LineKind::line, {2.0, 0.0}, {2.0, 5.0});
    CHECK_FALSE(line_slope(vertical).is_defined());
    const Line2 diag = make_line(LineKind::segment, {0.0, 0.0}, {2.0, 1.0});
    CHECK(line_slope(diag).value() == doctest::Approx(0.5));
}

TEST_CASE("shoelace area matches Monte-Carlo area within 0.5% on convex polygons") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> u(1.0, 8.0);
    for (int trial = 0; trial < 8; ++trial) {
        const int n = 5 + trial % 4;
        std::vector<Point2> verts;
        std::vector<std::pair<double, double>> raw;
        const double radius = u(rng);
        for (int i = 0; i < n; ++i) {
            const double ang = 2.0 * kPi * i / n;
            verts.push_back({radius * std::cos(ang), radius * std::sin(ang)});
        }
        for (const Point2& p : verts) raw.push_back({p.x, p.y});
        const double shoelace = polygon_area(make_polygon(verts));
        const double mc = oracle::mc_polygon_area(raw, 1000000, 1000 + trial);
        CHECK(std::fabs(shoelace - mc) <= 0.005 * shoelace);
    }
}

TEST_CASE("boolean predicates") {
    const Line2 y0 = make_line(LineKind::line, {0.0, 0.0}, {1.0, 0.0});
    const Line2 y1 = make_line(LineKind::line, {0.0, 1.0}, {1.0, 1.0});
    const Line2 x0 = make_line(LineKind::line, {0.0, 0.0}, {0.0, 1.0});
    CHECK(are_parallel(y0, y1));
    CHECK_FALSE(are_parallel(y0, x0));
    CHECK(are_perpendicular(y0, x0));
    CHECK(are_collinear({0.0, 0.0}, {1.0, 1.0}, {2.0, 2.0}));
    CHECK_FALSE(are_collinear({0.0, 0.0}, {1.0, 1.0}, {2.0, 2.1}));
    CHECK(are_concyclic({1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}));
    CHECK_FALSE(are_concyclic({1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, 2.0}));

    const Circle2 unit = make_circle({0.0, 0.0}, 1.0);
    CHECK(is_tangent_line(y1, as_curve(unit)));
    CHECK_FALSE(is_tangent_line(y0, as_curve(unit)));

    Region2 disc{parse_relation("x^2 + y^2 <= 4")};
    CHECK(in_region(disc, {1.0, 1.0}));
    CHECK(in_region(disc, {2.0, 0.0}));  // boundary counts as inside
    CHECK_FALSE(in_region(disc, {3.0, 0.0}));
}

TEST_CASE("triangle angle sum: 500 random non-degenerate triangles") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> u(-100.0, 100.0);
    int done = 0;
    while (done < 500) {
        const Point2 a{u(rng), u(rng)}, b{u(rng), u(rng)}, c{u(rng), u(rng)};
        const double twice = cross(b - a, c - a);
        if (std::fabs(twice) < 1.0) continue;  // skip near-degenerate draws
        ++done;
        // consistent CCW orientation: interior angle at V sweeps next -> prev
        const bool ccw = twice > 0.0;
        double sum = 0.0;
        const Point2 tri[3] = {a, b, c};
        for (int i = 0; i < 3; ++i) {
            const Point2 prev = tri[(i + 2) % 3], cur = tri[i], next = tri[(i + 1) % 3];
            sum += ccw ? angle_measure(next, cur, prev) : angle_measure(prev, cur, next);
        }
        CHECK(std::fabs(sum - 180.0) <= 1e-7);
    }
}

TEST_CASE("Thales: 200 random points on random semicircles see the diameter at 90") {
    std::mt19937 rng(37);
    std::uniform_real_distribution<double> u(-50.0, 50.0);
    std::uniform_real_distribution<double> frac(0.05, 0.95);
    int done = 0;
    while (done < 200) {
        const Point2 p1{u(rng), u(rng)}, p2{u(rng), u(rng)};
        if (distance(p1, p2) < 1.0) continue;
        ++done;
        const Arc2 semi = make_semicircle(p1, p2);
        const Point2 on = semi.point_at(semi.start_angle + semi.span() * frac(rng));
        const double ang = angle_measure(p1, on, p2);
        const double dev = std::fmin(std::fabs(ang - 90.0), std::fabs(ang - 270.0));
        CHECK(dev <= 1e-7);
    }
}

TEST_CASE("semicircle left-side rule") {
    // p1 left, p2 right: arc above
    Arc2 above = make_semicircle({-1.0, 0.0}, {1.0, 0.0});
    Point2 mid = above.point_at(above.start_angle + above.span() / 2.0);
    CHECK(mid.y > 0.0);
    // swapped: arc below
    Arc2 below = make_semicircle({1.0, 0.0}, {-1.0, 0.0});
    mid = below.point_at(below.start_angle + below.span() / 2.0);
    CHECK(mid.y < 0.0);
    // p1 bottom, p2 top: arc on the left
    Arc2 left = make_semicircle({0.0, -1.0}, {0.0, 1.0});
    mid = left.point_at(left.start_angle + left.span() / 2.0);
    CHECK(mid.x < 0.0);
}

TEST_CASE("degenerate two-point constructors are rejected") {
    CHECK_THROWS_AS(make_line(LineKind::segment, {1.0, 1.0}, {1.0, 1.0}), ToolError);
    CHECK_THROWS_AS(make_circle({0.0, 0.0}, 0.0), ToolError);
    CHECK_THROWS_AS(make_polygon({{0.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}}), ToolError);
    CHECK_THROWS_AS(make_ellipse({0.0, 0.0}, {0.0, 0.0}, {1.0, 1.0}), ToolError);
    CHECK_THROWS_AS(make_ellipse({-1.0, 0.0}, {1.0, 0.0}, {0.3, 0.0}), ToolError);
}

TEST_CASE("best fit line") {
    const Line2 fit = best_fit_line({{0.0, 0.1}, {1.0, 0.9}, {2.0, 2.1}, {3.0, 2.9}});
    CHECK(line_slope(fit).value() == doctest::Approx(0.98).epsilon(0.05));
    CHECK_THROWS_AS(best_fit_line({{1.0, 0.0}, {1.0, 5.0}, {1.0, 9.0}}), ToolError);
}

TEST_CASE("triangle centers") {
    const Point2 a{0.0, 0.0}, b{4.0, 0.0}, c{0.0, 3.0};
    const Point2 centroid = triangle_center(a, b, c, TriangleCenter::centroid);
    CHECK(centroid.x == doctest::Approx(4.0 / 3.0));
    const Point2 circum = triangle_center(a, b, c, TriangleCenter::circumcenter);
    CHECK(circum.x == doctest::Approx(2.0));
    CHECK(circum.y == doctest::Approx(1.5));
    const Point2 ortho = triangle_center(a, b, c, TriangleCenter::orthocenter);
    CHECK(ortho.x == doctest::Approx(0.0));
    CHECK(ortho.y == doctest::Approx(0.0));
    const Point2 inc = triangle_center(a, b, c, TriangleCenter::incenter);
    CHECK(inc.x == doctest::Approx(1.0));
    CHECK(inc.y == doctest::Approx(1.0));
}
