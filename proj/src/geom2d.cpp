#include "geocanvas/geom2d.hpp"

#include <algorithm>
#include <cmath>

#include "geocanvas/calculus.hpp"

namespace geocanvas {

namespace {

double angle_of(Vec2 v) { return std::atan2(v.y, v.x); }

void require(bool cond, ErrorCode code, const std::string& msg) {
    if (!cond) throw ToolError(code, msg);
}

}  // namespace

Line2 make_line(LineKind kind, Point2 p1, Point2 p2, const TolerancePolicy& policy) {
    require(distance(p1, p2) > policy.abs_tol, ErrorCode::degenerate_input,
            "two-point constructor requires distinct points");
    return Line2{kind, p1, p2};
}

Circle2 make_circle(Point2 center, double radius) {
    require(std::isfinite(radius) && radius > 0.0, ErrorCode::degenerate_input,
            "circle radius must be positive");
    return Circle2{center, radius};
}

// --- conics ----------------------------------------------------------------

namespace {

// Implicit form of X^2/a2 + s*Y^2/b2 = 1 in the rotated/translated frame with
// axis u through center m (s = -1 for hyperbolas).
std::array<double, 6> axis_conic_coefficients(Point2 m, Vec2 u, double a2, double b2, double s) {
    const Vec2 v = rot90_ccw(u);
    const double A1 = u.x * u.x / a2 + s * v.x * v.x / b2;
    const double B1 = 2.0 * (u.x * u.y / a2 + s * v.x * v.y / b2);
    const double C1 = u.y * u.y / a2 + s * v.y * v.y / b2;
    return {A1,
            B1,
            C1,
            -2.0 * A1 * m.x - B1 * m.y,
            -B1 * m.x - 2.0 * C1 * m.y,
            A1 * m.x * m.x + B1 * m.x * m.y + C1 * m.y * m.y - 1.0};
}

}  // namespace

Conic2 make_ellipse(Point2 f1, Point2 f2, Point2 p, const TolerancePolicy& policy) {
    const double focal = distance(f1, f2);
    require(focal > policy.abs_tol, ErrorCode::degenerate_input, "ellipse foci must be distinct");
    const double a = 0.5 * (distance(p, f1) + distance(p, f2));
    const double c = 0.5 * focal;
    require(a > c + policy.abs_tol, ErrorCode::degenerate_input,
            "point on ellipse must lie off the focal segment");
    Conic2 out;
    out.kind = ConicKind::ellipse;
    out.focus1 = f1;
    out.focus2 = f2;
    out.point_on = p;
    const Point2 m{0.5 * (f1.x + f2.x), 0.5 * (f1.y + f2.y)};
    out.coef = axis_conic_coefficients(m, normalize(f2 - f1), a * a, a * a - c * c, 1.0);
    return out;
}

Conic2 make_hyperbola(Point2 f1, Point2 f2, Point2 p, const TolerancePolicy& policy) {
    const double focal = distance(f1, f2);
    require(focal > policy.abs_tol, ErrorCode::degenerate_input, "hyperbola foci must be distinct");
    const double a = 0.5 * std::fabs(distance(p, f1) - distance(p, f2));
    const double c = 0.5 * focal;
    require(a > policy.abs_tol, ErrorCode::degenerate_input,
            "point is equidistant from both foci");
    require(a < c - policy.abs_tol, ErrorCode::degenerate_input,
            "point lies on the focal line outside the branches");
    Conic2 out;
    out.kind = ConicKind::hyperbola;
    out.focus1 = f1;
    out.focus2 = f2;
    out.point_on = p;
    const Point2 m{0.5 * (f1.x + f2.x), 0.5 * (f1.y + f2.y)};
    out.coef = axis_conic_coefficients(m, normalize(f2 - f1), a * a, c * c - a * a, -1.0);
    return out;
}

Conic2 make_parabola(Point2 focus, const Line2& directrix, const TolerancePolicy& policy) {
    require(point_line_distance(focus, Line2{LineKind::line, directrix.p1, directrix.p2}) >
                policy.abs_tol,
            ErrorCode::degenerate_input, "parabola focus must not lie on the directrix");
    Conic2 out;
    out.kind = ConicKind::parabola;
    out.focus1 = focus;
    out.directrix = directrix;
    out.directrix.kind = LineKind::line;
    const Vec2 n = rot90_ccw(directrix.direction());
    const double k = n.x * directrix.p1.x + n.y * directrix.p1.y;
    out.coef = {1.0 - n.x * n.x,
                -2.0 * n.x * n.y,
                1.0 - n.y * n.y,
                -2.0 * focus.x + 2.0 * n.x * k,
                -2.0 * focus.y + 2.0 * n.y * k,
                focus.x * focus.x + focus.y * focus.y - k * k};
    return out;
}

Point2 Conic2::center() const {
    if (kind == ConicKind::parabola)
        throw ToolError(ErrorCode::precondition_failed, "a parabola has no center");
    return {0.5 * (focus1.x + focus2.x), 0.5 * (focus1.y + focus2.y)};
}

double conic_residual(const Conic2& c, Point2 p) {
    const auto& k = c.coef;
    return k[0] * p.x * p.x + k[1] * p.x * p.y + k[2] * p.y * p.y + k[3] * p.x + k[4] * p.y + k[5];
}

// --- arcs --------------------------------------------------------------------

double Arc2::span() const {
    double s = end_angle - start_angle;
    s = std::fmod(s, 2.0 * kPi);
    if (s <= 0.0) s += 2.0 * kPi;
    return s;
}

Point2 Arc2::point_at(double angle) const {
    return {circle.center.x + circle.radius * std::cos(angle),
            circle.center.y + circle.radius * std::sin(angle)};
}

Arc2 make_arc(ArcKind kind, Point2 center, Point2 start, Point2 toward,
              const TolerancePolicy& policy) {
    const double r = distance(center, start);
    require(r > policy.abs_tol, ErrorCode::degenerate_input, "arc start coincides with center");
    require(distance(center, toward) > policy.abs_tol, ErrorCode::degenerate_input,
            "arc end coincides with center");
    Arc2 out;
    out.kind = kind;
    out.circle = Circle2{center, r};
    out.start_angle = angle_of(start - center);
    out.end_angle = angle_of(toward - center);
    require(std::fabs(std::remainder(out.end_angle - out.start_angle, 2.0 * kPi)) >
                policy.abs_tol,
            ErrorCode::degenerate_input, "arc endpoints subtend a zero angle");
    return out;
}

Arc2 make_semicircle(Point2 p1, Point2 p2, const TolerancePolicy& policy) {
    const double d = distance(p1, p2);
    require(d > policy.abs_tol, ErrorCode::degenerate_input,
            "semicircle requires distinct diameter endpoints");
    Arc2 out;
    out.kind = ArcKind::semicircle;
    out.circle = Circle2{Point2{0.5 * (p1.x + p2.x), 0.5 * (p1.y + p2.y)}, 0.5 * d};
    // CCW from p2 sweeps across the left-hand side of the walk p1 -> p2
    out.start_angle = angle_of(p2 - out.circle.center);
    out.end_angle = out.start_angle + kPi;
    return out;
}

Polygon2 make_polygon(std::vector<Point2> vertices, const TolerancePolicy& policy) {
    require(vertices.size() >= 3, ErrorCode::precondition_failed,
            "polygon requires at least 3 vertices");
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        const Point2& a = vertices[i];
        const Point2& b = vertices[(i + 1) % vertices.size()];
        require(distance(a, b) > policy.abs_tol, ErrorCode::degenerate_input,
                "consecutive polygon vertices coincide");
    }
    return Polygon2{std::move(vertices)};
}

Scalar FunctionGraph::eval(double x) const {
    if (deriv_order == 0) return eval_expr(body, {{var, x}});
    Fn1 base = bind_unary(body, var);
    if (deriv_order > 0) return derivative_at(base, x, deriv_order);
    // antiderivative with lower bound 0
    try {
        return Scalar(quadrature(base, 0.0, x));
    } catch (const EvalUndefinedOnInterval&) {
        return Scalar::undefined();
    }
}

// --- intersections ----------------------------------------------------------

namespace {

struct ParamRange {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
};

ParamRange line_param_range(const Line2& l) {
    switch (l.kind) {
        case LineKind::line: return {};
        case LineKind::ray: return {0.0, std::numeric_limits<double>::infinity()};
        case LineKind::segment:
        case LineKind::vector: return {0.0, l.length()};
    }
    return {};
}

// Arc-length parameter of p along the line's unit direction.
double line_param(const Line2& l, Point2 p) { return dot(p - l.p1, l.direction()); }

bool line_param_ok(const Line2& l, double t, const TolerancePolicy& policy) {
    const ParamRange r = line_param_range(l);
    const double eps = std::fmax(policy.abs_tol, 1e-12 * l.length());
    return t >= r.lo - eps && t <= r.hi + eps;
}

bool arc_contains_angle(const Arc2& a, double angle, const TolerancePolicy& policy) {
    const double eps = std::fmax(policy.abs_tol / std::fmax(a.circle.radius, 1e-12), 1e-12);
    double off = wrap_angle_2pi(angle - a.start_angle);
    return off <= a.span() + eps || off >= 2.0 * kPi - eps;
}

std::vector<Point2> intersect_line_line(const Line2& a, const Line2& b,
                                        const TolerancePolicy& policy) {
    const Vec2 da = a.p2 - a.p1, db = b.p2 - b.p1;
    const double denom = cross(da, db);
    const double scale = da.norm() * db.norm();
    if (std::fabs(denom) <= 1e-14 * scale) {
        // parallel; coincident supports are degenerate (infinitely many points)
        if (point_line_distance(a.p1, Line2{LineKind::line, b.p1, b.p2}) <= policy.abs_tol)
            throw ToolError(ErrorCode::degenerate_input, "lines are coincident");
        return {};
    }
    const double t = cross(b.p1 - a.p1, db) / denom;
    const double s = cross(b.p1 - a.p1, da) / denom;
    const Point2 p = a.p1 + da * t;
    if (!line_param_ok(a, t * da.norm(), policy) || !line_param_ok(b, s * db.norm(), policy))
        return {};
    return {p};
}

std::vector<Point2> intersect_line_circle(const Line2& l, const Circle2& c,
                                          const TolerancePolicy& policy) {
    const Vec2 u = l.direction();
    const double s0 = dot(c.center - l.p1, u);
    const Point2 foot = l.p1 + u * s0;
    const double h = distance(foot, c.center);
    std::vector<Point2> pts;
    if (h > c.radius + policy.abs_tol) return pts;
    if (h >= c.radius - policy.abs_tol) {
        if (line_param_ok(l, s0, policy)) pts.push_back(foot);
        return pts;
    }
    const double half = std::sqrt(std::fmax(0.0, c.radius * c.radius - h * h));
    for (double s : {s0 - half, s0 + half})
        if (line_param_ok(l, s, policy)) pts.push_back(l.p1 + u * s);
    return pts;
}

std::vector<Point2> intersect_circle_circle(const Circle2& a, const Circle2& b,
                                            const TolerancePolicy& policy) {
    const double d = distance(a.center, b.center);
    if (d <= policy.abs_tol && std::fabs(a.radius - b.radius) <= policy.abs_tol)
        throw ToolError(ErrorCode::degenerate_input, "circles are coincident");
    if (d > a.radius + b.radius + policy.abs_tol) return {};
    if (d < std::fabs(a.radius - b.radius) - policy.abs_tol) return {};
    const Vec2 u = normalize(b.center - a.center);
    const double x = (d * d + a.radius * a.radius - b.radius * b.radius) / (2.0 * d);
    const double y2 = a.radius * a.radius - x * x;
    const Point2 base = a.center + u * x;
    if (y2 <= policy.abs_tol * policy.abs_tol) return {base};
    const double y = std::sqrt(std::fmax(0.0, y2));
    const Vec2 v = rot90_ccw(u);
    return {base + v * y, base + v * (-y)};
}

std::vector<Point2> intersect_line_conic(const Line2& l, const Conic2& c,
                                         const TolerancePolicy& policy) {
    const Vec2 u = l.direction();
    const Point2 o = l.p1;
    const auto& k = c.coef;
    const double A = k[0] * u.x * u.x + k[1] * u.x * u.y + k[2] * u.y * u.y;
    const double B = 2.0 * k[0] * o.x * u.x + k[1] * (o.x * u.y + o.y * u.x) +
                     2.0 * k[2] * o.y * u.y + k[3] * u.x + k[4] * u.y;
    const double C = conic_residual(c, o);
    std::vector<double> ts;
    const double scale = std::max({std::fabs(A), std::fabs(B), std::fabs(C), 1e-30});
    if (std::fabs(A) <= 1e-14 * scale) {
        if (std::fabs(B) > 1e-14 * scale) ts.push_back(-C / B);
    } else {
        const double disc = B * B - 4.0 * A * C;
        const double disc_scale = std::fmax(B * B, std::fabs(4.0 * A * C));
        if (disc >= -policy.abs_tol * disc_scale && disc <= policy.abs_tol * disc_scale) {
            ts.push_back(-B / (2.0 * A));
        } else if (disc > 0.0) {
            const double root = std::sqrt(disc);
            ts.push_back((-B - root) / (2.0 * A));
            ts.push_back((-B + root) / (2.0 * A));
        }
    }
    std::vector<Point2> pts;
    for (double t : ts)
        if (line_param_ok(l, t, policy)) pts.push_back(o + u * t);
    return pts;
}

constexpr double kGraphScanLo = -1e3;
constexpr double kGraphScanHi = 1e3;
constexpr int kGraphScanGrid = 100001;

std::vector<Point2> intersect_graph_line(const FunctionGraph& g, const Line2& l,
                                         const TolerancePolicy& policy) {
    const Vec2 d = l.p2 - l.p1;
    std::vector<Point2> pts;
    if (std::fabs(d.x) <= 1e-14 * d.norm()) {
        // vertical line x = c
        const double x = l.p1.x;
        Scalar y = g.eval(x);
        if (y.is_defined()) {
            const double t = dot(Point2{x, y.value()} - l.p1, l.direction());
            if (line_param_ok(l, t, policy)) pts.push_back({x, y.value()});
        }
        return pts;
    }
    const double m = d.y / d.x;
    const double b = l.p1.y - m * l.p1.x;
    double lo = kGraphScanLo, hi = kGraphScanHi;
    if (l.kind == LineKind::segment || l.kind == LineKind::vector) {
        lo = std::fmin(l.p1.x, l.p2.x);
        hi = std::fmax(l.p1.x, l.p2.x);
    } else if (l.kind == LineKind::ray) {
        if (d.x > 0.0)
            lo = l.p1.x;
        else
            hi = l.p1.x;
    }
    if (!(lo < hi)) {
        lo -= policy.abs_tol + 1e-9;
        hi += policy.abs_tol + 1e-9;
    }
    Fn1 diff = [&g, m, b](double x) -> Scalar {
        Scalar v = g.eval(x);
        if (!v.is_defined()) return Scalar::undefined();
        return Scalar(v.value() - (m * x + b));
    };
    for (double x : nsolve_fn(diff, lo, hi, kGraphScanGrid, policy)) {
        Scalar y = g.eval(x);
        if (y.is_defined()) pts.push_back({x, y.value()});
    }
    return pts;
}

std::vector<Point2> intersect_graph_graph(const FunctionGraph& a, const FunctionGraph& b,
                                          const TolerancePolicy& policy) {
    Fn1 diff = [&a, &b](double x) -> Scalar {
        Scalar va = a.eval(x), vb = b.eval(x);
        if (!va.is_defined() || !vb.is_defined()) return Scalar::undefined();
        return Scalar(va.value() - vb.value());
    };
    std::vector<Point2> pts;
    for (double x : nsolve_fn(diff, kGraphScanLo, kGraphScanHi, kGraphScanGrid, policy)) {
        Scalar y = a.eval(x);
        if (y.is_defined()) pts.push_back({x, y.value()});
    }
    return pts;
}

std::vector<Point2> intersect_graph_circle(const FunctionGraph& g, const Circle2& c,
                                           const TolerancePolicy& policy) {
    Fn1 diff = [&g, &c](double x) -> Scalar {
        Scalar v = g.eval(x);
        if (!v.is_defined()) return Scalar::undefined();
        const double dx = x - c.center.x, dy = v.value() - c.center.y;
        return Scalar(dx * dx + dy * dy - c.radius * c.radius);
    };
    std::vector<Point2> pts;
    for (double x :
         nsolve_fn(diff, c.center.x - c.radius, c.center.x + c.radius, 4096, policy)) {
        Scalar y = g.eval(x);
        if (y.is_defined()) pts.push_back({x, y.value()});
    }
    return pts;
}

double curve_param(const CurveRef& c, Point2 p) {
    if (c.line) return line_param(*c.line, p);
    if (c.circle) return wrap_angle_2pi(angle_of(p - c.circle->center));
    if (c.arc) return wrap_angle_2pi(angle_of(p - c.arc->circle.center) - c.arc->start_angle);
    if (c.graph) return p.x;
    if (c.conic) {
        if (c.conic->kind == ConicKind::parabola)
            return dot(p - c.conic->directrix.p1, c.conic->directrix.direction());
        return wrap_angle_2pi(angle_of(p - c.conic->center()));
    }
    return 0.0;
}

const Circle2& as_circle(const CurveRef& c) {
    return c.circle ? *c.circle : c.arc->circle;
}

}  // namespace

std::vector<Point2> intersect(const CurveRef& a, const CurveRef& b,
                              const TolerancePolicy& policy) {
    auto is_circlelike = [](const CurveRef& c) { return c.circle || c.arc; };
    std::vector<Point2> pts;

    if (a.line && b.line) {
        pts = intersect_line_line(*a.line, *b.line, policy);
    } else if (a.line && is_circlelike(b)) {
        pts = intersect_line_circle(*a.line, as_circle(b), policy);
    } else if (is_circlelike(a) && b.line) {
        pts = intersect_line_circle(*b.line, as_circle(a), policy);
    } else if (is_circlelike(a) && is_circlelike(b)) {
        pts = intersect_circle_circle(as_circle(a), as_circle(b), policy);
    } else if (a.line && b.conic) {
        pts = intersect_line_conic(*a.line, *b.conic, policy);
    } else if (a.conic && b.line) {
        pts = intersect_line_conic(*b.line, *a.conic, policy);
    } else if (a.graph && b.line) {
        pts = intersect_graph_line(*a.graph, *b.line, policy);
    } else if (a.line && b.graph) {
        pts = intersect_graph_line(*b.graph, *a.line, policy);
    } else if (a.graph && b.graph) {
        pts = intersect_graph_graph(*a.graph, *b.graph, policy);
    } else if (a.graph && is_circlelike(b)) {
        pts = intersect_graph_circle(*a.graph, as_circle(b), policy);
    } else if (is_circlelike(a) && b.graph) {
        pts = intersect_graph_circle(*b.graph, as_circle(a), policy);
    } else {
        throw ToolError(ErrorCode::unsupported_tool,
                        "intersection of this pair of curve kinds is not supported");
    }

    // respect arc angular ranges on either operand
    auto arc_filter = [&](const CurveRef& c) {
        if (!c.arc) return;
        std::vector<Point2> kept;
        for (const Point2& p : pts)
            if (arc_contains_angle(*c.arc, angle_of(p - c.arc->circle.center), policy))
                kept.push_back(p);
        pts = std::move(kept);
    };
    arc_filter(a);
    arc_filter(b);

    std::sort(pts.begin(), pts.end(), [&](const Point2& p, const Point2& q) {
        const double tp = curve_param(a, p), tq = curve_param(a, q);
        if (tp != tq) return tp < tq;
        if (p.x != q.x) return p.x < q.x;
        return p.y < q.y;
    });
    return pts;
}

// --- derived lines and circles ----------------------------------------------

Line2 perpendicular_line(Point2 p, const Line2& l) {
    const Vec2 d = rot90_ccw(l.direction());
    return Line2{LineKind::line, p, p + d};
}

Line2 parallel_line(Point2 p, const Line2& l) {
    return Line2{LineKind::line, p, p + l.direction()};
}

Line2 perpendicular_bisector(Point2 a, Point2 b, const TolerancePolicy& policy) {
    require(distance(a, b) > policy.abs_tol, ErrorCode::degenerate_input,
            "perpendicular bisector requires distinct points");
    const Point2 mid{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
    return Line2{LineKind::line, mid, mid + rot90_ccw(normalize(b - a))};
}

Line2 angle_bisector(Point2 a, Point2 b, Point2 c, const TolerancePolicy& policy) {
    require(distance(a, b) > policy.abs_tol && distance(c, b) > policy.abs_tol,
            ErrorCode::degenerate_input, "angle arms must not collapse onto the vertex");
    const Vec2 u = normalize(a - b), w = normalize(c - b);
    Vec2 d = u + w;
    if (d.norm() <= 1e-12) d = rot90_ccw(u);  // straight angle: bisector is the perpendicular
    return Line2{LineKind::line, b, b + normalize(d)};
}

Circle2 circle_through_3(Point2 a, Point2 b, Point2 c, const TolerancePolicy& policy) {
    require(!are_collinear(a, b, c, policy), ErrorCode::degenerate_input,
            "three collinear points define no circle");
    const double d = 2.0 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
    const double a2 = a.x * a.x + a.y * a.y;
    const double b2 = b.x * b.x + b.y * b.y;
    const double c2 = c.x * c.x + c.y * c.y;
    const Point2 center{(a2 * (b.y - c.y) + b2 * (c.y - a.y) + c2 * (a.y - b.y)) / d,
                        (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / d};
    return Circle2{center, distance(center, a)};
}

Circle2 incircle(Point2 a, Point2 b, Point2 c, const TolerancePolicy& policy) {
    require(!are_collinear(a, b, c, policy), ErrorCode::degenerate_input,
            "incircle requires a non-degenerate triangle");
    const double la = distance(b, c), lb = distance(c, a), lc = distance(a, b);
    const double s = la + lb + lc;
    const Point2 center{(la * a.x + lb * b.x + lc * c.x) / s,
                        (la * a.y + lb * b.y + lc * c.y) / s};
    const double area = 0.5 * std::fabs(cross(b - a, c - a));
    return Circle2{center, 2.0 * area / s};
}

Point2 triangle_center(Point2 a, Point2 b, Point2 c, TriangleCenter which,
                       const TolerancePolicy& policy) {
    if (which == TriangleCenter::centroid)
        return {(a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0};
    require(!are_collinear(a, b, c, policy), ErrorCode::degenerate_input,
            "triangle center requires a non-degenerate triangle");
    switch (which) {
        case TriangleCenter::incenter:
            return incircle(a, b, c, policy).center;
        case TriangleCenter::circumcenter:
            return circle_through_3(a, b, c, policy).center;
        case TriangleCenter::orthocenter: {
            // reflection identity: O + H = A + B + C - 2O  =>  H = A + B + C - 2O
            const Point2 o = circle_through_3(a, b, c, policy).center;
            return {a.x + b.x + c.x - 2.0 * o.x, a.y + b.y + c.y - 2.0 * o.y};
        }
        default:
            return {(a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0};
    }
}

namespace {

std::vector<Line2> circle_tangents_from(Point2 p, const Circle2& c,
                                        const TolerancePolicy& policy) {
    const double d = distance(p, c.center);
    if (d < c.radius - policy.abs_tol)
        throw ToolError(ErrorCode::precondition_failed,
                        "no tangent from a point strictly inside the circle");
    if (d <= c.radius + policy.abs_tol) {
        // point on the circle: single tangent, perpendicular to the radius
        const Vec2 radial = normalize(p - c.center);
        return {Line2{LineKind::line, p, p + rot90_ccw(radial)}};
    }
    const double alpha = angle_of(p - c.center);
    const double beta = std::acos(std::clamp(c.radius / d, -1.0, 1.0));
    std::vector<std::pair<double, Point2>> touches;
    for (double ang : {alpha - beta, alpha + beta})
        touches.emplace_back(wrap_angle_2pi(ang), c.center + Vec2{std::cos(ang), std::sin(ang)} * c.radius);
    std::sort(touches.begin(), touches.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    std::vector<Line2> out;
    for (const auto& [ang, touch] : touches) out.push_back(Line2{LineKind::line, p, touch});
    return out;
}

}  // namespace

std::vector<Line2> tangent_lines(Point2 p, const CurveRef& conic, const TolerancePolicy& policy) {
    if (conic.circle || conic.arc) return circle_tangents_from(p, as_circle(conic), policy);
    if (!conic.conic)
        throw ToolError(ErrorCode::type_mismatch, "tangents require a conic operand");
    const Conic2& c = *conic.conic;
    const auto& k = c.coef;
    // polar line of p: gradient-form coefficients of C * (x, y, 1)
    const double l1 = k[0] * p.x + 0.5 * k[1] * p.y + 0.5 * k[3];
    const double l2 = 0.5 * k[1] * p.x + k[2] * p.y + 0.5 * k[4];
    const double l3 = 0.5 * k[3] * p.x + 0.5 * k[4] * p.y + k[5];
    const double scale = std::max({std::fabs(l1), std::fabs(l2), 1e-30});
    // a point of the polar line and its direction (normal is (l1, l2))
    Point2 base;
    if (std::fabs(l1) >= std::fabs(l2))
        base = {-l3 / l1, 0.0};
    else
        base = {0.0, -l3 / l2};
    const Vec2 dir = normalize(Vec2{-l2 / scale, l1 / scale});
    const Line2 polar{LineKind::line, base, base + dir};

    const double onr = conic_residual(c, p);
    const double rscale = std::max(
        {std::fabs(k[0] * p.x * p.x), std::fabs(k[2] * p.y * p.y), std::fabs(k[5]), 1.0});
    if (std::fabs(onr) <= policy.rel_tol * rscale * 1e-3)
        return {Line2{LineKind::line, p, p + dir}};

    CurveRef conic_ref;
    conic_ref.conic = &c;
    CurveRef polar_ref;
    polar_ref.line = &polar;
    std::vector<Point2> touches = intersect(polar_ref, conic_ref, policy);
    if (touches.empty())
        throw ToolError(ErrorCode::precondition_failed,
                        "no tangent from a point inside the conic");
    std::vector<Line2> out;
    for (const Point2& t : touches) out.push_back(Line2{LineKind::line, p, t});
    return out;
}

std::vector<Line2> common_tangents(const Circle2& a, const Circle2& b,
                                   const TolerancePolicy& policy) {
    const double d = distance(a.center, b.center);
    if (d <= policy.abs_tol && std::fabs(a.radius - b.radius) <= policy.abs_tol)
        throw ToolError(ErrorCode::degenerate_input, "circles are coincident");
    const double theta = angle_of(b.center - a.center);
    std::vector<std::pair<double, Line2>> keyed;

    auto tangent_at = [&](double ang_a, double ang_b) {
        const Point2 t1 = a.center + Vec2{std::cos(ang_a), std::sin(ang_a)} * a.radius;
        const Point2 t2 = b.center + Vec2{std::cos(ang_b), std::sin(ang_b)} * b.radius;
        Line2 line;
        if (distance(t1, t2) > policy.abs_tol) {
            line = Line2{LineKind::line, t1, t2};
        } else {
            line = Line2{LineKind::line, t1, t1 + rot90_ccw(Vec2{std::cos(ang_a), std::sin(ang_a)})};
        }
        keyed.emplace_back(wrap_angle_2pi(ang_a), line);
    };

    if (d > policy.abs_tol) {
        // external tangents exist when d >= |r1 - r2|
        const double diff = a.radius - b.radius;
        if (d > std::fabs(diff) + policy.abs_tol) {
            const double phi = std::acos(std::clamp(diff / d, -1.0, 1.0));
            tangent_at(theta + phi, theta + phi);
            tangent_at(theta - phi, theta - phi);
        } else if (d >= std::fabs(diff) - policy.abs_tol) {
            tangent_at(theta + (diff >= 0 ? 0.0 : kPi), theta + (diff >= 0 ? 0.0 : kPi));
        }
        // internal tangents exist when d >= r1 + r2
        const double sum = a.radius + b.radius;
        if (d > sum + policy.abs_tol) {
            const double phi = std::acos(std::clamp(sum / d, -1.0, 1.0));
            tangent_at(theta + phi, theta + phi + kPi);
            tangent_at(theta - phi, theta - phi + kPi);
        } else if (d >= sum - policy.abs_tol) {
            tangent_at(theta, theta + kPi);
        }
    }
    std::sort(keyed.begin(), keyed.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    std::vector<Line2> out;
    for (auto& [ang, line] : keyed) out.push_back(line);
    return out;
}

Line2 best_fit_line(const std::vector<Point2>& pts, const TolerancePolicy& policy) {
    require(pts.size() >= 2, ErrorCode::precondition_failed, "fit line requires >= 2 points");
    double mx = 0.0, my = 0.0;
    for (const Point2& p : pts) {
        mx += p.x;
        my += p.y;
    }
    mx /= static_cast<double>(pts.size());
    my /= static_cast<double>(pts.size());
    double sxx = 0.0, sxy = 0.0;
    for (const Point2& p : pts) {
        sxx += (p.x - mx) * (p.x - mx);
        sxy += (p.x - mx) * (p.y - my);
    }
    require(sxx > policy.abs_tol * policy.abs_tol, ErrorCode::degenerate_input,
            "regression undefined for vertically stacked points");
    const double slope = sxy / sxx;
    return Line2{LineKind::line, Point2{mx, my}, Point2{mx + 1.0, my + slope}};
}

// --- measures ----------------------------------------------------------------

double angle_measure(Point2 a, Point2 b, Point2 c, const TolerancePolicy& policy) {
    if (distance(a, b) <= policy.abs_tol || distance(c, b) <= policy.abs_tol)
        throw ToolError(ErrorCode::degenerate_input, "angle arm coincides with the vertex");
    const double raw = angle_of(c - b) - angle_of(a - b);
    return rad_to_deg(wrap_angle_2pi(raw));
}

double point_line_distance(Point2 p, const Line2& l) {
    const Vec2 u = l.direction();
    double t = dot(p - l.p1, u);
    const ParamRange r = line_param_range(l);
    t = std::clamp(t, r.lo, r.hi);
    return distance(p, l.p1 + u * t);
}

double polygon_perimeter(const Polygon2& poly) {
    double sum = 0.0;
    const std::size_t n = poly.vertices.size();
    for (std::size_t i = 0; i < n; ++i) sum += distance(poly.vertices[i], poly.vertices[(i + 1) % n]);
    return sum;
}

double polygon_area(const Polygon2& poly) {
    double twice = 0.0;
    const std::size_t n = poly.vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& a = poly.vertices[i];
        const Point2& b = poly.vertices[(i + 1) % n];
        twice += a.x * b.y - b.x * a.y;
    }
    return 0.5 * std::fabs(twice);
}

Scalar line_slope(const Line2& l) {
    const Vec2 d = l.p2 - l.p1;
    if (d.x == 0.0) return Scalar::undefined();
    return Scalar(d.y / d.x);
}

// --- transforms ----------------------------------------------------------------

Transform2 reflect_about_line(const Line2& axis, const TolerancePolicy& policy) {
    if (axis.length() <= policy.abs_tol)
        throw ToolError(ErrorCode::degenerate_input, "reflection axis has zero length");
    const Vec2 u = axis.direction();
    Transform2 t;
    t.m = {u.x * u.x - u.y * u.y, 2.0 * u.x * u.y, 2.0 * u.x * u.y, u.y * u.y - u.x * u.x};
    const Point2 o = axis.p1;
    const Point2 image{t.m[0] * o.x + t.m[1] * o.y, t.m[2] * o.x + t.m[3] * o.y};
    t.t = o - image;
    return t;
}

Transform2 reflect_about_point(Point2 center) {
    Transform2 t;
    t.m = {-1.0, 0.0, 0.0, -1.0};
    t.t = {2.0 * center.x, 2.0 * center.y};
    return t;
}

Transform2 rotation_about(Point2 center, double angle_rad) {
    const double c = std::cos(angle_rad), s = std::sin(angle_rad);
    Transform2 t;
    t.m = {c, -s, s, c};
    t.t = {center.x - (c * center.x - s * center.y), center.y - (s * center.x + c * center.y)};
    return t;
}

Transform2 translation(Vec2 offset) {
    Transform2 t;
    t.t = offset;
    return t;
}

Transform2 dilation_about(Point2 center, double factor) {
    if (factor == 0.0 || !std::isfinite(factor))
        throw ToolError(ErrorCode::degenerate_input, "dilation factor must be nonzero");
    Transform2 t;
    t.m = {factor, 0.0, 0.0, factor};
    t.t = {center.x * (1.0 - factor), center.y * (1.0 - factor)};
    return t;
}

// --- predicates ----------------------------------------------------------------

bool are_parallel(const Line2& a, const Line2& b, const TolerancePolicy& policy) {
    return policy.residual_pass(cross(a.direction(), b.direction()), 1.0);
}

bool are_perpendicular(const Line2& a, const Line2& b, const TolerancePolicy& policy) {
    return policy.residual_pass(dot(a.direction(), b.direction()), 1.0);
}

bool are_collinear(Point2 a, Point2 b, Point2 c, const TolerancePolicy& policy) {
    const Vec2 u = b - a, v = c - a;
    return policy.residual_pass(cross(u, v), u.norm() * v.norm());
}

bool are_concyclic(Point2 a, Point2 b, Point2 c, Point2 d, const TolerancePolicy& policy) {
    if (are_collinear(a, b, c, policy)) return false;
    const Circle2 circ = circle_through_3(a, b, c, policy);
    return policy.pass(distance(d, circ.center), circ.radius);
}

bool is_tangent_line(const Line2& l, const CurveRef& conic, const TolerancePolicy& policy) {
    if (conic.circle || conic.arc) {
        const Circle2& c = as_circle(conic);
        const Line2 full{LineKind::line, l.p1, l.p2};
        return policy.pass(point_line_distance(c.center, full), c.radius);
    }
    if (!conic.conic) throw ToolError(ErrorCode::type_mismatch, "tangency requires a conic");
    const Conic2& c = *conic.conic;
    const Vec2 u = l.direction();
    const Point2 o = l.p1;
    const auto& k = c.coef;
    const double A = k[0] * u.x * u.x + k[1] * u.x * u.y + k[2] * u.y * u.y;
    const double B = 2.0 * k[0] * o.x * u.x + k[1] * (o.x * u.y + o.y * u.x) +
                     2.0 * k[2] * o.y * u.y + k[3] * u.x + k[4] * u.y;
    const double C = conic_residual(c, o);
    const double disc = B * B - 4.0 * A * C;
    const double scale = std::fmax(B * B, std::fabs(4.0 * A * C));
    if (scale <= 0.0) return false;
    return policy.residual_pass(disc, scale);
}

bool in_region(const Region2& r, Point2 p, const TolerancePolicy& policy) {
    Scalar lhs = eval_expr(r.relation.lhs, {{"x", p.x}, {"y", p.y}});
    Scalar rhs = eval_expr(r.relation.rhs, {{"x", p.x}, {"y", p.y}});
    if (!lhs.is_defined() || !rhs.is_defined()) return false;
    const double g = lhs.value() - rhs.value();
    if (std::fabs(g) <= policy.abs_tol) return true;  // boundary counts as inside
    switch (r.relation.cmp) {
        case Cmp::lt:
        case Cmp::le: return g < 0.0;
        case Cmp::gt:
        case Cmp::ge: return g > 0.0;
        case Cmp::eq: return false;
    }
    return false;
}

}  // namespace geocanvas
