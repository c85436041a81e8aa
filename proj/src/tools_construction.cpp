#include "tool_args.hpp"

namespace geocanvas::detail {

namespace {

Value point_value(Point2 p) { return p; }

std::vector<Value> to_values(const std::vector<Point2>& pts) {
    std::vector<Value> out;
    out.reserve(pts.size());
    for (Point2 p : pts) out.emplace_back(p);
    return out;
}

std::vector<Value> to_values(const std::vector<Line2>& lines) {
    std::vector<Value> out;
    out.reserve(lines.size());
    for (const Line2& l : lines) out.emplace_back(l);
    return out;
}

ExprPtr parse_function_body(const std::string& text, const std::string& var) {
    ExprPtr body;
    try {
        body = parse_expr(text);
    } catch (const ParseError& e) {
        throw ToolError(ErrorCode::type_mismatch, std::string("bad expression: ") + e.what(),
                        "expr");
    }
    for (const std::string& v : free_variables(body))
        if (v != var)
            throw ToolError(ErrorCode::type_mismatch,
                            "expression uses unknown variable '" + v + "'", "expr");
    return body;
}

ToolResult two_point_line(LineKind kind, ArgReader& r, const TolerancePolicy& policy) {
    const Point2 p1 = r.point("p1");
    const Point2 p2 = r.point("p2");
    r.finish();
    return single_result(make_line(kind, p1, p2, policy));
}

Point2 point_on_path(const CanvasObject& o, double t, const TolerancePolicy& policy) {
    const Value& v = o.single();
    if (const Line2* l = std::get_if<Line2>(&v)) {
        if (l->kind == LineKind::segment || l->kind == LineKind::vector)
            t = std::clamp(t, 0.0, 1.0);
        if (l->kind == LineKind::ray) t = std::fmax(t, 0.0);
        return l->p1 + (l->p2 - l->p1) * t;
    }
    if (const Circle2* c = std::get_if<Circle2>(&v)) {
        const double ang = 2.0 * kPi * t;
        return {c->center.x + c->radius * std::cos(ang), c->center.y + c->radius * std::sin(ang)};
    }
    if (const Arc2* a = std::get_if<Arc2>(&v))
        return a->point_at(a->start_angle + a->span() * std::clamp(t, 0.0, 1.0));
    if (const Polygon2* poly = std::get_if<Polygon2>(&v)) {
        const double total = polygon_perimeter(*poly);
        double want = wrap_angle_2pi(2.0 * kPi * t) / (2.0 * kPi) * total;
        const auto& vs = poly->vertices;
        for (std::size_t i = 0; i < vs.size(); ++i) {
            const Point2 a = vs[i], b = vs[(i + 1) % vs.size()];
            const double len = distance(a, b);
            if (want <= len || i + 1 == vs.size()) return a + (b - a) * (want / len);
            want -= len;
        }
        return vs.front();
    }
    if (const FunctionGraph* g = std::get_if<FunctionGraph>(&v)) {
        Scalar y = g->eval(t);
        if (!y.is_defined())
            throw ToolError(ErrorCode::precondition_failed,
                            "function undefined at the requested parameter");
        return {t, y.value()};
    }
    if (const Conic2* c = std::get_if<Conic2>(&v)) {
        if (c->kind == ConicKind::ellipse) {
            const Point2 m = c->center();
            const Vec2 u = normalize(c->focus2 - c->focus1);
            const double a =
                0.5 * (distance(c->point_on, c->focus1) + distance(c->point_on, c->focus2));
            const double half = 0.5 * distance(c->focus1, c->focus2);
            const double b = std::sqrt(std::fmax(0.0, a * a - half * half));
            const double ang = 2.0 * kPi * t;
            const Vec2 w = rot90_ccw(u);
            return {m.x + a * std::cos(ang) * u.x + b * std::sin(ang) * w.x,
                    m.y + a * std::cos(ang) * u.y + b * std::sin(ang) * w.y};
        }
        throw ToolError(ErrorCode::unsupported_tool,
                        "point-on-path supports ellipses only among conics");
    }
    (void)policy;
    throw ToolError(ErrorCode::type_mismatch, "'path' does not support constrained points",
                    "path");
}

template <typename MakeTransform>
ToolResult transformed(ArgReader& r, MakeTransform make) {
    const CanvasObject& src = r.ref("obj");
    r.finish();
    const Transform2 t = make();
    std::vector<Value> out;
    for (const Value& v : src.values) out.push_back(apply_transform2(v, t));
    ToolResult res;
    res.values = std::move(out);
    res.is_list = src.is_list;
    if (src.is_list) res.kind = src.kind;
    return res;
}

// Numeric asymptote scan: vertical candidates from pole/domain boundaries,
// horizontal from samples at large |x|.
std::vector<Line2> asymptote_lines(const FunctionGraph& g, double lo, double hi) {
    std::vector<Line2> out;
    auto f = [&g](double x) { return g.eval(x); };

    const int n = 4001;
    const double step = (hi - lo) / (n - 1);
    double prev_x = lo;
    Scalar prev = f(lo);
    std::vector<double> verticals;
    auto push_vertical = [&](double x) {
        for (double e : verticals)
            if (std::fabs(e - x) <= 1e-6 * std::fmax(1.0, std::fabs(x))) return;
        verticals.push_back(x);
    };
    for (int i = 1; i < n; ++i) {
        const double x = (i + 1 == n) ? hi : lo + step * i;
        Scalar cur = f(x);
        if (prev.is_defined() != cur.is_defined()) {
            // bisect the domain boundary
            double a = prev_x, b = x;
            for (int k = 0; k < 60; ++k) {
                const double m = 0.5 * (a + b);
                if (f(m).is_defined() == prev.is_defined())
                    a = m;
                else
                    b = m;
            }
            const double boundary = 0.5 * (a + b);
            const double probe = prev.is_defined() ? a : b;
            Scalar v = f(probe);
            if (v.is_defined() && std::fabs(v.value()) >= 1e4) push_vertical(boundary);
        } else if (prev.is_defined() && cur.is_defined()) {
            const double pv = prev.value(), cv = cur.value();
            if ((pv < 0.0) != (cv < 0.0) && std::fmin(std::fabs(pv), std::fabs(cv)) > 1e3) {
                // pole: 1/f changes sign through zero
                double a = prev_x, b = x, fa = 1.0 / pv;
                for (int k = 0; k < 80; ++k) {
                    const double m = 0.5 * (a + b);
                    Scalar fm = f(m);
                    const double gm = fm.is_defined() ? 1.0 / fm.value() : 0.0;
                    if ((fa < 0.0) == (gm < 0.0)) {
                        a = m;
                        fa = gm;
                    } else {
                        b = m;
                    }
                }
                push_vertical(0.5 * (a + b));
            }
        }
        prev = cur;
        prev_x = x;
    }
    std::sort(verticals.begin(), verticals.end());
    for (double x : verticals)
        out.push_back(Line2{LineKind::line, Point2{x, 0.0}, Point2{x, 1.0}});

    // horizontal limits sampled at large |x|
    for (double sign : {1.0, -1.0}) {
        Scalar near = f(sign * 1e7), far = f(sign * 2e7);
        if (near.is_defined() && far.is_defined() &&
            std::fabs(far.value() - near.value()) <=
                1e-6 * std::fmax(1.0, std::fabs(near.value()))) {
            const double y = far.value();
            bool dup = false;
            for (const Line2& l : out)
                if (l.p1.y == l.p2.y && std::fabs(l.p1.y - y) <= 1e-9 * std::fmax(1.0, std::fabs(y)))
                    dup = true;
            if (!dup) out.push_back(Line2{LineKind::line, Point2{0.0, y}, Point2{1.0, y}});
        }
    }
    return out;
}

}  // namespace

std::string nominal_kind(const std::string& tool) {
    if (tool == "add_point" || tool == "add_point_on" || tool == "add_intersect" ||
        tool == "add_midpoint" || tool == "add_vertex" || tool == "add_center" ||
        tool == "add_triangle_center")
        return "point";
    if (tool == "add_segment") return "segment";
    if (tool == "add_ray") return "ray";
    if (tool == "add_vector") return "vector";
    if (tool == "add_line" || tool == "add_perpendicular_line" ||
        tool == "add_perpendicular_bisector" || tool == "add_parallel_line" ||
        tool == "add_angle_bisector" || tool == "add_tangent" ||
        tool == "add_tangent_conic_conic" || tool == "add_asymptote" ||
        tool == "add_best_fit_line")
        return "line";
    if (tool == "add_circle" || tool == "add_circle_3_points" || tool == "add_incircle")
        return "circle";
    if (tool == "add_arc") return "arc";
    if (tool == "add_sector") return "sector";
    if (tool == "add_semicircle") return "semicircle";
    if (tool == "add_ellipse") return "ellipse";
    if (tool == "add_parabola") return "parabola";
    if (tool == "add_hyperbola") return "hyperbola";
    if (tool == "add_polygon" || tool == "add_regular_polygon") return "polygon";
    if (tool == "add_angle") return "angle";
    if (tool == "add_distance" || tool == "add_area" || tool == "add_slope" ||
        tool == "add_slider" || tool == "add_integral_shade")
        return "number";
    if (tool == "add_function" || tool == "add_derivative" || tool == "add_integral_function")
        return "function";
    if (tool == "add_inflection_point" || tool == "add_roots" || tool == "add_turning_point")
        return "point";
    if (tool == "add_curve") return "curve";
    if (tool == "add_inequality") return "region";
    if (tool == "add_text" || tool == "add_text_3d") return "text";
    if (tool == "add_point3d") return "point3d";
    if (tool == "add_vector3d") return "vector3d";
    if (tool == "add_plane" || tool == "add_perpendicular_plane" || tool == "add_plane_bisector")
        return "plane";
    if (tool == "add_finite_plane" || tool == "add_cross_section") return "polygon3d";
    if (tool == "add_pyramid") return "pyramid";
    if (tool == "add_prism") return "prism";
    if (tool == "add_cone") return "cone";
    if (tool == "add_cylinder") return "cylinder";
    if (tool == "add_sphere") return "sphere";
    if (tool == "add_tetrahedron") return "tetrahedron";
    if (tool == "add_cube") return "cube";
    if (tool.rfind("transform_", 0) == 0) return "object";
    return "object";
}

double ellipse_area(const Conic2& c) {
    const double a = 0.5 * (distance(c.point_on, c.focus1) + distance(c.point_on, c.focus2));
    const double half = 0.5 * distance(c.focus1, c.focus2);
    return kPi * a * std::sqrt(std::fmax(0.0, a * a - half * half));
}

double measure_length(const Value& v) {
    if (const Line2* l = std::get_if<Line2>(&v)) {
        if (l->kind == LineKind::segment || l->kind == LineKind::vector) return l->length();
        throw ToolError(ErrorCode::type_mismatch, "length of an unbounded line is undefined");
    }
    if (const Arc2* a = std::get_if<Arc2>(&v)) return a->circle.radius * a->span();
    if (const Line3* l = std::get_if<Line3>(&v)) return (l->p2 - l->p1).norm();
    if (const ParamCurve2* c = std::get_if<ParamCurve2>(&v)) {
        Fn1 fx = bind_unary(c->x_body, c->var);
        Fn1 fy = bind_unary(c->y_body, c->var);
        Fn1 speed = [fx, fy](double t) -> Scalar {
            Scalar dx = derivative_at(fx, t), dy = derivative_at(fy, t);
            if (!dx.is_defined() || !dy.is_defined()) return Scalar::undefined();
            return Scalar(std::hypot(dx.value(), dy.value()));
        };
        return quadrature(speed, c->t0, c->t1, 1e-7);
    }
    throw ToolError(ErrorCode::type_mismatch, "length applies to segments, vectors and arcs");
}

double measure_perimeter(const Value& v) {
    if (const Polygon2* p = std::get_if<Polygon2>(&v)) return polygon_perimeter(*p);
    if (const Circle2* c = std::get_if<Circle2>(&v)) return 2.0 * kPi * c->radius;
    if (const Arc2* a = std::get_if<Arc2>(&v)) {
        if (a->kind == ArcKind::sector || a->kind == ArcKind::semicircle)
            return a->circle.radius * a->span() + 2.0 * a->circle.radius;
        throw ToolError(ErrorCode::type_mismatch, "an open arc has no perimeter");
    }
    throw ToolError(ErrorCode::type_mismatch, "perimeter applies to polygons and circles");
}

double measure_area(const Value& v) {
    if (const Polygon2* p = std::get_if<Polygon2>(&v)) return polygon_area(*p);
    if (const Circle2* c = std::get_if<Circle2>(&v)) return kPi * c->radius * c->radius;
    if (const Arc2* a = std::get_if<Arc2>(&v))
        return 0.5 * a->circle.radius * a->circle.radius * a->span();
    if (const Conic2* c = std::get_if<Conic2>(&v)) {
        if (c->kind == ConicKind::ellipse) return ellipse_area(*c);
        throw ToolError(ErrorCode::type_mismatch, "area is defined for ellipses only");
    }
    throw ToolError(ErrorCode::type_mismatch, "area applies to polygons, circles and sectors");
}

ToolResult compute_construction(const CanvasState& st, const std::string& tool, const Json& args,
                                ArgReader& r, const TolerancePolicy& policy) {
    // --- points -------------------------------------------------------------
    if (tool == "add_point") {
        const double x = r.scalar("x"), y = r.scalar("y");
        r.finish();
        return single_result(Point2{x, y});
    }
    if (tool == "add_point_on") {
        const CanvasObject& path = r.single_object("path");
        const double t = r.scalar_or("t", 0.5);
        r.finish();
        return single_result(point_on_path(path, t, policy));
    }
    if (tool == "add_intersect") {
        const std::string n1 = r.str("obj1"), n2 = r.str("obj2");
        if (n1 == n2)
            throw ToolError(ErrorCode::degenerate_input, "cannot intersect an object with itself",
                            "obj2");
        CurveRef a = r.curve("obj1");
        CurveRef b = r.curve("obj2");
        const bool has_index = r.has("index");
        const int index = r.count_or("index", 1);
        r.finish();
        std::vector<Point2> pts = intersect(a, b, policy);
        if (pts.empty())
            throw ToolError(ErrorCode::precondition_failed, "the objects do not intersect");
        if (has_index) {
            if (static_cast<std::size_t>(index) > pts.size())
                throw ToolError(ErrorCode::index_out_of_range,
                                "intersection has only " + std::to_string(pts.size()) +
                                    " point(s)",
                                "index");
            return single_result(pts[static_cast<std::size_t>(index) - 1]);
        }
        return list_result(to_values(pts), "point");
    }
    if (tool == "add_midpoint") {
        const Point2 p1 = r.point("p1"), p2 = r.point("p2");
        r.finish();
        return single_result(Point2{0.5 * (p1.x + p2.x), 0.5 * (p1.y + p2.y)});
    }

    // --- lines & segments ----------------------------------------------------
    if (tool == "add_segment") return two_point_line(LineKind::segment, r, policy);
    if (tool == "add_line") return two_point_line(LineKind::line, r, policy);
    if (tool == "add_ray") return two_point_line(LineKind::ray, r, policy);
    if (tool == "add_vector") return two_point_line(LineKind::vector, r, policy);
    if (tool == "add_perpendicular_line") {
        const Point2 p = r.point("point");
        const Line2 l = r.linelike("line");
        r.finish();
        return single_result(perpendicular_line(p, l));
    }
    if (tool == "add_perpendicular_bisector") {
        const Point2 p1 = r.point("p1"), p2 = r.point("p2");
        r.finish();
        return single_result(perpendicular_bisector(p1, p2, policy));
    }
    if (tool == "add_parallel_line") {
        const Point2 p = r.point("point");
        const Line2 l = r.linelike("line");
        r.finish();
        return single_result(parallel_line(p, l));
    }
    if (tool == "add_angle_bisector") {
        const Point2 a = r.point("a"), b = r.point("b"), c = r.point("c");
        r.finish();
        return single_result(angle_bisector(a, b, c, policy));
    }
    if (tool == "add_tangent") {
        const Point2 p = r.point("point");
        CurveRef conic = r.conic_ref("conic");
        r.finish();
        return list_result(to_values(tangent_lines(p, conic, policy)), "line");
    }
    if (tool == "add_tangent_conic_conic") {
        const Circle2* c1 = std::get_if<Circle2>(&r.value("conic1"));
        const Circle2* c2 = std::get_if<Circle2>(&r.value("conic2"));
        if (!c1 || !c2)
            throw ToolError(ErrorCode::unsupported_tool,
                            "common tangents are supported for circle pairs only");
        r.finish();
        std::vector<Line2> lines = common_tangents(*c1, *c2, policy);
        if (lines.empty())
            throw ToolError(ErrorCode::precondition_failed,
                            "the circles admit no common tangent");
        return list_result(to_values(lines), "line");
    }

    // --- circles & conics ------------------------------------------------------
    if (tool == "add_circle") {
        const Point2 center = r.point("center");
        if (r.has("radius")) {
            const double radius = r.scalar("radius");
            r.finish();
            return single_result(make_circle(center, radius));
        }
        if (r.has("point")) {
            const Point2 through = r.point("point");
            r.finish();
            return single_result(make_circle(center, distance(center, through)));
        }
        throw ToolError(ErrorCode::type_mismatch, "add_circle needs 'radius' or 'point'",
                        "radius");
    }
    if (tool == "add_arc" || tool == "add_sector") {
        const Point2 center = r.point("center");
        const Point2 start = r.point("start");
        const Point2 end = r.point("end");
        r.finish();
        return single_result(make_arc(tool == "add_arc" ? ArcKind::arc : ArcKind::sector, center,
                                      start, end, policy));
    }
    if (tool == "add_semicircle") {
        const Point2 p1 = r.point("p1"), p2 = r.point("p2");
        r.finish();
        return single_result(make_semicircle(p1, p2, policy));
    }
    if (tool == "add_circle_3_points") {
        const Point2 p1 = r.point("p1"), p2 = r.point("p2"), p3 = r.point("p3");
        r.finish();
        return single_result(circle_through_3(p1, p2, p3, policy));
    }
    if (tool == "add_incircle") {
        const Point2 p1 = r.point("p1"), p2 = r.point("p2"), p3 = r.point("p3");
        r.finish();
        return single_result(incircle(p1, p2, p3, policy));
    }
    if (tool == "add_ellipse") {
        const Point2 f1 = r.point("focus1"), f2 = r.point("focus2"), p = r.point("point");
        r.finish();
        return single_result(make_ellipse(f1, f2, p, policy));
    }
    if (tool == "add_parabola") {
        const Point2 focus = r.point("focus");
        const Line2 directrix = r.linelike("directrix");
        r.finish();
        return single_result(make_parabola(focus, directrix, policy));
    }
    if (tool == "add_hyperbola") {
        const Point2 f1 = r.point("focus1"), f2 = r.point("focus2"), p = r.point("point");
        r.finish();
        return single_result(make_hyperbola(f1, f2, p, policy));
    }

    // --- polygons & centers ------------------------------------------------------
    if (tool == "add_polygon") {
        std::vector<Point2> pts = r.point_list("points", 3);
        r.finish();
        return single_result(make_polygon(std::move(pts), policy));
    }
    if (tool == "add_regular_polygon") {
        const Point2 p1 = r.point("p1"), p2 = r.point("p2");
        const int n = r.count("n");
        if (n < 3)
            throw ToolError(ErrorCode::precondition_failed, "regular polygon needs n >= 3", "n");
        r.finish();
        if (distance(p1, p2) <= policy.abs_tol)
            throw ToolError(ErrorCode::degenerate_input, "regular polygon needs distinct points");
        std::vector<Point2> vs{p1, p2};
        const double exterior = 2.0 * kPi / n;
        Vec2 dir = p2 - p1;
        for (int i = 2; i < n; ++i) {
            const double c = std::cos(exterior), s = std::sin(exterior);
            dir = Vec2{c * dir.x - s * dir.y, s * dir.x + c * dir.y};
            vs.push_back(vs.back() + dir);
        }
        return single_result(make_polygon(std::move(vs), policy));
    }
    if (tool == "add_vertex") {
        const Polygon2 poly = r.polygon("polygon");
        const int index = r.count("index");
        r.finish();
        if (static_cast<std::size_t>(index) > poly.vertices.size())
            throw ToolError(ErrorCode::index_out_of_range,
                            "polygon has " + std::to_string(poly.vertices.size()) + " vertices",
                            "index");
        return single_result(poly.vertices[static_cast<std::size_t>(index) - 1]);
    }
    if (tool == "add_center") {
        const Value& v = r.value("conic");
        r.finish();
        if (const Circle2* c = std::get_if<Circle2>(&v)) return single_result(c->center);
        if (const Arc2* a = std::get_if<Arc2>(&v)) return single_result(a->circle.center);
        if (const Conic2* c = std::get_if<Conic2>(&v))
            return single_result(c->center());  // throws for parabolas
        throw ToolError(ErrorCode::type_mismatch, "'conic' must be a circle or conic", "conic");
    }
    if (tool == "add_triangle_center") {
        const Point2 p1 = r.point("p1"), p2 = r.point("p2"), p3 = r.point("p3");
        const int code = r.code("center_type");
        if (code < 1 || code > 4)
            throw ToolError(ErrorCode::type_mismatch,
                            "center_type: 1=incenter 2=centroid 3=circumcenter 4=orthocenter",
                            "center_type");
        r.finish();
        return single_result(
            triangle_center(p1, p2, p3, static_cast<TriangleCenter>(code), policy));
    }

    // --- measurement objects ------------------------------------------------------
    if (tool == "add_angle") {
        const Point2 a = r.point("a"), b = r.point("b"), c = r.point("c");
        r.finish();
        ToolResult res = single_result(Value(angle_measure(a, b, c, policy)));
        res.kind = "angle";
        return res;
    }
    if (tool == "add_distance") {
        const Value& a = r.value("obj1");
        const Value& b = r.value("obj2");
        r.finish();
        return single_result(Value(object_distance(a, b, policy)));
    }
    if (tool == "add_area") {
        const Value& v = r.value("obj");
        r.finish();
        return single_result(Value(measure_area(v)));
    }
    if (tool == "add_slope") {
        const Line2 l = r.linelike("line");
        r.finish();
        Scalar s = line_slope(l);
        if (!s.is_defined()) return single_result(Value(Undefined{}));
        return single_result(Value(s.value()));
    }

    // --- functions & calculus ------------------------------------------------------
    if (tool == "add_function") {
        const std::string text = r.str("expr");
        const std::string var = r.str_or("var", "x");
        r.finish();
        FunctionGraph f;
        f.var = var;
        f.body = parse_function_body(text, var);
        return single_result(f);
    }
    if (tool == "add_derivative") {
        FunctionGraph f = r.function("function");
        r.finish();
        if (f.deriv_order < 0)
            f.deriv_order = 0;  // derivative of the antiderivative is the function itself
        else
            f.deriv_order += 1;
        return single_result(f);
    }
    if (tool == "add_integral_function") {
        FunctionGraph f = r.function("function");
        r.finish();
        if (f.deriv_order < 0)
            throw ToolError(ErrorCode::unsupported_tool,
                            "nested antiderivatives are not supported");
        f.deriv_order -= 1;
        return single_result(f);
    }
    if (tool == "add_inflection_point" || tool == "add_turning_point" || tool == "add_roots") {
        FunctionGraph f = r.function("function");
        const double lo = r.scalar_or("lo", -10.0), hi = r.scalar_or("hi", 10.0);
        r.finish();
        if (!(lo < hi))
            throw ToolError(ErrorCode::precondition_failed, "need lo < hi", "hi");
        Fn1 fn = [f](double x) { return f.eval(x); };
        std::vector<double> xs;
        if (tool == "add_roots")
            xs = nsolve_fn(fn, lo, hi, 2048, policy);
        else if (tool == "add_turning_point")
            xs = turning_points(fn, lo, hi);
        else
            xs = inflection_points(fn, lo, hi);
        std::vector<Point2> pts;
        for (double x : xs) {
            Scalar y = tool == "add_roots" ? Scalar(0.0) : f.eval(x);
            if (y.is_defined()) pts.push_back({x, y.value()});
        }
        return list_result(to_values(pts), "point");
    }
    if (tool == "add_asymptote") {
        FunctionGraph f = r.function("function");
        const double lo = r.scalar_or("lo", -10.0), hi = r.scalar_or("hi", 10.0);
        r.finish();
        if (!(lo < hi))
            throw ToolError(ErrorCode::precondition_failed, "need lo < hi", "hi");
        return list_result(to_values(asymptote_lines(f, lo, hi)), "line");
    }
    if (tool == "add_curve") {
        const std::string xe = r.str("x_expr"), ye = r.str("y_expr");
        const std::string var = r.str_or("var", "t");
        const double t0 = r.scalar("t_min"), t1 = r.scalar("t_max");
        r.finish();
        if (!(t0 < t1))
            throw ToolError(ErrorCode::precondition_failed, "need t_min < t_max", "t_max");
        ParamCurve2 c;
        c.var = var;
        c.x_body = parse_function_body(xe, var);
        c.y_body = parse_function_body(ye, var);
        c.t0 = t0;
        c.t1 = t1;
        return single_result(c);
    }

    // --- other construction ------------------------------------------------------
    if (tool == "add_slider") {
        const double min = r.scalar("min"), max = r.scalar("max");
        const double value = r.scalar_or("value", min);
        r.finish();
        if (!(min < max))
            throw ToolError(ErrorCode::precondition_failed, "slider needs min < max", "max");
        if (value < min || value > max)
            throw ToolError(ErrorCode::precondition_failed, "slider value outside [min, max]",
                            "value");
        return single_result(Value(value));
    }
    if (tool == "add_best_fit_line") {
        std::vector<Point2> pts = r.point_list("points", 2);
        r.finish();
        return single_result(best_fit_line(pts, policy));
    }
    if (tool == "add_inequality") {
        const std::string text = r.str("inequality");
        r.finish();
        Relation rel;
        try {
            rel = parse_relation(text);
        } catch (const ParseError& e) {
            throw ToolError(ErrorCode::type_mismatch, std::string("bad inequality: ") + e.what(),
                            "inequality");
        }
        if (rel.cmp == Cmp::eq)
            throw ToolError(ErrorCode::type_mismatch, "an inequality needs <, <=, > or >=",
                            "inequality");
        for (const ExprPtr& side : {rel.lhs, rel.rhs})
            for (const std::string& v : free_variables(side))
                if (v != "x" && v != "y")
                    throw ToolError(ErrorCode::type_mismatch,
                                    "inequality may use variables x and y only", "inequality");
        return single_result(Region2{rel});
    }
    if (tool == "add_integral_shade") {
        FunctionGraph f = r.function("function");
        const double a = r.scalar("a"), b = r.scalar("b");
        r.finish();
        Fn1 fn = [f](double x) { return f.eval(x); };
        return single_result(Value(quadrature(fn, a, b)));
    }
    if (tool == "add_text") {
        const std::string text = r.str("text");
        const double x = r.scalar("x"), y = r.scalar("y");
        r.finish();
        TextObj t;
        t.text = text;
        t.x = x;
        t.y = y;
        return single_result(t);
    }

    // --- transforms ------------------------------------------------------
    if (tool == "transform_reflect_line") {
        const Line2 axis = r.linelike("line");
        return transformed(r, [&] { return reflect_about_line(axis, policy); });
    }
    if (tool == "transform_reflect_point") {
        const Point2 center = r.point("point");
        return transformed(r, [&] { return reflect_about_point(center); });
    }
    if (tool == "transform_rotate") {
        const double angle_deg = r.scalar("angle");
        const Point2 center = r.point("center");
        return transformed(r, [&] { return rotation_about(center, deg_to_rad(angle_deg)); });
    }
    if (tool == "transform_translate") {
        const Value& vv = r.value("vector");
        const Line2* vec = std::get_if<Line2>(&vv);
        if (!std::holds_alternative<Undefined>(vv) && (!vec || vec->kind != LineKind::vector))
            throw ToolError(ErrorCode::type_mismatch, "'vector' must name a vector object",
                            "vector");
        const Vec2 delta = vec ? vec->p2 - vec->p1 : Vec2{};
        return transformed(r, [&] { return translation(delta); });
    }
    if (tool == "transform_dilate") {
        const double factor = r.scalar("factor");
        const Point2 center = r.point("center");
        return transformed(r, [&] { return dilation_about(center, factor); });
    }

    // --- 3D ------------------------------------------------------
    if (tool == "add_point3d") {
        const double x = r.scalar("x"), y = r.scalar("y"), z = r.scalar("z");
        r.finish();
        return single_result(Point3{x, y, z});
    }
    if (tool == "add_vector3d") {
        if (r.has("to")) {
            const Point3 to = r.point3("to");
            const Point3 from = r.has("from") ? r.point3("from") : Point3{0.0, 0.0, 0.0};
            r.finish();
            return single_result(Line3{from, to});
        }
        const double x = r.scalar("x"), y = r.scalar("y"), z = r.scalar("z");
        r.finish();
        return single_result(Line3{Point3{0.0, 0.0, 0.0}, Point3{x, y, z}});
    }
    if (tool == "add_plane") {
        const Point3 p1 = r.point3("p1"), p2 = r.point3("p2"), p3 = r.point3("p3");
        r.finish();
        return single_result(make_plane(p1, p2, p3, policy));
    }
    if (tool == "add_finite_plane") {
        const Point3 p1 = r.point3("p1"), p2 = r.point3("p2"), p3 = r.point3("p3");
        r.finish();
        make_plane(p1, p2, p3, policy);  // collinearity check
        const Point3 p4 = p1 + (p3 - p2);
        return single_result(Polygon3{{p1, p2, p3, p4}});
    }
    if (tool == "add_perpendicular_plane") {
        const Point3 p = r.point3("point");
        Vec3 n{};
        if (const Line3* l = std::get_if<Line3>(&r.value("axis")))
            n = l->p2 - l->p1;
        else
            throw ToolError(ErrorCode::type_mismatch, "'axis' must be a 3D vector", "axis");
        r.finish();
        return single_result(make_plane_point_normal(p, n, policy));
    }
    if (tool == "add_plane_bisector") {
        const Point3 p1 = r.point3("p1"), p2 = r.point3("p2");
        r.finish();
        if ((p2 - p1).norm() <= policy.abs_tol)
            throw ToolError(ErrorCode::degenerate_input, "bisector plane needs distinct points");
        const Point3 mid = p1 + (p2 - p1) * 0.5;
        return single_result(make_plane_point_normal(mid, p2 - p1, policy));
    }
    if (tool == "add_pyramid") {
        std::vector<Point3> base = r.point3_list("points", 3);
        const Point3 apex = r.point3("apex");
        r.finish();
        return single_result(make_pyramid(std::move(base), apex, policy));
    }
    if (tool == "add_prism") {
        std::vector<Point3> base = r.point3_list("points", 3);
        const Vec3 v = r.vector3("vector");
        r.finish();
        return single_result(make_prism(std::move(base), v, policy));
    }
    if (tool == "add_cone") {
        const Point3 center = r.point3("center");
        const double radius = r.scalar("radius");
        const Point3 apex = r.point3("apex");
        r.finish();
        return single_result(make_cone(center, radius, apex, policy));
    }
    if (tool == "add_cylinder") {
        const Point3 center = r.point3("center");
        const double radius = r.scalar("radius");
        const Point3 top = r.point3("top");
        r.finish();
        return single_result(make_cylinder(center, radius, top, policy));
    }
    if (tool == "add_sphere") {
        const Point3 center = r.point3("center");
        if (r.has("radius")) {
            const double radius = r.scalar("radius");
            r.finish();
            return single_result(make_sphere(center, radius));
        }
        if (r.has("point")) {
            const Point3 through = r.point3("point");
            r.finish();
            return single_result(make_sphere(center, distance3(center, through)));
        }
        throw ToolError(ErrorCode::type_mismatch, "add_sphere needs 'radius' or 'point'",
                        "radius");
    }
    if (tool == "add_tetrahedron") {
        const Point3 p1 = r.point3("p1"), p2 = r.point3("p2"), p3 = r.point3("p3");
        r.finish();
        return single_result(make_tetrahedron(p1, p2, p3, policy));
    }
    if (tool == "add_cube") {
        const Point3 p1 = r.point3("p1"), p2 = r.point3("p2"), p3 = r.point3("p3");
        r.finish();
        return single_result(make_cube(p1, p2, p3, policy));
    }
    if (tool == "add_cross_section") {
        const Plane3 plane = r.plane("plane");
        const Solid3 solid = r.solid("solid");
        r.finish();
        return single_result(cross_section(plane, solid, policy));
    }
    if (tool == "add_net" || tool == "add_surface_revolution") {
        throw ToolError(ErrorCode::unsupported_tool,
                        "'" + tool + "' is not supported by this engine");
    }
    if (tool == "add_text_3d") {
        const std::string text = r.str("text");
        const double x = r.scalar("x"), y = r.scalar("y"), z = r.scalar("z");
        r.finish();
        TextObj t;
        t.text = text;
        t.x = x;
        t.y = y;
        t.z = z;
        t.is_3d = true;
        return single_result(t);
    }

    (void)st;
    (void)args;
    throw ToolError(ErrorCode::unsupported_tool, "unknown tool '" + tool + "'");
}

}  // namespace geocanvas::detail
