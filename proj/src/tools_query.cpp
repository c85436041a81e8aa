#include "tool_args.hpp"

namespace geocanvas::detail {

namespace {

// Distance by object pair; symmetric by retry with swapped operands.
double distance_pair(const Value& a, const Value& b, const TolerancePolicy& policy, bool retry);

double distance_pair(const Value& a, const Value& b, const TolerancePolicy& policy, bool retry) {
    if (const Point2* p = std::get_if<Point2>(&a)) {
        if (const Point2* q = std::get_if<Point2>(&b)) return distance(*p, *q);
        if (const Line2* l = std::get_if<Line2>(&b)) return point_line_distance(*p, *l);
        if (const Circle2* c = std::get_if<Circle2>(&b))
            return std::fabs(distance(*p, c->center) - c->radius);
        if (const Arc2* arc = std::get_if<Arc2>(&b))
            return std::fabs(distance(*p, arc->circle.center) - arc->circle.radius);
        if (const Polygon2* poly = std::get_if<Polygon2>(&b)) {
            double best = std::numeric_limits<double>::infinity();
            const auto& vs = poly->vertices;
            for (std::size_t i = 0; i < vs.size(); ++i)
                best = std::fmin(best, point_line_distance(
                                           *p, Line2{LineKind::segment, vs[i],
                                                     vs[(i + 1) % vs.size()]}));
            return best;
        }
    }
    if (const Line2* l1 = std::get_if<Line2>(&a)) {
        if (const Line2* l2 = std::get_if<Line2>(&b)) {
            try {
                CurveRef ra, rb;
                ra.line = l1;
                rb.line = l2;
                if (!intersect(ra, rb, policy).empty()) return 0.0;
            } catch (const ToolError&) {
                return 0.0;  // coincident supports
            }
            double best = std::fmin(point_line_distance(l1->p1, *l2),
                                    point_line_distance(l1->p2, *l2));
            best = std::fmin(best, std::fmin(point_line_distance(l2->p1, *l1),
                                             point_line_distance(l2->p2, *l1)));
            return best;
        }
    }
    if (const Circle2* c1 = std::get_if<Circle2>(&a)) {
        if (const Circle2* c2 = std::get_if<Circle2>(&b)) {
            const double d = distance(c1->center, c2->center);
            if (d >= c1->radius + c2->radius) return d - c1->radius - c2->radius;
            const double inner = std::fabs(c1->radius - c2->radius) - d;
            return inner > 0.0 ? inner : 0.0;
        }
    }
    if (const Point3* p = std::get_if<Point3>(&a)) {
        if (const Point3* q = std::get_if<Point3>(&b)) return distance3(*p, *q);
        if (const Plane3* pl = std::get_if<Plane3>(&b)) return point_plane_distance(*p, *pl);
        if (const Line3* l = std::get_if<Line3>(&b)) return point_line3_distance(*p, *l);
    }
    if (const Plane3* pa = std::get_if<Plane3>(&a)) {
        if (const Plane3* pb = std::get_if<Plane3>(&b))
            return plane_plane_distance(*pa, *pb, policy);
    }
    if (const Line3* la = std::get_if<Line3>(&a)) {
        if (const Line3* lb = std::get_if<Line3>(&b)) return line3_line3_distance(*la, *lb);
    }
    if (retry) return distance_pair(b, a, policy, false);
    throw ToolError(ErrorCode::type_mismatch, "distance is not defined for this pair of objects");
}

bool points_equal(Point2 p, Point2 q, const TolerancePolicy& policy) {
    return policy.pass(p.x, q.x) && policy.pass(p.y, q.y);
}

bool lines_same(const Line2& a, const Line2& b, const TolerancePolicy& policy) {
    if (a.kind != b.kind) return false;
    if (a.kind == LineKind::line)
        return are_parallel(a, b, policy) &&
               policy.residual_pass(point_line_distance(b.p1, a), std::fmax(1.0, a.length()));
    // bounded kinds compare defining points (segments are direction-free)
    if (a.kind == LineKind::segment)
        return (points_equal(a.p1, b.p1, policy) && points_equal(a.p2, b.p2, policy)) ||
               (points_equal(a.p1, b.p2, policy) && points_equal(a.p2, b.p1, policy));
    return points_equal(a.p1, b.p1, policy) && points_equal(a.p2, b.p2, policy);
}

std::vector<double> sorted_side_lengths(const Polygon2& p) {
    std::vector<double> out;
    const auto& vs = p.vertices;
    for (std::size_t i = 0; i < vs.size(); ++i)
        out.push_back(distance(vs[i], vs[(i + 1) % vs.size()]));
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<double> sorted_interior_angles(const Polygon2& p, const TolerancePolicy& policy) {
    std::vector<double> out;
    const auto& vs = p.vertices;
    const std::size_t n = vs.size();
    // consistent orientation: walk CCW
    double twice = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& a = vs[i];
        const Point2& b = vs[(i + 1) % n];
        twice += a.x * b.y - b.x * a.y;
    }
    const bool ccw = twice >= 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 prev = vs[(i + n - 1) % n], cur = vs[i], next = vs[(i + 1) % n];
        const double ang = ccw ? angle_measure(next, cur, prev, policy)
                               : angle_measure(prev, cur, next, policy);
        out.push_back(ang);
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool multisets_match(const std::vector<double>& a, const std::vector<double>& b,
                     const TolerancePolicy& policy) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!policy.pass(a[i], b[i])) return false;
    return true;
}

Json roots_json(const std::vector<double>& roots) {
    Json arr = Json::array();
    for (double x : roots) arr.push_back(x);
    return arr;
}

std::string pick_solve_var(const Relation& rel, const std::string& requested) {
    if (!requested.empty()) return requested;
    std::vector<std::string> vars = free_variables(rel.lhs);
    for (const std::string& v : free_variables(rel.rhs))
        if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
    if (vars.size() == 1) return vars.front();
    return "x";
}

Relation parse_equation(const std::string& text) {
    Relation rel;
    try {
        rel = parse_relation(text);
    } catch (const ParseError& e) {
        throw ToolError(ErrorCode::type_mismatch, std::string("bad equation: ") + e.what(),
                        "equation");
    }
    if (rel.cmp != Cmp::eq)
        throw ToolError(ErrorCode::type_mismatch, "an equation needs '='", "equation");
    return rel;
}

}  // namespace

double object_distance(const Value& a, const Value& b, const TolerancePolicy& policy) {
    return distance_pair(a, b, policy, /*retry=*/true);
}

bool objects_equal(const CanvasObject& a, const CanvasObject& b, const TolerancePolicy& policy) {
    if (a.is_list || b.is_list) {
        if (a.values.size() != b.values.size() || !a.is_list || !b.is_list) return false;
    }
    if (a.values.size() != b.values.size()) return false;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        const Value& va = a.values[i];
        const Value& vb = b.values[i];
        if (va.index() != vb.index()) return false;
        bool same = false;
        if (const double* x = std::get_if<double>(&va))
            same = policy.pass(*x, std::get<double>(vb));
        else if (const bool* f = std::get_if<bool>(&va))
            same = *f == std::get<bool>(vb);
        else if (const Point2* p = std::get_if<Point2>(&va))
            same = points_equal(*p, std::get<Point2>(vb), policy);
        else if (const Line2* l = std::get_if<Line2>(&va))
            same = lines_same(*l, std::get<Line2>(vb), policy);
        else if (const Circle2* c = std::get_if<Circle2>(&va)) {
            const Circle2& d = std::get<Circle2>(vb);
            same = points_equal(c->center, d.center, policy) && policy.pass(c->radius, d.radius);
        } else if (const Point3* p3 = std::get_if<Point3>(&va)) {
            const Point3& q = std::get<Point3>(vb);
            same = policy.pass(p3->x, q.x) && policy.pass(p3->y, q.y) && policy.pass(p3->z, q.z);
        } else if (const Polygon2* poly = std::get_if<Polygon2>(&va)) {
            const Polygon2& other = std::get<Polygon2>(vb);
            if (poly->vertices.size() == other.vertices.size()) {
                // same vertex cycle, allowing shift and direction flip
                const std::size_t n = poly->vertices.size();
                for (std::size_t shift = 0; shift < n && !same; ++shift) {
                    bool fwd = true, rev = true;
                    for (std::size_t i = 0; i < n; ++i) {
                        if (!points_equal(poly->vertices[i],
                                          other.vertices[(i + shift) % n], policy))
                            fwd = false;
                        if (!points_equal(poly->vertices[i],
                                          other.vertices[(shift + n - i) % n], policy))
                            rev = false;
                    }
                    same = fwd || rev;
                }
            }
        } else {
            throw ToolError(ErrorCode::type_mismatch,
                            "equality is not defined for objects of kind '" + a.kind + "'");
        }
        if (!same) return false;
    }
    return true;
}

bool objects_congruent(const CanvasObject& a, const CanvasObject& b,
                       const TolerancePolicy& policy) {
    if (a.is_list || b.is_list)
        throw ToolError(ErrorCode::type_mismatch, "congruence needs single objects");
    const Value& va = a.single();
    const Value& vb = b.single();
    if (const Line2* l = std::get_if<Line2>(&va)) {
        const Line2* m = std::get_if<Line2>(&vb);
        if (!m) throw ToolError(ErrorCode::type_mismatch, "cannot compare these kinds");
        const bool bounded_a =
            l->kind == LineKind::segment || l->kind == LineKind::vector;
        const bool bounded_b =
            m->kind == LineKind::segment || m->kind == LineKind::vector;
        if (bounded_a != bounded_b) return false;
        if (!bounded_a) return true;  // unbounded lines and rays are congruent
        return policy.pass(l->length(), m->length());
    }
    if (const Circle2* c = std::get_if<Circle2>(&va)) {
        const Circle2* d = std::get_if<Circle2>(&vb);
        if (!d) throw ToolError(ErrorCode::type_mismatch, "cannot compare these kinds");
        return policy.pass(c->radius, d->radius);
    }
    if (const Arc2* x = std::get_if<Arc2>(&va)) {
        const Arc2* y = std::get_if<Arc2>(&vb);
        if (!y) throw ToolError(ErrorCode::type_mismatch, "cannot compare these kinds");
        return policy.pass(x->circle.radius, y->circle.radius) &&
               policy.pass(x->span(), y->span());
    }
    if (const Polygon2* p = std::get_if<Polygon2>(&va)) {
        const Polygon2* q = std::get_if<Polygon2>(&vb);
        if (!q) throw ToolError(ErrorCode::type_mismatch, "cannot compare these kinds");
        if (p->vertices.size() != q->vertices.size()) return false;
        return multisets_match(sorted_side_lengths(*p), sorted_side_lengths(*q), policy) &&
               multisets_match(sorted_interior_angles(*p, policy),
                               sorted_interior_angles(*q, policy), policy);
    }
    if (const Conic2* c = std::get_if<Conic2>(&va)) {
        const Conic2* d = std::get_if<Conic2>(&vb);
        if (!d || c->kind != d->kind)
            throw ToolError(ErrorCode::type_mismatch, "cannot compare these kinds");
        if (c->kind == ConicKind::parabola)
            return policy.pass(point_line_distance(c->focus1, c->directrix),
                               point_line_distance(d->focus1, d->directrix));
        const double a1 = 0.5 * (distance(c->point_on, c->focus1) + distance(c->point_on, c->focus2));
        const double a2 = 0.5 * (distance(d->point_on, d->focus1) + distance(d->point_on, d->focus2));
        return policy.pass(a1, a2) &&
               policy.pass(distance(c->focus1, c->focus2), distance(d->focus1, d->focus2));
    }
    throw ToolError(ErrorCode::type_mismatch,
                    "congruence is not defined for objects of kind '" + a.kind + "'");
}

QueryResult run_query(const CanvasState& st, const std::string& tool, ArgReader& r,
                      const TolerancePolicy& policy) {
    QueryResult q;

    // object-existence check never fails on missing names
    if (tool == "query_is_defined") {
        const std::string name = r.str("obj");
        const bool exists = st.has(name);
        q.value = exists && st.at(name).is_defined();
        return q;
    }
    if (tool == "query_dependents") {
        const std::string name = r.str("obj");
        std::vector<std::string> closure = descendants_closure(st, name);
        Json arr = Json::array();
        for (const std::string& n : closure)
            if (n != name) arr.push_back(n);
        q.value = arr;
        return q;
    }

    if (tool == "query_angle") {
        const Point2 a = r.point("a"), b = r.point("b"), c = r.point("c");
        r.finish();
        q.value = angle_measure(a, b, c, policy);
        q.units = "degrees";
        return q;
    }
    if (tool == "query_distance") {
        const Value& a = r.value("obj1");
        const Value& b = r.value("obj2");
        r.finish();
        q.value = object_distance(a, b, policy);
        return q;
    }
    if (tool == "query_length") {
        const Value& v = r.value("obj");
        r.finish();
        q.value = measure_length(v);
        return q;
    }
    if (tool == "query_perimeter") {
        const Value& v = r.value("obj");
        r.finish();
        q.value = measure_perimeter(v);
        return q;
    }
    if (tool == "query_area") {
        const Value& v = r.value("obj");
        r.finish();
        q.value = measure_area(v);
        return q;
    }
    if (tool == "query_slope") {
        const Line2 l = r.linelike("line");
        r.finish();
        Scalar s = line_slope(l);
        if (s.is_defined())
            q.value = s.value();
        else {
            q.value = nullptr;
            q.extra["undefined"] = true;
        }
        return q;
    }
    if (tool == "query_radius") {
        const Value& v = r.value("obj");
        r.finish();
        if (const Circle2* c = std::get_if<Circle2>(&v))
            q.value = c->radius;
        else if (const Arc2* a = std::get_if<Arc2>(&v))
            q.value = a->circle.radius;
        else
            throw ToolError(ErrorCode::type_mismatch, "radius applies to circles and arcs",
                            "obj");
        return q;
    }
    if (tool == "query_x_coord" || tool == "query_y_coord") {
        const Point2 p = r.point("point");
        r.finish();
        q.value = tool == "query_x_coord" ? p.x : p.y;
        return q;
    }

    if (tool == "query_are_parallel" || tool == "query_are_perpendicular") {
        const Line2 l1 = r.linelike("line1");
        const Line2 l2 = r.linelike("line2");
        r.finish();
        q.value = tool == "query_are_parallel" ? are_parallel(l1, l2, policy)
                                               : are_perpendicular(l1, l2, policy);
        return q;
    }
    if (tool == "query_is_tangent") {
        const Line2 l = r.linelike("line");
        CurveRef conic = r.conic_ref("conic");
        r.finish();
        q.value = is_tangent_line(l, conic, policy);
        return q;
    }
    if (tool == "query_is_in_region") {
        const Point2 p = r.point("point");
        const Region2 reg = r.region("region");
        r.finish();
        q.value = in_region(reg, p, policy);
        return q;
    }
    if (tool == "query_are_equal") {
        const CanvasObject& a = r.ref("obj1");
        const CanvasObject& b = r.ref("obj2");
        r.finish();
        q.value = objects_equal(a, b, policy);
        return q;
    }
    if (tool == "query_are_collinear") {
        const Point2 a = r.point("p1"), b = r.point("p2"), c = r.point("p3");
        r.finish();
        q.value = are_collinear(a, b, c, policy);
        return q;
    }
    if (tool == "query_are_concyclic") {
        const Point2 a = r.point("p1"), b = r.point("p2"), c = r.point("p3"),
                     d = r.point("p4");
        r.finish();
        q.value = are_concyclic(a, b, c, d, policy);
        return q;
    }
    if (tool == "query_are_congruent") {
        const CanvasObject& a = r.ref("obj1");
        const CanvasObject& b = r.ref("obj2");
        r.finish();
        q.value = objects_congruent(a, b, policy);
        return q;
    }

    if (tool == "query_solve") {
        const std::string eq = r.str("equation");
        const std::string var = pick_solve_var(parse_equation(eq), r.str_or("var", ""));
        r.finish();
        const Relation rel = parse_equation(eq);
        // numeric fallback over a fixed default interval; flagged in the
        // observation because true symbolic solving is out of scope
        q.value = roots_json(nsolve(rel.lhs, rel.rhs, var, -1e3, 1e3, 100000, policy));
        q.extra["numeric_fallback"] = true;
        q.extra["var"] = var;
        return q;
    }
    if (tool == "query_nsolve") {
        const std::string eq = r.str("equation");
        const double lo = r.scalar_or("lo", -1e3), hi = r.scalar_or("hi", 1e3);
        const int grid = r.count_or("grid", 4096);
        const Relation rel = parse_equation(eq);
        const std::string var = pick_solve_var(rel, r.str_or("var", ""));
        r.finish();
        if (!(lo < hi)) throw ToolError(ErrorCode::precondition_failed, "need lo < hi", "hi");
        q.value = roots_json(nsolve(rel.lhs, rel.rhs, var, lo, hi, grid, policy));
        q.extra["var"] = var;
        return q;
    }
    if (tool == "query_definite_integral") {
        const FunctionGraph f = r.function("function");
        const double a = r.scalar("a"), b = r.scalar("b");
        r.finish();
        Fn1 fn = [f](double x) { return f.eval(x); };
        q.value = quadrature(fn, a, b);
        return q;
    }
    if (tool == "query_function_max" || tool == "query_function_min") {
        const FunctionGraph f = r.function("function");
        const double lo = r.scalar("lo"), hi = r.scalar("hi");
        r.finish();
        if (!(lo < hi)) throw ToolError(ErrorCode::precondition_failed, "need lo < hi", "hi");
        Fn1 fn = [f](double x) { return f.eval(x); };
        const Extremum e = extremum_on(fn, lo, hi, tool == "query_function_max");
        q.value = e.value;
        q.extra["at"] = e.x;
        return q;
    }

    if (tool == "query_volume") {
        const Solid3 s = r.solid("solid");
        r.finish();
        q.value = volume(s);
        return q;
    }
    if (tool == "query_surface_area") {
        const Solid3 s = r.solid("solid");
        r.finish();
        q.value = surface_area(s);
        return q;
    }
    if (tool == "query_coords3d") {
        const Point3 p = r.point3("point");
        r.finish();
        q.value = Json::array({p.x, p.y, p.z});
        return q;
    }

    throw ToolError(ErrorCode::unsupported_tool, "unknown tool '" + tool + "'");
}

}  // namespace geocanvas::detail
