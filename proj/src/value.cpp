#include "geocanvas/value.hpp"

#include <charconv>
#include <cmath>

namespace geocanvas {

std::string format_number(double v) {
    if (!std::isfinite(v)) return "undefined";
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

namespace {

const char* line_kind_name(LineKind k) {
    switch (k) {
        case LineKind::line: return "line";
        case LineKind::ray: return "ray";
        case LineKind::segment: return "segment";
        case LineKind::vector: return "vector";
    }
    return "line";
}

LineKind line_kind_from(const std::string& s) {
    if (s == "ray") return LineKind::ray;
    if (s == "segment") return LineKind::segment;
    if (s == "vector") return LineKind::vector;
    return LineKind::line;
}

const char* conic_kind_name(ConicKind k) {
    switch (k) {
        case ConicKind::ellipse: return "ellipse";
        case ConicKind::parabola: return "parabola";
        case ConicKind::hyperbola: return "hyperbola";
    }
    return "ellipse";
}

const char* arc_kind_name(ArcKind k) {
    switch (k) {
        case ArcKind::arc: return "arc";
        case ArcKind::sector: return "sector";
        case ArcKind::semicircle: return "semicircle";
    }
    return "arc";
}

const char* solid_kind_name(SolidKind k) {
    switch (k) {
        case SolidKind::pyramid: return "pyramid";
        case SolidKind::prism: return "prism";
        case SolidKind::cone: return "cone";
        case SolidKind::cylinder: return "cylinder";
        case SolidKind::sphere: return "sphere";
        case SolidKind::tetrahedron: return "tetrahedron";
        case SolidKind::cube: return "cube";
    }
    return "cube";
}

SolidKind solid_kind_from(const std::string& s) {
    if (s == "pyramid") return SolidKind::pyramid;
    if (s == "prism") return SolidKind::prism;
    if (s == "cone") return SolidKind::cone;
    if (s == "cylinder") return SolidKind::cylinder;
    if (s == "sphere") return SolidKind::sphere;
    if (s == "tetrahedron") return SolidKind::tetrahedron;
    return SolidKind::cube;
}

Json point2_json(Point2 p) { return Json::array({p.x, p.y}); }
Point2 point2_from(const Json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }
Json point3_json(Point3 p) { return Json::array({p.x, p.y, p.z}); }
Point3 point3_from(const Json& j) {
    return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

const char* cmp_name(Cmp c) {
    switch (c) {
        case Cmp::lt: return "<";
        case Cmp::le: return "<=";
        case Cmp::eq: return "=";
        case Cmp::ge: return ">=";
        case Cmp::gt: return ">";
    }
    return "=";
}

}  // namespace

std::string value_kind(const Value& v) {
    return std::visit(
        [](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Undefined>) return "undefined";
            if constexpr (std::is_same_v<T, double>) return "number";
            if constexpr (std::is_same_v<T, bool>) return "boolean";
            if constexpr (std::is_same_v<T, TextObj>) return "text";
            if constexpr (std::is_same_v<T, Point2>) return "point";
            if constexpr (std::is_same_v<T, Line2>) return line_kind_name(x.kind);
            if constexpr (std::is_same_v<T, Circle2>) return "circle";
            if constexpr (std::is_same_v<T, Conic2>) return conic_kind_name(x.kind);
            if constexpr (std::is_same_v<T, Arc2>) return arc_kind_name(x.kind);
            if constexpr (std::is_same_v<T, Polygon2>) return "polygon";
            if constexpr (std::is_same_v<T, FunctionGraph>) return "function";
            if constexpr (std::is_same_v<T, ParamCurve2>) return "curve";
            if constexpr (std::is_same_v<T, Region2>) return "region";
            if constexpr (std::is_same_v<T, Point3>) return "point3d";
            if constexpr (std::is_same_v<T, Line3>) return "vector3d";
            if constexpr (std::is_same_v<T, Plane3>) return "plane";
            if constexpr (std::is_same_v<T, Polygon3>) return "polygon3d";
            if constexpr (std::is_same_v<T, Solid3>) return solid_kind_name(x.kind);
            return "object";
        },
        v);
}

std::string value_brief(const Value& v) {
    return std::visit(
        [](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Undefined>) return "undefined";
            if constexpr (std::is_same_v<T, double>) return format_number(x);
            if constexpr (std::is_same_v<T, bool>) return x ? "true" : "false";
            if constexpr (std::is_same_v<T, TextObj>) return "\"" + x.text + "\"";
            if constexpr (std::is_same_v<T, Point2>)
                return "(" + format_number(x.x) + ", " + format_number(x.y) + ")";
            if constexpr (std::is_same_v<T, Line2>)
                return std::string(line_kind_name(x.kind)) + " (" + format_number(x.p1.x) + ", " +
                       format_number(x.p1.y) + ") to (" + format_number(x.p2.x) + ", " +
                       format_number(x.p2.y) + ")";
            if constexpr (std::is_same_v<T, Circle2>)
                return "circle center (" + format_number(x.center.x) + ", " +
                       format_number(x.center.y) + ") radius " + format_number(x.radius);
            if constexpr (std::is_same_v<T, Conic2>) return conic_kind_name(x.kind);
            if constexpr (std::is_same_v<T, Arc2>)
                return std::string(arc_kind_name(x.kind)) + " radius " +
                       format_number(x.circle.radius);
            if constexpr (std::is_same_v<T, Polygon2>)
                return "polygon with " + std::to_string(x.vertices.size()) + " vertices";
            if constexpr (std::is_same_v<T, FunctionGraph>) {
                std::string body = print_expr(x.body);
                if (x.deriv_order > 0)
                    return "derivative(order " + std::to_string(x.deriv_order) + ") of " + body;
                if (x.deriv_order < 0) return "antiderivative of " + body;
                return body;
            }
            if constexpr (std::is_same_v<T, ParamCurve2>)
                return "curve (" + print_expr(x.x_body) + ", " + print_expr(x.y_body) + ")";
            if constexpr (std::is_same_v<T, Region2>)
                return print_expr(x.relation.lhs) + " " + cmp_name(x.relation.cmp) + " " +
                       print_expr(x.relation.rhs);
            if constexpr (std::is_same_v<T, Point3>)
                return "(" + format_number(x.x) + ", " + format_number(x.y) + ", " +
                       format_number(x.z) + ")";
            if constexpr (std::is_same_v<T, Line3>)
                return "vector (" + format_number(x.p2.x - x.p1.x) + ", " +
                       format_number(x.p2.y - x.p1.y) + ", " + format_number(x.p2.z - x.p1.z) +
                       ")";
            if constexpr (std::is_same_v<T, Plane3>)
                return "plane through (" + format_number(x.point.x) + ", " +
                       format_number(x.point.y) + ", " + format_number(x.point.z) + ")";
            if constexpr (std::is_same_v<T, Polygon3>)
                return "3d polygon with " + std::to_string(x.vertices.size()) + " vertices";
            if constexpr (std::is_same_v<T, Solid3>) return solid_kind_name(x.kind);
            return "object";
        },
        v);
}

Json value_to_json(const Value& v) {
    Json j;
    std::visit(
        [&j](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Undefined>) {
                j["type"] = "undefined";
            } else if constexpr (std::is_same_v<T, double>) {
                j["type"] = "number";
                j["value"] = x;
            } else if constexpr (std::is_same_v<T, bool>) {
                j["type"] = "boolean";
                j["value"] = x;
            } else if constexpr (std::is_same_v<T, TextObj>) {
                j["type"] = "text";
                j["text"] = x.text;
                j["at"] = x.is_3d ? Json::array({x.x, x.y, x.z}) : Json::array({x.x, x.y});
            } else if constexpr (std::is_same_v<T, Point2>) {
                j["type"] = "point";
                j["at"] = point2_json(x);
            } else if constexpr (std::is_same_v<T, Line2>) {
                j["type"] = line_kind_name(x.kind);
                j["p1"] = point2_json(x.p1);
                j["p2"] = point2_json(x.p2);
            } else if constexpr (std::is_same_v<T, Circle2>) {
                j["type"] = "circle";
                j["center"] = point2_json(x.center);
                j["radius"] = x.radius;
            } else if constexpr (std::is_same_v<T, Conic2>) {
                j["type"] = conic_kind_name(x.kind);
                if (x.kind == ConicKind::parabola) {
                    j["focus"] = point2_json(x.focus1);
                    j["directrix_p1"] = point2_json(x.directrix.p1);
                    j["directrix_p2"] = point2_json(x.directrix.p2);
                } else {
                    j["focus1"] = point2_json(x.focus1);
                    j["focus2"] = point2_json(x.focus2);
                    j["point_on"] = point2_json(x.point_on);
                }
            } else if constexpr (std::is_same_v<T, Arc2>) {
                j["type"] = arc_kind_name(x.kind);
                j["center"] = point2_json(x.circle.center);
                j["radius"] = x.circle.radius;
                j["start_angle"] = x.start_angle;
                j["end_angle"] = x.end_angle;
            } else if constexpr (std::is_same_v<T, Polygon2>) {
                j["type"] = "polygon";
                Json verts = Json::array();
                for (const Point2& p : x.vertices) verts.push_back(point2_json(p));
                j["vertices"] = verts;
            } else if constexpr (std::is_same_v<T, FunctionGraph>) {
                j["type"] = "function";
                j["var"] = x.var;
                j["body"] = print_expr(x.body);
                j["deriv_order"] = x.deriv_order;
            } else if constexpr (std::is_same_v<T, ParamCurve2>) {
                j["type"] = "curve";
                j["var"] = x.var;
                j["x_body"] = print_expr(x.x_body);
                j["y_body"] = print_expr(x.y_body);
                j["t0"] = x.t0;
                j["t1"] = x.t1;
            } else if constexpr (std::is_same_v<T, Region2>) {
                j["type"] = "region";
                j["lhs"] = print_expr(x.relation.lhs);
                j["cmp"] = cmp_name(x.relation.cmp);
                j["rhs"] = print_expr(x.relation.rhs);
            } else if constexpr (std::is_same_v<T, Point3>) {
                j["type"] = "point3d";
                j["at"] = point3_json(x);
            } else if constexpr (std::is_same_v<T, Line3>) {
                j["type"] = "vector3d";
                j["p1"] = point3_json(x.p1);
                j["p2"] = point3_json(x.p2);
            } else if constexpr (std::is_same_v<T, Plane3>) {
                j["type"] = "plane";
                j["point"] = point3_json(x.point);
                j["normal"] = Json::array({x.normal.x, x.normal.y, x.normal.z});
            } else if constexpr (std::is_same_v<T, Polygon3>) {
                j["type"] = "polygon3d";
                Json verts = Json::array();
                for (const Point3& p : x.vertices) verts.push_back(point3_json(p));
                j["vertices"] = verts;
            } else if constexpr (std::is_same_v<T, Solid3>) {
                j["type"] = solid_kind_name(x.kind);
                Json base = Json::array();
                for (const Point3& p : x.base) base.push_back(point3_json(p));
                j["base"] = base;
                j["apex"] = point3_json(x.apex);
                j["axis"] = Json::array({x.axis.x, x.axis.y, x.axis.z});
                j["center"] = point3_json(x.center);
                j["radius"] = x.radius;
            }
        },
        v);
    return j;
}

Value value_from_json(const Json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "undefined") return Undefined{};
    if (type == "number") return j.at("value").get<double>();
    if (type == "boolean") return j.at("value").get<bool>();
    if (type == "text") {
        TextObj t;
        t.text = j.at("text").get<std::string>();
        const Json& at = j.at("at");
        t.x = at.at(0).get<double>();
        t.y = at.at(1).get<double>();
        if (at.size() > 2) {
            t.z = at.at(2).get<double>();
            t.is_3d = true;
        }
        return t;
    }
    if (type == "point") return point2_from(j.at("at"));
    if (type == "line" || type == "ray" || type == "segment" || type == "vector")
        return Line2{line_kind_from(type), point2_from(j.at("p1")), point2_from(j.at("p2"))};
    if (type == "circle")
        return Circle2{point2_from(j.at("center")), j.at("radius").get<double>()};
    if (type == "ellipse")
        return make_ellipse(point2_from(j.at("focus1")), point2_from(j.at("focus2")),
                            point2_from(j.at("point_on")));
    if (type == "hyperbola")
        return make_hyperbola(point2_from(j.at("focus1")), point2_from(j.at("focus2")),
                              point2_from(j.at("point_on")));
    if (type == "parabola")
        return make_parabola(point2_from(j.at("focus")),
                             Line2{LineKind::line, point2_from(j.at("directrix_p1")),
                                   point2_from(j.at("directrix_p2"))});
    if (type == "arc" || type == "sector" || type == "semicircle") {
        Arc2 a;
        a.kind = type == "sector" ? ArcKind::sector
                                  : (type == "semicircle" ? ArcKind::semicircle : ArcKind::arc);
        a.circle = Circle2{point2_from(j.at("center")), j.at("radius").get<double>()};
        a.start_angle = j.at("start_angle").get<double>();
        a.end_angle = j.at("end_angle").get<double>();
        return a;
    }
    if (type == "polygon") {
        Polygon2 p;
        for (const Json& v : j.at("vertices")) p.vertices.push_back(point2_from(v));
        return p;
    }
    if (type == "function") {
        FunctionGraph f;
        f.var = j.at("var").get<std::string>();
        f.body = parse_expr(j.at("body").get<std::string>());
        f.deriv_order = j.at("deriv_order").get<int>();
        return f;
    }
    if (type == "curve") {
        ParamCurve2 c;
        c.var = j.at("var").get<std::string>();
        c.x_body = parse_expr(j.at("x_body").get<std::string>());
        c.y_body = parse_expr(j.at("y_body").get<std::string>());
        c.t0 = j.at("t0").get<double>();
        c.t1 = j.at("t1").get<double>();
        return c;
    }
    if (type == "region") {
        Region2 r;
        r.relation = parse_relation(j.at("lhs").get<std::string>() + " " +
                                    j.at("cmp").get<std::string>() + " " +
                                    j.at("rhs").get<std::string>());
        return r;
    }
    if (type == "point3d") return point3_from(j.at("at"));
    if (type == "vector3d") return Line3{point3_from(j.at("p1")), point3_from(j.at("p2"))};
    if (type == "plane") {
        const Json& n = j.at("normal");
        return Plane3{point3_from(j.at("point")),
                      Vec3{n.at(0).get<double>(), n.at(1).get<double>(), n.at(2).get<double>()}};
    }
    if (type == "polygon3d") {
        Polygon3 p;
        for (const Json& v : j.at("vertices")) p.vertices.push_back(point3_from(v));
        return p;
    }
    // solids: rebuild from defining data so face/vertex caches are restored
    const SolidKind kind = solid_kind_from(type);
    std::vector<Point3> base;
    for (const Json& v : j.at("base")) base.push_back(point3_from(v));
    const Point3 apex = point3_from(j.at("apex"));
    const Json& ax = j.at("axis");
    const Vec3 axis{ax.at(0).get<double>(), ax.at(1).get<double>(), ax.at(2).get<double>()};
    const Point3 center = point3_from(j.at("center"));
    const double radius = j.at("radius").get<double>();
    switch (kind) {
        case SolidKind::pyramid: return make_pyramid(base, apex);
        case SolidKind::prism: return make_prism(base, axis);
        case SolidKind::cone: return make_cone(center, radius, apex);
        case SolidKind::cylinder: return make_cylinder(center, radius, center + axis);
        case SolidKind::sphere: return make_sphere(center, radius);
        case SolidKind::tetrahedron: return make_tetrahedron(base.at(0), base.at(1), base.at(2));
        case SolidKind::cube: return make_cube(base.at(0), base.at(1), base.at(2));
    }
    return Undefined{};
}

namespace {

Point2 tr(const Transform2& t, Point2 p) { return t.apply(p); }

}  // namespace

Value apply_transform2(const Value& v, const Transform2& t) {
    const double scale = std::sqrt(std::fabs(t.det()));
    return std::visit(
        [&](const auto& x) -> Value {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Undefined>) {
                return x;  // undefined propagates untouched
            } else if constexpr (std::is_same_v<T, Point2>) {
                return tr(t, x);
            } else if constexpr (std::is_same_v<T, Line2>) {
                return Line2{x.kind, tr(t, x.p1), tr(t, x.p2)};
            } else if constexpr (std::is_same_v<T, Circle2>) {
                return Circle2{tr(t, x.center), x.radius * scale};
            } else if constexpr (std::is_same_v<T, Conic2>) {
                if (x.kind == ConicKind::parabola)
                    return make_parabola(tr(t, x.focus1),
                                         Line2{LineKind::line, tr(t, x.directrix.p1),
                                               tr(t, x.directrix.p2)});
                if (x.kind == ConicKind::ellipse)
                    return make_ellipse(tr(t, x.focus1), tr(t, x.focus2), tr(t, x.point_on));
                return make_hyperbola(tr(t, x.focus1), tr(t, x.focus2), tr(t, x.point_on));
            } else if constexpr (std::is_same_v<T, Arc2>) {
                Arc2 out = x;
                out.circle = Circle2{tr(t, x.circle.center), x.circle.radius * scale};
                const Point2 s = tr(t, x.point_at(x.start_angle));
                const Point2 e = tr(t, x.point_at(x.end_angle));
                const Point2 c = out.circle.center;
                double sa = std::atan2(s.y - c.y, s.x - c.x);
                double ea = std::atan2(e.y - c.y, e.x - c.x);
                if (t.orientation_reversing()) std::swap(sa, ea);
                out.start_angle = sa;
                out.end_angle = ea;
                return out;
            } else if constexpr (std::is_same_v<T, Polygon2>) {
                Polygon2 out;
                out.vertices.reserve(x.vertices.size());
                for (const Point2& p : x.vertices) out.vertices.push_back(tr(t, p));
                return out;
            } else if constexpr (std::is_same_v<T, TextObj>) {
                if (x.is_3d) throw ToolError(ErrorCode::type_mismatch,
                                             "cannot apply a planar transform to a 3D object");
                TextObj out = x;
                const Point2 p = tr(t, Point2{x.x, x.y});
                out.x = p.x;
                out.y = p.y;
                return out;
            } else {
                throw ToolError(ErrorCode::type_mismatch,
                                "object kind does not support planar transforms");
            }
        },
        v);
}

}  // namespace geocanvas
