#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "geocanvas/calculus.hpp"
#include "geocanvas/canvas.hpp"

namespace geocanvas::detail {

/// Thrown after argument reading when a referenced parent is undefined; the
/// construction wrapper turns it into an undefined-valued object, queries
/// into a null observation. Never escapes the dispatch layer.
struct UndefinedInputSignal {};

inline bool valid_identifier(const std::string& s) {
    if (s.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return true;
}

struct ToolResult {
    std::vector<Value> values;
    bool is_list = false;
    std::string kind;  // optional override ("angle", "list<line>")
    Json extra = Json::object();
};

inline ToolResult single_result(Value v) {
    ToolResult r;
    r.values.push_back(std::move(v));
    return r;
}

/// One result stays a plain object; several become a list-valued object
/// addressed by the single given name.
inline ToolResult list_result(std::vector<Value> vs, const std::string& element_kind) {
    ToolResult r;
    r.values = std::move(vs);
    if (r.values.size() == 1) return r;
    r.is_list = true;
    r.kind = r.values.empty() ? "list" : "list<" + element_kind + ">";
    return r;
}

/// Typed access to action arguments. Object references are recorded (for DAG
/// edges and rename bookkeeping); reads of undefined parents poison the call,
/// and finish() must run before any kernel computation.
class ArgReader {
public:
    ArgReader(const CanvasState& st, const Json& args) : st_(st), args_(args) {}

    bool has(const std::string& key) const {
        return args_.contains(key) && !args_.at(key).is_null();
    }

    std::string out_name() const {
        if (!args_.contains("name") || !args_.at("name").is_string())
            throw ToolError(ErrorCode::type_mismatch, "missing required 'name'", "name");
        const std::string name = args_.at("name").get<std::string>();
        if (!valid_identifier(name))
            throw ToolError(ErrorCode::type_mismatch, "'" + name + "' is not a valid name",
                            "name");
        return name;
    }

    const CanvasObject& ref(const std::string& key) { return ref_by_name(key, str(key)); }

    /// Reference that must hold exactly one value (lists rejected); reading
    /// an undefined object poisons the call until finish().
    const CanvasObject& single_object(const std::string& key) { return single(key); }

    const Value& value(const std::string& key) {
        const CanvasObject& o = single(key);
        static const Value undefined_value{Undefined{}};
        return o.values.empty() ? undefined_value : o.single();
    }

    std::vector<const CanvasObject*> ref_list(const std::string& key, std::size_t min_count) {
        const Json& j = get(key);
        if (!j.is_array())
            throw ToolError(ErrorCode::type_mismatch, "'" + key + "' must be a list of names",
                            key);
        std::vector<const CanvasObject*> out;
        for (const Json& item : j) {
            if (!item.is_string())
                throw ToolError(ErrorCode::type_mismatch, "'" + key + "' must contain names", key);
            out.push_back(&ref_by_name(key, item.get<std::string>()));
        }
        if (out.size() < min_count)
            throw ToolError(ErrorCode::precondition_failed,
                            "'" + key + "' needs at least " + std::to_string(min_count) +
                                " entries",
                            key);
        return out;
    }

    double scalar(const std::string& key) {
        const Json& j = get(key);
        if (j.is_number()) return j.get<double>();
        if (j.is_string()) return scalar_from_string(key, j.get<std::string>());
        throw ToolError(ErrorCode::type_mismatch, "'" + key + "' must be a number", key);
    }

    double scalar_or(const std::string& key, double fallback) {
        return has(key) ? scalar(key) : fallback;
    }

    int count(const std::string& key) {
        const Json& j = get(key);
        if (!j.is_number_integer() || j.get<long long>() < 1)
            throw ToolError(ErrorCode::type_mismatch, "'" + key + "' must be a positive integer",
                            key);
        return static_cast<int>(j.get<long long>());
    }

    int count_or(const std::string& key, int fallback) {
        return has(key) ? count(key) : fallback;
    }

    int code(const std::string& key) {
        const Json& j = get(key);
        if (!j.is_number_integer())
            throw ToolError(ErrorCode::type_mismatch, "'" + key + "' must be an integer code",
                            key);
        return static_cast<int>(j.get<long long>());
    }

    bool flag(const std::string& key) {
        const Json& j = get(key);
        if (!j.is_boolean())
            throw ToolError(ErrorCode::type_mismatch, "'" + key + "' must be a boolean", key);
        return j.get<bool>();
    }

    bool flag_or(const std::string& key, bool fallback) {
        return has(key) ? flag(key) : fallback;
    }

    std::string str(const std::string& key) {
        const Json& j = get(key);
        if (!j.is_string())
            throw ToolError(ErrorCode::type_mismatch, "'" + key + "' must be a string", key);
        return j.get<std::string>();
    }

    std::string str_or(const std::string& key, const std::string& fallback) {
        return has(key) ? str(key) : fallback;
    }

    // typed extractors -------------------------------------------------------

    Point2 point(const std::string& key) {
        const CanvasObject& o = single(key);
        if (poisoned(o)) return Point2{};
        if (const Point2* p = std::get_if<Point2>(&o.single())) return *p;
        throw type_error(key, o, "a point");
    }

    Point3 point3(const std::string& key) {
        const CanvasObject& o = single(key);
        if (poisoned(o)) return Point3{};
        if (const Point3* p = std::get_if<Point3>(&o.single())) return *p;
        throw type_error(key, o, "a 3D point");
    }

    Line2 linelike(const std::string& key) {
        const CanvasObject& o = single(key);
        if (poisoned(o)) return Line2{LineKind::line, Point2{0.0, 0.0}, Point2{1.0, 0.0}};
        if (const Line2* l = std::get_if<Line2>(&o.single())) return *l;
        throw type_error(key, o, "a line, segment or ray");
    }

    CurveRef curve(const std::string& key) {
        const CanvasObject& o = single(key);
        CurveRef c;
        if (poisoned(o)) {
            c.line = &dummy_line();
            return c;
        }
        const Value& v = o.single();
        if ((c.line = std::get_if<Line2>(&v))) return c;
        if ((c.circle = std::get_if<Circle2>(&v))) return c;
        if ((c.conic = std::get_if<Conic2>(&v))) return c;
        if ((c.arc = std::get_if<Arc2>(&v))) return c;
        if ((c.graph = std::get_if<FunctionGraph>(&v))) return c;
        throw type_error(key, o, "a line, circle, conic or function (NOT a point or number)");
    }

    CurveRef conic_ref(const std::string& key) {
        const CanvasObject& o = single(key);
        CurveRef c;
        if (poisoned(o)) {
            c.circle = &dummy_circle();
            return c;
        }
        const Value& v = o.single();
        if ((c.circle = std::get_if<Circle2>(&v))) return c;
        if ((c.conic = std::get_if<Conic2>(&v))) return c;
        if ((c.arc = std::get_if<Arc2>(&v))) return c;
        throw type_error(key, o, "a circle or conic");
    }

    FunctionGraph function(const std::string& key) {
        const CanvasObject& o = single(key);
        if (poisoned(o)) {
            FunctionGraph f;
            f.body = Expr::make_number(0.0);
            return f;
        }
        if (const FunctionGraph* f = std::get_if<FunctionGraph>(&o.single())) return *f;
        throw type_error(key, o, "a function");
    }

    Polygon2 polygon(const std::string& key) {
        const CanvasObject& o = single(key);
        if (poisoned(o))
            return Polygon2{{Point2{0.0, 0.0}, Point2{1.0, 0.0}, Point2{0.0, 1.0}}};
        if (const Polygon2* p = std::get_if<Polygon2>(&o.single())) return *p;
        throw type_error(key, o, "a polygon");
    }

    Region2 region(const std::string& key) {
        const CanvasObject& o = single(key);
        if (poisoned(o))
            return Region2{Relation{Expr::make_number(0.0), Cmp::le, Expr::make_number(1.0)}};
        if (const Region2* r = std::get_if<Region2>(&o.single())) return *r;
        throw type_error(key, o, "an inequality region");
    }

    Solid3 solid(const std::string& key) {
        const CanvasObject& o = single(key);
        if (poisoned(o)) return make_sphere(Point3{}, 1.0);
        if (const Solid3* s = std::get_if<Solid3>(&o.single())) return *s;
        throw type_error(key, o, "a solid");
    }

    Plane3 plane(const std::string& key) {
        const CanvasObject& o = single(key);
        if (poisoned(o)) return Plane3{Point3{}, Vec3{0.0, 0.0, 1.0}};
        if (const Plane3* p = std::get_if<Plane3>(&o.single())) return *p;
        throw type_error(key, o, "a plane");
    }

    Vec3 vector3(const std::string& key) {
        const CanvasObject& o = single(key);
        if (poisoned(o)) return Vec3{1.0, 0.0, 0.0};
        if (const Line3* l = std::get_if<Line3>(&o.single())) return l->p2 - l->p1;
        throw type_error(key, o, "a 3D vector");
    }

    std::vector<Point2> point_list(const std::string& key, std::size_t min_count) {
        std::vector<Point2> pts;
        for (const CanvasObject* o : ref_list(key, min_count)) pts.push_back(as_point(key, *o));
        return pts;
    }

    std::vector<Point3> point3_list(const std::string& key, std::size_t min_count) {
        std::vector<Point3> pts;
        for (const CanvasObject* o : ref_list(key, min_count)) pts.push_back(as_point3(key, *o));
        return pts;
    }

    /// Call after all reads, before any kernel computation.
    void finish() const {
        if (saw_undefined_) throw UndefinedInputSignal{};
    }

    std::vector<std::string> parents;
    std::vector<std::string> ref_keys;

private:
    static bool poisoned(const CanvasObject& o) {
        return o.values.empty() || !is_defined_value(o.single());
    }

    static const Line2& dummy_line() {
        static const Line2 l{LineKind::line, Point2{0.0, 0.0}, Point2{1.0, 0.0}};
        return l;
    }

    static const Circle2& dummy_circle() {
        static const Circle2 c{Point2{0.0, 0.0}, 1.0};
        return c;
    }

    const Json& get(const std::string& key) const {
        if (!has(key))
            throw ToolError(ErrorCode::type_mismatch, "missing required '" + key + "'", key);
        return args_.at(key);
    }

    const CanvasObject& ref_by_name(const std::string& key, const std::string& name) {
        auto it = st_.objects.find(name);
        if (it == st_.objects.end())
            throw ToolError(ErrorCode::entity_not_found, "no object named '" + name + "'", name);
        record(key, name);
        return it->second;
    }

    const CanvasObject& single(const std::string& key) {
        const CanvasObject& o = ref(key);
        if (o.is_list)
            throw ToolError(ErrorCode::type_mismatch,
                            "'" + o.name + "' holds " + std::to_string(o.values.size()) +
                                " results and cannot be used as a single operand",
                            key);
        if (o.values.empty() || !is_defined_value(o.single())) saw_undefined_ = true;
        return o;
    }

    Point2 as_point(const std::string& key, const CanvasObject& o) {
        if (o.is_list || o.values.empty())
            throw type_error(key, o, "a point");
        if (!is_defined_value(o.single())) {
            saw_undefined_ = true;
            return Point2{};
        }
        if (const Point2* p = std::get_if<Point2>(&o.single())) return *p;
        throw type_error(key, o, "a point");
    }

    Point3 as_point3(const std::string& key, const CanvasObject& o) {
        if (o.is_list || o.values.empty())
            throw type_error(key, o, "a 3D point");
        if (!is_defined_value(o.single())) {
            saw_undefined_ = true;
            return Point3{};
        }
        if (const Point3* p = std::get_if<Point3>(&o.single())) return *p;
        throw type_error(key, o, "a 3D point");
    }

    double scalar_from_string(const std::string& key, const std::string& text) {
        if (valid_identifier(text) && st_.has(text)) {
            const CanvasObject& o = ref_by_name(key, text);
            if (o.is_list || o.values.empty()) throw type_error(key, o, "a number");
            if (!is_defined_value(o.single())) {
                saw_undefined_ = true;
                return 0.0;
            }
            if (const double* d = std::get_if<double>(&o.single())) return *d;
            throw type_error(key, o, "a number");
        }
        if (valid_identifier(text))
            throw ToolError(ErrorCode::entity_not_found, "no object named '" + text + "'", text);
        try {
            ExprPtr e = parse_expr(text);
            if (!free_variables(e).empty())
                throw ToolError(ErrorCode::type_mismatch,
                                "'" + key + "' must be a constant expression", key);
            Scalar v = eval_expr(e, {});
            if (!v.is_defined())
                throw ToolError(ErrorCode::type_mismatch,
                                "'" + key + "' evaluates to an undefined value", key);
            return v.value();
        } catch (const ParseError&) {
            throw ToolError(ErrorCode::type_mismatch,
                            "'" + key +
                                "' is neither a number, an object name, nor a constant expression",
                            key);
        }
    }

    void record(const std::string& key, const std::string& name) {
        if (std::find(parents.begin(), parents.end(), name) == parents.end())
            parents.push_back(name);
        if (std::find(ref_keys.begin(), ref_keys.end(), key) == ref_keys.end())
            ref_keys.push_back(key);
    }

    ToolError type_error(const std::string& key, const CanvasObject& o,
                         const std::string& wanted) const {
        return ToolError(ErrorCode::type_mismatch,
                         "'" + o.name + "' is a " + o.kind + "; '" + key + "' requires " + wanted,
                         key);
    }

    const CanvasState& st_;
    const Json& args_;
    mutable bool saw_undefined_ = false;
};

/// Construction compute: pure with respect to the state (reads only).
ToolResult compute_construction(const CanvasState& st, const std::string& tool, const Json& args,
                                ArgReader& r, const TolerancePolicy& policy);

/// Nominal result kind per construction tool, used for undefined commits.
std::string nominal_kind(const std::string& tool);

struct QueryResult {
    Json value;
    std::string units;
    Json extra = Json::object();
};

QueryResult run_query(const CanvasState& st, const std::string& tool, ArgReader& r,
                      const TolerancePolicy& policy);

Observation run_render_tool(CanvasState& st, const std::string& tool, ArgReader& r);

Observation run_utility_tool(CanvasState& st, const std::string& tool, ArgReader& r,
                             const TolerancePolicy& policy);

/// Measurement helpers shared by construction-measure and query tools.
double object_distance(const Value& a, const Value& b, const TolerancePolicy& policy);
double measure_length(const Value& v);
double measure_perimeter(const Value& v);
double measure_area(const Value& v);
double ellipse_area(const Conic2& c);
bool objects_equal(const CanvasObject& a, const CanvasObject& b, const TolerancePolicy& policy);
bool objects_congruent(const CanvasObject& a, const CanvasObject& b,
                       const TolerancePolicy& policy);

}  // namespace geocanvas::detail
