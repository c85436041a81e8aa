#include "geocanvas/toolspec.hpp"

#include <openssl/evp.h>

#include <algorithm>

#include "geocanvas/expr.hpp"

namespace geocanvas {

const char* to_string(SemType t) {
    switch (t) {
        case SemType::object_name: return "object_name";
        case SemType::point_name: return "point_name";
        case SemType::linelike_name: return "linelike_name";
        case SemType::conic_name: return "conic_name";
        case SemType::scalar: return "scalar";
        case SemType::expr_text: return "expr_text";
        case SemType::count: return "count";
        case SemType::enum_code: return "enum";
        case SemType::color: return "color";
        case SemType::flag: return "flag";
    }
    return "object_name";
}

const char* to_string(ToolGroup g) {
    switch (g) {
        case ToolGroup::points: return "points";
        case ToolGroup::lines: return "lines";
        case ToolGroup::circles_conics: return "circles_conics";
        case ToolGroup::polygons_centers: return "polygons_centers";
        case ToolGroup::measurements: return "measurements";
        case ToolGroup::functions_calculus: return "functions_calculus";
        case ToolGroup::other_construction: return "other_construction";
        case ToolGroup::transforms: return "transforms";
        case ToolGroup::utility: return "utility";
        case ToolGroup::query_measure: return "query_measure";
        case ToolGroup::query_verify: return "query_verify";
        case ToolGroup::query_cas: return "query_cas";
        case ToolGroup::render: return "render";
        case ToolGroup::solid3d: return "solid3d";
    }
    return "points";
}

const char* to_string(ActionType t) {
    switch (t) {
        case ActionType::construction: return "construction";
        case ActionType::query: return "query";
        case ActionType::render: return "render";
        case ActionType::del: return "delete";
    }
    return "construction";
}

const char* to_string(CatalogProfile p) {
    switch (p) {
        case CatalogProfile::solve2d: return "solve2d";
        case CatalogProfile::solve3d: return "solve3d";
        case CatalogProfile::render_pipeline: return "render_pipeline";
    }
    return "solve2d";
}

const char* to_string(AblationMode m) {
    switch (m) {
        case AblationMode::full: return "full";
        case AblationMode::bare_signature: return "bare_signature";
        case AblationMode::no_measurement: return "no_measurement";
        case AblationMode::no_query: return "no_query";
    }
    return "full";
}

CatalogProfile profile_from_string(const std::string& s) {
    if (s == "solve2d") return CatalogProfile::solve2d;
    if (s == "solve3d") return CatalogProfile::solve3d;
    if (s == "render_pipeline") return CatalogProfile::render_pipeline;
    throw ToolError(ErrorCode::type_mismatch, "unknown profile '" + s + "'");
}

AblationMode mode_from_string(const std::string& s) {
    if (s == "full") return AblationMode::full;
    if (s == "bare_signature") return AblationMode::bare_signature;
    if (s == "no_measurement") return AblationMode::no_measurement;
    if (s == "no_query") return AblationMode::no_query;
    throw ToolError(ErrorCode::type_mismatch, "unknown ablation mode '" + s + "'");
}

namespace {

ParamSpec preq(const char* name, SemType type, const char* doc) {
    ParamSpec p;
    p.name = name;
    p.type = type;
    p.required = true;
    p.doc = doc;
    return p;
}

ParamSpec popt(const char* name, SemType type, const char* doc) {
    ParamSpec p = preq(name, type, doc);
    p.required = false;
    return p;
}

ParamSpec popt_def(const char* name, SemType type, const char* doc, Json def) {
    ParamSpec p = popt(name, type, doc);
    p.default_value = std::move(def);
    return p;
}

ParamSpec pvar(const char* name, SemType type, const char* doc) {
    ParamSpec p = preq(name, type, doc);
    p.variadic = true;
    return p;
}

ParamSpec penum(const char* name, const char* doc, std::vector<int> values, bool required = true) {
    ParamSpec p = preq(name, SemType::enum_code, doc);
    p.required = required;
    p.enum_values = std::move(values);
    return p;
}

ParamSpec penum_s(const char* name, const char* doc, std::vector<std::string> choices) {
    ParamSpec p = preq(name, SemType::enum_code, doc);
    p.enum_choices = std::move(choices);
    return p;
}

ToolSpec tool(const char* name, ToolGroup group, ActionType at, const char* desc,
              std::vector<ParamSpec> params) {
    ToolSpec t;
    t.name = name;
    t.group = group;
    t.action_type = at;
    t.description = desc;
    t.params = std::move(params);
    return t;
}

const ParamSpec kName = preq("name", SemType::object_name, "name the result is stored under");

std::vector<ToolSpec> solving_tools() {
    using G = ToolGroup;
    using A = ActionType;
    const SemType OBJ = SemType::object_name;
    const SemType PT = SemType::point_name;
    const SemType LN = SemType::linelike_name;
    const SemType CN = SemType::conic_name;
    const SemType SC = SemType::scalar;
    const SemType EX = SemType::expr_text;
    const SemType CT = SemType::count;
    const SemType FL = SemType::flag;

    std::vector<ToolSpec> t;

    // Points
    t.push_back(tool("add_point", G::points, A::construction,
                     "Place a free point at coordinates (x, y). Free points have no parents and "
                     "anchor every later construction.",
                     {kName, preq("x", SC, "x coordinate"), preq("y", SC, "y coordinate")}));
    t.push_back(tool("add_point_on", G::points, A::construction,
                     "Create a point constrained to a curve or path (line, segment, circle, arc, "
                     "polygon boundary, function graph). The optional parameter t selects the "
                     "position along the path's natural parameterization.",
                     {kName, preq("path", OBJ, "curve or path object"),
                      popt_def("t", SC, "path parameter", 0.5)}));
    t.push_back(tool(
        "add_intersect", G::points, A::construction,
        "Create intersection point(s) of two geometric objects. Both obj1 and obj2 must be "
        "lines, segments, rays, circles, conics, or functions—NOT points or numerics. Omit "
        "index to get ALL intersections as a single point (best for segment-segment or "
        "line-line which have exactly one). Use index=1 or index=2 when two objects have "
        "multiple intersections (e.g. line-circle). The result is stored under the exact "
        "'name' you provide—do NOT append _1 or _2 suffixes to access it.",
        {kName, preq("obj1", OBJ, "first curve (NOT a point)"),
         preq("obj2", OBJ, "second curve (NOT a point)"),
         popt("index", CT, "1-based intersection index along obj1")}));
    t.push_back(tool("add_midpoint", G::points, A::construction,
                     "Midpoint of two points.",
                     {kName, preq("p1", PT, "first point"), preq("p2", PT, "second point")}));

    // Lines & Segments
    t.push_back(tool("add_segment", G::lines, A::construction,
                     "Bounded segment between two distinct points.",
                     {kName, preq("p1", PT, "start point"), preq("p2", PT, "end point")}));
    t.push_back(tool("add_line", G::lines, A::construction,
                     "Infinite line through two distinct points.",
                     {kName, preq("p1", PT, "first point"), preq("p2", PT, "second point")}));
    t.push_back(tool("add_ray", G::lines, A::construction,
                     "Ray starting at p1 and passing through p2.",
                     {kName, preq("p1", PT, "origin"), preq("p2", PT, "direction point")}));
    t.push_back(tool("add_vector", G::lines, A::construction,
                     "Vector from p1 to p2; usable as the offset of transform_translate.",
                     {kName, preq("p1", PT, "tail"), preq("p2", PT, "head")}));
    t.push_back(tool(
        "add_perpendicular_line", G::lines, A::construction,
        "Create a line through a point, perpendicular to a reference line/segment/ray. The "
        "'point' must be a point object, and 'line' must be a line, segment, or ray—NOT a "
        "point. If you have two points A and B and want a perpendicular at A, first create "
        "the line: L=Line(A,B), then PerpendicularLine(A, L).",
        {kName, preq("point", PT, "must be a point"),
         preq("line", LN, "must be a line, segment or ray")}));
    t.push_back(tool("add_perpendicular_bisector", G::lines, A::construction,
                     "Perpendicular bisector of the segment between two points.",
                     {kName, preq("p1", PT, "first endpoint"), preq("p2", PT, "second endpoint")}));
    t.push_back(tool("add_parallel_line", G::lines, A::construction,
                     "Line through a point, parallel to a reference line, segment or ray.",
                     {kName, preq("point", PT, "point on the new line"),
                      preq("line", LN, "reference direction")}));
    t.push_back(tool("add_angle_bisector", G::lines, A::construction,
                     "Bisector of the angle a-b-c, a line through the vertex b.",
                     {kName, preq("a", PT, "first arm"), preq("b", PT, "vertex"),
                      preq("c", PT, "second arm")}));
    t.push_back(tool(
        "add_tangent", G::lines, A::construction,
        "Create tangent line(s) from an external point to a conic (circle, ellipse, "
        "hyperbola, parabola). ALWAYS use this tool for tangent lines—do NOT manually "
        "construct tangents with add_segment or add_line. May return one or two lines stored "
        "under the exact 'name' you provide. Do NOT append _1 or _2 suffixes—use the name "
        "directly. For a reliable single tangent contact point, prefer the Thales-circle "
        "construction (Midpoint + Circle + Intersect).",
        {kName, preq("point", PT, "external point"), preq("conic", CN, "target conic")}));
    t.push_back(tool("add_tangent_conic_conic", G::lines, A::construction,
                     "Common tangent lines of two circles, up to four, stored as one list "
                     "under the given name.",
                     {kName, preq("conic1", CN, "first circle"),
                      preq("conic2", CN, "second circle")}));

    // Circles & Conics
    t.push_back(tool("add_circle", G::circles_conics, A::construction,
                     "Circle from a center point and either a numeric radius or a point on the "
                     "circle. Provide exactly one of 'radius' and 'point'.",
                     {kName, preq("center", PT, "center point"),
                      popt("radius", SC, "radius (number, slider name or expression)"),
                      popt("point", PT, "point on the circle")}));
    t.push_back(tool("add_arc", G::circles_conics, A::construction,
                     "Circular arc around a center, from the start point counter-clockwise "
                     "toward the direction of the end point. The radius comes from the start "
                     "point.",
                     {kName, preq("center", PT, "arc center"), preq("start", PT, "start point"),
                      preq("end", PT, "end direction point")}));
    t.push_back(tool("add_sector", G::circles_conics, A::construction,
                     "Circular sector around a center, swept counter-clockwise from the start "
                     "point toward the end point.",
                     {kName, preq("center", PT, "sector center"), preq("start", PT, "start point"),
                      preq("end", PT, "end direction point")}));
    t.push_back(tool(
        "add_semicircle", G::circles_conics, A::construction,
        "Create a semicircle with the given segment as diameter. The arc is drawn on the "
        "LEFT side when walking from p1 to p2. Direction rules: (1) p1=left, p2=right "
        "(horizontal) → arc ABOVE; (2) p1=right, p2=left → arc BELOW; (3) p1=bottom, p2=top "
        "(vertical) → arc LEFT; (4) p1=top, p2=bottom → arc RIGHT. To flip the arc, SWAP p1 "
        "and p2. Useful for Thales' theorem: any point on the semicircle sees the diameter "
        "at 90°.",
        {kName, preq("p1", PT, "first diameter endpoint"),
         preq("p2", PT, "second diameter endpoint")}));
    t.push_back(tool("add_circle_3_points", G::circles_conics, A::construction,
                     "Circumscribed circle through three non-collinear points.",
                     {kName, preq("p1", PT, "first point"), preq("p2", PT, "second point"),
                      preq("p3", PT, "third point")}));
    t.push_back(tool("add_incircle", G::circles_conics, A::construction,
                     "Inscribed circle of the triangle p1 p2 p3.",
                     {kName, preq("p1", PT, "triangle vertex"), preq("p2", PT, "triangle vertex"),
                      preq("p3", PT, "triangle vertex")}));
    t.push_back(tool("add_ellipse", G::circles_conics, A::construction,
                     "Ellipse from its two foci and one point on the curve.",
                     {kName, preq("focus1", PT, "first focus"), preq("focus2", PT, "second focus"),
                      preq("point", PT, "point on the ellipse")}));
    t.push_back(tool("add_parabola", G::circles_conics, A::construction,
                     "Parabola from a focus point and a directrix line.",
                     {kName, preq("focus", PT, "focus"),
                      preq("directrix", LN, "directrix line")}));
    t.push_back(tool("add_hyperbola", G::circles_conics, A::construction,
                     "Hyperbola from its two foci and one point on the curve.",
                     {kName, preq("focus1", PT, "first focus"), preq("focus2", PT, "second focus"),
                      preq("point", PT, "point on the hyperbola")}));

    // Polygons & Centers
    t.push_back(tool("add_polygon", G::polygons_centers, A::construction,
                     "Polygon from an ordered list of at least three vertex points.",
                     {kName, pvar("points", PT, "vertex names in boundary order")}));
    t.push_back(tool("add_regular_polygon", G::polygons_centers, A::construction,
                     "Regular n-gon built counter-clockwise on the edge p1→p2.",
                     {kName, preq("p1", PT, "first edge vertex"),
                      preq("p2", PT, "second edge vertex"), preq("n", CT, "number of vertices")}));
    t.push_back(tool("add_vertex", G::polygons_centers, A::construction,
                     "Extract the index-th vertex (1-based) of a polygon as a point.",
                     {kName, preq("polygon", OBJ, "source polygon"),
                      preq("index", CT, "1-based vertex index")}));
    t.push_back(tool("add_center", G::polygons_centers, A::construction,
                     "Center point of a circle, arc, ellipse or hyperbola.",
                     {kName, preq("conic", CN, "circle or conic")}));
    t.push_back(tool("add_triangle_center", G::polygons_centers, A::construction,
                     "A classical triangle center of p1 p2 p3: center_type 1=incenter, "
                     "2=centroid, 3=circumcenter, 4=orthocenter.",
                     {kName, preq("p1", PT, "triangle vertex"), preq("p2", PT, "triangle vertex"),
                      preq("p3", PT, "triangle vertex"),
                      penum("center_type", "1=incenter 2=centroid 3=circumcenter 4=orthocenter",
                            {1, 2, 3, 4})}));

    // Measurements (construction objects)
    t.push_back(tool("add_angle", G::measurements, A::construction,
                     "Construct a visible angle object at vertex b, swept counter-clockwise "
                     "from ray b→a to ray b→c. Its value is the measure in degrees.",
                     {kName, preq("a", PT, "first arm"), preq("b", PT, "vertex"),
                      preq("c", PT, "second arm")}));
    t.push_back(tool("add_distance", G::measurements, A::construction,
                     "Construct a number object holding the shortest distance between two "
                     "objects.",
                     {kName, preq("obj1", OBJ, "first object"),
                      preq("obj2", OBJ, "second object")}));
    t.push_back(tool("add_area", G::measurements, A::construction,
                     "Construct a number object holding the area of a polygon, circle, sector "
                     "or ellipse.",
                     {kName, preq("obj", OBJ, "measured object")}));
    t.push_back(tool("add_slope", G::measurements, A::construction,
                     "Construct a number object holding the slope of a line, segment or ray; "
                     "undefined for vertical lines.",
                     {kName, preq("line", LN, "measured line")}));

    // Functions & Calculus
    t.push_back(tool("add_function", G::functions_calculus, A::construction,
                     "Define a one-variable function from an expression, e.g. x^2 - 2. Use "
                     "explicit '*' for products; sin/cos/tan/asin/acos/atan/sqrt/abs/ln/log/"
                     "exp, pi and e are available.",
                     {kName, preq("expr", EX, "function body"),
                      popt_def("var", EX, "variable name", "x")}));
    t.push_back(tool("add_derivative", G::functions_calculus, A::construction,
                     "Derivative of a function object, evaluated numerically.",
                     {kName, preq("function", OBJ, "source function")}));
    t.push_back(tool("add_integral_function", G::functions_calculus, A::construction,
                     "Antiderivative of a function object with lower bound 0.",
                     {kName, preq("function", OBJ, "source function")}));
    t.push_back(tool("add_inflection_point", G::functions_calculus, A::construction,
                     "Inflection point(s) of a function on [lo, hi], stored as points under "
                     "one name.",
                     {kName, preq("function", OBJ, "analyzed function"),
                      popt_def("lo", SemType::scalar, "scan lower bound", -10.0),
                      popt_def("hi", SemType::scalar, "scan upper bound", 10.0)}));
    t.push_back(tool("add_asymptote", G::functions_calculus, A::construction,
                     "Asymptote line(s) of a function: vertical poles detected on [lo, hi] "
                     "plus horizontal limits.",
                     {kName, preq("function", OBJ, "analyzed function"),
                      popt_def("lo", SemType::scalar, "scan lower bound", -10.0),
                      popt_def("hi", SemType::scalar, "scan upper bound", 10.0)}));
    t.push_back(tool("add_curve", G::functions_calculus, A::construction,
                     "Parametric curve (x(t), y(t)) for t in [t_min, t_max].",
                     {kName, preq("x_expr", EX, "x component"), preq("y_expr", EX, "y component"),
                      popt_def("var", EX, "parameter name", "t"),
                      preq("t_min", SemType::scalar, "parameter start"),
                      preq("t_max", SemType::scalar, "parameter end")}));
    t.push_back(tool("add_roots", G::functions_calculus, A::construction,
                     "Root(s) of a function on [lo, hi], stored as points on the x-axis.",
                     {kName, preq("function", OBJ, "analyzed function"),
                      popt_def("lo", SemType::scalar, "scan lower bound", -10.0),
                      popt_def("hi", SemType::scalar, "scan upper bound", 10.0)}));
    t.push_back(tool("add_turning_point", G::functions_calculus, A::construction,
                     "Local extrema of a function on [lo, hi], stored as points under one "
                     "name.",
                     {kName, preq("function", OBJ, "analyzed function"),
                      popt_def("lo", SemType::scalar, "scan lower bound", -10.0),
                      popt_def("hi", SemType::scalar, "scan upper bound", 10.0)}));

    // Other Construction
    t.push_back(tool("add_slider", G::other_construction, A::construction,
                     "Free numeric slider in [min, max]; change it later with set_value to "
                     "re-evaluate every dependent object.",
                     {kName, preq("min", SemType::scalar, "lower bound"),
                      preq("max", SemType::scalar, "upper bound"),
                      popt("value", SemType::scalar, "initial value (defaults to min)")}));
    t.push_back(tool("add_best_fit_line", G::other_construction, A::construction,
                     "Least-squares regression line through two or more points.",
                     {kName, pvar("points", PT, "sample points")}));
    t.push_back(tool("add_inequality", G::other_construction, A::construction,
                     "Region of the plane defined by an inequality in x and y, e.g. "
                     "x^2 + y^2 <= 4.",
                     {kName, preq("inequality", EX, "inequality over x and y")}));
    t.push_back(tool("add_integral_shade", G::other_construction, A::construction,
                     "Shade the region between a function and the x-axis on [a, b]; the "
                     "object's value is the signed definite integral.",
                     {kName, preq("function", OBJ, "integrand"),
                      preq("a", SemType::scalar, "lower bound"),
                      preq("b", SemType::scalar, "upper bound")}));
    t.push_back(tool("add_text", G::other_construction, A::construction,
                     "Text label anchored at canvas coordinates (x, y).",
                     {kName, preq("text", EX, "label text"),
                      preq("x", SemType::scalar, "anchor x"),
                      preq("y", SemType::scalar, "anchor y")}));

    // Transforms
    t.push_back(tool("transform_reflect_line", G::transforms, A::construction,
                     "Mirror image of an object across a line.",
                     {kName, preq("obj", OBJ, "object to reflect"),
                      preq("line", LN, "mirror line")}));
    t.push_back(tool("transform_reflect_point", G::transforms, A::construction,
                     "Point reflection (half-turn) of an object about a center point.",
                     {kName, preq("obj", OBJ, "object to reflect"),
                      preq("point", PT, "center of the reflection")}));
    t.push_back(tool("transform_rotate", G::transforms, A::construction,
                     "Rotate an object by an angle in degrees (counter-clockwise) around a "
                     "center point.",
                     {kName, preq("obj", OBJ, "object to rotate"),
                      preq("angle", SemType::scalar, "angle in degrees, CCW"),
                      preq("center", PT, "rotation center")}));
    t.push_back(tool("transform_translate", G::transforms, A::construction,
                     "Translate an object by a vector object.",
                     {kName, preq("obj", OBJ, "object to translate"),
                      preq("vector", OBJ, "vector giving the offset")}));
    t.push_back(tool("transform_dilate", G::transforms, A::construction,
                     "Dilate an object from a center point by a nonzero factor.",
                     {kName, preq("obj", OBJ, "object to dilate"),
                      preq("factor", SemType::scalar, "scale factor"),
                      preq("center", PT, "dilation center")}));

    // Utility
    t.push_back(tool("delete_object", G::utility, A::del,
                     "Delete an object TOGETHER WITH every object that depends on it "
                     "(cascading delete over the construction graph). The observation lists "
                     "every removed name.",
                     {preq("name", OBJ, "object to delete")}));
    t.push_back(tool("set_value", G::utility, A::construction,
                     "Set a slider or free numeric value; every dependent object is "
                     "recomputed.",
                     {preq("name", OBJ, "slider or free number"),
                      preq("value", SemType::scalar, "new value")}));
    t.push_back(tool("rename_object", G::utility, A::construction,
                     "Rename an object; references held by dependents follow the new name.",
                     {preq("name", OBJ, "current name"),
                      preq("new_name", OBJ, "new name")}));
    t.push_back(tool("set_label_visible", G::utility, A::construction,
                     "Show or hide an object's label.",
                     {preq("name", OBJ, "target object"), preq("visible", FL, "show the label")}));
    t.push_back(tool("set_object_visible", G::utility, A::construction,
                     "Show or hide an object in rendered output; the object stays on the "
                     "canvas.",
                     {preq("name", OBJ, "target object"),
                      preq("visible", FL, "show the object")}));

    // Geometric Measurement queries
    t.push_back(tool(
        "query_angle", G::query_measure, A::query,
        "Measure the angle at vertex b (the apex), sweeping counter-clockwise from ray b→a "
        "to ray b→c. Returns degrees. IMPORTANT: point order matters—Angle(A,B,C) ≠ "
        "Angle(C,B,A). For the interior angle of triangle ABC at vertex B, use Angle(C,B,A) "
        "(go from one side to the other in the direction that gives the interior angle). All "
        "three must be existing point objects.",
        {preq("a", PT, "first arm"), preq("b", PT, "vertex"), preq("c", PT, "second arm")}));
    t.push_back(tool("query_distance", G::query_measure, A::query,
                     "Shortest distance between two objects (points, lines, circles, "
                     "polygons; 3D points and planes).",
                     {preq("obj1", OBJ, "first object"), preq("obj2", OBJ, "second object")}));
    t.push_back(tool("query_length", G::query_measure, A::query,
                     "Length of a segment, vector, arc or parametric curve.",
                     {preq("obj", OBJ, "measured object")}));
    t.push_back(tool("query_perimeter", G::query_measure, A::query,
                     "Perimeter of a polygon, circle or sector.",
                     {preq("obj", OBJ, "measured object")}));
    t.push_back(tool("query_area", G::query_measure, A::query,
                     "Area of a polygon, circle, sector or ellipse.",
                     {preq("obj", OBJ, "measured object")}));
    t.push_back(tool("query_slope", G::query_measure, A::query,
                     "Slope of a line, segment or ray; undefined for vertical lines.",
                     {preq("line", LN, "measured line")}));
    t.push_back(tool("query_radius", G::query_measure, A::query,
                     "Radius of a circle, arc or sector.", {preq("obj", OBJ, "measured object")}));
    t.push_back(tool("query_x_coord", G::query_measure, A::query,
                     "x coordinate of a point.", {preq("point", PT, "measured point")}));
    t.push_back(tool("query_y_coord", G::query_measure, A::query,
                     "y coordinate of a point.", {preq("point", PT, "measured point")}));

    // Geometric Verification queries
    t.push_back(tool("query_are_parallel", G::query_verify, A::query,
                     "Test whether two lines/segments/rays are parallel under the engine "
                     "tolerance.",
                     {preq("line1", LN, "first line"), preq("line2", LN, "second line")}));
    t.push_back(tool("query_are_perpendicular", G::query_verify, A::query,
                     "Test whether two lines/segments/rays are perpendicular under the engine "
                     "tolerance.",
                     {preq("line1", LN, "first line"), preq("line2", LN, "second line")}));
    t.push_back(tool("query_is_tangent", G::query_verify, A::query,
                     "Test whether a line is tangent to a circle or conic.",
                     {preq("line", LN, "candidate tangent"), preq("conic", CN, "target conic")}));
    t.push_back(tool("query_is_in_region", G::query_verify, A::query,
                     "Test whether a point lies in an inequality region; the boundary counts "
                     "as inside.",
                     {preq("point", PT, "tested point"), preq("region", OBJ, "target region")}));
    t.push_back(tool("query_are_equal", G::query_verify, A::query,
                     "Test whether two objects coincide as geometric values (same kind, same "
                     "defining data under tolerance).",
                     {preq("obj1", OBJ, "first object"), preq("obj2", OBJ, "second object")}));
    t.push_back(tool("query_are_collinear", G::query_verify, A::query,
                     "Test whether three points lie on one line.",
                     {preq("p1", PT, "first point"), preq("p2", PT, "second point"),
                      preq("p3", PT, "third point")}));
    t.push_back(tool("query_are_concyclic", G::query_verify, A::query,
                     "Test whether four points lie on one circle.",
                     {preq("p1", PT, "first point"), preq("p2", PT, "second point"),
                      preq("p3", PT, "third point"), preq("p4", PT, "fourth point")}));
    t.push_back(tool("query_are_congruent", G::query_verify, A::query,
                     "Test whether two same-kind objects are congruent (segments by length, "
                     "circles by radius, polygons by matched side lengths and angles).",
                     {preq("obj1", OBJ, "first object"), preq("obj2", OBJ, "second object")}));

    // CAS & Canvas Inspection queries
    t.push_back(tool("query_solve", G::query_cas, A::query,
                     "Solve an equation like sin(x*pi/180) = 1/2 for one variable. This "
                     "engine solves numerically over [-1000, 1000] and flags the observation "
                     "with numeric_fallback=true; roots are returned as a sorted list.",
                     {preq("equation", EX, "equation containing '='"),
                      popt("var", EX, "unknown (defaults to the single free variable)")}));
    t.push_back(tool("query_nsolve", G::query_cas, A::query,
                     "Numerically solve an equation on an interval: uniform scan, sign-change "
                     "bracketing, bisection refinement. Returns sorted, deduplicated roots.",
                     {preq("equation", EX, "equation containing '='"),
                      popt("var", EX, "unknown (defaults to the single free variable)"),
                      popt_def("lo", SemType::scalar, "interval start", -1000.0),
                      popt_def("hi", SemType::scalar, "interval end", 1000.0),
                      popt_def("grid", CT, "scan grid size", 4096)}));
    t.push_back(tool("query_definite_integral", G::query_cas, A::query,
                     "Numeric definite integral of a function object on [a, b] (adaptive "
                     "Simpson, antisymmetric in the bounds).",
                     {preq("function", OBJ, "integrand function"),
                      preq("a", SemType::scalar, "lower bound"),
                      preq("b", SemType::scalar, "upper bound")}));
    t.push_back(tool("query_function_max", G::query_cas, A::query,
                     "Maximum value of a function on [lo, hi]; the observation also reports "
                     "the location under extra.at.",
                     {preq("function", OBJ, "analyzed function"),
                      preq("lo", SemType::scalar, "interval start"),
                      preq("hi", SemType::scalar, "interval end")}));
    t.push_back(tool("query_function_min", G::query_cas, A::query,
                     "Minimum value of a function on [lo, hi]; the observation also reports "
                     "the location under extra.at.",
                     {preq("function", OBJ, "analyzed function"),
                      preq("lo", SemType::scalar, "interval start"),
                      preq("hi", SemType::scalar, "interval end")}));
    t.push_back(tool("query_is_defined", G::query_cas, A::query,
                     "True when an object with this name exists and has a defined value; "
                     "false otherwise (never an error).",
                     {preq("obj", OBJ, "checked name")}));
    t.push_back(tool("query_dependents", G::query_cas, A::query,
                     "List every object that depends on this one (the set a cascading delete "
                     "would remove, excluding the object itself).",
                     {preq("obj", OBJ, "inspected object")}));

    return t;
}

std::vector<ToolSpec> solid_tools() {
    using G = ToolGroup;
    using A = ActionType;
    const SemType OBJ = SemType::object_name;
    const SemType PT = SemType::point_name;
    const SemType SC = SemType::scalar;
    const SemType EX = SemType::expr_text;
    const SemType FL = SemType::flag;

    std::vector<ToolSpec> t;
    t.push_back(tool("add_point3d", G::solid3d, A::construction,
                     "Place a free point at 3D coordinates (x, y, z).",
                     {kName, preq("x", SC, "x coordinate"), preq("y", SC, "y coordinate"),
                      preq("z", SC, "z coordinate")}));
    t.push_back(tool("add_vector3d", G::solid3d, A::construction,
                     "3D vector, either between two points ('from' and 'to') or from the "
                     "origin with components (x, y, z).",
                     {kName, popt("from", PT, "tail point (defaults to the origin)"),
                      popt("to", PT, "head point"), popt("x", SC, "x component"),
                      popt("y", SC, "y component"), popt("z", SC, "z component")}));
    t.push_back(tool("add_plane", G::solid3d, A::construction,
                     "Infinite plane through three non-collinear 3D points.",
                     {kName, preq("p1", PT, "first point"), preq("p2", PT, "second point"),
                      preq("p3", PT, "third point")}));
    t.push_back(tool("add_finite_plane", G::solid3d, A::construction,
                     "Bounded parallelogram patch spanned by three corner points (visual "
                     "stand-in for a plane).",
                     {kName, preq("p1", PT, "first corner"), preq("p2", PT, "second corner"),
                      preq("p3", PT, "third corner")}));
    t.push_back(tool("add_perpendicular_plane", G::solid3d, A::construction,
                     "Plane through a point, perpendicular to a 3D vector object.",
                     {kName, preq("point", PT, "point on the plane"),
                      preq("axis", OBJ, "normal direction (vector3d)")}));
    t.push_back(tool("add_plane_bisector", G::solid3d, A::construction,
                     "Perpendicular bisector plane of two 3D points.",
                     {kName, preq("p1", PT, "first point"), preq("p2", PT, "second point")}));
    t.push_back(tool("add_pyramid", G::solid3d, A::construction,
                     "Pyramid from a planar convex base (3 or more coplanar points) and an "
                     "apex.",
                     {kName, pvar("points", PT, "base vertices in ring order"),
                      preq("apex", PT, "apex point")}));
    t.push_back(tool("add_prism", G::solid3d, A::construction,
                     "Prism from a planar convex base translated along a vector3d object.",
                     {kName, pvar("points", PT, "base vertices in ring order"),
                      preq("vector", OBJ, "translation (vector3d)")}));
    t.push_back(tool("add_cone", G::solid3d, A::construction,
                     "Right circular cone: base circle (center + radius, perpendicular to the "
                     "axis) and apex.",
                     {kName, preq("center", PT, "base center"), preq("radius", SC, "base radius"),
                      preq("apex", PT, "apex point")}));
    t.push_back(tool("add_cylinder", G::solid3d, A::construction,
                     "Filled right circular cylinder from a base center, radius and top "
                     "center (not just the lateral surface).",
                     {kName, preq("center", PT, "base center"), preq("radius", SC, "radius"),
                      preq("top", PT, "top center")}));
    t.push_back(tool("add_sphere", G::solid3d, A::construction,
                     "Sphere from a center and either a numeric radius or a point on the "
                     "sphere.",
                     {kName, preq("center", PT, "center"), popt("radius", SC, "radius"),
                      popt("point", PT, "point on the sphere")}));
    t.push_back(tool("add_tetrahedron", G::solid3d, A::construction,
                     "Regular tetrahedron erected on an equilateral seed face p1 p2 p3.",
                     {kName, preq("p1", PT, "face vertex"), preq("p2", PT, "face vertex"),
                      preq("p3", PT, "face vertex")}));
    t.push_back(tool("add_cube", G::solid3d, A::construction,
                     "Cube from three consecutive corners of one face; the three points must "
                     "form a square corner at p2.",
                     {kName, preq("p1", PT, "face corner"), preq("p2", PT, "corner at the right "
                      "angle"), preq("p3", PT, "face corner")}));
    t.push_back(tool("add_cross_section", G::solid3d, A::construction,
                     "Intersection polygon of a plane with a polyhedral solid (pyramid, "
                     "prism, cube, tetrahedron).",
                     {kName, preq("plane", OBJ, "cutting plane"),
                      preq("solid", OBJ, "target solid")}));
    t.push_back(tool("add_net", G::solid3d, A::construction,
                     "Unfolded net of a convex polyhedron.",
                     {kName, preq("solid", OBJ, "source solid")}));
    t.push_back(tool("add_text_3d", G::solid3d, A::construction,
                     "Text label anchored at 3D coordinates.",
                     {kName, preq("text", EX, "label text"), preq("x", SC, "anchor x"),
                      preq("y", SC, "anchor y"), preq("z", SC, "anchor z")}));
    t.push_back(tool("add_surface_revolution", G::solid3d, A::construction,
                     "Surface of revolution of a function graph around the x-axis.",
                     {kName, preq("function", OBJ, "profile function")}));
    t.push_back(tool("query_volume", G::solid3d, A::query,
                     "Volume of a pyramid, prism, cone, cylinder, sphere, tetrahedron or "
                     "cube.",
                     {preq("solid", OBJ, "measured solid")}));
    t.push_back(tool("query_surface_area", G::solid3d, A::query,
                     "Total surface area of a solid (cones include the base disc, cylinders "
                     "both caps).",
                     {preq("solid", OBJ, "measured solid")}));
    t.push_back(tool("query_coords3d", G::solid3d, A::query,
                     "3D coordinates (x, y, z) of a point.", {preq("point", PT, "inspected "
                     "point")}));
    t.push_back(tool("render_set_3d_view", G::solid3d, A::render,
                     "Configure the 3D viewport used by the renderer: rotation angles about "
                     "the x and z axes (degrees), zoom scale and axes visibility. Style only; "
                     "the construction is unchanged.",
                     {preq("x_angle", SC, "rotation about the x axis, degrees"),
                      preq("z_angle", SC, "rotation about the z axis, degrees"),
                      preq("scale", SC, "pixels per canvas unit"),
                      popt("axes", FL, "show 3D axes")}));
    return t;
}

std::vector<ToolSpec> render_tools_table() {
    using G = ToolGroup;
    using A = ActionType;
    const SemType OBJ = SemType::object_name;
    const SemType PT = SemType::point_name;
    const SemType SC = SemType::scalar;
    const SemType EX = SemType::expr_text;
    const SemType FL = SemType::flag;

    std::vector<ToolSpec> t;
    t.push_back(tool("render_set_color", G::render, A::render,
                     "Set an object's stroke color (hex #rrggbb or a named color).",
                     {preq("obj", OBJ, "target object"), preq("color", SemType::color,
                      "#rrggbb or color name")}));
    t.push_back(tool("render_set_line_style", G::render, A::render,
                     "Set an object's line style.",
                     {preq("obj", OBJ, "target object"),
                      penum_s("style", "solid, dashed or dotted", {"solid", "dashed",
                      "dotted"})}));
    t.push_back(tool("render_set_line_thickness", G::render, A::render,
                     "Set an object's line thickness in points.",
                     {preq("obj", OBJ, "target object"),
                      preq("thickness", SC, "stroke width in points")}));
    t.push_back(tool("render_set_point_style", G::render, A::render,
                     "Change a point's marker shape.",
                     {preq("obj", OBJ, "target point"),
                      penum("style", "0=dot 1=circle 2=cross 3=plus 4=diamond",
                            {0, 1, 2, 3, 4})}));
    t.push_back(tool("render_set_point_size", G::render, A::render,
                     "Change a point's marker size.",
                     {preq("obj", OBJ, "target point"), preq("size", SC, "marker radius in "
                      "points")}));
    t.push_back(tool("render_set_filling", G::render, A::render,
                     "Set the fill opacity of a closed shape (0 = none, 1 = solid).",
                     {preq("obj", OBJ, "target shape"), preq("opacity", SC, "fill opacity in "
                      "[0, 1]")}));
    t.push_back(tool("render_set_decoration", G::render, A::render,
                     "Add tick marks or an arrow to a segment.",
                     {preq("obj", OBJ, "target segment"),
                      penum("decoration", "0=none 1..3=tick marks 4=arrow", {0, 1, 2, 3, 4})}));
    t.push_back(tool("render_show_axes", G::render, A::render,
                     "Show or hide the coordinate axes.", {preq("visible", FL, "axes visible")}));
    t.push_back(tool("render_show_grid", G::render, A::render,
                     "Show or hide the coordinate grid.", {preq("visible", FL, "grid visible")}));
    t.push_back(tool("render_set_caption", G::render, A::render,
                     "Set a custom caption used when the label mode is Caption.",
                     {preq("obj", OBJ, "target object"), preq("caption", EX, "caption text")}));
    t.push_back(tool(
        "render_set_label_mode", G::render, A::render,
        "Control what is displayed as an object's label and automatically make the label "
        "visible. 0 = Name only (e.g. 'A'), 1 = Name + Value (e.g. 'A = (1,2)'), 2 = Value "
        "only (e.g. '(1,2)'), 3 = Caption (must set caption first).",
        {preq("obj", OBJ, "target object"),
         penum("mode", "0=name 1=name+value 2=value 3=caption", {0, 1, 2, 3})}));
    t.push_back(tool("render_set_coord_system", G::render, A::render,
                     "Set the visible viewport bounds of the rendered canvas.",
                     {preq("xmin", SC, "left bound"), preq("xmax", SC, "right bound"),
                      preq("ymin", SC, "bottom bound"), preq("ymax", SC, "top bound")}));
    t.push_back(tool("render_add_right_angle_mark", G::render, A::render,
                     "Draw a small square marking the right angle a-b-c at vertex b.",
                     {preq("a", PT, "first arm point"), preq("b", PT, "vertex point"),
                      preq("c", PT, "second arm point")}));
    return t;
}

}  // namespace

const ToolSpec* Catalog::find(const std::string& tool) const {
    for (const ToolSpec& s : specs)
        if (s.name == tool) return &s;
    return nullptr;
}

CatalogCounts Catalog::counts() const {
    CatalogCounts c;
    for (const ToolSpec& s : specs) {
        switch (s.action_type) {
            case ActionType::construction:
            case ActionType::del: ++c.construction; break;
            case ActionType::query: ++c.query; break;
            case ActionType::render: ++c.render; break;
        }
    }
    c.total = specs.size();
    return c;
}

Json Catalog::export_json() const {
    Json doc;
    doc["format_version"] = 1;
    doc["profile"] = to_string(profile);
    doc["mode"] = to_string(mode);
    doc["tool_count"] = specs.size();
    Json tools = Json::array();
    for (const ToolSpec& s : specs) {
        Json t;
        t["name"] = s.name;
        t["group"] = to_string(s.group);
        t["action_type"] = to_string(s.action_type);
        t["description"] = s.description;
        Json params = Json::array();
        for (const ParamSpec& p : s.params) {
            Json pj;
            pj["name"] = p.name;
            pj["type"] = to_string(p.type);
            pj["required"] = p.required;
            if (p.variadic) pj["variadic"] = true;
            if (!p.enum_values.empty()) pj["enum"] = p.enum_values;
            if (!p.enum_choices.empty()) pj["enum"] = p.enum_choices;
            if (!p.default_value.is_null()) pj["default"] = p.default_value;
            pj["doc"] = p.doc;
            params.push_back(pj);
        }
        t["parameters"] = params;
        tools.push_back(t);
    }
    doc["tools"] = tools;
    doc["digest"] = sha256_hex(doc.dump());
    return doc;
}

std::string Catalog::digest() const {
    Json doc = export_json();
    doc.erase("digest");
    return sha256_hex(doc.dump());
}

Catalog build_catalog(CatalogProfile profile, AblationMode mode,
                      const std::vector<OverlayPatch>& overlays) {
    Catalog c;
    c.profile = profile;
    c.mode = mode;
    c.specs = solving_tools();
    if (profile == CatalogProfile::solve3d) {
        std::vector<ToolSpec> extra = solid_tools();
        c.specs.insert(c.specs.end(), extra.begin(), extra.end());
    } else if (profile == CatalogProfile::render_pipeline) {
        std::vector<ToolSpec> extra = render_tools_table();
        c.specs.insert(c.specs.end(), extra.begin(), extra.end());
    }

    if (mode == AblationMode::no_measurement) {
        c.specs.erase(std::remove_if(c.specs.begin(), c.specs.end(),
                                     [](const ToolSpec& s) {
                                         return s.group == ToolGroup::query_measure;
                                     }),
                      c.specs.end());
    } else if (mode == AblationMode::no_query) {
        c.specs.erase(std::remove_if(c.specs.begin(), c.specs.end(),
                                     [](const ToolSpec& s) {
                                         return s.action_type == ActionType::query;
                                     }),
                      c.specs.end());
    } else if (mode == AblationMode::bare_signature) {
        for (ToolSpec& s : c.specs) {
            s.description.clear();
            for (ParamSpec& p : s.params) p.doc.clear();
        }
    }

    for (const OverlayPatch& patch : overlays) {
        ToolSpec* spec = nullptr;
        for (ToolSpec& s : c.specs)
            if (s.name == patch.tool) spec = &s;
        if (!spec)
            throw ToolError(ErrorCode::entity_not_found,
                            "overlay targets unknown tool '" + patch.tool + "'", patch.tool);
        if (patch.param.empty()) {
            spec->description = patch.description;
            continue;
        }
        ParamSpec* param = nullptr;
        for (ParamSpec& p : spec->params)
            if (p.name == patch.param) param = &p;
        if (!param)
            throw ToolError(ErrorCode::entity_not_found,
                            "overlay targets unknown parameter '" + patch.param + "' of '" +
                                patch.tool + "'",
                            patch.param);
        param->doc = patch.description;
    }
    c.overlays = overlays;
    return c;
}

namespace {

bool is_identifier(const std::string& s) {
    if (s.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
    for (char ch : s)
        if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_') return false;
    return true;
}

Json normalize_arg(const ToolSpec& spec, const ParamSpec& p, const Json& v) {
    auto fail = [&](const std::string& why) -> ToolError {
        return ToolError(ErrorCode::type_mismatch,
                         spec.name + ": argument '" + p.name + "' " + why, p.name);
    };
    switch (p.type) {
        case SemType::object_name:
        case SemType::point_name:
        case SemType::linelike_name:
        case SemType::conic_name: {
            if (p.variadic) {
                if (!v.is_array()) throw fail("must be a list of object names");
                for (const Json& item : v)
                    if (!item.is_string() || !is_identifier(item.get<std::string>()))
                        throw fail("must contain valid object names");
                return v;
            }
            if (!v.is_string() || !is_identifier(v.get<std::string>()))
                throw fail("must be an object name");
            return v;
        }
        case SemType::scalar: {
            if (v.is_number()) return v;
            if (v.is_string()) {
                const std::string s = v.get<std::string>();
                if (is_identifier(s)) return v;  // engine resolves number-object references
                try {
                    ExprPtr e = parse_expr(s);
                    if (!free_variables(e).empty())
                        throw fail("must be a number, object name or constant expression");
                    Scalar val = eval_expr(e, {});
                    if (!val.is_defined()) throw fail("evaluates to an undefined value");
                    return Json(val.value());
                } catch (const ParseError&) {
                    throw fail("must be a number, object name or constant expression");
                }
            }
            throw fail("must be a number");
        }
        case SemType::expr_text:
            if (!v.is_string() || v.get<std::string>().empty())
                throw fail("must be a non-empty string");
            return v;
        case SemType::count:
            if (!v.is_number_integer() || v.get<long long>() < 1)
                throw fail("must be a positive integer");
            return v;
        case SemType::enum_code: {
            if (!p.enum_choices.empty()) {
                if (!v.is_string()) throw fail("must be one of the listed choices");
                const std::string s = v.get<std::string>();
                if (std::find(p.enum_choices.begin(), p.enum_choices.end(), s) ==
                    p.enum_choices.end())
                    throw fail("must be one of the listed choices");
                return v;
            }
            if (!v.is_number_integer()) throw fail("must be an integer code");
            const int code = static_cast<int>(v.get<long long>());
            if (!p.enum_values.empty() &&
                std::find(p.enum_values.begin(), p.enum_values.end(), code) ==
                    p.enum_values.end())
                throw fail("is outside the allowed codes");
            return v;
        }
        case SemType::color:
            if (!v.is_string() || v.get<std::string>().empty()) throw fail("must be a color");
            return v;
        case SemType::flag:
            if (!v.is_boolean()) throw fail("must be a boolean");
            return v;
    }
    throw fail("has an unknown parameter type");
}

}  // namespace

Action validate_call(const Catalog& c, const std::string& tool, const Json& raw_args) {
    const ToolSpec* spec = c.find(tool);
    if (!spec)
        throw ToolError(ErrorCode::unsupported_tool,
                        "tool '" + tool + "' is not in the active catalog", tool);
    if (!raw_args.is_object())
        throw ToolError(ErrorCode::type_mismatch, tool + ": arguments must be an object");

    for (auto it = raw_args.begin(); it != raw_args.end(); ++it) {
        const std::string& key = it.key();
        const bool known = std::any_of(spec->params.begin(), spec->params.end(),
                                       [&](const ParamSpec& p) { return p.name == key; });
        if (!known)
            throw ToolError(ErrorCode::type_mismatch,
                            tool + ": unknown argument '" + key + "'", key);
    }

    Action a;
    a.tool = tool;
    for (const ParamSpec& p : spec->params) {
        if (raw_args.contains(p.name) && !raw_args.at(p.name).is_null()) {
            a.args[p.name] = normalize_arg(*spec, p, raw_args.at(p.name));
        } else if (p.required) {
            throw ToolError(ErrorCode::type_mismatch,
                            tool + ": missing required argument '" + p.name + "'", p.name);
        } else if (!p.default_value.is_null()) {
            a.args[p.name] = p.default_value;
        }
    }
    return a;
}

std::vector<OverlayPatch> overlays_from_json(const Json& j) {
    std::vector<OverlayPatch> out;
    if (j.is_null()) return out;
    if (!j.is_array())
        throw ToolError(ErrorCode::type_mismatch, "overlay file must hold a JSON array");
    for (const Json& item : j) {
        OverlayPatch p;
        p.tool = item.at("tool").get<std::string>();
        p.param = item.value("param", std::string());
        p.description = item.at("description").get<std::string>();
        out.push_back(std::move(p));
    }
    return out;
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xF]);
    }
    return out;
}

}  // namespace geocanvas
