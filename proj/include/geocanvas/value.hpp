#pragma once

#include <string>
#include <variant>

#include <json.hpp>

#include "geocanvas/geom2d.hpp"
#include "geocanvas/geom3d.hpp"

namespace geocanvas {

using Json = nlohmann::ordered_json;

struct Undefined {};

struct TextObj {
    std::string text;
    double x = 0.0, y = 0.0, z = 0.0;
    bool is_3d = false;
};

/// One engine datum. Multi-result constructions hold a vector of these on the
/// owning canvas object rather than nesting lists here.
using Value = std::variant<Undefined, double, bool, TextObj, Point2, Line2, Circle2, Conic2,
                           Arc2, Polygon2, FunctionGraph, ParamCurve2, Region2, Point3, Line3,
                           Plane3, Polygon3, Solid3>;

inline bool is_defined_value(const Value& v) { return !std::holds_alternative<Undefined>(v); }

/// Display kind: "point", "segment", "ellipse", "cube", ... derived from the
/// variant contents.
std::string value_kind(const Value& v);

/// Short human-readable form used in observations and labels, e.g. "(0, -3)".
std::string value_brief(const Value& v);

/// Deterministic JSON snapshot; numbers use shortest round-trip formatting.
Json value_to_json(const Value& v);
Value value_from_json(const Json& j);

/// Shortest round-trip decimal text for a double.
std::string format_number(double v);

/// Apply a planar transform to any 2D value; 3D and scalar kinds throw
/// TypeMismatch. Orientation-reversing maps swap arc endpoints.
Value apply_transform2(const Value& v, const Transform2& t);

}  // namespace geocanvas
