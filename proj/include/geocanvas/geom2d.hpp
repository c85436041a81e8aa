#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "geocanvas/errors.hpp"
#include "geocanvas/expr.hpp"
#include "geocanvas/numeric.hpp"

namespace geocanvas {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double k) const { return {x * k, y * k}; }
    double norm() const { return std::hypot(x, y); }
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline Vec2 rot90_ccw(Vec2 v) { return {-v.y, v.x}; }
inline Vec2 normalize(Vec2 v) {
    const double n = v.norm();
    return n > 0.0 ? Vec2{v.x / n, v.y / n} : Vec2{0.0, 0.0};
}

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator-(Point2 o) const { return {x - o.x, y - o.y}; }
    Point2 operator+(Vec2 v) const { return {x + v.x, y + v.y}; }
};

inline double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

enum class LineKind { line, ray, segment, vector };

/// Lines, rays, segments and vectors share the two-point representation;
/// p1 != p2 under abs_tol is checked at construction.
struct Line2 {
    LineKind kind = LineKind::line;
    Point2 p1, p2;

    Vec2 direction() const { return normalize(p2 - p1); }
    double length() const { return distance(p1, p2); }
};

Line2 make_line(LineKind kind, Point2 p1, Point2 p2,
                const TolerancePolicy& policy = {});

struct Circle2 {
    Point2 center;
    double radius = 1.0;
};

Circle2 make_circle(Point2 center, double radius);

enum class ConicKind { ellipse, parabola, hyperbola };

/// Conics keep their defining data plus the implicit quadratic
/// a x^2 + b xy + c y^2 + d x + e y + f = 0 derived at construction.
struct Conic2 {
    ConicKind kind = ConicKind::ellipse;
    Point2 focus1, focus2;  // ellipse / hyperbola
    Point2 point_on;        // ellipse / hyperbola
    Line2 directrix;        // parabola (focus1 is the focus)
    std::array<double, 6> coef{};

    Point2 center() const;  // undefined for parabola (throws)
};

Conic2 make_ellipse(Point2 f1, Point2 f2, Point2 p, const TolerancePolicy& policy = {});
Conic2 make_hyperbola(Point2 f1, Point2 f2, Point2 p, const TolerancePolicy& policy = {});
Conic2 make_parabola(Point2 focus, const Line2& directrix, const TolerancePolicy& policy = {});

/// Implicit-form evaluation at a point.
double conic_residual(const Conic2& c, Point2 p);

enum class ArcKind { arc, sector, semicircle };

/// Angles are radians, counter-clockwise; the span is end - start wrapped
/// into (0, 2*pi]. Semicircles always span pi.
struct Arc2 {
    ArcKind kind = ArcKind::arc;
    Circle2 circle;
    double start_angle = 0.0;
    double end_angle = kPi;

    double span() const;
    Point2 point_at(double angle) const;
};

Arc2 make_arc(ArcKind kind, Point2 center, Point2 start, Point2 toward,
              const TolerancePolicy& policy = {});
/// Semicircle on diameter p1->p2, drawn on the left-hand side of the walk.
Arc2 make_semicircle(Point2 p1, Point2 p2, const TolerancePolicy& policy = {});

struct Polygon2 {
    std::vector<Point2> vertices;
};

Polygon2 make_polygon(std::vector<Point2> vertices, const TolerancePolicy& policy = {});

/// Graph of a one-variable function. deriv_order > 0 differentiates the body
/// numerically that many times; deriv_order == -1 is the antiderivative with
/// lower bound 0.
struct FunctionGraph {
    ExprPtr body;
    std::string var = "x";
    int deriv_order = 0;

    Scalar eval(double x) const;
};

struct ParamCurve2 {
    ExprPtr x_body;
    ExprPtr y_body;
    std::string var = "t";
    double t0 = 0.0;
    double t1 = 1.0;
};

struct Region2 {
    Relation relation;  // over variables x and y
};

// --- intersections -------------------------------------------------------

/// Curve operands for intersection; exactly one member is engaged.
struct CurveRef {
    const Line2* line = nullptr;
    const Circle2* circle = nullptr;
    const Conic2* conic = nullptr;
    const Arc2* arc = nullptr;
    const FunctionGraph* graph = nullptr;
};

/// All intersection points, ordered by ascending parameter along `a`
/// (lines: signed t along the direction; circles/arcs: CCW angle from east;
/// conics: angle about the center, or directrix parameter for parabolas;
/// graphs: x). Respects segment/ray/arc parameter ranges on both operands.
std::vector<Point2> intersect(const CurveRef& a, const CurveRef& b,
                              const TolerancePolicy& policy = {});

// --- derived lines and circles -------------------------------------------

Line2 perpendicular_line(Point2 p, const Line2& l);
Line2 parallel_line(Point2 p, const Line2& l);
Line2 perpendicular_bisector(Point2 a, Point2 b, const TolerancePolicy& policy = {});
/// Bisector of angle a-b-c, a line through b.
Line2 angle_bisector(Point2 a, Point2 b, Point2 c, const TolerancePolicy& policy = {});

Circle2 circle_through_3(Point2 a, Point2 b, Point2 c, const TolerancePolicy& policy = {});
Circle2 incircle(Point2 a, Point2 b, Point2 c, const TolerancePolicy& policy = {});

enum class TriangleCenter { incenter = 1, centroid = 2, circumcenter = 3, orthocenter = 4 };
Point2 triangle_center(Point2 a, Point2 b, Point2 c, TriangleCenter which,
                       const TolerancePolicy& policy = {});

/// Tangent lines from a point to a conic: two (external point), one (point on
/// the conic), PreconditionFailed (inside). Circle tangents are ordered by
/// CCW angle of the touch point from east.
std::vector<Line2> tangent_lines(Point2 p, const CurveRef& conic,
                                 const TolerancePolicy& policy = {});

/// Common tangents of two circles, ordered by direction angle.
std::vector<Line2> common_tangents(const Circle2& a, const Circle2& b,
                                   const TolerancePolicy& policy = {});

/// Least-squares regression line y = m x + b through >= 2 points.
Line2 best_fit_line(const std::vector<Point2>& pts, const TolerancePolicy& policy = {});

// --- measures --------------------------------------------------------------

/// CCW sweep from ray b->a to ray b->c, degrees in [0, 360).
double angle_measure(Point2 a, Point2 b, Point2 c, const TolerancePolicy& policy = {});

double point_line_distance(Point2 p, const Line2& l);   // respects ray/segment clamping
double polygon_perimeter(const Polygon2& poly);
double polygon_area(const Polygon2& poly);              // shoelace, absolute value
Scalar line_slope(const Line2& l);                      // undefined for vertical

// --- transforms ------------------------------------------------------------

struct Transform2 {
    // row-major 2x2 linear part + offset: p' = M p + t
    std::array<double, 4> m{1.0, 0.0, 0.0, 1.0};
    Vec2 t{};

    Point2 apply(Point2 p) const {
        return {m[0] * p.x + m[1] * p.y + t.x, m[2] * p.x + m[3] * p.y + t.y};
    }
    double det() const { return m[0] * m[3] - m[1] * m[2]; }
    bool orientation_reversing() const { return det() < 0.0; }
};

Transform2 reflect_about_line(const Line2& axis, const TolerancePolicy& policy = {});
Transform2 reflect_about_point(Point2 center);
Transform2 rotation_about(Point2 center, double angle_rad);
Transform2 translation(Vec2 offset);
Transform2 dilation_about(Point2 center, double factor);

// --- predicates ------------------------------------------------------------

bool are_parallel(const Line2& a, const Line2& b, const TolerancePolicy& policy = {});
bool are_perpendicular(const Line2& a, const Line2& b, const TolerancePolicy& policy = {});
bool are_collinear(Point2 a, Point2 b, Point2 c, const TolerancePolicy& policy = {});
bool are_concyclic(Point2 a, Point2 b, Point2 c, Point2 d, const TolerancePolicy& policy = {});
bool is_tangent_line(const Line2& l, const CurveRef& conic, const TolerancePolicy& policy = {});
bool in_region(const Region2& r, Point2 p, const TolerancePolicy& policy = {});

}  // namespace geocanvas
