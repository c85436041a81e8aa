#pragma once

#include <vector>

#include "geocanvas/errors.hpp"
#include "geocanvas/numeric.hpp"

namespace geocanvas {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3 operator+(Vec3 o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(Vec3 o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double k) const { return {x * k, y * k, z * k}; }
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(Vec3 a, Vec3 b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline Vec3 normalize3(Vec3 v) {
    const double n = v.norm();
    return n > 0.0 ? v * (1.0 / n) : Vec3{};
}

struct Point3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3 operator-(Point3 o) const { return {x - o.x, y - o.y, z - o.z}; }
    Point3 operator+(Vec3 v) const { return {x + v.x, y + v.y, z + v.z}; }
};

inline double distance3(Point3 a, Point3 b) { return (a - b).norm(); }

struct Line3 {
    Point3 p1, p2;
    Vec3 direction() const { return normalize3(p2 - p1); }
};

struct Plane3 {
    Point3 point;
    Vec3 normal;  // unit length

    double signed_distance(Point3 p) const { return dot(p - point, normal); }
};

Plane3 make_plane(Point3 a, Point3 b, Point3 c, const TolerancePolicy& policy = {});
Plane3 make_plane_point_normal(Point3 p, Vec3 normal, const TolerancePolicy& policy = {});

struct Polygon3 {
    std::vector<Point3> vertices;
};

double polygon3_area(const Polygon3& poly);

enum class SolidKind { pyramid, prism, cone, cylinder, sphere, tetrahedron, cube };

struct Solid3 {
    SolidKind kind = SolidKind::cube;
    // polyhedra
    std::vector<Point3> base;  // pyramid/prism base ring; cube/tetrahedron seed handled below
    Point3 apex;               // pyramid, cone
    Vec3 axis;                 // prism translation; cylinder axis (length = height)
    // curved solids
    Point3 center;             // cone/cylinder base center, sphere center
    double radius = 0.0;       // cone/cylinder/sphere
    // polyhedral vertex cache (filled for pyramid/prism/cube/tetrahedron)
    std::vector<Point3> vertices;
    std::vector<std::vector<int>> faces;  // index rings, outward CCW
};

Solid3 make_pyramid(std::vector<Point3> base, Point3 apex, const TolerancePolicy& policy = {});
Solid3 make_prism(std::vector<Point3> base, Vec3 translation, const TolerancePolicy& policy = {});
Solid3 make_cone(Point3 base_center, double radius, Point3 apex,
                 const TolerancePolicy& policy = {});
Solid3 make_cylinder(Point3 base_center, double radius, Point3 top_center,
                     const TolerancePolicy& policy = {});
Solid3 make_sphere(Point3 center, double radius);
/// Regular tetrahedron over an equilateral seed face (checked under policy).
Solid3 make_tetrahedron(Point3 a, Point3 b, Point3 c, const TolerancePolicy& policy = {});
/// Cube from three consecutive corners of one face; they must form a square
/// corner at the middle point (checked under policy).
Solid3 make_cube(Point3 a, Point3 b, Point3 c, const TolerancePolicy& policy = {});

double volume(const Solid3& s);
double surface_area(const Solid3& s);

bool is_polyhedral(const Solid3& s);

/// Plane section of a convex polyhedral solid; vertices ordered CCW about the
/// plane normal. Throws PreconditionFailed when the plane misses the solid
/// and UnsupportedTool for curved solids.
Polygon3 cross_section(const Plane3& plane, const Solid3& s,
                       const TolerancePolicy& policy = {});

double point_plane_distance(Point3 p, const Plane3& plane);
double point_line3_distance(Point3 p, const Line3& l);
double line3_line3_distance(const Line3& a, const Line3& b);
double plane_plane_distance(const Plane3& a, const Plane3& b, const TolerancePolicy& policy = {});

}  // namespace geocanvas
