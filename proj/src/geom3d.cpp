#include "geocanvas/geom3d.hpp"

#include <algorithm>
#include <cmath>

namespace geocanvas {

namespace {

void require(bool cond, ErrorCode code, const std::string& msg) {
    if (!cond) throw ToolError(code, msg);
}

Point3 centroid_of(const std::vector<Point3>& pts) {
    Vec3 acc{};
    for (const Point3& p : pts) acc = acc + Vec3{p.x, p.y, p.z};
    const double n = static_cast<double>(pts.size());
    return {acc.x / n, acc.y / n, acc.z / n};
}

// Base rings must be planar; returns the unit normal.
Vec3 base_normal(const std::vector<Point3>& base, const TolerancePolicy& policy) {
    require(base.size() >= 3, ErrorCode::precondition_failed, "base needs >= 3 vertices");
    Vec3 n{};
    const Point3 o = base[0];
    for (std::size_t i = 1; i + 1 < base.size(); ++i)
        n = n + cross(base[i] - o, base[i + 1] - o);
    require(n.norm() > policy.abs_tol, ErrorCode::degenerate_input, "base vertices are collinear");
    const Vec3 un = normalize3(n);
    double extent = 0.0;
    for (const Point3& p : base) extent = std::fmax(extent, (p - o).norm());
    for (const Point3& p : base)
        require(std::fabs(dot(p - o, un)) <= std::fmax(policy.abs_tol, policy.rel_tol * extent),
                ErrorCode::degenerate_input, "base vertices are not coplanar");
    return un;
}

void ring_faces(Solid3& s, std::size_t n, bool with_top) {
    // bottom ring indices [0, n), top ring (prism) [n, 2n) or apex at n (pyramid)
    std::vector<int> bottom(n);
    for (std::size_t i = 0; i < n; ++i) bottom[i] = static_cast<int>(i);
    std::vector<int> bottom_rev(bottom.rbegin(), bottom.rend());
    s.faces.push_back(bottom_rev);
    if (with_top) {
        std::vector<int> top(n);
        for (std::size_t i = 0; i < n; ++i) top[i] = static_cast<int>(n + i);
        s.faces.push_back(top);
        for (std::size_t i = 0; i < n; ++i) {
            const int a = static_cast<int>(i), b = static_cast<int>((i + 1) % n);
            s.faces.push_back({a, b, static_cast<int>(n + (i + 1) % n), static_cast<int>(n + i)});
        }
    } else {
        const int apex = static_cast<int>(n);
        for (std::size_t i = 0; i < n; ++i)
            s.faces.push_back({static_cast<int>(i), static_cast<int>((i + 1) % n), apex});
    }
}

double triangle_area3(Point3 a, Point3 b, Point3 c) {
    return 0.5 * cross(b - a, c - a).norm();
}

double face_area(const Solid3& s, const std::vector<int>& face) {
    double area = 0.0;
    for (std::size_t i = 1; i + 1 < face.size(); ++i)
        area += triangle_area3(s.vertices[face[0]], s.vertices[face[i]], s.vertices[face[i + 1]]);
    return area;
}

}  // namespace

Plane3 make_plane(Point3 a, Point3 b, Point3 c, const TolerancePolicy& policy) {
    const Vec3 n = cross(b - a, c - a);
    require(n.norm() > policy.abs_tol * std::fmax(1.0, (b - a).norm() * (c - a).norm()),
            ErrorCode::degenerate_input, "plane requires three non-collinear points");
    return Plane3{a, normalize3(n)};
}

Plane3 make_plane_point_normal(Point3 p, Vec3 normal, const TolerancePolicy& policy) {
    require(normal.norm() > policy.abs_tol, ErrorCode::degenerate_input,
            "plane normal must be nonzero");
    return Plane3{p, normalize3(normal)};
}

double polygon3_area(const Polygon3& poly) {
    if (poly.vertices.size() < 3) return 0.0;
    Vec3 acc{};
    const Point3 o = poly.vertices[0];
    for (std::size_t i = 1; i + 1 < poly.vertices.size(); ++i)
        acc = acc + cross(poly.vertices[i] - o, poly.vertices[i + 1] - o);
    return 0.5 * acc.norm();
}

Solid3 make_pyramid(std::vector<Point3> base, Point3 apex, const TolerancePolicy& policy) {
    const Vec3 n = base_normal(base, policy);
    require(std::fabs(dot(apex - base[0], n)) > policy.abs_tol, ErrorCode::degenerate_input,
            "pyramid apex lies in the base plane");
    Solid3 s;
    s.kind = SolidKind::pyramid;
    s.base = base;
    s.apex = apex;
    s.vertices = std::move(base);
    s.vertices.push_back(apex);
    ring_faces(s, s.vertices.size() - 1, /*with_top=*/false);
    return s;
}

Solid3 make_prism(std::vector<Point3> base, Vec3 translation, const TolerancePolicy& policy) {
    const Vec3 n = base_normal(base, policy);
    require(std::fabs(dot(translation, n)) > policy.abs_tol, ErrorCode::degenerate_input,
            "prism translation is parallel to the base plane");
    Solid3 s;
    s.kind = SolidKind::prism;
    s.base = base;
    s.axis = translation;
    s.vertices = base;
    for (const Point3& p : base) s.vertices.push_back(p + translation);
    ring_faces(s, base.size(), /*with_top=*/true);
    return s;
}

Solid3 make_cone(Point3 base_center, double radius, Point3 apex, const TolerancePolicy& policy) {
    require(radius > 0.0 && std::isfinite(radius), ErrorCode::degenerate_input,
            "cone radius must be positive");
    const double h = (apex - base_center).norm();
    require(h > policy.abs_tol, ErrorCode::degenerate_input, "cone apex coincides with the base");
    Solid3 s;
    s.kind = SolidKind::cone;
    s.center = base_center;
    s.radius = radius;
    s.apex = apex;
    s.axis = apex - base_center;  // right cone by construction: base plane _|_ axis
    return s;
}

Solid3 make_cylinder(Point3 base_center, double radius, Point3 top_center,
                     const TolerancePolicy& policy) {
    require(radius > 0.0 && std::isfinite(radius), ErrorCode::degenerate_input,
            "cylinder radius must be positive");
    const Vec3 axis = top_center - base_center;
    require(axis.norm() > policy.abs_tol, ErrorCode::degenerate_input,
            "cylinder height must be positive");
    Solid3 s;
    s.kind = SolidKind::cylinder;
    s.center = base_center;
    s.radius = radius;
    s.axis = axis;
    return s;
}

Solid3 make_sphere(Point3 center, double radius) {
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw ToolError(ErrorCode::degenerate_input, "sphere radius must be positive");
    Solid3 s;
    s.kind = SolidKind::sphere;
    s.center = center;
    s.radius = radius;
    return s;
}

Solid3 make_tetrahedron(Point3 a, Point3 b, Point3 c, const TolerancePolicy& policy) {
    const double ab = (b - a).norm(), bc = (c - b).norm(), ca = (a - c).norm();
    require(ab > policy.abs_tol, ErrorCode::degenerate_input, "tetrahedron seed points coincide");
    require(policy.pass(ab, bc) && policy.pass(bc, ca), ErrorCode::degenerate_input,
            "tetrahedron seed face must be equilateral");
    const Vec3 n = normalize3(cross(b - a, c - a));
    require(n.norm() > 0.5, ErrorCode::degenerate_input, "tetrahedron seed points are collinear");
    const Point3 g = centroid_of({a, b, c});
    const double height = ab * std::sqrt(2.0 / 3.0);
    Solid3 s;
    s.kind = SolidKind::tetrahedron;
    s.base = {a, b, c};
    s.apex = g + n * height;
    s.vertices = {a, b, c, s.apex};
    ring_faces(s, 3, /*with_top=*/false);
    return s;
}

Solid3 make_cube(Point3 a, Point3 b, Point3 c, const TolerancePolicy& policy) {
    const Vec3 u = a - b, v = c - b;  // edges meeting at the middle seed point
    require(u.norm() > policy.abs_tol && v.norm() > policy.abs_tol, ErrorCode::degenerate_input,
            "cube seed points coincide");
    require(policy.pass(u.norm(), v.norm()), ErrorCode::degenerate_input,
            "cube seed points must form a square: unequal edges");
    require(policy.residual_pass(dot(u, v), u.norm() * v.norm()), ErrorCode::degenerate_input,
            "cube seed points must form a square: edges not perpendicular");
    const Point3 d = a + (c - b);  // fourth corner of the seed face
    const Vec3 n = normalize3(cross(v, u)) * u.norm();
    Solid3 s;
    s.kind = SolidKind::cube;
    s.base = {a, b, c, d};
    s.vertices = {a, b, c, d};
    for (const Point3& p : s.base) s.vertices.push_back(p + n);
    s.axis = n;
    ring_faces(s, 4, /*with_top=*/true);
    return s;
}

bool is_polyhedral(const Solid3& s) {
    switch (s.kind) {
        case SolidKind::pyramid:
        case SolidKind::prism:
        case SolidKind::cube:
        case SolidKind::tetrahedron: return true;
        default: return false;
    }
}

namespace {

double base_ring_area(const std::vector<Point3>& ring) {
    return polygon3_area(Polygon3{ring});
}

double base_ring_perimeter(const std::vector<Point3>& ring) {
    double sum = 0.0;
    for (std::size_t i = 0; i < ring.size(); ++i)
        sum += (ring[(i + 1) % ring.size()] - ring[i]).norm();
    return sum;
}

}  // namespace

double volume(const Solid3& s) {
    switch (s.kind) {
        case SolidKind::pyramid: {
            const Vec3 n = normalize3(cross(s.base[1] - s.base[0], s.base[2] - s.base[0]));
            const double h = std::fabs(dot(s.apex - s.base[0], n));
            return base_ring_area(s.base) * h / 3.0;
        }
        case SolidKind::prism: {
            const Vec3 n = normalize3(cross(s.base[1] - s.base[0], s.base[2] - s.base[0]));
            return base_ring_area(s.base) * std::fabs(dot(s.axis, n));
        }
        case SolidKind::cone:
            return kPi * s.radius * s.radius * s.axis.norm() / 3.0;
        case SolidKind::cylinder:
            return kPi * s.radius * s.radius * s.axis.norm();
        case SolidKind::sphere:
            return 4.0 / 3.0 * kPi * s.radius * s.radius * s.radius;
        case SolidKind::tetrahedron: {
            const double a = (s.base[1] - s.base[0]).norm();
            return a * a * a / (6.0 * std::sqrt(2.0));
        }
        case SolidKind::cube: {
            const double a = (s.vertices[1] - s.vertices[0]).norm();
            return a * a * a;
        }
    }
    return 0.0;
}

double surface_area(const Solid3& s) {
    switch (s.kind) {
        case SolidKind::pyramid:
        case SolidKind::prism:
        case SolidKind::tetrahedron:
        case SolidKind::cube: {
            double total = 0.0;
            for (const auto& f : s.faces) total += face_area(s, f);
            return total;
        }
        case SolidKind::cone: {
            const double h = s.axis.norm();
            const double slant = std::sqrt(h * h + s.radius * s.radius);
            return kPi * s.radius * (s.radius + slant);  // base disc + lateral
        }
        case SolidKind::cylinder: {
            const double h = s.axis.norm();
            return 2.0 * kPi * s.radius * (s.radius + h);  // both caps + lateral
        }
        case SolidKind::sphere:
            return 4.0 * kPi * s.radius * s.radius;
    }
    return 0.0;
}

Polygon3 cross_section(const Plane3& plane, const Solid3& s, const TolerancePolicy& policy) {
    if (!is_polyhedral(s))
        throw ToolError(ErrorCode::unsupported_tool,
                        "cross_section supports polyhedral solids only");
    double extent = 0.0;
    for (const Point3& v : s.vertices)
        extent = std::fmax(extent, (v - s.vertices[0]).norm());
    const double eps = std::fmax(policy.abs_tol, 1e-12 * extent);

    std::vector<Point3> hits;
    auto push = [&](Point3 p) {
        for (const Point3& q : hits)
            if (distance3(p, q) <= eps * 8.0) return;
        hits.push_back(p);
    };
    // walk every face edge once (duplicates are removed by push)
    for (const auto& face : s.faces) {
        for (std::size_t i = 0; i < face.size(); ++i) {
            const Point3 a = s.vertices[face[i]];
            const Point3 b = s.vertices[face[(i + 1) % face.size()]];
            const double da = plane.signed_distance(a);
            const double db = plane.signed_distance(b);
            if (std::fabs(da) <= eps) push(a);
            if (std::fabs(db) <= eps) push(b);
            if ((da < -eps && db > eps) || (da > eps && db < -eps)) {
                const double t = da / (da - db);
                push(a + (b - a) * t);
            }
        }
    }
    if (hits.size() < 3)
        throw ToolError(ErrorCode::precondition_failed,
                        "plane does not cut the solid in a polygon");

    // order CCW about the plane normal
    const Point3 c = centroid_of(hits);
    Vec3 ux = hits[0] - c;
    ux = normalize3(ux - plane.normal * dot(ux, plane.normal));
    const Vec3 uy = cross(plane.normal, ux);
    std::sort(hits.begin(), hits.end(), [&](const Point3& p, const Point3& q) {
        const double ap = std::atan2(dot(p - c, uy), dot(p - c, ux));
        const double aq = std::atan2(dot(q - c, uy), dot(q - c, ux));
        return ap < aq;
    });
    return Polygon3{hits};
}

double point_plane_distance(Point3 p, const Plane3& plane) {
    return std::fabs(plane.signed_distance(p));
}

double point_line3_distance(Point3 p, const Line3& l) {
    const Vec3 u = l.direction();
    const Vec3 w = p - l.p1;
    return (w - u * dot(w, u)).norm();
}

double line3_line3_distance(const Line3& a, const Line3& b) {
    const Vec3 u = a.p2 - a.p1, v = b.p2 - b.p1;
    const Vec3 n = cross(u, v);
    if (n.norm() <= 1e-14 * u.norm() * v.norm())
        return point_line3_distance(b.p1, a);  // parallel
    return std::fabs(dot(b.p1 - a.p1, normalize3(n)));
}

double plane_plane_distance(const Plane3& a, const Plane3& b, const TolerancePolicy& policy) {
    if (!policy.residual_pass(cross(a.normal, b.normal).norm(), 1.0)) return 0.0;
    return point_plane_distance(b.point, a);
}

}  // namespace geocanvas
