#include "geocanvas/render.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "geocanvas/calculus.hpp"

namespace geocanvas {

StylePreset preset_defaults(StylePresetKind kind) {
    if (kind == StylePresetKind::textbook) {
        return StylePreset{"#000000", "#000000", "none", 3.0, 1.0, 0.0,
                           false, false, "#ffffff", true, true};
    }
    return StylePreset{"#1565c0", "#424242", "#9e9e9e", 5.0, 2.5, 0.15,
                       true, true, "#f5f5f5", false, false};
}

namespace {

std::string fmt(double v) {
    // fixed 2-decimal screen coordinates keep documents byte-stable
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    std::string s(buf);
    if (s == "-0.00") s = "0.00";
    return s;
}

struct Painter {
    const CanvasState& st;
    const Viewport& vp;
    StylePreset preset;
    std::ostringstream out;

    double sx(double x) const {
        return (x - vp.xmin) / (vp.xmax - vp.xmin) * static_cast<double>(vp.width);
    }
    double sy(double y) const {
        return static_cast<double>(vp.height) -
               (y - vp.ymin) / (vp.ymax - vp.ymin) * static_cast<double>(vp.height);
    }

    // 3D orthographic projection: rotate about z then x, drop depth
    Point2 project3(Point3 p) const {
        const View3D view = st.view.value_or(View3D{});
        const double az = deg_to_rad(view.z_angle), ax = deg_to_rad(view.x_angle);
        const double cz = std::cos(az), szn = std::sin(az);
        const double cx = std::cos(ax), sxn = std::sin(ax);
        const double x1 = cz * p.x - szn * p.y;
        const double y1 = szn * p.x + cz * p.y;
        const double z1 = p.z;
        const double y2 = cx * y1 - sxn * z1;
        const double z2 = sxn * y1 + cx * z1;
        (void)y2;
        const double cxp = static_cast<double>(vp.width) / 2.0;
        const double cyp = static_cast<double>(vp.height) / 2.0;
        return {cxp + x1 * view.scale, cyp - z2 * view.scale};
    }

    double depth3(Point3 p) const {
        const View3D view = st.view.value_or(View3D{});
        const double az = deg_to_rad(view.z_angle), ax = deg_to_rad(view.x_angle);
        const double cz = std::cos(az), szn = std::sin(az);
        const double cx = std::cos(ax), sxn = std::sin(ax);
        const double x1 = cz * p.x - szn * p.y;
        const double y1 = szn * p.x + cz * p.y;
        (void)x1;
        return cx * y1 - sxn * p.z;  // larger = farther from the camera
    }

    std::string style_str(const CanvasObject& obj, const char* key,
                          const std::string& fallback) const {
        if (obj.style.contains(key) && obj.style.at(key).is_string())
            return obj.style.at(key).get<std::string>();
        return fallback;
    }
    double style_num(const CanvasObject& obj, const char* key, double fallback) const {
        if (obj.style.contains(key) && obj.style.at(key).is_number())
            return obj.style.at(key).get<double>();
        return fallback;
    }
    int style_int(const CanvasObject& obj, const char* key, int fallback) const {
        if (obj.style.contains(key) && obj.style.at(key).is_number_integer())
            return obj.style.at(key).get<int>();
        return fallback;
    }
    bool style_bool(const CanvasObject& obj, const char* key, bool fallback) const {
        if (obj.style.contains(key) && obj.style.at(key).is_boolean())
            return obj.style.at(key).get<bool>();
        return fallback;
    }

    std::string dash(const CanvasObject& obj) const {
        const std::string s = style_str(obj, "line_style", "solid");
        if (s == "dashed") return " stroke-dasharray=\"8,5\"";
        if (s == "dotted") return " stroke-dasharray=\"2,4\"";
        return "";
    }

    std::string stroke_attrs(const CanvasObject& obj) const {
        std::string color = style_str(obj, "color", preset.line_color);
        const double width = style_num(obj, "thickness", preset.line_thickness);
        return " stroke=\"" + color + "\" stroke-width=\"" + fmt(width) + "\" fill=\"none\"" +
               dash(obj);
    }

    void polyline(const std::vector<Point2>& pts, const CanvasObject& obj, bool close,
                  bool filled) {
        if (pts.size() < 2) return;
        out << "  <path d=\"M " << fmt(sx(pts[0].x)) << " " << fmt(sy(pts[0].y));
        for (std::size_t i = 1; i < pts.size(); ++i)
            out << " L " << fmt(sx(pts[i].x)) << " " << fmt(sy(pts[i].y));
        if (close) out << " Z";
        std::string color = style_str(obj, "color", preset.line_color);
        const double width = style_num(obj, "thickness", preset.line_thickness);
        out << "\" stroke=\"" << color << "\" stroke-width=\"" << fmt(width) << "\"";
        out << dash(obj);
        if (filled) {
            const double opacity = style_num(obj, "fill_opacity", preset.fill_opacity);
            const std::string fill = opacity > 0.0
                                         ? style_str(obj, "color", preset.polygon_fill)
                                         : std::string("none");
            out << " fill=\"" << fill << "\"";
            if (opacity > 0.0) out << " fill-opacity=\"" << fmt(opacity) << "\"";
        } else {
            out << " fill=\"none\"";
        }
        out << "/>\n";
    }

    // clip an infinite line to the viewport box
    std::vector<Point2> clip_line(Point2 p, Vec2 d, double t_lo, double t_hi) const {
        double lo = t_lo, hi = t_hi;
        auto cut = [&](double q, double dq, double bound_lo, double bound_hi) {
            if (std::fabs(dq) < 1e-15) return q >= bound_lo - 1e-12 && q <= bound_hi + 1e-12;
            double t1 = (bound_lo - q) / dq, t2 = (bound_hi - q) / dq;
            if (t1 > t2) std::swap(t1, t2);
            lo = std::fmax(lo, t1);
            hi = std::fmin(hi, t2);
            return true;
        };
        if (!cut(p.x, d.x, vp.xmin, vp.xmax) || !cut(p.y, d.y, vp.ymin, vp.ymax) || lo > hi)
            return {};
        return {p + d * lo, p + d * hi};
    }

    void draw_point_marker(Point2 p, const CanvasObject& obj) {
        const double size = style_num(obj, "point_size", preset.point_size);
        const std::string color = style_str(obj, "color", preset.point_color);
        const int marker = style_int(obj, "point_style", 0);
        const double cx = sx(p.x), cy = sy(p.y);
        switch (marker) {
            case 2:  // cross
                out << "  <path d=\"M " << fmt(cx - size) << " " << fmt(cy - size) << " L "
                    << fmt(cx + size) << " " << fmt(cy + size) << " M " << fmt(cx - size) << " "
                    << fmt(cy + size) << " L " << fmt(cx + size) << " " << fmt(cy - size)
                    << "\" stroke=\"" << color << "\" stroke-width=\"1.5\" fill=\"none\"/>\n";
                return;
            case 3:  // plus
                out << "  <path d=\"M " << fmt(cx - size) << " " << fmt(cy) << " L "
                    << fmt(cx + size) << " " << fmt(cy) << " M " << fmt(cx) << " "
                    << fmt(cy - size) << " L " << fmt(cx) << " " << fmt(cy + size)
                    << "\" stroke=\"" << color << "\" stroke-width=\"1.5\" fill=\"none\"/>\n";
                return;
            case 4:  // diamond
                out << "  <path d=\"M " << fmt(cx) << " " << fmt(cy - size) << " L "
                    << fmt(cx + size) << " " << fmt(cy) << " L " << fmt(cx) << " "
                    << fmt(cy + size) << " L " << fmt(cx - size) << " " << fmt(cy)
                    << " Z\" fill=\"" << color << "\"/>\n";
                return;
            case 1:  // open circle
                out << "  <circle cx=\"" << fmt(cx) << "\" cy=\"" << fmt(cy) << "\" r=\""
                    << fmt(size) << "\" stroke=\"" << color
                    << "\" stroke-width=\"1.5\" fill=\"" << preset.background << "\"/>\n";
                return;
            default:  // filled dot
                out << "  <circle cx=\"" << fmt(cx) << "\" cy=\"" << fmt(cy) << "\" r=\""
                    << fmt(size) << "\" fill=\"" << color << "\"/>\n";
                return;
        }
    }

    /// Label offset away from the average direction of incident segments.
    Vec2 label_offset(const CanvasObject& obj, Point2 at) const {
        Vec2 acc{};
        for (const std::string& name : st.order) {
            const CanvasObject& other = st.objects.at(name);
            if (other.is_list || other.values.empty()) continue;
            const Line2* l = std::get_if<Line2>(&other.single());
            if (!l) continue;
            const auto& parents = other.definition.parents;
            if (std::find(parents.begin(), parents.end(), obj.name) == parents.end()) continue;
            const Point2 far = distance(l->p1, at) > distance(l->p2, at) ? l->p1 : l->p2;
            if (distance(far, at) > 1e-12) acc = acc + normalize(far - at);
        }
        if (acc.norm() < 1e-9) return {6.0, -6.0};
        const Vec2 away = normalize(acc * -1.0);
        return {away.x * 6.0, -away.y * 6.0};
    }

    void draw_label(const CanvasObject& obj, Point2 at) {
        const bool visible = style_bool(obj, "label_visible",
                                        obj.kind == "point" || obj.kind == "point3d");
        if (!visible) return;
        const int mode = style_int(obj, "label_mode", 0);
        std::string text;
        switch (mode) {
            case 1: text = obj.name + " = " + value_brief(obj.single()); break;
            case 2: text = value_brief(obj.single()); break;
            case 3: text = style_str(obj, "caption", obj.name); break;
            default: text = obj.name; break;
        }
        const Vec2 off = label_offset(obj, at);
        out << "  <text x=\"" << fmt(sx(at.x) + off.x) << "\" y=\"" << fmt(sy(at.y) + off.y)
            << "\" font-size=\"12\" font-family=\"sans-serif\"";
        if (preset.italic_labels) out << " font-style=\"italic\"";
        out << " fill=\"" << style_str(obj, "color", preset.point_color) << "\">" << text
            << "</text>\n";
    }
};

std::vector<Point2> sample_graph(const FunctionGraph& g, double x0, double x1, int n) {
    std::vector<Point2> pts;
    for (int i = 0; i < n; ++i) {
        const double x = x0 + (x1 - x0) * static_cast<double>(i) / static_cast<double>(n - 1);
        Scalar y = g.eval(x);
        if (y.is_defined())
            pts.push_back({x, y.value()});
        else if (!pts.empty() && pts.back().x < x)
            pts.push_back({std::nan(""), std::nan("")});  // break marker
    }
    return pts;
}

void accumulate_bounds(const Value& v, double& xmin, double& xmax, double& ymin, double& ymax,
                       const CanvasState& st) {
    auto grow = [&](double x, double y) {
        xmin = std::fmin(xmin, x);
        xmax = std::fmax(xmax, x);
        ymin = std::fmin(ymin, y);
        ymax = std::fmax(ymax, y);
    };
    if (const Point2* p = std::get_if<Point2>(&v)) grow(p->x, p->y);
    if (const Line2* l = std::get_if<Line2>(&v)) {
        grow(l->p1.x, l->p1.y);
        grow(l->p2.x, l->p2.y);
    }
    if (const Circle2* c = std::get_if<Circle2>(&v)) {
        grow(c->center.x - c->radius, c->center.y - c->radius);
        grow(c->center.x + c->radius, c->center.y + c->radius);
    }
    if (const Arc2* a = std::get_if<Arc2>(&v)) {
        grow(a->circle.center.x - a->circle.radius, a->circle.center.y - a->circle.radius);
        grow(a->circle.center.x + a->circle.radius, a->circle.center.y + a->circle.radius);
    }
    if (const Polygon2* poly = std::get_if<Polygon2>(&v))
        for (const Point2& p : poly->vertices) grow(p.x, p.y);
    if (const Conic2* c = std::get_if<Conic2>(&v)) {
        grow(c->focus1.x, c->focus1.y);
        if (c->kind != ConicKind::parabola) {
            grow(c->focus2.x, c->focus2.y);
            grow(c->point_on.x, c->point_on.y);
        }
    }
    if (const TextObj* t = std::get_if<TextObj>(&v))
        if (!t->is_3d) grow(t->x, t->y);
    (void)st;
}

double nice_step(double span) {
    const double raw = span / 10.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (raw <= m * mag) return m * mag;
    return 10.0 * mag;
}

}  // namespace

Viewport auto_viewport(const CanvasState& state, int width, int height) {
    double xmin = std::numeric_limits<double>::infinity();
    double xmax = -std::numeric_limits<double>::infinity();
    double ymin = xmin, ymax = xmax;
    for (const std::string& name : state.order) {
        const CanvasObject& obj = state.objects.at(name);
        for (const Value& v : obj.values)
            if (is_defined_value(v)) accumulate_bounds(v, xmin, xmax, ymin, ymax, state);
    }
    Viewport vp;
    vp.width = width;
    vp.height = height;
    if (state.canvas_style.contains("bounds")) {
        const Json& b = state.canvas_style.at("bounds");
        vp.xmin = b.at(0).get<double>();
        vp.xmax = b.at(1).get<double>();
        vp.ymin = b.at(2).get<double>();
        vp.ymax = b.at(3).get<double>();
        return vp;
    }
    if (!std::isfinite(xmin) || !std::isfinite(ymin) || xmax - xmin < 1e-9 ||
        ymax - ymin < 1e-9) {
        return vp;  // empty canvas: fixed default window
    }
    const double mx = 0.1 * (xmax - xmin), my = 0.1 * (ymax - ymin);
    vp.xmin = xmin - mx;
    vp.xmax = xmax + mx;
    vp.ymin = ymin - my;
    vp.ymax = ymax + my;
    return vp;
}

CanvasState apply_textbook_preset(const CanvasState& state) {
    CanvasState next = state;
    next.style_preset = StylePresetKind::textbook;
    const StylePreset preset = preset_defaults(StylePresetKind::textbook);
    for (const std::string& name : next.order) {
        CanvasObject& obj = next.objects.at(name);
        obj.style["color"] = preset.line_color;
        obj.style["thickness"] = preset.line_thickness;
        obj.style["point_size"] = preset.point_size;
        obj.style["fill_opacity"] = preset.fill_opacity;
    }
    next.canvas_style["axes"] = false;
    next.canvas_style["grid"] = false;
    return next;
}

std::string render_svg(const CanvasState& state, const Viewport& vp) {
    Painter painter{state, vp, preset_defaults(state.style_preset), {}};
    std::ostringstream& out = painter.out;

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << vp.width
        << "\" height=\"" << vp.height << "\" viewBox=\"0 0 " << vp.width << " " << vp.height
        << "\">\n";
    out << "  <rect x=\"0\" y=\"0\" width=\"" << vp.width << "\" height=\"" << vp.height
        << "\" fill=\"" << painter.preset.background << "\"/>\n";

    const bool axes = state.canvas_style.value("axes", painter.preset.axes);
    const bool grid = state.canvas_style.value("grid", painter.preset.grid);
    if (grid) {
        const double step = nice_step(std::fmax(vp.xmax - vp.xmin, vp.ymax - vp.ymin));
        for (double x = std::ceil(vp.xmin / step) * step; x <= vp.xmax; x += step)
            out << "  <line x1=\"" << fmt(painter.sx(x)) << "\" y1=\"0\" x2=\""
                << fmt(painter.sx(x)) << "\" y2=\"" << vp.height
                << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        for (double y = std::ceil(vp.ymin / step) * step; y <= vp.ymax; y += step)
            out << "  <line x1=\"0\" y1=\"" << fmt(painter.sy(y)) << "\" x2=\"" << vp.width
                << "\" y2=\"" << fmt(painter.sy(y))
                << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    }
    if (axes) {
        if (vp.ymin <= 0.0 && vp.ymax >= 0.0)
            out << "  <line x1=\"0\" y1=\"" << fmt(painter.sy(0.0)) << "\" x2=\"" << vp.width
                << "\" y2=\"" << fmt(painter.sy(0.0))
                << "\" stroke=\"#888888\" stroke-width=\"1\"/>\n";
        if (vp.xmin <= 0.0 && vp.xmax >= 0.0)
            out << "  <line x1=\"" << fmt(painter.sx(0.0)) << "\" y1=\"0\" x2=\""
                << fmt(painter.sx(0.0)) << "\" y2=\"" << vp.height
                << "\" stroke=\"#888888\" stroke-width=\"1\"/>\n";
    }

    // right-angle marks sit under the geometry
    for (const auto& mark : state.right_angle_marks) {
        if (!state.has(mark[0]) || !state.has(mark[1]) || !state.has(mark[2])) continue;
        const Point2* a = std::get_if<Point2>(&state.at(mark[0]).single());
        const Point2* b = std::get_if<Point2>(&state.at(mark[1]).single());
        const Point2* c = std::get_if<Point2>(&state.at(mark[2]).single());
        if (!a || !b || !c) continue;
        const Vec2 u = normalize(*a - *b), v = normalize(*c - *b);
        const double side = 0.4;
        const Point2 p1 = *b + u * side;
        const Point2 p2 = p1 + v * side;
        const Point2 p3 = *b + v * side;
        painter.out << "  <path d=\"M " << fmt(painter.sx(p1.x)) << " " << fmt(painter.sy(p1.y))
                    << " L " << fmt(painter.sx(p2.x)) << " " << fmt(painter.sy(p2.y)) << " L "
                    << fmt(painter.sx(p3.x)) << " " << fmt(painter.sy(p3.y))
                    << "\" stroke=\"#666666\" stroke-width=\"1\" fill=\"none\"/>\n";
    }

    for (const std::string& name : state.order) {
        const CanvasObject& obj = state.objects.at(name);
        if (!painter.style_bool(obj, "visible", true)) continue;
        for (const Value& v : obj.values) {
            if (!is_defined_value(v)) continue;  // undefined objects are skipped
            if (const Point2* p = std::get_if<Point2>(&v)) {
                painter.draw_point_marker(*p, obj);
                if (!obj.is_list) painter.draw_label(obj, *p);
            } else if (const Line2* l = std::get_if<Line2>(&v)) {
                std::vector<Point2> pts;
                const Vec2 d = l->p2 - l->p1;
                switch (l->kind) {
                    case LineKind::segment:
                    case LineKind::vector: pts = {l->p1, l->p2}; break;
                    case LineKind::ray:
                        pts = painter.clip_line(l->p1, d, 0.0, 1e9);
                        break;
                    case LineKind::line:
                        pts = painter.clip_line(l->p1, d, -1e9, 1e9);
                        break;
                }
                painter.polyline(pts, obj, false, false);
                if (l->kind == LineKind::vector) {
                    // arrowhead
                    const Vec2 u = l->direction();
                    const Vec2 n = rot90_ccw(u);
                    const double ah = 0.25;
                    const Point2 tip = l->p2;
                    const Point2 w1 = tip + (u * -ah) + (n * (ah * 0.5));
                    const Point2 w2 = tip + (u * -ah) + (n * (-ah * 0.5));
                    painter.polyline({w1, tip, w2}, obj, false, false);
                }
            } else if (const Circle2* c = std::get_if<Circle2>(&v)) {
                // world-to-screen scales may differ per axis
                const double opacity = painter.style_num(obj, "fill_opacity", 0.0);
                out << "  <ellipse cx=\"" << fmt(painter.sx(c->center.x)) << "\" cy=\""
                    << fmt(painter.sy(c->center.y)) << "\" rx=\""
                    << fmt(c->radius / (vp.xmax - vp.xmin) * vp.width) << "\" ry=\""
                    << fmt(c->radius / (vp.ymax - vp.ymin) * vp.height) << "\""
                    << painter.stroke_attrs(obj);
                if (opacity > 0.0)
                    out << " fill-opacity=\"" << fmt(opacity) << "\"";
                out << "/>\n";
            } else if (const Arc2* a = std::get_if<Arc2>(&v)) {
                std::vector<Point2> pts;
                const int n = 64;
                for (int i = 0; i <= n; ++i)
                    pts.push_back(a->point_at(a->start_angle + a->span() * i / n));
                if (a->kind == ArcKind::sector) {
                    pts.insert(pts.begin(), a->circle.center);
                    pts.push_back(a->circle.center);
                    painter.polyline(pts, obj, true, true);
                } else {
                    painter.polyline(pts, obj, false, false);
                }
            } else if (const Polygon2* poly = std::get_if<Polygon2>(&v)) {
                std::vector<Point2> pts = poly->vertices;
                painter.polyline(pts, obj, true, true);
            } else if (const Conic2* conic = std::get_if<Conic2>(&v)) {
                // vertical scan: up to two chains of conic points across the view
                std::vector<Point2> upper, lower;
                const int cols = 192;
                std::vector<std::vector<Point2>> chains;
                std::vector<Point2> cur_up, cur_lo;
                for (int i = 0; i <= cols; ++i) {
                    const double x = vp.xmin + (vp.xmax - vp.xmin) * i / cols;
                    const auto& k = conic->coef;
                    const double A = k[2];
                    const double B = k[1] * x + k[4];
                    const double C = k[0] * x * x + k[3] * x + k[5];
                    std::vector<double> ys;
                    if (std::fabs(A) > 1e-14) {
                        const double disc = B * B - 4 * A * C;
                        if (disc >= 0.0) {
                            const double root = std::sqrt(disc);
                            ys = {(-B - root) / (2 * A), (-B + root) / (2 * A)};
                            std::sort(ys.begin(), ys.end());
                        }
                    } else if (std::fabs(B) > 1e-14) {
                        ys = {-C / B};
                    }
                    if (ys.size() == 2) {
                        cur_lo.push_back({x, ys[0]});
                        cur_up.push_back({x, ys[1]});
                    } else if (ys.size() == 1) {
                        cur_lo.push_back({x, ys[0]});
                    } else {
                        if (cur_lo.size() > 1) chains.push_back(cur_lo);
                        if (cur_up.size() > 1) chains.push_back(cur_up);
                        cur_lo.clear();
                        cur_up.clear();
                    }
                }
                if (cur_lo.size() > 1) chains.push_back(cur_lo);
                if (cur_up.size() > 1) chains.push_back(cur_up);
                for (const auto& chain : chains) painter.polyline(chain, obj, false, false);
            } else if (const FunctionGraph* g = std::get_if<FunctionGraph>(&v)) {
                std::vector<Point2> chain;
                for (const Point2& p : sample_graph(*g, vp.xmin, vp.xmax, 512)) {
                    if (std::isnan(p.x)) {
                        painter.polyline(chain, obj, false, false);
                        chain.clear();
                    } else {
                        chain.push_back(p);
                    }
                }
                painter.polyline(chain, obj, false, false);
            } else if (const ParamCurve2* curve = std::get_if<ParamCurve2>(&v)) {
                std::vector<Point2> chain;
                const int n = 256;
                for (int i = 0; i <= n; ++i) {
                    const double t = curve->t0 + (curve->t1 - curve->t0) * i / n;
                    Scalar x = eval_expr(curve->x_body, {{curve->var, t}});
                    Scalar y = eval_expr(curve->y_body, {{curve->var, t}});
                    if (x.is_defined() && y.is_defined()) chain.push_back({x.value(), y.value()});
                }
                painter.polyline(chain, obj, false, false);
            } else if (const Region2* region = std::get_if<Region2>(&v)) {
                // coarse cell shading, rows merged into rects
                const int cells = 48;
                const double dx = (vp.xmax - vp.xmin) / cells;
                const double dy = (vp.ymax - vp.ymin) / cells;
                const std::string color = painter.style_str(obj, "color", "#64b5f6");
                for (int row = 0; row < cells; ++row) {
                    const double y = vp.ymin + dy * (row + 0.5);
                    int start = -1;
                    for (int col = 0; col <= cells; ++col) {
                        const double x = vp.xmin + dx * (col + 0.5);
                        const bool inside =
                            col < cells && in_region(*region, Point2{x, y}, TolerancePolicy{});
                        if (inside && start < 0) start = col;
                        if (!inside && start >= 0) {
                            const double x0 = vp.xmin + dx * start;
                            const double x1 = vp.xmin + dx * col;
                            out << "  <rect x=\"" << fmt(painter.sx(x0)) << "\" y=\""
                                << fmt(painter.sy(y + dy / 2)) << "\" width=\""
                                << fmt((x1 - x0) / (vp.xmax - vp.xmin) * vp.width)
                                << "\" height=\"" << fmt(dy / (vp.ymax - vp.ymin) * vp.height)
                                << "\" fill=\"" << color << "\" fill-opacity=\"0.25\"/>\n";
                            start = -1;
                        }
                    }
                }
            } else if (const TextObj* text = std::get_if<TextObj>(&v)) {
                Point2 at = text->is_3d
                                ? painter.project3(Point3{text->x, text->y, text->z})
                                : Point2{painter.sx(text->x), painter.sy(text->y)};
                out << "  <text x=\"" << fmt(at.x) << "\" y=\"" << fmt(at.y)
                    << "\" font-size=\"13\" font-family=\"sans-serif\" fill=\""
                    << painter.style_str(obj, "color", painter.preset.line_color) << "\">"
                    << text->text << "</text>\n";
            } else if (const Point3* p3 = std::get_if<Point3>(&v)) {
                const Point2 s = painter.project3(*p3);
                const double size = painter.style_num(obj, "point_size",
                                                      painter.preset.point_size);
                out << "  <circle cx=\"" << fmt(s.x) << "\" cy=\"" << fmt(s.y) << "\" r=\""
                    << fmt(size) << "\" fill=\""
                    << painter.style_str(obj, "color", painter.preset.point_color) << "\"/>\n";
                if (painter.style_bool(obj, "label_visible", true))
                    out << "  <text x=\"" << fmt(s.x + 6) << "\" y=\"" << fmt(s.y - 6)
                        << "\" font-size=\"12\" font-family=\"sans-serif\" fill=\""
                        << painter.style_str(obj, "color", painter.preset.point_color) << "\">"
                        << obj.name << "</text>\n";
            } else if (const Line3* l3 = std::get_if<Line3>(&v)) {
                const Point2 a = painter.project3(l3->p1);
                const Point2 b = painter.project3(l3->p2);
                out << "  <line x1=\"" << fmt(a.x) << "\" y1=\"" << fmt(a.y) << "\" x2=\""
                    << fmt(b.x) << "\" y2=\"" << fmt(b.y) << "\""
                    << painter.stroke_attrs(obj) << "/>\n";
            } else if (const Polygon3* poly3 = std::get_if<Polygon3>(&v)) {
                std::ostringstream path;
                for (std::size_t i = 0; i < poly3->vertices.size(); ++i) {
                    const Point2 s = painter.project3(poly3->vertices[i]);
                    path << (i == 0 ? "M " : " L ") << fmt(s.x) << " " << fmt(s.y);
                }
                path << " Z";
                out << "  <path d=\"" << path.str() << "\"" << painter.stroke_attrs(obj)
                    << "/>\n";
            } else if (const Solid3* solid = std::get_if<Solid3>(&v)) {
                if (is_polyhedral(*solid)) {
                    // hidden edges: both adjacent faces point away from the camera
                    std::vector<bool> face_front;
                    for (const auto& face : solid->faces) {
                        const Point3 a = solid->vertices[face[0]];
                        const Point3 b = solid->vertices[face[1]];
                        const Point3 c = solid->vertices[face[2]];
                        const Point3 centroid{(a.x + b.x + c.x) / 3, (a.y + b.y + c.y) / 3,
                                              (a.z + b.z + c.z) / 3};
                        const Vec3 n = cross(b - a, c - a);
                        const double d0 = painter.depth3(centroid);
                        const double d1 = painter.depth3(centroid + normalize3(n) * 0.01);
                        face_front.push_back(d1 < d0);  // normal points toward the camera
                    }
                    std::map<std::pair<int, int>, bool> edge_visible;
                    for (std::size_t f = 0; f < solid->faces.size(); ++f) {
                        const auto& face = solid->faces[f];
                        for (std::size_t i = 0; i < face.size(); ++i) {
                            int u = face[i], w = face[(i + 1) % face.size()];
                            if (u > w) std::swap(u, w);
                            edge_visible[{u, w}] =
                                edge_visible[{u, w}] || face_front[f];
                        }
                    }
                    for (const auto& [edge, visible] : edge_visible) {
                        const Point2 a = painter.project3(solid->vertices[edge.first]);
                        const Point2 b = painter.project3(solid->vertices[edge.second]);
                        out << "  <line x1=\"" << fmt(a.x) << "\" y1=\"" << fmt(a.y)
                            << "\" x2=\"" << fmt(b.x) << "\" y2=\"" << fmt(b.y)
                            << "\" stroke=\""
                            << painter.style_str(obj, "color", painter.preset.line_color)
                            << "\" stroke-width=\""
                            << fmt(painter.style_num(obj, "thickness",
                                                     painter.preset.line_thickness))
                            << "\"";
                        if (!visible && painter.preset.dashed_hidden_edges)
                            out << " stroke-dasharray=\"6,4\"";
                        out << " fill=\"none\"/>\n";
                    }
                } else if (solid->kind == SolidKind::sphere) {
                    const Point2 c = painter.project3(solid->center);
                    const View3D view = state.view.value_or(View3D{});
                    out << "  <circle cx=\"" << fmt(c.x) << "\" cy=\"" << fmt(c.y) << "\" r=\""
                        << fmt(solid->radius * view.scale) << "\"" << painter.stroke_attrs(obj)
                        << "/>\n";
                } else {
                    // cone / cylinder: projected base ring(s) plus silhouette lines
                    const Vec3 axis = solid->axis;
                    const Vec3 u0 = normalize3(cross(axis, Vec3{0, 0, 1}));
                    const Vec3 u = u0.norm() < 0.5 ? normalize3(cross(axis, Vec3{0, 1, 0})) : u0;
                    const Vec3 w = normalize3(cross(axis, u));
                    auto ring = [&](Point3 center) {
                        std::vector<Point2> pts;
                        for (int i = 0; i <= 48; ++i) {
                            const double ang = 2.0 * kPi * i / 48;
                            const Point3 p = center + u * (solid->radius * std::cos(ang)) +
                                             w * (solid->radius * std::sin(ang));
                            const Point2 s = painter.project3(p);
                            pts.push_back({s.x, s.y});
                        }
                        std::ostringstream path;
                        for (std::size_t i = 0; i < pts.size(); ++i)
                            path << (i == 0 ? "M " : " L ") << fmt(pts[i].x) << " "
                                 << fmt(pts[i].y);
                        out << "  <path d=\"" << path.str() << "\""
                            << painter.stroke_attrs(obj) << "/>\n";
                        return pts;
                    };
                    std::vector<Point2> base = ring(solid->center);
                    auto extremes = [&](const std::vector<Point2>& pts) {
                        std::size_t lo = 0, hi = 0;
                        for (std::size_t i = 0; i < pts.size(); ++i) {
                            if (pts[i].x < pts[lo].x) lo = i;
                            if (pts[i].x > pts[hi].x) hi = i;
                        }
                        return std::pair<Point2, Point2>{pts[lo], pts[hi]};
                    };
                    const auto [bl, br] = extremes(base);
                    if (solid->kind == SolidKind::cone) {
                        const Point2 apex = painter.project3(solid->apex);
                        out << "  <line x1=\"" << fmt(bl.x) << "\" y1=\"" << fmt(bl.y)
                            << "\" x2=\"" << fmt(apex.x) << "\" y2=\"" << fmt(apex.y) << "\""
                            << painter.stroke_attrs(obj) << "/>\n";
                        out << "  <line x1=\"" << fmt(br.x) << "\" y1=\"" << fmt(br.y)
                            << "\" x2=\"" << fmt(apex.x) << "\" y2=\"" << fmt(apex.y) << "\""
                            << painter.stroke_attrs(obj) << "/>\n";
                    } else {
                        std::vector<Point2> top = ring(solid->center + solid->axis);
                        const auto [tl, tr] = extremes(top);
                        out << "  <line x1=\"" << fmt(bl.x) << "\" y1=\"" << fmt(bl.y)
                            << "\" x2=\"" << fmt(tl.x) << "\" y2=\"" << fmt(tl.y) << "\""
                            << painter.stroke_attrs(obj) << "/>\n";
                        out << "  <line x1=\"" << fmt(br.x) << "\" y1=\"" << fmt(br.y)
                            << "\" x2=\"" << fmt(tr.x) << "\" y2=\"" << fmt(tr.y) << "\""
                            << painter.stroke_attrs(obj) << "/>\n";
                    }
                }
            } else if (std::holds_alternative<double>(v) &&
                       obj.definition.tool == "add_integral_shade") {
                // shaded area between the integrand and the x-axis
                const Json& args = obj.definition.args;
                const std::string fname = args.value("function", std::string());
                if (state.has(fname)) {
                    if (const FunctionGraph* g =
                            std::get_if<FunctionGraph>(&state.at(fname).single())) {
                        const double a = args.at("a").get<double>();
                        const double b = args.at("b").get<double>();
                        std::vector<Point2> chain{{a, 0.0}};
                        for (const Point2& p : sample_graph(*g, a, b, 128))
                            if (!std::isnan(p.x)) chain.push_back(p);
                        chain.push_back({b, 0.0});
                        CanvasObject shaded = obj;
                        shaded.style["fill_opacity"] =
                            painter.style_num(obj, "fill_opacity", 0.3);
                        painter.polyline(chain, shaded, true, true);
                    }
                }
            } else if (std::holds_alternative<double>(v) && obj.kind == "angle") {
                // angle marker arc at the vertex
                const Json& args = obj.definition.args;
                const std::string an = args.value("a", std::string());
                const std::string bn = args.value("b", std::string());
                const std::string cn = args.value("c", std::string());
                if (state.has(an) && state.has(bn) && state.has(cn)) {
                    const Point2* pa = std::get_if<Point2>(&state.at(an).single());
                    const Point2* pb = std::get_if<Point2>(&state.at(bn).single());
                    const Point2* pc = std::get_if<Point2>(&state.at(cn).single());
                    if (pa && pb && pc) {
                        const double a0 = std::atan2(pa->y - pb->y, pa->x - pb->x);
                        const double span = deg_to_rad(std::get<double>(v));
                        std::vector<Point2> chain;
                        for (int i = 0; i <= 24; ++i) {
                            const double ang = a0 + span * i / 24;
                            chain.push_back(
                                {pb->x + 0.6 * std::cos(ang), pb->y + 0.6 * std::sin(ang)});
                        }
                        painter.polyline(chain, obj, false, false);
                    }
                }
            }
        }
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace geocanvas
