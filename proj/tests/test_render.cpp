#include <doctest.h>

#include "geocanvas/render.hpp"
#include "geocanvas/toolspec.hpp"

using namespace geocanvas;

namespace {

const Catalog& catalog() {
    static const Catalog c = build_catalog(CatalogProfile::render_pipeline);
    return c;
}

Observation run(CanvasState& st, const std::string& tool, const Json& args) {
    Action a = validate_call(catalog(), tool, args);
    auto [next, obs] = apply_action(st, a);
    st = std::move(next);
    return obs;
}

CanvasState dag345() {
    CanvasState st;
    run(st, "add_point", {{"name", "A"}, {"x", 0}, {"y", 0}});
    run(st, "add_point", {{"name", "B"}, {"x", 4}, {"y", 0}});
    run(st, "add_segment", {{"name", "AB"}, {"p1", "A"}, {"p2", "B"}});
    run(st, "add_perpendicular_line", {{"name", "L"}, {"point", "A"}, {"line", "AB"}});
    run(st, "add_circle", {{"name", "c"}, {"center", "A"}, {"radius", 3}});
    run(st, "add_intersect", {{"name", "P"}, {"obj1", "L"}, {"obj2", "c"}, {"index", 1}});
    return st;
}

}  // namespace

TEST_CASE("SVG output is a pure function of state and viewport") {
    CanvasState st = dag345();
    Viewport vp = auto_viewport(st);
    const std::string once = render_svg(st, vp);
    CHECK(render_svg(st, vp) == once);
    CHECK(once.rfind("<svg", 0) == 0);
    // object census: 3 point markers, the circle, segment + line paths
    std::size_t markers = 0, pos = 0;
    while ((pos = once.find("<circle", pos)) != std::string::npos) {
        ++markers;
        pos += 7;
    }
    CHECK(markers == 3);  // A, B, P markers
    CHECK(once.find("<ellipse") != std::string::npos);  // circle c
    CHECK(once.find("<path") != std::string::npos);
}

TEST_CASE("empty canvas under the textbook preset: white background, no axes") {
    CanvasState empty;
    empty = apply_textbook_preset(empty);
    const std::string svg = render_svg(empty, auto_viewport(empty));
    CHECK(svg.find("#ffffff") != std::string::npos);
    CHECK(svg.find("stroke=\"#888888\"") == std::string::npos);  // axes hidden
    CHECK(svg.find("stroke=\"#dddddd\"") == std::string::npos);  // grid hidden
}

TEST_CASE("standard preset shows axes and grid") {
    CanvasState st = dag345();
    const std::string svg = render_svg(st, auto_viewport(st));
    CHECK(svg.find("stroke=\"#888888\"") != std::string::npos);
    CHECK(svg.find("stroke=\"#dddddd\"") != std::string::npos);
    CHECK(svg.find("#f5f5f5") != std::string::npos);
}

TEST_CASE("textbook preset is idempotent and repaints existing objects") {
    CanvasState st = dag345();
    CanvasState once = apply_textbook_preset(st);
    CanvasState twice = apply_textbook_preset(once);
    CHECK(dump_canonical(export_state(once)) == dump_canonical(export_state(twice)));
    CHECK(once.style_preset == StylePresetKind::textbook);
    CHECK(once.at("AB").style.at("color") == "#000000");

    // geometry projection unchanged by the preset
    CHECK(dump_canonical(export_geometry_only(st)) ==
          dump_canonical(export_geometry_only(once)));
}

TEST_CASE("render tools mutate style only, never geometry or the DAG") {
    CanvasState st = dag345();
    const std::string geometry_before = dump_canonical(export_geometry_only(st));

    Observation obs = run(st, "render_set_color", {{"obj", "AB"}, {"color", "#ff0000"}});
    CHECK(obs.type == Observation::Type::style_changed);
    run(st, "render_set_line_style", {{"obj", "L"}, {"style", "dashed"}});
    run(st, "render_set_line_thickness", {{"obj", "AB"}, {"thickness", 4}});
    run(st, "render_set_point_size", {{"obj", "A"}, {"size", 7}});
    run(st, "render_set_filling", {{"obj", "c"}, {"opacity", 0.5}});
    run(st, "render_show_axes", {{"visible", false}});
    run(st, "render_show_grid", {{"visible", false}});
    run(st, "render_set_caption", {{"obj", "P"}, {"caption", "foot"}});
    run(st, "render_set_point_style", {{"obj", "B"}, {"style", 2}});
    run(st, "render_set_decoration", {{"obj", "AB"}, {"decoration", 1}});
    run(st, "render_set_coord_system",
        {{"xmin", -5}, {"xmax", 5}, {"ymin", -4}, {"ymax", 4}});
    Observation mark = run(st, "render_add_right_angle_mark",
                           {{"a", "B"}, {"b", "A"}, {"c", "P"}});
    CHECK_FALSE(mark.is_error());
    CHECK(st.right_angle_marks.size() == 1);

    CHECK(dump_canonical(export_geometry_only(st)) == geometry_before);
    CHECK(st.at("AB").style.at("color") == "#ff0000");

    // style changes do land in the full export
    CHECK(export_state(st).dump().find("#ff0000") != std::string::npos);

    Observation missing = run(st, "render_set_color", {{"obj", "ghost"}, {"color", "#000000"}});
    CHECK(missing.is_error());
    CHECK(missing.code == ErrorCode::entity_not_found);
}

TEST_CASE("label mode 1 shows name = value and reveals the label") {
    CanvasState st = dag345();
    run(st, "render_set_label_mode", {{"obj", "A"}, {"mode", 1}});
    CHECK(st.at("A").style.at("label_visible") == true);
    const std::string svg = render_svg(st, auto_viewport(st));
    CHECK(svg.find("A = (0, 0)") != std::string::npos);

    // caption mode requires a caption first
    Observation err = run(st, "render_set_label_mode", {{"obj", "B"}, {"mode", 3}});
    CHECK(err.is_error());
    CHECK(err.code == ErrorCode::precondition_failed);
}

TEST_CASE("undefined objects are skipped, not drawn") {
    CanvasState st;
    run(st, "add_point", {{"name", "A"}, {"x", 0}, {"y", 0}});
    Action bad = validate_call(catalog(), "add_segment",
                               {{"name", "AA"}, {"p1", "A"}, {"p2", "A"}});
    auto [next, obs] = apply_action(st, bad, EngineMode::silent);
    st = std::move(next);
    REQUIRE(st.has("AA"));
    const std::string svg = render_svg(st, auto_viewport(st));
    CHECK(render_svg(st, auto_viewport(st)) == svg);
}

TEST_CASE("3D projection respects the configured view") {
    const Catalog c3 = build_catalog(CatalogProfile::solve3d);
    CanvasState st;
    auto run3 = [&](const std::string& tool, const Json& args) {
        auto [next, obs] = apply_action(st, validate_call(c3, tool, args));
        st = std::move(next);
        return obs;
    };
    run3("add_point3d", {{"name", "O"}, {"x", 0}, {"y", 0}, {"z", 0}});
    run3("add_point3d", {{"name", "X"}, {"x", 1}, {"y", 0}, {"z", 0}});
    run3("add_point3d", {{"name", "Y"}, {"x", 1}, {"y", 1}, {"z", 0}});
    run3("add_cube", {{"name", "K"}, {"p1", "O"}, {"p2", "X"}, {"p3", "Y"}});
    run3("render_set_3d_view", {{"x_angle", 20}, {"z_angle", 50}, {"scale", 22}});
    REQUIRE(st.view.has_value());
    CHECK(st.view->x_angle == 20.0);
    CHECK(st.view->z_angle == 50.0);
    CHECK(st.view->scale == 22.0);

    const std::string svg = render_svg(st, Viewport{});
    CHECK(svg.find("<line") != std::string::npos);

    // textbook preset dashes hidden edges
    CanvasState textbook = apply_textbook_preset(st);
    const std::string dashed = render_svg(textbook, Viewport{});
    CHECK(dashed.find("stroke-dasharray=\"6,4\"") != std::string::npos);
}

TEST_CASE("auto viewport adds a 10% margin around the content") {
    CanvasState st = dag345();
    Viewport vp = auto_viewport(st);
    CHECK(vp.xmin == doctest::Approx(-3.0 - 0.7));
    CHECK(vp.xmax == doctest::Approx(4.0 + 0.7));
    CHECK(vp.ymin < -3.0);
    CHECK(vp.ymax > 3.0);

    CanvasState empty;
    Viewport dflt = auto_viewport(empty);
    CHECK(dflt.xmin == -10.0);
    CHECK(dflt.xmax == 10.0);
}

TEST_CASE("function, region and shade rendering stays deterministic") {
    const Catalog c2 = build_catalog(CatalogProfile::solve2d);
    CanvasState st;
    auto run2 = [&](const std::string& tool, const Json& args) {
        auto [next, obs] = apply_action(st, validate_call(c2, tool, args));
        st = std::move(next);
        return obs;
    };
    run2("add_function", {{"name", "f"}, {"expr", "sin(x)"}});
    run2("add_inequality", {{"name", "r"}, {"inequality", "y >= x^2 - 1"}});
    run2("add_integral_shade", {{"name", "area"}, {"function", "f"}, {"a", 0}, {"b", 3}});
    Viewport vp;
    vp.xmin = -4;
    vp.xmax = 4;
    vp.ymin = -2;
    vp.ymax = 2;
    const std::string svg = render_svg(st, vp);
    CHECK(render_svg(st, vp) == svg);
    CHECK(svg.find("<rect") != std::string::npos);  // region cells
}
