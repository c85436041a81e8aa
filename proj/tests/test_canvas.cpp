#include <doctest.h>

#include <random>

#include "geocanvas/harness.hpp"
#include "geocanvas/tool_dispatch.hpp"
#include "geocanvas/toolspec.hpp"
#include "oracles.hpp"

using namespace geocanvas;

namespace {

const Catalog& catalog2d() {
    static const Catalog c = build_catalog(CatalogProfile::solve2d);
    return c;
}

Observation run(CanvasState& st, const std::string& tool, const Json& args,
                EngineMode mode = EngineMode::strict) {
    Action a = validate_call(catalog2d(), tool, args);
    auto [next, obs] = apply_action(st, a, mode);
    st = std::move(next);
    return obs;
}

/// The 3-4-5 construction: perpendicular at A to AB, circle of radius r at A,
/// first intersection P below, then distance B-P.
CanvasState build_345(double radius = 3.0) {
    CanvasState st;
    run(st, "add_point", {{"name", "A"}, {"x", 0}, {"y", 0}});
    run(st, "add_point", {{"name", "B"}, {"x", 4}, {"y", 0}});
    run(st, "add_segment", {{"name", "AB"}, {"p1", "A"}, {"p2", "B"}});
    run(st, "add_perpendicular_line", {{"name", "L"}, {"point", "A"}, {"line", "AB"}});
    run(st, "add_circle", {{"name", "c"}, {"center", "A"}, {"radius", radius}});
    run(st, "add_intersect", {{"name", "P"}, {"obj1", "L"}, {"obj2", "c"}, {"index", 1}});
    return st;
}

}  // namespace

TEST_CASE("3-4-5 golden sequence") {
    CanvasState st = build_345();
    REQUIRE(st.size() == 6);

    const Point2* p = std::get_if<Point2>(&st.at("P").single());
    REQUIRE(p);
    CHECK(p->x == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(p->y == doctest::Approx(-3.0).epsilon(1e-12));

    Observation obs = run(st, "query_distance", {{"obj1", "B"}, {"obj2", "P"}});
    REQUIRE(obs.type == Observation::Type::value);
    CHECK(std::fabs(obs.value.get<double>() - 5.0) <= 1e-9);

    // Pythagoras on this configuration
    const double ab = 4.0, ap = 3.0;
    CHECK(std::fabs(std::pow(obs.value.get<double>(), 2) - (ab * ab + ap * ap)) <= 1e-9);

    // queries journal nothing: still 6 objects, and the export is unchanged
    CHECK(st.size() == 6);
}

TEST_CASE("cascading delete removes exactly the descendant closure") {
    CanvasState st = build_345();
    auto [after, obs] = delete_cascade(st, "L");
    CHECK(obs.deleted == std::vector<std::string>{"L", "P"});
    CHECK(after.size() == 4);
    CHECK(after.has("A"));
    CHECK(after.has("B"));
    CHECK(after.has("AB"));
    CHECK(after.has("c"));

    // deleting A wipes everything except B (reachability oracle)
    std::map<std::string, std::vector<std::string>> parents;
    for (const std::string& name : st.order)
        parents[name] = st.at(name).definition.parents;
    auto expected = oracle::reach_descendants(parents, "A");
    auto [after_a, obs_a] = delete_cascade(st, "A");
    CHECK(obs_a.deleted.size() == expected.size());
    for (const std::string& name : obs_a.deleted) CHECK(expected.count(name) == 1);
    CHECK(after_a.size() == 1);
    CHECK(after_a.has("B"));

    CHECK_THROWS_AS(delete_cascade(st, "nope"), ToolError);
}

TEST_CASE("delete_object tool emits a topologically ordered Deleted observation") {
    CanvasState st = build_345();
    Observation obs = run(st, "delete_object", {{"name", "AB"}});
    REQUIRE(obs.type == Observation::Type::deleted);
    // AB precedes its descendants in insertion order
    CHECK(obs.deleted.front() == "AB");
    for (const std::string& name : obs.deleted) CHECK_FALSE(st.has(name));
}

TEST_CASE("strict-mode errors roll back: state unchanged byte-for-byte") {
    CanvasState st = build_345();
    const std::string before = dump_canonical(export_state(st));

    Observation degenerate =
        run(st, "add_segment", {{"name", "AA"}, {"p1", "A"}, {"p2", "A"}});
    CHECK(degenerate.is_error());
    CHECK(degenerate.code == ErrorCode::degenerate_input);
    CHECK(dump_canonical(export_state(st)) == before);

    Observation missing = run(st, "query_distance", {{"obj1", "Q"}, {"obj2", "B"}});
    CHECK(missing.is_error());
    CHECK(missing.code == ErrorCode::entity_not_found);
    CHECK(missing.offending_arg == "Q");
    CHECK(dump_canonical(export_state(st)) == before);

    Observation conflict = run(st, "add_point", {{"name", "A"}, {"x", 9}, {"y", 9}});
    CHECK(conflict.is_error());
    CHECK(conflict.code == ErrorCode::name_conflict);
    CHECK(dump_canonical(export_state(st)) == before);

    // point where a curve is required
    Observation mismatch =
        run(st, "add_intersect", {{"name", "X"}, {"obj1", "A"}, {"obj2", "c"}});
    CHECK(mismatch.is_error());
    CHECK(mismatch.code == ErrorCode::type_mismatch);
    CHECK(dump_canonical(export_state(st)) == before);

    // disjoint objects
    run(st, "add_point", {{"name", "F"}, {"x", 50}, {"y", 50}});
    run(st, "add_point", {{"name", "G"}, {"x", 51}, {"y", 50}});
    run(st, "add_segment", {{"name", "FG"}, {"p1", "F"}, {"p2", "G"}});
    Observation disjoint =
        run(st, "add_intersect", {{"name", "X"}, {"obj1", "FG"}, {"obj2", "c"}});
    CHECK(disjoint.is_error());
    CHECK(disjoint.code == ErrorCode::precondition_failed);
}

TEST_CASE("query purity: exported state identical before and after every query") {
    CanvasState st = build_345();
    const std::string before = dump_canonical(export_state(st));
    run(st, "query_angle", {{"a", "B"}, {"b", "A"}, {"c", "P"}});
    run(st, "query_x_coord", {{"point", "P"}});
    run(st, "query_are_perpendicular", {{"line1", "L"}, {"line2", "AB"}});
    run(st, "query_is_defined", {{"obj", "P"}});
    run(st, "query_dependents", {{"obj", "A"}});
    CHECK(dump_canonical(export_state(st)) == before);
}

TEST_CASE("silent mode commits undefined objects for degenerate constructions") {
    CanvasState st;
    run(st, "add_point", {{"name", "A"}, {"x", 0}, {"y", 0}}, EngineMode::silent);
    Observation obs =
        run(st, "add_segment", {{"name", "AA"}, {"p1", "A"}, {"p2", "A"}}, EngineMode::silent);
    CHECK_FALSE(obs.is_error());
    REQUIRE(st.has("AA"));
    CHECK_FALSE(st.at("AA").is_defined());
    CHECK(st.at("AA").kind == "segment");

    // downstream references propagate undefined instead of erroring
    Observation mid = run(st, "add_point_on", {{"name", "M"}, {"path", "AA"}},
                          EngineMode::silent);
    CHECK_FALSE(mid.is_error());
    CHECK_FALSE(st.at("M").is_defined());

    // reference errors still surface even in silent mode
    Observation missing =
        run(st, "add_segment", {{"name", "AQ"}, {"p1", "A"}, {"p2", "Q"}}, EngineMode::silent);
    CHECK(missing.is_error());
    CHECK(missing.code == ErrorCode::entity_not_found);
}

TEST_CASE("undefined parents propagate in strict mode too, without an error") {
    CanvasState st;
    run(st, "add_point", {{"name", "A"}, {"x", 0}, {"y", 0}}, EngineMode::silent);
    run(st, "add_segment", {{"name", "AA"}, {"p1", "A"}, {"p2", "A"}}, EngineMode::silent);
    Observation obs = run(st, "add_point_on", {{"name", "M"}, {"path", "AA"}});
    CHECK_FALSE(obs.is_error());
    CHECK(st.has("M"));
    CHECK_FALSE(st.at("M").is_defined());
}

TEST_CASE("set_value on a slider recomputes the cascade") {
    CanvasState st;
    run(st, "add_point", {{"name", "A"}, {"x", 0}, {"y", 0}});
    run(st, "add_point", {{"name", "B"}, {"x", 4}, {"y", 0}});
    run(st, "add_segment", {{"name", "AB"}, {"p1", "A"}, {"p2", "B"}});
    run(st, "add_perpendicular_line", {{"name", "L"}, {"point", "A"}, {"line", "AB"}});
    run(st, "add_slider", {{"name", "r"}, {"min", 0}, {"max", 10}, {"value", 3}});
    run(st, "add_circle", {{"name", "c"}, {"center", "A"}, {"radius", "r"}});
    run(st, "add_intersect", {{"name", "P"}, {"obj1", "L"}, {"obj2", "c"}, {"index", 1}});

    const Point2* p = std::get_if<Point2>(&st.at("P").single());
    REQUIRE(p);
    CHECK(p->y == doctest::Approx(-3.0));

    Observation obs = run(st, "set_value", {{"name", "r"}, {"value", 5}});
    CHECK_FALSE(obs.is_error());
    p = std::get_if<Point2>(&st.at("P").single());
    REQUIRE(p);
    // analytic recomputation oracle: P moves to (0, -5), |BP| = sqrt(16 + 25)
    CHECK(p->y == doctest::Approx(-5.0));
    Observation d = run(st, "query_distance", {{"obj1", "B"}, {"obj2", "P"}});
    CHECK(d.value.get<double>() == doctest::Approx(std::sqrt(41.0)));

    // identical recompute with no change is bit-identical
    CanvasState twice = recompute(st);
    CHECK(dump_canonical(export_state(twice)) == dump_canonical(export_state(st)));

    Observation not_free = run(st, "set_value", {{"name", "P"}, {"value", 1}});
    CHECK(not_free.is_error());
}

TEST_CASE("export/import round-trips byte-identically") {
    CanvasState st = build_345();
    run(st, "add_angle", {{"name", "ang"}, {"a", "B"}, {"b", "A"}, {"c", "P"}});
    run(st, "add_function", {{"name", "f"}, {"expr", "x^2 - 2"}});
    run(st, "add_inequality", {{"name", "reg"}, {"inequality", "x^2 + y^2 <= 9"}});
    run(st, "add_tangent", {{"name", "T"}, {"point", "B"}, {"conic", "c"}});

    const Json doc = export_state(st);
    CanvasState back = import_state(doc);
    const Json doc2 = export_state(back);
    CHECK(dump_canonical(doc) == dump_canonical(doc2));

    // empty canvas: empty object list
    CanvasState empty;
    CHECK(export_state(empty).at("objects").empty());

    // the 3-4-5 canvas holds 6 construction records; queries never journal
    CHECK(export_state(build_345()).at("objects").size() == 6);
}

TEST_CASE("determinism: identical action lists give byte-identical exports") {
    auto episode = [](int seed) {
        std::mt19937 rng(seed);
        std::uniform_real_distribution<double> u(-20.0, 20.0);
        CanvasState st;
        std::vector<std::string> points;
        for (int i = 0; i < 12; ++i) {
            const std::string name = "P" + std::to_string(i);
            run(st, "add_point", {{"name", name}, {"x", u(rng)}, {"y", u(rng)}});
            points.push_back(name);
        }
        std::uniform_int_distribution<std::size_t> pick(0, points.size() - 1);
        for (int i = 0; i < 30; ++i) {
            const std::string a = points[pick(rng)];
            const std::string b = points[pick(rng)];
            // mixes valid calls with injected invalid ones (coincident picks)
            run(st, "add_segment",
                {{"name", "s" + std::to_string(i)}, {"p1", a}, {"p2", b}});
            if (i % 5 == 0)
                run(st, "query_distance", {{"obj1", a}, {"obj2", "missing_" + std::to_string(i)}});
        }
        return dump_canonical(export_state(st));
    };
    for (int seed : {1, 2, 3, 4, 5}) CHECK(episode(seed) == episode(seed));
}

TEST_CASE("multi-result constructions live under a single list name") {
    CanvasState st;
    run(st, "add_point", {{"name", "O"}, {"x", 0}, {"y", 0}});
    run(st, "add_point", {{"name", "Q"}, {"x", 2}, {"y", 0}});
    run(st, "add_circle", {{"name", "c"}, {"center", "O"}, {"radius", 1}});
    Observation obs = run(st, "add_tangent", {{"name", "T"}, {"point", "Q"}, {"conic", "c"}});
    REQUIRE(obs.type == Observation::Type::created);
    REQUIRE(st.has("T"));
    CHECK(st.at("T").is_list);
    CHECK(st.at("T").values.size() == 2);
    CHECK(st.at("T").kind == "list<line>");
    CHECK_FALSE(st.has("T_1"));

    // a list is not usable as a single operand
    Observation err = run(st, "add_point_on", {{"name", "X"}, {"path", "T"}});
    CHECK(err.is_error());
    CHECK(err.code == ErrorCode::type_mismatch);
}

TEST_CASE("intersect without index returns a single point when unique") {
    CanvasState st;
    run(st, "add_point", {{"name", "A"}, {"x", 0}, {"y", 0}});
    run(st, "add_point", {{"name", "B"}, {"x", 2}, {"y", 2}});
    run(st, "add_point", {{"name", "C"}, {"x", 0}, {"y", 2}});
    run(st, "add_point", {{"name", "D"}, {"x", 2}, {"y", 0}});
    run(st, "add_segment", {{"name", "s1"}, {"p1", "A"}, {"p2", "B"}});
    run(st, "add_segment", {{"name", "s2"}, {"p1", "C"}, {"p2", "D"}});
    run(st, "add_intersect", {{"name", "X"}, {"obj1", "s1"}, {"obj2", "s2"}});
    CHECK_FALSE(st.at("X").is_list);
    const Point2* x = std::get_if<Point2>(&st.at("X").single());
    REQUIRE(x);
    CHECK(x->x == doctest::Approx(1.0));
    CHECK(x->y == doctest::Approx(1.0));

    // out-of-range index on a circle intersection
    run(st, "add_circle", {{"name", "c"}, {"center", "A"}, {"radius", 1}});
    run(st, "add_line", {{"name", "l"}, {"p1", "A"}, {"p2", "B"}});
    Observation err = run(
        st, "add_intersect", {{"name", "Y"}, {"obj1", "l"}, {"obj2", "c"}, {"index", 3}});
    CHECK(err.is_error());
    CHECK(err.code == ErrorCode::index_out_of_range);
}

TEST_CASE("rename updates dependents and the DAG") {
    CanvasState st = build_345();
    Observation obs = run(st, "rename_object", {{"name", "c"}, {"new_name", "circ"}});
    CHECK_FALSE(obs.is_error());
    CHECK_FALSE(st.has("c"));
    REQUIRE(st.has("circ"));
    // P's definition now references circ and recompute still works
    const auto& parents = st.at("P").definition.parents;
    CHECK(std::find(parents.begin(), parents.end(), "circ") != parents.end());
    CanvasState rec = recompute(st);
    const Point2* p = std::get_if<Point2>(&rec.at("P").single());
    REQUIRE(p);
    CHECK(p->y == doctest::Approx(-3.0));

    Observation clash = run(st, "rename_object", {{"name", "A"}, {"new_name", "B"}});
    CHECK(clash.is_error());
    CHECK(clash.code == ErrorCode::name_conflict);
}

TEST_CASE("random DAGs: delete set equals brute-force reachability") {
    std::mt19937 rng(97);
    for (int trial = 0; trial < 50; ++trial) {
        CanvasState st;
        std::uniform_int_distribution<int> n_nodes(5, 40);
        const int n = n_nodes(rng);
        std::vector<std::string> names;
        for (int i = 0; i < n; ++i) {
            const std::string name = "n" + std::to_string(i);
            if (i < 2) {
                run(st, "add_point",
                    {{"name", name}, {"x", i * 1.0}, {"y", 0.0}});
            } else {
                std::uniform_int_distribution<int> pick(0, i - 1);
                const std::string a = names[pick(rng)];
                const std::string b = names[pick(rng)];
                run(st, "add_midpoint", {{"name", name}, {"p1", a}, {"p2", b}});
            }
            names.push_back(name);
        }
        std::map<std::string, std::vector<std::string>> parents;
        for (const std::string& name : st.order)
            parents[name] = st.at(name).definition.parents;
        std::uniform_int_distribution<int> pick(0, n - 1);
        const std::string victim = names[pick(rng)];
        const auto expected = oracle::reach_descendants(parents, victim);
        auto [after, obs] = delete_cascade(st, victim);
        REQUIRE(obs.deleted.size() == expected.size());
        for (const std::string& d : obs.deleted) CHECK(expected.count(d) == 1);
        // survivors reference only survivors
        for (const std::string& name : after.order)
            for (const std::string& parent : after.at(name).definition.parents)
                CHECK(after.has(parent));
    }
}

TEST_CASE("unsupported 3D tools return a structured error naming the tool") {
    const Catalog c3 = build_catalog(CatalogProfile::solve3d);
    CanvasState st;
    Action cube = validate_call(c3, "add_point3d",
                                {{"name", "A"}, {"x", 0}, {"y", 0}, {"z", 0}});
    std::tie(st, std::ignore) = apply_action(st, cube);
    Action net = validate_call(c3, "add_net", {{"name", "N"}, {"solid", "A"}});
    auto [next, obs] = apply_action(st, net);
    CHECK(obs.is_error());
    CHECK(obs.code == ErrorCode::unsupported_tool);
    CHECK(obs.message.find("add_net") != std::string::npos);
}

TEST_CASE("query_solve flags its numeric fallback and solves on the default interval") {
    CanvasState st;
    Observation obs = run(st, "query_solve", {{"equation", "x^2 = 4"}});
    REQUIRE(obs.type == Observation::Type::value);
    CHECK(obs.extra.at("numeric_fallback") == true);
    REQUIRE(obs.value.is_array());
    REQUIRE(obs.value.size() == 2);
    CHECK(obs.value.at(0).get<double>() == doctest::Approx(-2.0));
    CHECK(obs.value.at(1).get<double>() == doctest::Approx(2.0));

    Observation named = run(st, "query_solve", {{"equation", "2*t = 9"}});
    CHECK(named.extra.at("var") == "t");
    CHECK(named.value.at(0).get<double>() == doctest::Approx(4.5));
}

TEST_CASE("common tangents are circle-circle only") {
    CanvasState st;
    run(st, "add_point", {{"name", "F1"}, {"x", -2}, {"y", 0}});
    run(st, "add_point", {{"name", "F2"}, {"x", 2}, {"y", 0}});
    run(st, "add_point", {{"name", "E"}, {"x", 3}, {"y", 0}});
    run(st, "add_ellipse",
        {{"name", "el"}, {"focus1", "F1"}, {"focus2", "F2"}, {"point", "E"}});
    run(st, "add_circle", {{"name", "c"}, {"center", "F1"}, {"radius", 1}});
    Observation obs =
        run(st, "add_tangent_conic_conic", {{"name", "T"}, {"conic1", "el"}, {"conic2", "c"}});
    CHECK(obs.is_error());
    CHECK(obs.code == ErrorCode::unsupported_tool);
}

TEST_CASE("congruence semantics per object kind") {
    CanvasState st;
    run(st, "add_point", {{"name", "A"}, {"x", 0}, {"y", 0}});
    run(st, "add_point", {{"name", "B"}, {"x", 3}, {"y", 0}});
    run(st, "add_point", {{"name", "C"}, {"x", 10}, {"y", 10}});
    run(st, "add_point", {{"name", "D"}, {"x", 10}, {"y", 13}});
    run(st, "add_segment", {{"name", "s1"}, {"p1", "A"}, {"p2", "B"}});
    run(st, "add_segment", {{"name", "s2"}, {"p1", "C"}, {"p2", "D"}});
    Observation congruent = run(st, "query_are_congruent", {{"obj1", "s1"}, {"obj2", "s2"}});
    CHECK(congruent.value == Json(true));

    run(st, "add_circle", {{"name", "c1"}, {"center", "A"}, {"radius", 2}});
    run(st, "add_circle", {{"name", "c2"}, {"center", "C"}, {"radius", 2}});
    run(st, "add_circle", {{"name", "c3"}, {"center", "C"}, {"radius", 3}});
    CHECK(run(st, "query_are_congruent", {{"obj1", "c1"}, {"obj2", "c2"}}).value == Json(true));
    CHECK(run(st, "query_are_congruent", {{"obj1", "c1"}, {"obj2", "c3"}}).value == Json(false));

    // a rotated translated square is congruent; a rectangle is not
    run(st, "add_regular_polygon", {{"name", "sq1"}, {"p1", "A"}, {"p2", "B"}, {"n", 4}});
    run(st, "add_regular_polygon", {{"name", "sq2"}, {"p1", "C"}, {"p2", "D"}, {"n", 4}});
    run(st, "add_point", {{"name", "R1"}, {"x", 20}, {"y", 0}});
    run(st, "add_point", {{"name", "R2"}, {"x", 23}, {"y", 0}});
    run(st, "add_point", {{"name", "R3"}, {"x", 23}, {"y", 1}});
    run(st, "add_point", {{"name", "R4"}, {"x", 20}, {"y", 1}});
    run(st, "add_polygon",
        {{"name", "rect"}, {"points", Json::array({"R1", "R2", "R3", "R4"})}});
    CHECK(run(st, "query_are_congruent", {{"obj1", "sq1"}, {"obj2", "sq2"}}).value ==
          Json(true));
    CHECK(run(st, "query_are_congruent", {{"obj1", "sq1"}, {"obj2", "rect"}}).value ==
          Json(false));

    // equality is stricter: same defining values
    CHECK(run(st, "query_are_equal", {{"obj1", "s1"}, {"obj2", "s2"}}).value == Json(false));
    run(st, "add_segment", {{"name", "s1b"}, {"p1", "B"}, {"p2", "A"}});
    CHECK(run(st, "query_are_equal", {{"obj1", "s1"}, {"obj2", "s1b"}}).value == Json(true));
}
