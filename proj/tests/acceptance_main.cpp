// Acceptance suite: each criterion prints one PASS/FAIL line; the binary
// exits nonzero if any criterion fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include <httplib.h>

#include "geocanvas/analytics.hpp"
#include "geocanvas/calculus.hpp"
#include "geocanvas/harness.hpp"
#include "geocanvas/render.hpp"
#include "geocanvas/toolspec.hpp"
#include "geocanvas/verifier.hpp"
#include "oracles.hpp"

using namespace geocanvas;

namespace {

struct Failure {
    std::string what;
};

void require(bool cond, const std::string& what) {
    if (!cond) throw Failure{what};
}

void require_close(double got, double want, double tol, const std::string& what) {
    if (!(std::fabs(got - want) <= tol)) {
        std::ostringstream os;
        os << what << ": got " << got << ", want " << want << " within " << tol;
        throw Failure{os.str()};
    }
}

double now_s() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

Observation run_tool(CanvasState& st, const Catalog& catalog, const std::string& tool,
                     const Json& args, EngineMode mode = EngineMode::strict) {
    Action a = validate_call(catalog, tool, args);
    auto [next, obs] = apply_action(st, a, mode);
    st = std::move(next);
    return obs;
}

// ---------------------------------------------------------------- criterion 1

void golden_trajectory() {
    const double start = now_s();
    const Catalog catalog = build_catalog(CatalogProfile::solve2d);
    CanvasState st;
    run_tool(st, catalog, "add_point", {{"name", "A"}, {"x", 0}, {"y", 0}});
    run_tool(st, catalog, "add_point", {{"name", "B"}, {"x", 4}, {"y", 0}});
    run_tool(st, catalog, "add_segment", {{"name", "AB"}, {"p1", "A"}, {"p2", "B"}});
    run_tool(st, catalog, "add_perpendicular_line",
             {{"name", "L"}, {"point", "A"}, {"line", "AB"}});
    run_tool(st, catalog, "add_circle", {{"name", "c"}, {"center", "A"}, {"radius", 3}});
    run_tool(st, catalog, "add_intersect",
             {{"name", "P"}, {"obj1", "L"}, {"obj2", "c"}, {"index", 1}});

    const Point2* p = std::get_if<Point2>(&st.at("P").single());
    require(p != nullptr, "P is a point");
    require_close(p->x, 0.0, 1e-9, "P.x");
    require_close(p->y, -3.0, 1e-9, "P.y");

    Observation obs = run_tool(st, catalog, "query_distance", {{"obj1", "B"}, {"obj2", "P"}});
    require(obs.type == Observation::Type::value, "distance query returns a value");
    require_close(obs.value.get<double>(), 5.0, 1e-9, "query_distance(B, P)");

    auto [after, deleted] = delete_cascade(st, "L");
    require(deleted.deleted == std::vector<std::string>{"L", "P"},
            "cascading delete of L removes exactly {L, P}");
    require(after.size() == 4, "survivors are {A, B, AB, c}");
    require(now_s() - start < 1.0, "runtime under one second");
}

// ---------------------------------------------------------------- criterion 2

Json dag345_script() {
    return Json::parse(R"([
      {"text": "construct",
       "actions": [
         {"tool": "add_point", "args": {"name": "A", "x": 0, "y": 0}},
         {"tool": "add_point", "args": {"name": "B", "x": 4, "y": 0}},
         {"tool": "add_segment", "args": {"name": "AB", "p1": "A", "p2": "B"}},
         {"tool": "add_perpendicular_line", "args": {"name": "L", "point": "A", "line": "AB"}},
         {"tool": "add_circle", "args": {"name": "c", "center": "A", "radius": 3}},
         {"tool": "add_intersect", "args": {"name": "P", "obj1": "L", "obj2": "c", "index": 1}}
       ]},
      {"text": "measure", "actions": [
         {"tool": "query_distance", "args": {"obj1": "B", "obj2": "P"}}]},
      {"text": "ANSWER: 5"}
    ])");
}

std::string normalized_trace(Trace trace) {
    for (TurnRecord& turn : trace.turns) turn.wall_time_s = 0.0;  // timing is metadata
    return trace_to_jsonl(trace);
}

void determinism_suite() {
    const double start = now_s();
    const Catalog catalog = build_catalog(CatalogProfile::solve2d);
    std::mt19937 seed_source(20240811);
    for (int episode = 0; episode < 100; ++episode) {
        const unsigned seed = seed_source();
        auto make_script = [&]() {
            std::mt19937 rng(seed);
            std::uniform_real_distribution<double> coord(-30.0, 30.0);
            std::uniform_int_distribution<int> count(6, 14);
            Json turns = Json::array();
            Json actions = Json::array();
            std::vector<std::string> names;
            const int n = count(rng);
            for (int i = 0; i < n; ++i) {
                const std::string name = "p" + std::to_string(i);
                actions.push_back(Json{{"tool", "add_point"},
                                       {"args", Json{{"name", name},
                                                     {"x", coord(rng)},
                                                     {"y", coord(rng)}}}});
                names.push_back(name);
            }
            std::uniform_int_distribution<std::size_t> pick(0, names.size() - 1);
            for (int i = 0; i < 18; ++i) {
                const int kind = i % 6;
                if (kind == 0) {
                    actions.push_back(Json{{"tool", "add_segment"},
                                           {"args", Json{{"name", "s" + std::to_string(i)},
                                                         {"p1", names[pick(rng)]},
                                                         {"p2", names[pick(rng)]}}}});
                } else if (kind == 1) {
                    actions.push_back(Json{{"tool", "add_circle"},
                                           {"args", Json{{"name", "c" + std::to_string(i)},
                                                         {"center", names[pick(rng)]},
                                                         {"radius", 1.0 + i * 0.5}}}});
                } else if (kind == 2) {
                    actions.push_back(Json{{"tool", "add_midpoint"},
                                           {"args", Json{{"name", "m" + std::to_string(i)},
                                                         {"p1", names[pick(rng)]},
                                                         {"p2", names[pick(rng)]}}}});
                } else if (kind == 3) {
                    // injected invalid calls: missing entity, degenerate pair
                    actions.push_back(Json{{"tool", "query_distance"},
                                           {"args", Json{{"obj1", names[pick(rng)]},
                                                         {"obj2", "ghost"}}}});
                    const std::string p = names[pick(rng)];
                    actions.push_back(Json{{"tool", "add_segment"},
                                           {"args", Json{{"name", "bad" + std::to_string(i)},
                                                         {"p1", p},
                                                         {"p2", p}}}});
                } else if (kind == 4) {
                    actions.push_back(Json{{"tool", "query_are_collinear"},
                                           {"args", Json{{"p1", names[pick(rng)]},
                                                         {"p2", names[pick(rng)]},
                                                         {"p3", names[pick(rng)]}}}});
                } else {
                    actions.push_back(Json{{"tool", "delete_object"},
                                           {"args", Json{{"name", names[pick(rng)]}}}});
                }
            }
            turns.push_back(Json{{"text", "batch"}, {"actions", actions}});
            turns.push_back(Json{{"text", "ANSWER: 1"}});
            return turns;
        };
        auto run_once = [&]() {
            ScriptedPolicy policy(make_script());
            Problem problem{"det-" + std::to_string(episode), "determinism", {}};
            EpisodeResult result = run_episode(problem, policy, catalog);
            return std::make_pair(dump_canonical(export_state(result.final_state)),
                                  normalized_trace(result.trace));
        };
        auto [state1, trace1] = run_once();
        auto [state2, trace2] = run_once();
        require(state1 == state2, "episode " + std::to_string(episode) + " states match");
        require(trace1 == trace2, "episode " + std::to_string(episode) + " traces match");
    }
    require(now_s() - start < 30.0, "runtime under 30 seconds");
}

// ---------------------------------------------------------------- criterion 3

CanvasState specimen_canvas(const Catalog& catalog) {
    CanvasState st;
    auto t = [&](const std::string& tool, const Json& args) {
        Observation obs = run_tool(st, catalog, tool, args);
        if (obs.is_error()) throw Failure{"specimen setup failed at " + tool + ": " + obs.message};
    };
    t("add_point", {{"name", "A"}, {"x", 0}, {"y", 0}});
    t("add_point", {{"name", "B"}, {"x", 4}, {"y", 0}});
    t("add_point", {{"name", "C"}, {"x", 0}, {"y", 3}});
    t("add_point", {{"name", "D"}, {"x", 4}, {"y", 3}});
    t("add_segment", {{"name", "segAB"}, {"p1", "A"}, {"p2", "B"}});
    t("add_segment", {{"name", "segCD"}, {"p1", "C"}, {"p2", "D"}});
    t("add_line", {{"name", "lineAC"}, {"p1", "A"}, {"p2", "C"}});
    t("add_circle", {{"name", "circ"}, {"center", "A"}, {"radius", 2}});
    t("add_polygon", {{"name", "poly"}, {"points", Json::array({"A", "B", "D", "C"})}});
    t("add_function", {{"name", "f"}, {"expr", "x^2 - 2"}});
    t("add_inequality", {{"name", "reg"}, {"inequality", "x^2 + y^2 <= 25"}});
    t("add_point", {{"name", "T"}, {"x", 0}, {"y", 2}});
    t("add_line", {{"name", "tang"}, {"p1", "T"}, {"p2", "D"}});
    t("add_point3d", {{"name", "O3"}, {"x", 0}, {"y", 0}, {"z", 0}});
    t("add_point3d", {{"name", "X3"}, {"x", 1}, {"y", 0}, {"z", 0}});
    t("add_point3d", {{"name", "Y3"}, {"x", 1}, {"y", 1}, {"z", 0}});
    t("add_cube", {{"name", "cube"}, {"p1", "O3"}, {"p2", "X3"}, {"p3", "Y3"}});
    return st;
}

void query_purity_and_rollback() {
    const Catalog catalog = build_catalog(CatalogProfile::solve3d);
    CanvasState st = specimen_canvas(catalog);
    const std::string before = dump_canonical(export_state(st));

    // valid arguments for every query tool in the catalog
    const std::map<std::string, Json> query_args{
        {"query_angle", {{"a", "B"}, {"b", "A"}, {"c", "C"}}},
        {"query_distance", {{"obj1", "A"}, {"obj2", "B"}}},
        {"query_length", {{"obj", "segAB"}}},
        {"query_perimeter", {{"obj", "poly"}}},
        {"query_area", {{"obj", "poly"}}},
        {"query_slope", {{"line", "segAB"}}},
        {"query_radius", {{"obj", "circ"}}},
        {"query_x_coord", {{"point", "A"}}},
        {"query_y_coord", {{"point", "A"}}},
        {"query_are_parallel", {{"line1", "segAB"}, {"line2", "segCD"}}},
        {"query_are_perpendicular", {{"line1", "segAB"}, {"line2", "lineAC"}}},
        {"query_is_tangent", {{"line", "tang"}, {"conic", "circ"}}},
        {"query_is_in_region", {{"point", "A"}, {"region", "reg"}}},
        {"query_are_equal", {{"obj1", "A"}, {"obj2", "B"}}},
        {"query_are_collinear", {{"p1", "A"}, {"p2", "B"}, {"p3", "C"}}},
        {"query_are_concyclic", {{"p1", "A"}, {"p2", "B"}, {"p3", "C"}, {"p4", "D"}}},
        {"query_are_congruent", {{"obj1", "segAB"}, {"obj2", "segCD"}}},
        {"query_solve", {{"equation", "x^2 = 4"}}},
        {"query_nsolve", {{"equation", "x^2 = 4"}, {"lo", -5}, {"hi", 5}}},
        {"query_definite_integral", {{"function", "f"}, {"a", 0}, {"b", 1}}},
        {"query_function_max", {{"function", "f"}, {"lo", 0}, {"hi", 2}}},
        {"query_function_min", {{"function", "f"}, {"lo", 0}, {"hi", 2}}},
        {"query_is_defined", {{"obj", "A"}}},
        {"query_dependents", {{"obj", "A"}}},
        {"query_volume", {{"solid", "cube"}}},
        {"query_surface_area", {{"solid", "cube"}}},
        {"query_coords3d", {{"point", "O3"}}},
    };

    std::size_t queries_checked = 0;
    for (const ToolSpec& spec : catalog.specs) {
        if (spec.action_type != ActionType::query) continue;
        auto it = query_args.find(spec.name);
        require(it != query_args.end(), "valid-arg fixture covers " + spec.name);
        Observation obs = run_tool(st, catalog, spec.name, it->second);
        require(!obs.is_error(), spec.name + " succeeds on the specimen canvas");
        require(dump_canonical(export_state(st)) == before,
                spec.name + " leaves the exported state byte-identical");
        ++queries_checked;
    }
    require(queries_checked == 27, "all 24 solving + 3 solid queries exercised");

    // one strict-mode error path per tool in the full union catalog
    const Catalog render_catalog = build_catalog(CatalogProfile::render_pipeline);
    std::size_t error_paths = 0;
    auto drive_error = [&](const Catalog& cat, const ToolSpec& spec) {
        Json args = Json::object();
        std::string expect;
        // reference a missing object through the first name-typed parameter,
        // fall back to a name conflict or a malformed payload
        bool has_ref = false;
        for (const ParamSpec& p : spec.params) {
            if (p.name == "name" && spec.action_type == ActionType::construction) continue;
            if (p.type == SemType::object_name || p.type == SemType::point_name ||
                p.type == SemType::linelike_name || p.type == SemType::conic_name) {
                has_ref = true;
                break;
            }
        }
        if (spec.name == "query_is_defined") {
            // never errors by design; existence probes return false instead
            Observation obs = run_tool(st, cat, spec.name, {{"obj", "missing_zz"}});
            require(!obs.is_error() && obs.value == Json(false),
                    "query_is_defined(missing) is false, not an error");
            return;
        }
        for (const ParamSpec& p : spec.params) {
            if (p.name == "name" && (spec.action_type == ActionType::construction)) {
                args[p.name] = "A";  // name conflict when no missing ref fires first
            } else if (p.type == SemType::object_name || p.type == SemType::point_name ||
                       p.type == SemType::linelike_name || p.type == SemType::conic_name) {
                if (p.variadic)
                    args[p.name] = Json::array({"missing_zz", "missing_zz", "missing_zz"});
                else
                    args[p.name] = "missing_zz";
            } else if (p.type == SemType::scalar) {
                args[p.name] = has_ref || spec.name != "add_slider" ? 1.0 : -1.0;
            } else if (p.type == SemType::count) {
                args[p.name] = 1;
            } else if (p.type == SemType::enum_code) {
                if (!p.enum_choices.empty())
                    args[p.name] = p.enum_choices.front();
                else
                    args[p.name] = p.enum_values.empty() ? 0 : p.enum_values.front();
            } else if (p.type == SemType::flag) {
                args[p.name] = true;
            } else if (p.type == SemType::color) {
                args[p.name] = "#123456";
            } else if (p.type == SemType::expr_text) {
                args[p.name] = "2x";  // parse error at the engine boundary
            }
        }
        if (spec.name == "delete_object" || spec.name == "set_value" ||
            spec.name == "rename_object" || spec.name == "set_label_visible" ||
            spec.name == "set_object_visible")
            args["name"] = "missing_zz";
        if (spec.name == "render_set_coord_system") {
            args["xmin"] = 2.0;
            args["xmax"] = 1.0;  // inverted bounds
        }
        if (spec.name == "add_slider") {
            args["min"] = 2.0;
            args["max"] = 1.0;
        }
        if (spec.name == "render_set_3d_view") {
            // style-only tool with no error path; drive a validation failure
            try {
                validate_call(cat, spec.name, {{"x_angle", "oops"}});
                throw Failure{"render_set_3d_view validation should fail"};
            } catch (const ToolError&) {
            }
            return;
        }
        if (spec.name == "render_show_axes" || spec.name == "render_show_grid") {
            try {
                validate_call(cat, spec.name, {{"visible", 3}});
                throw Failure{spec.name + " validation should fail"};
            } catch (const ToolError&) {
            }
            return;
        }
        if (spec.name == "add_point" || spec.name == "add_point3d" ||
            spec.name == "add_text" || spec.name == "add_text_3d" ||
            spec.name == "add_function" || spec.name == "add_curve" ||
            spec.name == "add_inequality" || spec.name == "add_vector3d") {
            // no references: force a name conflict (or the bad expression)
            args["name"] = "A";
            if (args.contains("text")) args["text"] = "label";
        }
        Action action;
        try {
            action = validate_call(cat, spec.name, args);
        } catch (const ToolError&) {
            return;  // schema-level rejection: state untouched by construction
        }
        auto [next, obs] = apply_action(st, action);
        require(obs.is_error(), spec.name + " error path produced an error");
        st = std::move(next);
    };
    for (const ToolSpec& spec : catalog.specs) {
        drive_error(catalog, spec);
        require(dump_canonical(export_state(st)) == before,
                spec.name + " error path left the state byte-identical");
        ++error_paths;
    }
    for (const ToolSpec& spec : render_catalog.specs) {
        if (catalog.find(spec.name)) continue;  // shared solving tools already done
        drive_error(render_catalog, spec);
        require(dump_canonical(export_state(st)) == before,
                spec.name + " error path left the state byte-identical");
        ++error_paths;
    }
    require(error_paths == 113, "every tool in the union catalog exercised an error path");
}

// ---------------------------------------------------------------- criterion 4

void dag_oracle() {
    const Catalog catalog = build_catalog(CatalogProfile::solve2d);
    std::mt19937 rng(424242);
    for (int trial = 0; trial < 500; ++trial) {
        CanvasState st;
        std::uniform_int_distribution<int> n_nodes(4, 40);
        const int n = n_nodes(rng);
        std::vector<std::string> names;
        for (int i = 0; i < n; ++i) {
            const std::string name = "n" + std::to_string(i);
            if (i < 2) {
                run_tool(st, catalog, "add_point",
                         {{"name", name}, {"x", i * 1.0}, {"y", 0.0}});
            } else {
                std::uniform_int_distribution<int> pick(0, i - 1);
                run_tool(st, catalog, "add_midpoint",
                         {{"name", name}, {"p1", names[pick(rng)]}, {"p2", names[pick(rng)]}});
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
        require(obs.deleted.size() == expected.size(),
                "trial " + std::to_string(trial) + ": removal set size");
        for (const std::string& name : obs.deleted)
            require(expected.count(name) == 1,
                    "trial " + std::to_string(trial) + ": " + name + " in the oracle set");
    }
}

// ---------------------------------------------------------------- criterion 5

void geometry_theorem_suite() {
    std::mt19937 rng(31337);
    std::uniform_real_distribution<double> u(-100.0, 100.0);

    int triangles = 0;
    while (triangles < 500) {
        const Point2 a{u(rng), u(rng)}, b{u(rng), u(rng)}, c{u(rng), u(rng)};
        const double twice = cross(b - a, c - a);
        if (std::fabs(twice) < 1.0) continue;
        ++triangles;
        const bool ccw = twice > 0.0;
        double sum = 0.0;
        const Point2 tri[3] = {a, b, c};
        for (int i = 0; i < 3; ++i) {
            const Point2 prev = tri[(i + 2) % 3], cur = tri[i], next = tri[(i + 1) % 3];
            sum += ccw ? angle_measure(next, cur, prev) : angle_measure(prev, cur, next);
        }
        require(std::fabs(sum - 180.0) <= 1e-7, "triangle angle sum within 1e-7");
    }

    std::uniform_real_distribution<double> frac(0.05, 0.95);
    int thales = 0;
    while (thales < 200) {
        const Point2 p1{u(rng), u(rng)}, p2{u(rng), u(rng)};
        if (distance(p1, p2) < 1.0) continue;
        ++thales;
        const Arc2 semi = make_semicircle(p1, p2);
        const Point2 on = semi.point_at(semi.start_angle + semi.span() * frac(rng));
        const double ang = angle_measure(p1, on, p2);
        require(std::fmin(std::fabs(ang - 90.0), std::fabs(ang - 270.0)) <= 1e-7,
                "Thales angle within 1e-7");
    }

    for (int i = 0; i < 200; ++i) {
        const Point2 ax1{u(rng), u(rng)};
        Point2 ax2{u(rng), u(rng)};
        if (distance(ax1, ax2) < 1e-3) ax2.y += 1.0;
        const Transform2 maps[] = {
            rotation_about({u(rng), u(rng)}, u(rng)),
            reflect_about_line(make_line(LineKind::line, ax1, ax2)),
            translation({u(rng), u(rng)}),
        };
        const Point2 p{u(rng), u(rng)}, q{u(rng), u(rng)};
        const double d = distance(p, q);
        for (const Transform2& t : maps)
            require(std::fabs(distance(t.apply(p), t.apply(q)) - d) <= 1e-12 * std::fmax(1.0, d),
                    "isometry distance preservation");
    }

    std::uniform_real_distribution<double> radius(1.0, 8.0);
    for (int trial = 0; trial < 5; ++trial) {
        const int n = 5 + trial;
        std::vector<Point2> verts;
        std::vector<std::pair<double, double>> raw;
        const double r = radius(rng);
        for (int i = 0; i < n; ++i) {
            const double ang = 2.0 * kPi * i / n;
            verts.push_back({r * std::cos(ang), r * std::sin(ang)});
            raw.push_back({verts.back().x, verts.back().y});
        }
        const double shoelace = polygon_area(make_polygon(verts));
        const double mc = oracle::mc_polygon_area(raw, 1000000, 7000 + trial);
        require(std::fabs(shoelace - mc) <= 0.005 * shoelace,
                "shoelace vs Monte-Carlo area within 0.5%");
    }

    const Circle2 inc = incircle({0.0, 0.0}, {4.0, 0.0}, {0.0, 3.0});
    require_close(inc.radius, (3.0 + 4.0 - 5.0) / 2.0, 1e-9, "3-4-5 incircle radius");
}

// ---------------------------------------------------------------- criterion 6

void tolerance_law() {
    Coords coords{{"A", {0.0, 0.0}}, {"B", {10.0, 0.0}}, {"C", {3.0, 7.0}}};
    std::vector<QueryTarget> targets;
    // numerical targets perturbed by 0.04% relative
    targets.push_back({"B_x", 10.0 * 1.0004});
    targets.push_back({"C_y", 7.0 * 1.0004});
    // structural target with a genuinely wrong relation (flat residual)
    targets.push_back({"C_x", 90.0});
    // exact structural target
    targets.push_back({"A_x", 0.0});

    const std::vector<double> grid{1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 3e-2};
    auto sweep = tolerance_sweep(targets, coords, grid);
    for (std::size_t i = 1; i < sweep.size(); ++i) {
        require(sweep[i].overall_rate >= sweep[i - 1].overall_rate, "overall curve monotone");
        require(sweep[i].structural_rate >= sweep[i - 1].structural_rate,
                "structural curve monotone");
        require(sweep[i].numerical_rate >= sweep[i - 1].numerical_rate,
                "numerical curve monotone");
    }
    require(sweep[2].numerical_rate == 0.0, "0.04% perturbation fails at rel_tol 1e-4");
    require(sweep[3].numerical_rate == 1.0, "0.04% perturbation passes at rel_tol 1e-3");
    for (const SweepPoint& pt : sweep)
        require(pt.structural_rate == 0.5, "structural failure is tolerance-invariant");
}

// ---------------------------------------------------------------- criterion 7

void catalog_counts() {
    const Catalog full = build_catalog(CatalogProfile::solve2d);
    require(full.specs.size() == 79, "solve2d/full = 79 tools");
    require(full.counts().construction == 55, "55 construction tools (incl. delete_object)");
    require(full.counts().query == 24, "24 query tools");
    require(build_catalog(CatalogProfile::solve3d).specs.size() == 100, "solve3d adds 21");
    require(build_catalog(CatalogProfile::render_pipeline).specs.size() == 92,
            "render adds 13");

    const Catalog bare = build_catalog(CatalogProfile::solve2d, AblationMode::bare_signature);
    Json fj = full.export_json(), bj = bare.export_json();
    require(fj.at("tools").size() == bj.at("tools").size(), "bare keeps every tool");
    for (std::size_t i = 0; i < fj.at("tools").size(); ++i) {
        Json ft = fj.at("tools").at(i), bt = bj.at("tools").at(i);
        require(bt.at("description").get<std::string>().empty(), "bare strips descriptions");
        ft["description"] = "";
        bt["description"] = "";
        for (Json& p : ft.at("parameters")) p["doc"] = "";
        for (Json& p : bt.at("parameters")) p["doc"] = "";
        require(ft.dump() == bt.dump(), "bare differs only in description fields");
    }

    const std::string source = full.export_json().dump();
    const Catalog patched = build_catalog(CatalogProfile::solve2d, AblationMode::full,
                                          {{"add_point", "", "changed"}});
    require(patched.export_json().dump() != source, "overlay changes the export");
    require(build_catalog(CatalogProfile::solve2d).export_json().dump() == source,
            "overlay apply/remove round-trips byte-identically");
}

// ---------------------------------------------------------------- criterion 8

void harness_limits() {
    Limits defaults;
    require(defaults.max_turns == 30, "default turn cap is 30");
    require(defaults.per_turn_timeout_s == 120.0, "default per-turn timeout is 120 s");

    const Catalog catalog = build_catalog(CatalogProfile::solve2d);
    struct Builder : Policy {
        int calls = 0;
        PolicyResponse next_turn(const PolicyRequest&, double) override {
            PolicyResponse r;
            r.text = "more";
            r.actions.push_back(Json{
                {"tool", "add_point"},
                {"args", Json{{"name", "q" + std::to_string(calls++)}, {"x", calls}, {"y", 0}}}});
            return r;
        }
    } builder;
    Problem problem{"cap", "non-terminating", {}};
    EpisodeResult capped = run_episode(problem, builder, catalog);
    require(capped.trace.termination == Termination::turn_cap, "termination = turn_cap");
    require(capped.trace.turns.size() == 30 && builder.calls == 30,
            "terminates at exactly turn 30");

    // stalling HTTP endpoint against a shortened configured limit
    httplib::Server server;
    server.Post("/turn", [](const httplib::Request&, httplib::Response& res) {
        std::this_thread::sleep_for(std::chrono::milliseconds(400));
        res.set_content(R"({"text": "late"})", "application/json");
    });
    std::thread server_thread([&] { server.listen("127.0.0.1", 18262); });
    server.wait_until_ready();
    HttpPolicy http("http://127.0.0.1:18262/turn");
    Limits quick;
    quick.per_turn_timeout_s = 0.1;
    EpisodeResult stalled =
        run_episode(Problem{"stall", "slow endpoint", {}}, http, catalog,
                    EngineMode::strict, quick);
    server.stop();
    server_thread.join();
    require(stalled.trace.termination == Termination::timeout,
            "stalling endpoint trips the per-turn timeout");
}

// ---------------------------------------------------------------- criterion 9

void error_taxonomy_fixtures() {
    const Catalog catalog = build_catalog(CatalogProfile::solve3d);
    ScriptedPolicy policy(Json::parse(R"([
      {"text": "setup", "actions": [
        {"tool": "add_point", "args": {"name": "A", "x": 0, "y": 0}},
        {"tool": "add_point", "args": {"name": "B", "x": 1, "y": 0}},
        {"tool": "add_point", "args": {"name": "C", "x": 0, "y": 2}},
        {"tool": "add_point", "args": {"name": "D", "x": 1, "y": 2}},
        {"tool": "add_segment", "args": {"name": "s1", "p1": "A", "p2": "B"}},
        {"tool": "add_segment", "args": {"name": "s2", "p1": "C", "p2": "D"}}]},
      {"text": "the five model-layer failures", "actions": [
        {"tool": "query_distance", "args": {"obj1": "segment_AB", "obj2": "B"}},
        {"tool": "add_intersect", "args": {"name": "X", "obj1": "s1", "obj2": "s2"}},
        {"tool": "add_segment", "args": {"name": "dup", "p1": "A", "p2": "A"}},
        {"tool": "add_intersect", "args": {"name": "Y", "obj1": "A", "obj2": "s1"}},
        {"tool": "add_net", "args": {"name": "N", "solid": "s1"}}]},
      {"text": "ANSWER: 0"}
    ])"));
    Problem problem{"taxonomy", "five exemplars", {}};
    EpisodeResult result = run_episode(problem, policy, catalog);

    const std::vector<Observation>& obs = result.trace.turns[1].observations;
    require(obs.size() == 5, "five failing calls executed");
    require(obs[0].is_error() && obs[0].code == ErrorCode::entity_not_found,
            "missing entity -> EntityNotFound");
    require(obs[1].is_error() && obs[1].code == ErrorCode::precondition_failed,
            "non-intersecting intersect -> PreconditionFailed");
    require(obs[2].is_error() && obs[2].code == ErrorCode::degenerate_input,
            "identical-point constructor -> DegenerateInput");
    require(obs[3].is_error() && obs[3].code == ErrorCode::type_mismatch,
            "point passed for a curve -> TypeMismatch");
    require(obs[4].is_error() && obs[4].code == ErrorCode::unsupported_tool,
            "add_net -> UnsupportedTool");

    FailureReport report = failure_report({result.trace});
    require(report.total_failures == 5, "analytics counts five failures");
    require(report.by_code.at("EntityNotFound") == 1 &&
                report.by_code.at("PreconditionFailed") == 1 &&
                report.by_code.at("DegenerateInput") == 1 &&
                report.by_code.at("TypeMismatch") == 1 &&
                report.by_code.at("UnsupportedTool") == 1,
            "each exemplar lands in its own bucket");
    std::size_t sum = 0;
    for (const auto& [code, count] : report.by_code) sum += count;
    require(sum == report.total_failures, "per-code counts sum to the total");
}

// ---------------------------------------------------------------- criterion 10

void nsolve_fixture() {
    // the brute-force oracle runs first: 1e-4-step scan of the residual
    auto residual = [](double x) {
        return std::sin(x * kPi / 180.0) + std::cos(x * kPi / 180.0) - std::sqrt(6.0) / 2.0;
    };
    const std::vector<double> expected = oracle::scan_roots(residual, 0.0, 90.0, 1e-4);
    require(expected.size() == 2, "oracle finds exactly two sign changes");
    require_close(expected[0], 15.0, 1e-4, "oracle root near 15");
    require_close(expected[1], 75.0, 1e-4, "oracle root near 75");

    auto roots = nsolve(parse_expr("sin(x*pi/180) + cos(x*pi/180)"), parse_expr("sqrt(6)/2"),
                        "x", 0.0, 90.0);
    require(roots.size() == 2, "nsolve finds exactly two roots");
    require_close(roots[0], expected[0], 1e-6, "first root matches the oracle");
    require_close(roots[1], expected[1], 1e-6, "second root matches the oracle");
    require_close(roots[0], 15.0, 1e-6, "first root is 15");
    require_close(roots[1], 75.0, 1e-6, "second root is 75");
}

// ---------------------------------------------------------------- criterion 11

void verifier_metrics_algebra() {
    auto pred = [](PredicateType type, std::vector<std::string> args, PredicateTier tier) {
        Predicate p;
        p.type = type;
        p.args = std::move(args);
        p.tier = tier;
        return p;
    };
    Coords coords{{"A", {0.0, 0.0}}, {"B", {4.0, 0.0}}, {"C", {2.0, 0.0}}, {"D", {2.0, 5.0}}};

    VerifierProblem p1;  // 3 of 4 pass
    p1.id = "p1";
    p1.predicates = {
        pred(PredicateType::coll, {"A", "C", "B"}, PredicateTier::premise),
        pred(PredicateType::cong, {"A", "C", "C", "B"}, PredicateTier::numcheck),
        pred(PredicateType::perp, {"A", "B", "C", "D"}, PredicateTier::derived),
        pred(PredicateType::coll, {"A", "D", "B"}, PredicateTier::derived),
    };
    VerifierProblem p2 = p1;  // all pass
    p2.id = "p2";
    p2.predicates.pop_back();
    VerifierProblem p3 = p1;  // empty canvas
    p3.id = "p3";

    std::vector<ProblemScore> scores{score_problem(p1, coords), score_problem(p2, coords),
                                     score_problem(p3, {})};
    AggregateReport report = aggregate(scores);
    // hand-computed: passed 3 + 3 + 0 of 4 + 3 + 4 predicates
    require_close(report.sr, 6.0 / 11.0, 1e-15, "SR");
    require_close(report.sc, 1.0 / 3.0, 1e-15, "SC");
    require_close(report.cr, 2.0 / 3.0, 1e-15, "CR");
    require(report.sc <= report.sr, "SC <= SR");
    require_close(report.sr_by_tier.at("premise"), 2.0 / 3.0, 1e-15, "premise tier SR");
    require_close(report.sr_by_tier.at("numcheck"), 2.0 / 3.0, 1e-15, "numcheck tier SR");
    require_close(report.sr_by_tier.at("derived"), 2.0 / 5.0, 1e-15, "derived tier SR");
}

// ---------------------------------------------------------------- criterion 12

void solid_fixture() {
    require(std::fabs(distance3({0, 0, 0}, {15, 11, 0}) - 18.60) <= 0.01,
            "|HF| = 18.60 within 0.01");
    require(std::fabs(distance3({0, 0, 0}, {15, 11, 11}) - 21.61) <= 0.01,
            "|DF| = 21.61 within 0.01");

    const Solid3 cube = make_cube({0, 0, 0}, {1, 0, 0}, {1, 1, 0});
    std::mt19937 rng(90210);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    int checked = 0;
    while (checked < 100) {
        const Vec3 n{u(rng), u(rng), u(rng)};
        if (n.norm() < 0.3) continue;
        const Point3 through{0.5 + 0.3 * u(rng), 0.5 + 0.3 * u(rng), 0.5 + 0.3 * u(rng)};
        const Vec3 un = normalize3(n);
        const double d = un.x * through.x + un.y * through.y + un.z * through.z;
        const auto expected =
            oracle::clip_edges_by_plane(oracle::unit_cube_edges(), un.x, un.y, un.z, d);
        if (expected.size() < 3) continue;
        ++checked;
        Polygon3 section = cross_section(make_plane_point_normal(through, un), cube);
        require(section.vertices.size() == expected.size(), "section vertex count");
        for (const Point3& v : section.vertices) {
            bool found = false;
            for (const auto& e : expected)
                if (std::fabs(v.x - e.x) + std::fabs(v.y - e.y) + std::fabs(v.z - e.z) < 1e-7)
                    found = true;
            require(found, "section vertex matches the clipping oracle");
        }
    }
}

struct Criterion {
    const char* name;
    std::function<void()> fn;
};

}  // namespace

int main() {
    const Criterion criteria[] = {
        {"1. golden trajectory (3-4-5 build, P=(0,-3), |BP|=5, cascade {L,P})",
         golden_trajectory},
        {"2. determinism: 100 randomized episodes replay byte-identically",
         determinism_suite},
        {"3. query purity and strict-mode rollback, exhaustive over the catalog",
         query_purity_and_rollback},
        {"4. delete cascade equals brute-force reachability on 500 random DAGs", dag_oracle},
        {"5. geometry theorem suite (angle sum, Thales, isometries, areas, incircle)",
         geometry_theorem_suite},
        {"6. tolerance law (monotone sweeps, 0.04% fixture, structural invariance)",
         tolerance_law},
        {"7. catalog counts, bare-signature diff, overlay round-trip", catalog_counts},
        {"8. harness limits (turn cap 30, per-turn timeout)", harness_limits},
        {"9. error taxonomy fixtures with analytics partition", error_taxonomy_fixtures},
        {"10. nsolve trig fixture against the scan oracle", nsolve_fixture},
        {"11. verifier metrics algebra (SR/SC/CR by hand)", verifier_metrics_algebra},
        {"12. 3D distances and cube cross-sections vs the clipping oracle", solid_fixture},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        const double start = now_s();
        try {
            c.fn();
            std::printf("[PASS] %-72s (%.2fs)\n", c.name, now_s() - start);
        } catch (const Failure& f) {
            std::printf("[FAIL] %-72s %s\n", c.name, f.what.c_str());
            ++failures;
        } catch (const std::exception& e) {
            std::printf("[FAIL] %-72s unexpected: %s\n", c.name, e.what());
            ++failures;
        }
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
