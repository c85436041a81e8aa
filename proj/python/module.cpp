// Python bindings over the engine's main operations: catalogs, a canvas
// session, replay, verification, analytics and SVG rendering. JSON payloads
// cross the boundary as text to keep the surface small.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "geocanvas/analytics.hpp"
#include "geocanvas/calculus.hpp"
#include "geocanvas/harness.hpp"
#include "geocanvas/render.hpp"
#include "geocanvas/toolspec.hpp"
#include "geocanvas/verifier.hpp"

namespace py = pybind11;
using namespace geocanvas;

namespace {

Json parse_json(const std::string& text) { return Json::parse(text); }

Catalog catalog_from(const std::string& profile, const std::string& mode,
                     const std::string& overlays_json) {
    std::vector<OverlayPatch> overlays;
    if (!overlays_json.empty()) overlays = overlays_from_json(parse_json(overlays_json));
    return build_catalog(profile_from_string(profile), mode_from_string(mode), overlays);
}

/// One construction session: a catalog plus the evolving state.
class Session {
public:
    explicit Session(const std::string& profile = "solve2d", const std::string& mode = "full",
                     bool silent = false)
        : catalog_(catalog_from(profile, mode, "")),
          mode_(silent ? EngineMode::silent : EngineMode::strict) {}

    std::string apply(const std::string& tool, const std::string& args_json) {
        Json args = args_json.empty() ? Json::object() : parse_json(args_json);
        try {
            Action action = validate_call(catalog_, tool, args);
            auto [next, obs] = apply_action(state_, action, mode_);
            state_ = std::move(next);
            return obs.to_json().dump();
        } catch (const ToolError& e) {
            Json err;
            err["type"] = "error";
            err["code"] = to_string(e.code());
            err["message"] = e.what();
            err["tool"] = tool;
            return err.dump();
        }
    }

    std::string export_state_json() const { return dump_canonical(export_state(state_)); }

    void import_state_json(const std::string& doc) { state_ = import_state(parse_json(doc)); }

    std::string render(int width, int height, bool textbook) const {
        CanvasState st = textbook ? apply_textbook_preset(state_) : state_;
        return render_svg(st, auto_viewport(st, width, height));
    }

    std::string coords_json() const {
        Json j = Json::object();
        for (const auto& [name, p] : coords_from_state(state_))
            j[name] = Json::array({p.x, p.y});
        return j.dump();
    }

    std::size_t size() const { return state_.size(); }
    std::string digest() const { return catalog_.digest(); }

private:
    Catalog catalog_;
    CanvasState state_;
    EngineMode mode_;
};

std::string export_catalog_json(const std::string& profile, const std::string& mode,
                                const std::string& overlays_json) {
    return dump_canonical(catalog_from(profile, mode, overlays_json).export_json());
}

std::vector<double> py_nsolve(const std::string& equation, double lo, double hi, int grid) {
    Relation rel = parse_relation(equation);
    std::vector<std::string> vars = free_variables(rel.lhs);
    for (const std::string& v : free_variables(rel.rhs))
        if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
    const std::string var = vars.size() == 1 ? vars.front() : "x";
    return nsolve(rel.lhs, rel.rhs, var, lo, hi, grid);
}

double py_eval(const std::string& expr, const std::map<std::string, double>& bindings) {
    Scalar v = eval_expr(parse_expr(expr), bindings);
    if (!v.is_defined()) throw std::domain_error("expression is undefined at this binding");
    return v.value();
}

double py_integrate(const std::string& expr, double a, double b) {
    return quadrature_expr(parse_expr(expr), "x", a, b);
}

std::string py_replay(const std::string& trace_jsonl, const std::string& profile,
                      const std::string& mode, bool check_digest) {
    std::vector<Trace> traces = traces_from_jsonl(trace_jsonl);
    if (traces.empty()) throw std::invalid_argument("no episodes in the trace text");
    Catalog catalog = catalog_from(profile, mode, "");
    std::vector<Action> actions;
    for (const TurnRecord& turn : traces[0].turns)
        for (const Action& a : turn.actions) actions.push_back(a);
    CanvasState state = replay(actions, catalog,
                               check_digest ? traces[0].catalog_digest : std::string());
    return dump_canonical(export_state(state));
}

std::string py_run_scripted(const std::string& problem_json, const std::string& turns_json,
                            const std::string& profile, int max_turns) {
    Catalog catalog = catalog_from(profile, "full", "");
    Problem problem = Problem::from_json(parse_json(problem_json));
    ScriptedPolicy policy(parse_json(turns_json));
    Limits limits;
    limits.max_turns = max_turns;
    EpisodeResult result = run_episode(problem, policy, catalog, EngineMode::strict, limits);
    Json out;
    out["termination"] = to_string(result.trace.termination);
    out["final_answer"] = result.trace.final_answer;
    out["turns"] = result.trace.turns.size();
    out["trace_jsonl"] = trace_to_jsonl(result.trace);
    out["state"] = export_state(result.final_state);
    return out.dump();
}

std::string py_verify(const std::string& problems_json, const std::string& coords_json) {
    Json problems = parse_json(problems_json);
    Json coords_doc = parse_json(coords_json);
    std::vector<ProblemScore> scores;
    for (const Json& pj : problems) {
        VerifierProblem spec = VerifierProblem::from_json(pj);
        Coords coords;
        if (coords_doc.contains(spec.id)) coords = coords_from_json(coords_doc.at(spec.id));
        scores.push_back(score_problem(spec, coords));
    }
    return dump_canonical(aggregate(scores).to_json());
}

std::string py_analyze(const std::string& traces_jsonl) {
    std::vector<Trace> traces = traces_from_jsonl(traces_jsonl);
    Json doc;
    doc["traces"] = traces.size();
    doc["provenance"] = provenance_summary(traces).to_json();
    doc["failures"] = failure_report(traces).to_json();
    doc["phase_profile"] = phase_profile(traces).to_json();
    return dump_canonical(doc);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "constraint-checked geometric construction engine";

    py::class_<Session>(m, "Session")
        .def(py::init<const std::string&, const std::string&, bool>(),
             py::arg("profile") = "solve2d", py::arg("mode") = "full",
             py::arg("silent") = false)
        .def("apply", &Session::apply, py::arg("tool"), py::arg("args_json") = "",
             "Validate and execute one tool call; returns the observation as JSON text.")
        .def("export_state", &Session::export_state_json)
        .def("import_state", &Session::import_state_json, py::arg("doc_json"))
        .def("render_svg", &Session::render, py::arg("width") = 640, py::arg("height") = 640,
             py::arg("textbook") = false)
        .def("coords", &Session::coords_json, "Named point coordinates as JSON text.")
        .def("catalog_digest", &Session::digest)
        .def("__len__", &Session::size);

    m.def("export_catalog", &export_catalog_json, py::arg("profile") = "solve2d",
          py::arg("mode") = "full", py::arg("overlays_json") = "",
          "Canonical catalog JSON with its SHA-256 digest.");
    m.def("parse_expr", [](const std::string& text) { return print_expr(parse_expr(text)); },
          py::arg("text"), "Parse and pretty-print an expression (round-trip canonical form).");
    m.def("eval_expr", &py_eval, py::arg("expr"),
          py::arg("bindings") = std::map<std::string, double>{});
    m.def("nsolve", &py_nsolve, py::arg("equation"), py::arg("lo") = -1000.0,
          py::arg("hi") = 1000.0, py::arg("grid") = 4096);
    m.def("integrate", &py_integrate, py::arg("expr"), py::arg("a"), py::arg("b"));
    m.def("replay", &py_replay, py::arg("trace_jsonl"), py::arg("profile") = "solve2d",
          py::arg("mode") = "full", py::arg("check_digest") = true);
    m.def("run_scripted", &py_run_scripted, py::arg("problem_json"), py::arg("turns_json"),
          py::arg("profile") = "solve2d", py::arg("max_turns") = 30,
          "Run one scripted episode; returns trace, answer and state as JSON text.");
    m.def("verify", &py_verify, py::arg("problems_json"), py::arg("coords_json"),
          "Score problems against coordinates; returns the aggregate report.");
    m.def("analyze", &py_analyze, py::arg("traces_jsonl"));

    m.attr("__version__") = "0.1.0";
}
