// Command-line front end: interactive construction, episode running, replay,
// verification, trace analytics, catalog export and SVG rendering.

#include <CLI11.hpp>

#include <atomic>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "geocanvas/analytics.hpp"
#include "geocanvas/harness.hpp"
#include "geocanvas/render.hpp"
#include "geocanvas/toolspec.hpp"
#include "geocanvas/verifier.hpp"

using namespace geocanvas;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUsage = 2;

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    Json j;
    in >> j;
    return j;
}

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << bytes;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct CatalogOptions {
    std::string profile = "solve2d";
    std::string mode = "full";
    std::string overlay_file;

    Catalog build() const {
        std::vector<OverlayPatch> overlays;
        if (!overlay_file.empty())
            overlays = overlays_from_json(read_json_file(overlay_file));
        return build_catalog(profile_from_string(profile), mode_from_string(mode), overlays);
    }

    void attach(CLI::App* cmd) {
        cmd->add_option("--profile", profile, "catalog profile")
            ->check(CLI::IsMember({"solve2d", "solve3d", "render_pipeline"}));
        cmd->add_option("--mode", mode, "ablation mode")
            ->check(CLI::IsMember({"full", "bare_signature", "no_measurement", "no_query"}));
        cmd->add_option("--overlay", overlay_file, "overlay patch file (JSON array)");
    }
};

std::vector<double> parse_grid(const std::string& csv) {
    std::vector<double> grid;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) grid.push_back(std::stod(item));
    return grid;
}

int cmd_catalog(const CatalogOptions& opts, const std::string& out) {
    Catalog catalog = opts.build();
    const std::string text = dump_canonical(catalog.export_json()) + "\n";
    if (out.empty())
        std::cout << text;
    else
        write_file(out, text);
    return kExitOk;
}

int cmd_repl(const CatalogOptions& opts, bool silent) {
    Catalog catalog = opts.build();
    CanvasState state;
    const EngineMode mode = silent ? EngineMode::silent : EngineMode::strict;
    std::cout << "# one tool call per line: <tool> {\"arg\": value, ...}\n"
              << "# :state  :export FILE  :svg FILE  :quit\n";
    std::string line;
    while (std::getline(std::cin, line)) {
        if (line.empty()) continue;
        if (line == ":quit" || line == ":q") break;
        if (line == ":state") {
            for (const std::string& name : state.order) {
                const CanvasObject& obj = state.at(name);
                std::cout << name << " : " << obj.kind << " = "
                          << (obj.values.empty() ? "undefined" : value_brief(obj.single()))
                          << "\n";
            }
            continue;
        }
        if (line.rfind(":export ", 0) == 0) {
            write_file(line.substr(8), dump_canonical(export_state(state)) + "\n");
            continue;
        }
        if (line.rfind(":svg ", 0) == 0) {
            write_file(line.substr(5), render_svg(state, auto_viewport(state)));
            continue;
        }
        const std::size_t space = line.find(' ');
        const std::string tool = line.substr(0, space);
        Json args = Json::object();
        if (space != std::string::npos) {
            try {
                args = Json::parse(line.substr(space + 1));
            } catch (const Json::exception& e) {
                std::cout << "parse error: " << e.what() << "\n";
                continue;
            }
        }
        try {
            Action action = validate_call(catalog, tool, args);
            auto [next, obs] = apply_action(state, action, mode);
            state = std::move(next);
            std::cout << obs.to_json().dump() << "\n";
        } catch (const ToolError& e) {
            Json err;
            err["type"] = "error";
            err["code"] = to_string(e.code());
            err["message"] = e.what();
            std::cout << err.dump() << "\n";
        }
    }
    return kExitOk;
}

int cmd_run(const CatalogOptions& opts, const std::string& problems_file,
            const std::string& policy_spec, int max_turns, double timeout_s, bool silent,
            const std::string& out_dir, int jobs) {
    Catalog catalog = opts.build();
    Json problems_json = read_json_file(problems_file);
    if (!problems_json.is_array()) throw std::runtime_error("problems file must be an array");
    std::vector<Problem> problems;
    for (const Json& j : problems_json) problems.push_back(Problem::from_json(j));

    Limits limits;
    limits.max_turns = max_turns;
    limits.per_turn_timeout_s = timeout_s;
    const EngineMode mode = silent ? EngineMode::silent : EngineMode::strict;

    std::atomic<std::size_t> next_index{0};
    std::atomic<int> failures{0};
    std::mutex io_mutex;

    auto worker = [&]() {
        while (true) {
            const std::size_t i = next_index.fetch_add(1);
            if (i >= problems.size()) return;
            const Problem& problem = problems[i];
            try {
                std::unique_ptr<Policy> policy = make_policy(policy_spec);
                EpisodeResult result = run_episode(problem, *policy, catalog, mode, limits);
                if (!out_dir.empty()) {
                    write_file(out_dir + "/" + problem.id + ".trace.jsonl",
                               trace_to_jsonl(result.trace));
                    write_file(out_dir + "/" + problem.id + ".state.json",
                               dump_canonical(export_state(result.final_state)) + "\n");
                }
                std::lock_guard<std::mutex> lock(io_mutex);
                std::cout << problem.id << "  " << to_string(result.trace.termination)
                          << "  answer="
                          << (result.trace.final_answer.is_null()
                                  ? std::string("-")
                                  : result.trace.final_answer.dump())
                          << "  turns=" << result.trace.turns.size() << "\n";
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(io_mutex);
                std::cerr << problem.id << "  error: " << e.what() << "\n";
                ++failures;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int i = 0; i < std::max(1, jobs); ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    return failures.load() == 0 ? kExitOk : kExitError;
}

int cmd_replay(const CatalogOptions& opts, const std::string& trace_file,
               const std::string& out_state, bool skip_digest) {
    Catalog catalog = opts.build();
    std::vector<Trace> traces = traces_from_jsonl(read_file(trace_file));
    if (traces.empty()) throw std::runtime_error("trace file holds no episodes");
    for (const Trace& trace : traces) {
        CanvasState state;
        Json last_value;
        if (!skip_digest && !trace.catalog_digest.empty() &&
            catalog.digest() != trace.catalog_digest)
            throw DigestMismatch("catalog digest does not match the trace");
        for (const TurnRecord& turn : trace.turns)
            for (const Action& recorded : turn.actions) {
                Action action = validate_call(catalog, recorded.tool, recorded.args);
                auto [next, obs] = apply_action(state, action);
                state = std::move(next);
                if (obs.type == Observation::Type::value) last_value = obs.value;
            }
        std::cout << trace.problem_id << "  objects=" << state.size();
        if (!last_value.is_null()) std::cout << "  last_value=" << last_value.dump();
        std::cout << "\n";
        if (!out_state.empty())
            write_file(out_state, dump_canonical(export_state(state)) + "\n");
    }
    return kExitOk;
}

int cmd_verify(const std::string& problems_file, const std::string& coords_path,
               const std::string& sweep_csv, const std::string& out, int jobs) {
    Json problems_json = read_json_file(problems_file);
    if (!problems_json.is_array()) throw std::runtime_error("problems file must be an array");
    std::vector<VerifierProblem> problems;
    for (const Json& j : problems_json) problems.push_back(VerifierProblem::from_json(j));

    // coords: a directory of <id>.json files or one file mapping id -> coords
    std::map<std::string, Coords> coords_by_id;
    {
        std::ifstream as_file(coords_path);
        if (as_file && coords_path.size() > 5 &&
            coords_path.substr(coords_path.size() - 5) == ".json") {
            Json combined = read_json_file(coords_path);
            for (auto it = combined.begin(); it != combined.end(); ++it)
                coords_by_id[it.key()] = coords_from_json(it.value());
        } else {
            for (const VerifierProblem& p : problems) {
                std::ifstream in(coords_path + "/" + p.id + ".json");
                if (in) {
                    Json j;
                    in >> j;
                    coords_by_id[p.id] = coords_from_json(j);
                }
            }
        }
    }

    std::vector<ProblemScore> scores(problems.size());
    std::atomic<std::size_t> next_index{0};
    auto worker = [&]() {
        while (true) {
            const std::size_t i = next_index.fetch_add(1);
            if (i >= problems.size()) return;
            const auto it = coords_by_id.find(problems[i].id);
            scores[i] = score_problem(problems[i],
                                      it == coords_by_id.end() ? Coords{} : it->second);
        }
    };
    std::vector<std::thread> pool;
    for (int i = 0; i < std::max(1, jobs); ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();

    AggregateReport report = aggregate(scores);
    Json doc = report.to_json();

    if (!sweep_csv.empty()) {
        const std::vector<double> grid = parse_grid(sweep_csv);
        for (const VerifierProblem& p : problems) {
            const auto it = coords_by_id.find(p.id);
            if (it == coords_by_id.end()) continue;
            Json sweep_rows = Json::array();
            for (const SweepPoint& pt : tolerance_sweep(p.queries, it->second, grid)) {
                Json row;
                row["rel_tol"] = pt.rel_tol;
                row["structural"] = pt.structural_rate;
                row["numerical"] = pt.numerical_rate;
                row["overall"] = pt.overall_rate;
                sweep_rows.push_back(row);
            }
            for (Json& problem_row : doc.at("per_problem"))
                if (problem_row.at("id") == p.id) problem_row["sweep"] = sweep_rows;
        }
    }

    const std::string text = dump_canonical(doc) + "\n";
    if (out.empty())
        std::cout << text;
    else
        write_file(out, text);
    std::cout << "SR=" << report.sr << " SC=" << report.sc << " CR=" << report.cr << "\n";
    return kExitOk;
}

int cmd_analyze(const std::vector<std::string>& trace_files, bool table) {
    std::vector<Trace> traces;
    for (const std::string& path : trace_files) {
        std::vector<Trace> batch = traces_from_jsonl(read_file(path));
        traces.insert(traces.end(), batch.begin(), batch.end());
    }
    ProvenanceSummary prov = provenance_summary(traces);
    FailureReport failures = failure_report(traces);
    PhaseProfile phases = phase_profile(traces);
    if (table) {
        std::cout << prov.to_table() << "\n"
                  << failures.to_table() << "\n"
                  << phases.to_table();
    } else {
        Json doc;
        doc["traces"] = traces.size();
        doc["provenance"] = prov.to_json();
        doc["failures"] = failures.to_json();
        doc["phase_profile"] = phases.to_json();
        std::cout << dump_canonical(doc) << "\n";
    }
    return kExitOk;
}

int cmd_render(const std::string& state_file, const std::string& out, const std::string& style,
               const std::string& viewport_csv, int width, int height) {
    CanvasState state = import_state(read_json_file(state_file));
    if (style == "textbook") state = apply_textbook_preset(state);
    Viewport vp = auto_viewport(state, width, height);
    if (!viewport_csv.empty()) {
        std::vector<double> b = parse_grid(viewport_csv);
        if (b.size() != 4) throw std::runtime_error("--viewport needs x0,x1,y0,y1");
        vp.xmin = b[0];
        vp.xmax = b[1];
        vp.ymin = b[2];
        vp.ymax = b[3];
    }
    write_file(out, render_svg(state, vp));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"deterministic constraint-checked geometry construction engine"};
    app.require_subcommand(1);
    app.set_config("--config", "", "optional config file; flags win over file values");

    CatalogOptions repl_opts, run_opts, replay_opts, catalog_opts;

    CLI::App* repl = app.add_subcommand("repl", "interactive line-per-tool-call canvas");
    bool repl_silent = false;
    repl_opts.attach(repl);
    repl->add_flag("--silent", repl_silent, "degenerate constructions make undefined objects");

    CLI::App* run = app.add_subcommand("run", "run episodes from a problem file via a policy");
    std::string run_problems, run_policy, run_out;
    int run_max_turns = 30;
    double run_timeout = 120.0;
    bool run_silent = false;
    int run_jobs = 1;
    run->add_option("--problems", run_problems, "problem file (JSON array)")->required();
    run->add_option("--policy", run_policy,
                    "policy transport: scripted:FILE, stdio:CMD or http://HOST:PORT/turn")
        ->required();
    run_opts.attach(run);
    run->add_option("--max-turns", run_max_turns, "turn cap per episode");
    run->add_option("--timeout", run_timeout, "per-turn policy deadline in seconds");
    run->add_flag("--silent", run_silent, "silent engine mode");
    run->add_option("--out", run_out, "directory for trace and state files");
    run->add_option("--jobs", run_jobs, "episodes to run in parallel");

    CLI::App* rep = app.add_subcommand("replay", "re-execute a recorded trace");
    std::string replay_trace, replay_out;
    bool replay_skip_digest = false;
    rep->add_option("trace", replay_trace, "trace JSONL file")->required();
    replay_opts.attach(rep);
    rep->add_option("-o,--out", replay_out, "write the final state document here");
    rep->add_flag("--no-digest-check", replay_skip_digest,
                  "skip the catalog digest comparison");

    CLI::App* verify = app.add_subcommand("verify", "score canvases against problem predicates");
    std::string verify_problems, verify_coords, verify_sweep, verify_out;
    int verify_jobs = 1;
    verify->add_option("--problems", verify_problems, "problem file (JSON array)")->required();
    verify->add_option("--coords", verify_coords,
                       "coords dir with <id>.json files, or one id->coords JSON file")
        ->required();
    verify->add_option("--sweep", verify_sweep, "comma-separated rel_tol grid");
    verify->add_option("-o,--out", verify_out, "write the report here");
    verify->add_option("--jobs", verify_jobs, "problems to score in parallel");

    CLI::App* analyze = app.add_subcommand("analyze", "trace analytics");
    std::vector<std::string> analyze_traces;
    bool analyze_table = false;
    analyze->add_option("traces", analyze_traces, "trace JSONL files")->required();
    analyze->add_flag("--table", analyze_table, "aligned text tables instead of JSON");

    CLI::App* catalog = app.add_subcommand("catalog", "export the tool catalog");
    std::string catalog_out;
    catalog_opts.attach(catalog);
    catalog->add_option("-o,--out", catalog_out, "write the catalog here");

    CLI::App* render = app.add_subcommand("render", "render a state document to SVG");
    std::string render_state, render_out, render_style = "standard", render_viewport;
    int render_width = 640, render_height = 640;
    render->add_option("state", render_state, "state JSON document")->required();
    render->add_option("-o,--out", render_out, "output SVG path")->required();
    render->add_option("--style", render_style, "standard or textbook")
        ->check(CLI::IsMember({"standard", "textbook"}));
    render->add_option("--viewport", render_viewport, "world bounds x0,x1,y0,y1");
    render->add_option("--width", render_width, "pixel width");
    render->add_option("--height", render_height, "pixel height");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (repl->parsed()) return cmd_repl(repl_opts, repl_silent);
        if (run->parsed())
            return cmd_run(run_opts, run_problems, run_policy, run_max_turns, run_timeout,
                           run_silent, run_out, run_jobs);
        if (rep->parsed())
            return cmd_replay(replay_opts, replay_trace, replay_out, replay_skip_digest);
        if (verify->parsed())
            return cmd_verify(verify_problems, verify_coords, verify_sweep, verify_out,
                              verify_jobs);
        if (analyze->parsed()) return cmd_analyze(analyze_traces, analyze_table);
        if (catalog->parsed()) return cmd_catalog(catalog_opts, catalog_out);
        if (render->parsed())
            return cmd_render(render_state, render_out, render_style, render_viewport,
                              render_width, render_height);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitUsage;
}
