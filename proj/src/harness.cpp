#include "geocanvas/harness.hpp"

#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include <httplib.h>

#include "geocanvas/expr.hpp"

namespace geocanvas {

namespace {

double now_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

std::string lowercase(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

}  // namespace

Problem Problem::from_json(const Json& j) {
    Problem p;
    p.id = j.value("id", std::string("problem"));
    p.text = j.at("text").get<std::string>();
    if (j.contains("choices"))
        for (const Json& c : j.at("choices")) p.choices.push_back(c.get<std::string>());
    return p;
}

Json Problem::to_json() const {
    Json j;
    j["id"] = id;
    j["text"] = text;
    if (!choices.empty()) j["choices"] = choices;
    return j;
}

Json PolicyRequest::to_json() const {
    Json j;
    j["problem"] = problem;
    j["catalog_digest"] = catalog_digest;
    j["history"] = history;
    return j;
}

PolicyResponse PolicyResponse::from_json(const Json& j) {
    if (!j.is_object()) throw PolicyProtocolError("policy response must be a JSON object");
    PolicyResponse r;
    r.text = j.value("text", std::string());
    if (j.contains("tokens")) r.tokens = j.at("tokens");
    if (j.contains("actions")) {
        if (!j.at("actions").is_array())
            throw PolicyProtocolError("policy response field 'actions' must be an array");
        for (const Json& a : j.at("actions")) {
            if (!a.is_object() || !a.contains("tool"))
                throw PolicyProtocolError("each action needs a 'tool' field");
            r.actions.push_back(a);
        }
    }
    return r;
}

// --- policies ------------------------------------------------------------------

ScriptedPolicy::ScriptedPolicy(Json turns) : turns_(std::move(turns)) {
    if (!turns_.is_array()) throw PolicyProtocolError("scripted policy needs a JSON array");
}

ScriptedPolicy ScriptedPolicy::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw PolicyProtocolError("cannot open scripted policy file: " + path);
    Json j;
    in >> j;
    return ScriptedPolicy(std::move(j));
}

PolicyResponse ScriptedPolicy::next_turn(const PolicyRequest&, double) {
    if (cursor_ >= turns_.size()) return PolicyResponse{};
    return PolicyResponse::from_json(turns_.at(cursor_++));
}

StdioPolicy::StdioPolicy(std::string command) : command_(std::move(command)) {}

StdioPolicy::~StdioPolicy() { shutdown(); }

void StdioPolicy::launch() {
    int in_pipe[2], out_pipe[2];
    if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0)
        throw PolicyProtocolError("cannot create pipes for the stdio policy");
    const int pid = fork();
    if (pid < 0) throw PolicyProtocolError("fork failed for the stdio policy");
    if (pid == 0) {
        dup2(in_pipe[0], STDIN_FILENO);
        dup2(out_pipe[1], STDOUT_FILENO);
        close(in_pipe[0]);
        close(in_pipe[1]);
        close(out_pipe[0]);
        close(out_pipe[1]);
        execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
        _exit(127);
    }
    close(in_pipe[0]);
    close(out_pipe[1]);
    to_child_ = in_pipe[1];
    from_child_ = out_pipe[0];
    pid_ = pid;
}

void StdioPolicy::shutdown() {
    if (to_child_ >= 0) close(to_child_);
    if (from_child_ >= 0) close(from_child_);
    to_child_ = from_child_ = -1;
    if (pid_ > 0) {
        kill(pid_, SIGTERM);
        int status = 0;
        waitpid(pid_, &status, 0);
        pid_ = -1;
    }
}

PolicyResponse StdioPolicy::next_turn(const PolicyRequest& request, double deadline_s) {
    if (pid_ < 0) launch();
    const std::string line = request.to_json().dump() + "\n";
    ssize_t off = 0;
    while (off < static_cast<ssize_t>(line.size())) {
        const ssize_t n = write(to_child_, line.data() + off, line.size() - off);
        if (n <= 0) throw PolicyProtocolError("stdio policy closed its input");
        off += n;
    }
    const double start = now_seconds();
    while (true) {
        const std::size_t nl = buffer_.find('\n');
        if (nl != std::string::npos) {
            const std::string payload = buffer_.substr(0, nl);
            buffer_.erase(0, nl + 1);
            try {
                return PolicyResponse::from_json(Json::parse(payload));
            } catch (const Json::exception& e) {
                throw PolicyProtocolError(std::string("bad policy response: ") + e.what());
            }
        }
        const double remaining = deadline_s - (now_seconds() - start);
        if (remaining <= 0.0) {
            shutdown();
            throw PolicyTimeout("stdio policy exceeded the per-turn deadline");
        }
        pollfd pfd{from_child_, POLLIN, 0};
        const int rc = poll(&pfd, 1, static_cast<int>(std::ceil(remaining * 1000.0)));
        if (rc == 0) {
            shutdown();
            throw PolicyTimeout("stdio policy exceeded the per-turn deadline");
        }
        if (rc < 0) throw PolicyProtocolError("poll failed on the stdio policy");
        char chunk[4096];
        const ssize_t n = read(from_child_, chunk, sizeof(chunk));
        if (n <= 0) throw PolicyProtocolError("stdio policy closed its output");
        buffer_.append(chunk, static_cast<std::size_t>(n));
    }
}

HttpPolicy::HttpPolicy(std::string url) {
    // split scheme://host:port and path
    std::string rest = url;
    const std::size_t scheme = rest.find("://");
    std::string prefix = "http://";
    if (scheme != std::string::npos) {
        prefix = rest.substr(0, scheme + 3);
        rest = rest.substr(scheme + 3);
    }
    const std::size_t slash = rest.find('/');
    host_ = prefix + (slash == std::string::npos ? rest : rest.substr(0, slash));
    path_ = slash == std::string::npos ? "/turn" : rest.substr(slash);
    if (path_.empty() || path_ == "/") path_ = "/turn";
}

PolicyResponse HttpPolicy::next_turn(const PolicyRequest& request, double deadline_s) {
    httplib::Client client(host_);
    const time_t secs = static_cast<time_t>(deadline_s);
    const time_t usecs = static_cast<time_t>((deadline_s - static_cast<double>(secs)) * 1e6);
    client.set_connection_timeout(secs, usecs);
    client.set_read_timeout(secs, usecs);
    client.set_write_timeout(secs, usecs);
    const double start = now_seconds();
    httplib::Result res = client.Post(path_, request.to_json().dump(), "application/json");
    if (!res) {
        if (now_seconds() - start >= deadline_s * 0.95)
            throw PolicyTimeout("policy endpoint exceeded the per-turn deadline");
        throw PolicyProtocolError("policy endpoint unreachable");
    }
    if (res->status != 200)
        throw PolicyProtocolError("policy endpoint returned HTTP " +
                                  std::to_string(res->status));
    try {
        return PolicyResponse::from_json(Json::parse(res->body));
    } catch (const Json::exception& e) {
        throw PolicyProtocolError(std::string("bad policy response: ") + e.what());
    }
}

std::unique_ptr<Policy> make_policy(const std::string& spec) {
    const std::size_t colon = spec.find(':');
    if (colon == std::string::npos)
        throw PolicyProtocolError("policy spec must look like scripted:FILE, stdio:CMD or "
                                  "http://URL");
    const std::string kind = spec.substr(0, colon);
    if (kind == "scripted")
        return std::make_unique<ScriptedPolicy>(ScriptedPolicy::from_file(spec.substr(colon + 1)));
    if (kind == "stdio") return std::make_unique<StdioPolicy>(spec.substr(colon + 1));
    if (kind == "http" || kind == "https") return std::make_unique<HttpPolicy>(spec);
    throw PolicyProtocolError("unknown policy transport '" + kind + "'");
}

// --- answers ------------------------------------------------------------------

const char* to_string(Termination t) {
    switch (t) {
        case Termination::answered: return "answered";
        case Termination::no_tool_no_answer: return "no_tool_no_answer";
        case Termination::turn_cap: return "turn_cap";
        case Termination::timeout: return "timeout";
    }
    return "turn_cap";
}

std::size_t Trace::action_count() const {
    std::size_t n = 0;
    for (const TurnRecord& t : turns) n += t.actions.size();
    return n;
}

Json AnswerValue::to_json() const {
    Json j;
    switch (kind) {
        case Kind::number:
            j["kind"] = "number";
            j["value"] = number;
            break;
        case Kind::choice:
            j["kind"] = "choice";
            j["value"] = text;
            break;
        case Kind::text:
            j["kind"] = "text";
            j["value"] = text;
            break;
    }
    return j;
}

namespace {

std::string answer_payload(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::size_t i = 0;
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        const std::string low = lowercase(line.substr(i));
        if (low.rfind("answer", 0) == 0) {
            std::size_t j = i + 6;
            while (j < line.size() && std::isspace(static_cast<unsigned char>(line[j]))) ++j;
            if (j < line.size() && line[j] == ':') {
                std::string payload = line.substr(j + 1);
                const std::size_t b = payload.find_first_not_of(" \t");
                const std::size_t e = payload.find_last_not_of(" \t\r");
                if (b == std::string::npos) return "";
                return payload.substr(b, e - b + 1);
            }
        }
    }
    return "";
}

bool parse_full_number(const std::string& s, double& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size() && std::isfinite(out);
}

}  // namespace

bool has_answer_marker(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::size_t i = 0;
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        const std::string low = lowercase(line.substr(i));
        if (low.rfind("answer", 0) == 0) {
            std::size_t j = i + 6;
            while (j < line.size() && std::isspace(static_cast<unsigned char>(line[j]))) ++j;
            if (j < line.size() && line[j] == ':') return true;
        }
    }
    return false;
}

AnswerValue extract_answer(const std::string& text, const CanvasState& state,
                           const std::vector<std::string>& choices) {
    const std::string payload = answer_payload(text);
    if (payload.empty()) throw AnswerParseError("no value after the ANSWER marker");

    AnswerValue out;
    double num = 0.0;
    bool numeric = false;

    if (parse_full_number(payload, num)) {
        numeric = true;
    } else if (state.has(payload)) {
        // engine-grounded readout: a named number object on the canvas
        const CanvasObject& obj = state.at(payload);
        if (!obj.is_list && obj.is_defined() && std::holds_alternative<double>(obj.single())) {
            num = std::get<double>(obj.single());
            numeric = true;
        }
    }
    if (!numeric) {
        try {
            ExprPtr e = parse_expr(payload);
            if (free_variables(e).empty()) {
                Scalar v = eval_expr(e, {});
                if (v.is_defined()) {
                    num = v.value();
                    numeric = true;
                }
            }
        } catch (const ParseError&) {
        }
    }

    if (!choices.empty()) {
        // bare choice letter wins
        if (payload.size() == 1 && std::isalpha(static_cast<unsigned char>(payload[0]))) {
            const std::size_t idx =
                static_cast<std::size_t>(std::toupper(static_cast<unsigned char>(payload[0])) -
                                         'A');
            if (idx < choices.size()) {
                out.kind = AnswerValue::Kind::choice;
                out.text = std::string(1, static_cast<char>('A' + idx));
                return out;
            }
        }
        if (numeric) {
            const TolerancePolicy near{0.0, 1e-3};
            double best_err = std::numeric_limits<double>::infinity();
            int best = -1;
            for (std::size_t i = 0; i < choices.size(); ++i) {
                double cv = 0.0;
                if (!parse_full_number(choices[i], cv)) {
                    try {
                        ExprPtr e = parse_expr(choices[i]);
                        if (!free_variables(e).empty()) continue;
                        Scalar v = eval_expr(e, {});
                        if (!v.is_defined()) continue;
                        cv = v.value();
                    } catch (const ParseError&) {
                        continue;
                    }
                }
                const double err = std::fabs(cv - num);
                if (near.pass(cv, num) && err < best_err) {
                    best_err = err;
                    best = static_cast<int>(i);
                }
            }
            if (best >= 0) {
                out.kind = AnswerValue::Kind::choice;
                out.text = std::string(1, static_cast<char>('A' + best));
                return out;
            }
        }
    }

    if (numeric) {
        out.kind = AnswerValue::Kind::number;
        out.number = num;
        return out;
    }
    out.kind = AnswerValue::Kind::text;
    out.text = payload;
    return out;
}

// --- episode loop ------------------------------------------------------------------

EpisodeResult run_episode(const Problem& problem, Policy& policy, const Catalog& catalog,
                          EngineMode mode, Limits limits, const TolerancePolicy& policy_tol) {
    EpisodeResult result;
    Trace& trace = result.trace;
    trace.problem_id = problem.id;
    trace.catalog_digest = catalog.digest();
    trace.termination = Termination::turn_cap;

    CanvasState state;  // S0 = empty
    Json history = Json::array();
    int no_tool_streak = 0;

    for (int turn = 1; turn <= limits.max_turns; ++turn) {
        PolicyRequest request;
        request.problem = problem.text;
        request.catalog_digest = trace.catalog_digest;
        request.history = history;

        TurnRecord rec;
        rec.index = turn;
        const double start = now_seconds();
        PolicyResponse response;
        try {
            response = policy.next_turn(request, limits.per_turn_timeout_s);
        } catch (const PolicyTimeout&) {
            rec.wall_time_s = now_seconds() - start;
            trace.turns.push_back(std::move(rec));
            trace.termination = Termination::timeout;
            result.final_state = std::move(state);
            return result;
        }
        rec.wall_time_s = now_seconds() - start;
        if (rec.wall_time_s > limits.per_turn_timeout_s) {
            // in-process policies cannot be preempted; the cap still binds
            rec.text = response.text;
            trace.turns.push_back(std::move(rec));
            trace.termination = Termination::timeout;
            result.final_state = std::move(state);
            return result;
        }
        rec.text = response.text;
        rec.tokens = response.tokens;

        if (has_answer_marker(response.text)) {
            trace.termination = Termination::answered;
            trace.final_text = response.text;
            try {
                trace.final_answer =
                    extract_answer(response.text, state, problem.choices).to_json();
            } catch (const AnswerParseError&) {
                trace.final_answer = nullptr;
            }
            trace.turns.push_back(std::move(rec));
            result.final_state = std::move(state);
            return result;
        }

        if (response.actions.empty()) {
            ++no_tool_streak;
            trace.turns.push_back(std::move(rec));
            if (no_tool_streak >= 2) {
                trace.termination = Termination::no_tool_no_answer;
                trace.final_text = response.text;
                result.final_state = std::move(state);
                return result;
            }
            continue;
        }
        no_tool_streak = 0;

        for (const Json& raw : response.actions) {
            Action action;
            Observation obs;
            try {
                action = validate_call(catalog, raw.at("tool").get<std::string>(),
                                       raw.value("args", Json::object()));
                auto [next, observation] = apply_action(state, action, mode, policy_tol);
                state = std::move(next);
                obs = std::move(observation);
            } catch (const ToolError& e) {
                action.tool = raw.at("tool").get<std::string>();
                action.args = raw.value("args", Json::object());
                obs.type = Observation::Type::error;
                obs.code = e.code();
                obs.message = e.what();
                obs.tool = action.tool;
                obs.offending_arg = e.offending_arg();
            }
            Json pair;
            pair["action"] = action.to_json();
            pair["observation"] = obs.to_json();
            history.push_back(pair);
            rec.actions.push_back(std::move(action));
            rec.observations.push_back(std::move(obs));
        }
        trace.turns.push_back(std::move(rec));
    }
    result.final_state = std::move(state);
    return result;  // termination stays turn_cap
}

CanvasState replay(const std::vector<Action>& actions, const Catalog& catalog,
                   const std::string& expected_digest, EngineMode mode,
                   const TolerancePolicy& policy_tol) {
    if (!expected_digest.empty() && catalog.digest() != expected_digest)
        throw DigestMismatch("catalog digest does not match the trace");
    CanvasState state;
    for (const Action& recorded : actions) {
        Action action = validate_call(catalog, recorded.tool, recorded.args);
        auto [next, obs] = apply_action(state, action, mode, policy_tol);
        state = std::move(next);
    }
    return state;
}

// --- trace files ------------------------------------------------------------------

std::string trace_to_jsonl(const Trace& trace) {
    std::string out;
    Json header;
    header["format_version"] = 1;
    header["type"] = "header";
    header["episode"] = trace.problem_id;
    header["catalog_digest"] = trace.catalog_digest;
    out += header.dump() + "\n";
    for (const TurnRecord& turn : trace.turns) {
        int seq = 0;
        Json text_event;
        text_event["episode"] = trace.problem_id;
        text_event["turn"] = turn.index;
        text_event["seq"] = seq++;
        text_event["type"] = "text";
        Json payload;
        payload["text"] = turn.text;
        payload["wall_time_s"] = turn.wall_time_s;
        if (!turn.tokens.is_null() && !turn.tokens.empty()) payload["tokens"] = turn.tokens;
        text_event["payload"] = payload;
        out += text_event.dump() + "\n";
        for (std::size_t i = 0; i < turn.actions.size(); ++i) {
            Json action_event;
            action_event["episode"] = trace.problem_id;
            action_event["turn"] = turn.index;
            action_event["seq"] = seq++;
            action_event["type"] = "action";
            action_event["payload"] = turn.actions[i].to_json();
            out += action_event.dump() + "\n";
            Json obs_event;
            obs_event["episode"] = trace.problem_id;
            obs_event["turn"] = turn.index;
            obs_event["seq"] = seq++;
            obs_event["type"] = "observation";
            obs_event["payload"] = turn.observations[i].to_json();
            out += obs_event.dump() + "\n";
        }
    }
    Json term;
    term["episode"] = trace.problem_id;
    term["turn"] = trace.turns.empty() ? 0 : trace.turns.back().index;
    term["seq"] = -1;
    term["type"] = "termination";
    Json payload;
    payload["termination"] = to_string(trace.termination);
    payload["final_answer"] = trace.final_answer;
    payload["final_text"] = trace.final_text;
    term["payload"] = payload;
    out += term.dump() + "\n";
    return out;
}

std::vector<Trace> traces_from_jsonl(const std::string& text) {
    std::vector<Trace> out;
    std::map<std::string, std::size_t> index;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        Json j;
        try {
            j = Json::parse(line);
        } catch (const Json::exception& e) {
            throw PolicyProtocolError(std::string("bad trace line: ") + e.what());
        }
        const std::string type = j.value("type", std::string());
        const std::string episode = j.value("episode", std::string("episode"));
        if (!index.count(episode)) {
            index[episode] = out.size();
            out.emplace_back();
            out.back().problem_id = episode;
        }
        Trace& trace = out[index[episode]];
        if (type == "header") {
            trace.catalog_digest = j.value("catalog_digest", std::string());
            continue;
        }
        if (type == "text") {
            TurnRecord rec;
            rec.index = j.value("turn", 0);
            rec.text = j.at("payload").value("text", std::string());
            rec.wall_time_s = j.at("payload").value("wall_time_s", 0.0);
            if (j.at("payload").contains("tokens")) rec.tokens = j.at("payload").at("tokens");
            trace.turns.push_back(std::move(rec));
            continue;
        }
        if (type == "action") {
            if (trace.turns.empty()) trace.turns.emplace_back();
            trace.turns.back().actions.push_back(Action::from_json(j.at("payload")));
            continue;
        }
        if (type == "observation") {
            if (trace.turns.empty()) trace.turns.emplace_back();
            trace.turns.back().observations.push_back(Observation::from_json(j.at("payload")));
            continue;
        }
        if (type == "termination") {
            const std::string term = j.at("payload").value("termination", std::string("turn_cap"));
            for (Termination t : {Termination::answered, Termination::no_tool_no_answer,
                                  Termination::turn_cap, Termination::timeout})
                if (term == to_string(t)) trace.termination = t;
            trace.final_answer = j.at("payload").value("final_answer", Json());
            trace.final_text = j.at("payload").value("final_text", std::string());
        }
    }
    return out;
}

}  // namespace geocanvas
