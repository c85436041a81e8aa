#pragma once

#include <memory>
#include <string>
#include <vector>

#include "geocanvas/canvas.hpp"
#include "geocanvas/toolspec.hpp"

namespace geocanvas {

struct Limits {
    int max_turns = 30;
    double per_turn_timeout_s = 120.0;
};

struct Problem {
    std::string id;
    std::string text;
    std::vector<std::string> choices;  // empty for open-answer problems

    static Problem from_json(const Json& j);
    Json to_json() const;
};

struct PolicyRequest {
    std::string problem;
    std::string catalog_digest;
    Json history = Json::array();  // ordered (action, observation) pairs of earlier turns

    Json to_json() const;
};

struct PolicyResponse {
    std::string text;
    std::vector<Json> actions;  // raw {tool, args} calls, validated by the harness
    Json tokens;                // optional usage counters, recorded as-is

    static PolicyResponse from_json(const Json& j);
};

class PolicyProtocolError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class PolicyTimeout : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class AnswerParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DigestMismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Policy {
public:
    virtual ~Policy() = default;
    virtual PolicyResponse next_turn(const PolicyRequest& request, double deadline_s) = 0;
};

/// Replays a fixed list of turns from a file or JSON; exhausted turns return
/// an empty response.
class ScriptedPolicy : public Policy {
public:
    explicit ScriptedPolicy(Json turns);
    static ScriptedPolicy from_file(const std::string& path);
    PolicyResponse next_turn(const PolicyRequest& request, double deadline_s) override;

private:
    Json turns_;
    std::size_t cursor_ = 0;
};

/// Newline-delimited JSON over stdin/stdout of a child process; one request
/// line per turn, one response line back, with a poll() deadline.
class StdioPolicy : public Policy {
public:
    explicit StdioPolicy(std::string command);
    ~StdioPolicy() override;
    PolicyResponse next_turn(const PolicyRequest& request, double deadline_s) override;

private:
    void launch();
    void shutdown();
    std::string command_;
    int pid_ = -1;
    int to_child_ = -1;
    int from_child_ = -1;
    std::string buffer_;
};

/// POST /turn per request; non-200 responses raise PolicyProtocolError.
class HttpPolicy : public Policy {
public:
    explicit HttpPolicy(std::string url);
    PolicyResponse next_turn(const PolicyRequest& request, double deadline_s) override;

private:
    std::string host_;
    std::string path_;
};

std::unique_ptr<Policy> make_policy(const std::string& transport_spec);

enum class Termination { answered, no_tool_no_answer, turn_cap, timeout };

const char* to_string(Termination t);

struct TurnRecord {
    int index = 0;
    std::string text;
    std::vector<Action> actions;
    std::vector<Observation> observations;
    double wall_time_s = 0.0;
    Json tokens;  // pass-through when the policy reports usage
};

struct Trace {
    std::string problem_id;
    std::string catalog_digest;
    std::vector<TurnRecord> turns;
    Json final_answer;  // output of extract_answer, null when not answered
    Termination termination = Termination::turn_cap;
    std::string final_text;

    std::size_t action_count() const;
};

struct AnswerValue {
    enum class Kind { number, choice, text };
    Kind kind = Kind::text;
    double number = 0.0;
    std::string text;  // choice letter or raw text

    Json to_json() const;
};

/// Parse the value after the ANSWER marker: a numeric literal, a constant
/// expression, the name of a number object on the canvas, or a choice letter.
/// With candidate choices, numeric answers map to the nearest choice under
/// 0.1% relative tolerance.
AnswerValue extract_answer(const std::string& text, const CanvasState& state,
                           const std::vector<std::string>& choices);

/// True when some line starts with "ANSWER:" (case-insensitive).
bool has_answer_marker(const std::string& text);

struct EpisodeResult {
    Trace trace;
    CanvasState final_state;
};

EpisodeResult run_episode(const Problem& problem, Policy& policy, const Catalog& catalog,
                          EngineMode mode = EngineMode::strict, Limits limits = {},
                          const TolerancePolicy& policy_tol = {});

/// Re-execute a recorded action list from the empty state. The digest of the
/// active catalog must match the digest recorded in the trace.
CanvasState replay(const std::vector<Action>& actions, const Catalog& catalog,
                   const std::string& expected_digest, EngineMode mode = EngineMode::strict,
                   const TolerancePolicy& policy_tol = {});

/// Trace file I/O: JSONL, one event per line, format_version header first.
std::string trace_to_jsonl(const Trace& trace);
std::vector<Trace> traces_from_jsonl(const std::string& text);

}  // namespace geocanvas
