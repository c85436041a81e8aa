#include <doctest.h>

#include "geocanvas/analytics.hpp"

using namespace geocanvas;

namespace {

Action act(const std::string& tool) {
    Action a;
    a.tool = tool;
    return a;
}

Observation value_obs(double v) {
    Observation o;
    o.type = Observation::Type::value;
    o.value = v;
    return o;
}

Observation created_obs(const std::string& name, const std::string& kind,
                        const std::string& value) {
    Observation o;
    o.type = Observation::Type::created;
    o.created.push_back({name, kind, value});
    return o;
}

Observation error_obs(ErrorCode code, const std::string& offending = "") {
    Observation o;
    o.type = Observation::Type::error;
    o.code = code;
    o.offending_arg = offending;
    return o;
}

Trace answered_trace(const std::string& final_text, double answer,
                     std::vector<std::pair<Action, Observation>> pairs) {
    Trace t;
    t.problem_id = "t";
    t.termination = Termination::answered;
    t.final_text = final_text;
    Json fa;
    fa["kind"] = "number";
    fa["value"] = answer;
    t.final_answer = fa;
    TurnRecord rec;
    rec.index = 1;
    for (auto& [a, o] : pairs) {
        rec.actions.push_back(a);
        rec.observations.push_back(o);
    }
    t.turns.push_back(rec);
    return t;
}

}  // namespace

TEST_CASE("provenance classes partition answered traces") {
    // clean oracle: the final answer equals an engine-returned value
    Trace clean = answered_trace("ANSWER: 5", 5.0,
                                 {{act("query_distance"), value_obs(5.0)}});
    CHECK(classify_provenance(clean).cls == ProvenanceClass::clean_oracle);
    CHECK(classify_provenance(clean).engine_involved);

    // no tools at all
    Trace bare;
    bare.termination = Termination::answered;
    bare.final_text = "ANSWER: 3";
    bare.final_answer = Json{{"kind", "number"}, {"value", 3.0}};
    CHECK(classify_provenance(bare).cls == ProvenanceClass::no_tools);
    CHECK_FALSE(classify_provenance(bare).engine_involved);

    // resilient: an error happened, still answered with a matching value
    Trace resilient = answered_trace(
        "ANSWER: 5", 5.0,
        {{act("add_intersect"), error_obs(ErrorCode::precondition_failed)},
         {act("query_distance"), value_obs(5.0)}});
    CHECK(classify_provenance(resilient).cls == ProvenanceClass::resilient);

    // hybrid: the text cites an engine value but the final answer is derived
    Trace hybrid = answered_trace("half of 10 is 5\nANSWER: 5", 5.0,
                                  {{act("query_distance"), value_obs(10.0)}});
    CHECK(classify_provenance(hybrid).cls == ProvenanceClass::hybrid);

    // bypass: tools used, no anchor to any returned value
    Trace bypass = answered_trace("ANSWER: 7", 7.0,
                                  {{act("query_distance"), value_obs(10.0)}});
    CHECK(classify_provenance(bypass).cls == ProvenanceClass::llm_bypass);
    CHECK_FALSE(classify_provenance(bypass).engine_involved);

    // created number objects count as engine-returned values
    Trace constructed = answered_trace("ANSWER: 5", 5.0,
                                       {{act("add_distance"), created_obs("d", "number", "5")}});
    CHECK(classify_provenance(constructed).cls == ProvenanceClass::clean_oracle);

    // exactly one class per trace
    for (const Trace* t : {&clean, &bare, &resilient, &hybrid, &bypass}) {
        int memberships = 0;
        const ProvenanceClass cls = classify_provenance(*t).cls;
        for (ProvenanceClass c :
             {ProvenanceClass::clean_oracle, ProvenanceClass::hybrid, ProvenanceClass::resilient,
              ProvenanceClass::llm_bypass, ProvenanceClass::no_tools})
            if (c == cls) ++memberships;
        CHECK(memberships == 1);
    }
}

TEST_CASE("failure report partitions error codes and finds cascade chains") {
    // no errors: all-zero report
    Trace ok = answered_trace("ANSWER: 1", 1.0, {{act("query_angle"), value_obs(1.0)}});
    FailureReport empty = failure_report({ok});
    CHECK(empty.total_failures == 0);
    CHECK(empty.by_code.empty());
    CHECK(empty.cascades.empty());

    // failed intersect, then three calls referencing its missing output
    Trace cascade = answered_trace(
        "ANSWER: 2", 2.0,
        {{act("add_intersect"), error_obs(ErrorCode::precondition_failed)},
         {act("query_distance"), error_obs(ErrorCode::entity_not_found, "P")},
         {act("query_angle"), error_obs(ErrorCode::entity_not_found, "P")},
         {act("add_segment"), error_obs(ErrorCode::entity_not_found, "P")},
         {act("add_point"), created_obs("X", "point", "(1, 1)")}});
    FailureReport report = failure_report({cascade});
    CHECK(report.total_failures == 4);
    CHECK(report.by_code.at("EntityNotFound") == 3);
    CHECK(report.by_code.at("PreconditionFailed") == 1);
    REQUIRE(report.cascades.size() == 1);
    CHECK(report.cascades[0].missing_parent == "P");
    CHECK(report.cascades[0].length == 3);

    // per-code counts sum to total failures
    std::size_t sum = 0;
    for (const auto& [code, count] : report.by_code) sum += count;
    CHECK(sum == report.total_failures);

    // mixed codes break chains
    Trace broken = answered_trace(
        "ANSWER: 2", 2.0,
        {{act("query_angle"), error_obs(ErrorCode::entity_not_found, "Q")},
         {act("query_angle"), error_obs(ErrorCode::type_mismatch, "a")},
         {act("query_angle"), error_obs(ErrorCode::entity_not_found, "Q")}});
    CHECK(failure_report({broken}).cascades.empty());
}

TEST_CASE("phase profile bins calls by normalized position") {
    // construct-then-query trace: early bins construction-heavy, last query-heavy
    std::vector<std::pair<Action, Observation>> pairs;
    for (int i = 0; i < 6; ++i) pairs.push_back({act("add_point"), created_obs("p", "point", "")});
    for (int i = 0; i < 2; ++i) pairs.push_back({act("query_angle"), value_obs(1.0)});
    Trace t = answered_trace("ANSWER: 1", 1.0, std::move(pairs));

    PhaseProfile profile = phase_profile({t});
    CHECK(profile.traces_used == 1);
    CHECK(profile.share[0][static_cast<int>(PhaseGroup::primitive_construction)] == 1.0);
    CHECK(profile.share[3][static_cast<int>(PhaseGroup::query_verification)] > 0.0);
    for (int b = 0; b < 4; ++b) {
        if (profile.calls_per_bin[b] == 0) continue;
        double sum = 0.0;
        for (int g = 0; g < 4; ++g) sum += profile.share[b][g];
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }

    // single-call traces are excluded (normalized position undefined)
    Trace single = answered_trace("ANSWER: 1", 1.0, {{act("query_angle"), value_obs(1.0)}});
    PhaseProfile skipped = phase_profile({single});
    CHECK(skipped.traces_used == 0);
    CHECK(skipped.traces_skipped == 1);

    // an all-query trace puts its whole mass in the query group
    Trace queries = answered_trace("ANSWER: 1", 1.0,
                                   {{act("query_angle"), value_obs(1.0)},
                                    {act("query_distance"), value_obs(2.0)},
                                    {act("query_area"), value_obs(3.0)},
                                    {act("query_radius"), value_obs(4.0)}});
    PhaseProfile all_query = phase_profile({queries});
    for (int b = 0; b < 4; ++b)
        if (all_query.calls_per_bin[b] > 0)
            CHECK(all_query.share[b][static_cast<int>(PhaseGroup::query_verification)] == 1.0);
}

TEST_CASE("tool-to-group mapping follows the catalog sections") {
    CHECK(phase_group("add_point") == PhaseGroup::primitive_construction);
    CHECK(phase_group("add_circle") == PhaseGroup::primitive_construction);
    CHECK(phase_group("add_angle") == PhaseGroup::derived_construction);
    CHECK(phase_group("add_function") == PhaseGroup::derived_construction);
    CHECK(phase_group("transform_rotate") == PhaseGroup::transform_utility);
    CHECK(phase_group("delete_object") == PhaseGroup::transform_utility);
    CHECK(phase_group("query_are_parallel") == PhaseGroup::query_verification);
    CHECK(phase_group("render_set_color") == PhaseGroup::transform_utility);
}

TEST_CASE("provenance summary over a batch") {
    Trace clean = answered_trace("ANSWER: 5", 5.0, {{act("query_distance"), value_obs(5.0)}});
    Trace unanswered;
    unanswered.termination = Termination::turn_cap;
    ProvenanceSummary summary = provenance_summary({clean, unanswered});
    CHECK(summary.answered == 1);
    CHECK(summary.by_class.at("clean_oracle") == 1);
    CHECK(summary.engine_involved == 1);
}
