#include "geocanvas/analytics.hpp"

#include <cmath>
#include <sstream>

namespace geocanvas {

const char* to_string(ProvenanceClass c) {
    switch (c) {
        case ProvenanceClass::clean_oracle: return "clean_oracle";
        case ProvenanceClass::hybrid: return "hybrid";
        case ProvenanceClass::resilient: return "resilient";
        case ProvenanceClass::llm_bypass: return "llm_bypass";
        case ProvenanceClass::no_tools: return "no_tools";
    }
    return "no_tools";
}

namespace {

// tolerance used when matching answers against engine-returned values
const TolerancePolicy kMatchTol{0.0, 1e-3};

void collect_number(const Json& j, std::vector<double>& out) {
    if (j.is_number()) {
        out.push_back(j.get<double>());
    } else if (j.is_array()) {
        for (const Json& item : j) collect_number(item, out);
    }
}

/// Values the engine handed back: query payloads plus printable values of
/// created number objects (construction-return readout).
std::vector<double> engine_values(const Trace& trace) {
    std::vector<double> out;
    for (const TurnRecord& turn : trace.turns) {
        for (const Observation& obs : turn.observations) {
            if (obs.type == Observation::Type::value) {
                collect_number(obs.value, out);
            } else if (obs.type == Observation::Type::created) {
                for (const Observation::ObjRecord& rec : obs.created) {
                    char* end = nullptr;
                    const double v = std::strtod(rec.value.c_str(), &end);
                    if (end == rec.value.c_str() + rec.value.size() && std::isfinite(v))
                        out.push_back(v);
                }
            }
        }
    }
    return out;
}

bool has_error(const Trace& trace) {
    for (const TurnRecord& turn : trace.turns)
        for (const Observation& obs : turn.observations)
            if (obs.is_error()) return true;
    return false;
}

bool answer_number(const Trace& trace, double& out) {
    if (trace.final_answer.is_null() || !trace.final_answer.is_object()) return false;
    if (trace.final_answer.value("kind", std::string()) != "number") return false;
    out = trace.final_answer.at("value").get<double>();
    return true;
}

/// Numeric literals mentioned in the final answer text.
std::vector<double> text_numbers(const std::string& text) {
    std::vector<double> out;
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && i + 1 < text.size() &&
             std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
            char* end = nullptr;
            const double v = std::strtod(text.c_str() + i, &end);
            if (end != text.c_str() + i && std::isfinite(v)) {
                out.push_back(v);
                i = static_cast<std::size_t>(end - text.c_str());
                continue;
            }
        }
        ++i;
    }
    return out;
}

bool matches_any(double v, const std::vector<double>& candidates) {
    for (double c : candidates)
        if (kMatchTol.pass(v, c)) return true;
    return false;
}

}  // namespace

ProvenanceResult classify_provenance(const Trace& trace) {
    ProvenanceResult result;
    const std::size_t calls = trace.action_count();
    if (calls == 0) {
        result.cls = ProvenanceClass::no_tools;
        result.engine_involved = false;
        return result;
    }
    const std::vector<double> values = engine_values(trace);
    double answer = 0.0;
    const bool numeric = answer_number(trace, answer);

    if (has_error(trace)) {
        result.cls = ProvenanceClass::resilient;
    } else if (numeric && matches_any(answer, values)) {
        result.cls = ProvenanceClass::clean_oracle;
    } else {
        bool anchored = false;
        for (double mention : text_numbers(trace.final_text))
            if (matches_any(mention, values)) anchored = true;
        result.cls = anchored ? ProvenanceClass::hybrid : ProvenanceClass::llm_bypass;
    }
    result.engine_involved = result.cls != ProvenanceClass::llm_bypass;
    return result;
}

Json FailureReport::to_json() const {
    Json j;
    j["total_calls"] = total_calls;
    j["total_failures"] = total_failures;
    Json codes = Json::object();
    for (const auto& [code, count] : by_code) codes[code] = count;
    j["by_code"] = codes;
    Json chains = Json::array();
    for (const CascadeChain& c : cascades) {
        Json cj;
        cj["missing_parent"] = c.missing_parent;
        cj["length"] = c.length;
        chains.push_back(cj);
    }
    j["cascade_chains"] = chains;
    return j;
}

std::string FailureReport::to_table() const {
    std::ostringstream os;
    os << "error code            count\n";
    os << "--------------------  -----\n";
    for (const auto& [code, count] : by_code) {
        os << code;
        for (std::size_t i = code.size(); i < 22; ++i) os << ' ';
        os << count << "\n";
    }
    os << "total failures        " << total_failures << " / " << total_calls << " calls\n";
    os << "cascade chains        " << cascades.size() << "\n";
    return os.str();
}

FailureReport failure_report(const std::vector<Trace>& traces) {
    FailureReport report;
    for (const Trace& trace : traces) {
        std::string current_parent;
        std::size_t run = 0;
        auto flush = [&]() {
            if (run >= 2) report.cascades.push_back({current_parent, run});
            current_parent.clear();
            run = 0;
        };
        for (const TurnRecord& turn : trace.turns) {
            for (const Observation& obs : turn.observations) {
                ++report.total_calls;
                if (!obs.is_error()) {
                    flush();
                    continue;
                }
                ++report.total_failures;
                ++report.by_code[to_string(obs.code)];
                if (obs.code == ErrorCode::entity_not_found && !obs.offending_arg.empty()) {
                    if (obs.offending_arg == current_parent) {
                        ++run;
                    } else {
                        flush();
                        current_parent = obs.offending_arg;
                        run = 1;
                    }
                } else {
                    flush();
                }
            }
        }
        flush();
    }
    return report;
}

const char* to_string(PhaseGroup g) {
    switch (g) {
        case PhaseGroup::primitive_construction: return "primitive_construction";
        case PhaseGroup::derived_construction: return "derived_construction";
        case PhaseGroup::transform_utility: return "transform_utility";
        case PhaseGroup::query_verification: return "query_verification";
    }
    return "primitive_construction";
}

PhaseGroup phase_group(const std::string& tool) {
    if (tool.rfind("query_", 0) == 0) return PhaseGroup::query_verification;
    if (tool.rfind("render_", 0) == 0 || tool.rfind("transform_", 0) == 0 ||
        tool == "delete_object" || tool == "set_value" || tool == "rename_object" ||
        tool == "set_label_visible" || tool == "set_object_visible")
        return PhaseGroup::transform_utility;
    // measurement objects, calculus and other derived constructions
    static const char* derived[] = {
        "add_angle", "add_distance", "add_area", "add_slope", "add_function", "add_derivative",
        "add_integral_function", "add_inflection_point", "add_asymptote", "add_curve",
        "add_roots", "add_turning_point", "add_slider", "add_best_fit_line", "add_inequality",
        "add_integral_shade", "add_text", "add_cross_section", "add_net", "add_text_3d",
        "add_surface_revolution"};
    for (const char* name : derived)
        if (tool == name) return PhaseGroup::derived_construction;
    return PhaseGroup::primitive_construction;
}

Json PhaseProfile::to_json() const {
    Json j;
    j["traces_used"] = traces_used;
    j["traces_skipped"] = traces_skipped;
    Json bins = Json::array();
    for (std::size_t b = 0; b < 4; ++b) {
        Json bin;
        bin["bin"] = b;
        bin["calls"] = calls_per_bin[b];
        Json groups = Json::object();
        for (std::size_t g = 0; g < 4; ++g)
            groups[to_string(static_cast<PhaseGroup>(g))] = share[b][g];
        bin["share"] = groups;
        bins.push_back(bin);
    }
    j["bins"] = bins;
    return j;
}

std::string PhaseProfile::to_table() const {
    std::ostringstream os;
    os << "bin        primitive  derived    transform  query\n";
    const char* names[] = {"[0,25)%", "[25,50)%", "[50,75)%", "[75,100]%"};
    for (std::size_t b = 0; b < 4; ++b) {
        os << names[b];
        for (std::size_t i = std::string(names[b]).size(); i < 11; ++i) os << ' ';
        for (std::size_t g = 0; g < 4; ++g) {
            char buf[16];
            std::snprintf(buf, sizeof(buf), "%-11.3f", share[b][g]);
            os << buf;
        }
        os << "\n";
    }
    return os.str();
}

PhaseProfile phase_profile(const std::vector<Trace>& traces) {
    PhaseProfile profile;
    std::array<std::array<std::size_t, 4>, 4> counts{};
    for (const Trace& trace : traces) {
        std::vector<std::string> tools;
        for (const TurnRecord& turn : trace.turns)
            for (const Action& a : turn.actions) tools.push_back(a.tool);
        if (tools.size() < 2) {
            ++profile.traces_skipped;  // p = i/(K-1) undefined for K < 2
            continue;
        }
        ++profile.traces_used;
        const double denom = static_cast<double>(tools.size() - 1);
        for (std::size_t i = 0; i < tools.size(); ++i) {
            const double p = static_cast<double>(i) / denom;
            std::size_t bin = static_cast<std::size_t>(p * 4.0);
            if (bin > 3) bin = 3;
            ++counts[bin][static_cast<std::size_t>(phase_group(tools[i]))];
        }
    }
    for (std::size_t b = 0; b < 4; ++b) {
        std::size_t total = 0;
        for (std::size_t g = 0; g < 4; ++g) total += counts[b][g];
        profile.calls_per_bin[b] = total;
        for (std::size_t g = 0; g < 4; ++g)
            profile.share[b][g] =
                total ? static_cast<double>(counts[b][g]) / static_cast<double>(total) : 0.0;
    }
    return profile;
}

Json ProvenanceSummary::to_json() const {
    Json j;
    j["answered"] = answered;
    j["engine_involved"] = engine_involved;
    Json classes = Json::object();
    for (const auto& [cls, count] : by_class) classes[cls] = count;
    j["by_class"] = classes;
    return j;
}

std::string ProvenanceSummary::to_table() const {
    std::ostringstream os;
    os << "provenance class      count\n";
    os << "--------------------  -----\n";
    for (const auto& [cls, count] : by_class) {
        os << cls;
        for (std::size_t i = cls.size(); i < 22; ++i) os << ' ';
        os << count << "\n";
    }
    os << "answered              " << answered << "\n";
    os << "engine involved       " << engine_involved << "\n";
    return os.str();
}

ProvenanceSummary provenance_summary(const std::vector<Trace>& traces) {
    ProvenanceSummary summary;
    for (const Trace& trace : traces) {
        if (trace.termination != Termination::answered) continue;
        ++summary.answered;
        const ProvenanceResult r = classify_provenance(trace);
        ++summary.by_class[to_string(r.cls)];
        if (r.engine_involved) ++summary.engine_involved;
    }
    return summary;
}

}  // namespace geocanvas
