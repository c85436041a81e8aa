#pragma once

#include <map>
#include <string>
#include <vector>

#include "geocanvas/harness.hpp"

namespace geocanvas {

enum class ProvenanceClass { clean_oracle, hybrid, resilient, llm_bypass, no_tools };

const char* to_string(ProvenanceClass c);

struct ProvenanceResult {
    ProvenanceClass cls = ProvenanceClass::no_tools;
    bool engine_involved = false;
};

/// Classify an answered trace by how its final answer relates to
/// engine-returned values. Classes partition answered traces.
ProvenanceResult classify_provenance(const Trace& trace);

struct CascadeChain {
    std::string missing_parent;
    std::size_t length = 0;
};

struct FailureReport {
    std::map<std::string, std::size_t> by_code;  // error-code name -> count
    std::size_t total_failures = 0;
    std::size_t total_calls = 0;
    std::vector<CascadeChain> cascades;  // runs of >= 2 consecutive EntityNotFound
                                         // on the same missing parent

    Json to_json() const;
    std::string to_table() const;
};

FailureReport failure_report(const std::vector<Trace>& traces);

enum class PhaseGroup { primitive_construction, derived_construction, transform_utility,
                        query_verification };

const char* to_string(PhaseGroup g);

PhaseGroup phase_group(const std::string& tool);

struct PhaseProfile {
    // quartile bins over normalized call position p = i / (K - 1)
    std::array<std::array<double, 4>, 4> share{};  // [bin][group]
    std::array<std::size_t, 4> calls_per_bin{};
    std::size_t traces_used = 0;
    std::size_t traces_skipped = 0;  // K < 2

    Json to_json() const;
    std::string to_table() const;
};

PhaseProfile phase_profile(const std::vector<Trace>& traces);

struct ProvenanceSummary {
    std::map<std::string, std::size_t> by_class;
    std::size_t answered = 0;
    std::size_t engine_involved = 0;

    Json to_json() const;
    std::string to_table() const;
};

ProvenanceSummary provenance_summary(const std::vector<Trace>& traces);

}  // namespace geocanvas
