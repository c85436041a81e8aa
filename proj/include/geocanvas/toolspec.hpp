#pragma once

#include <optional>
#include <string>
#include <vector>

#include "geocanvas/canvas.hpp"

namespace geocanvas {

enum class SemType {
    object_name,
    point_name,
    linelike_name,
    conic_name,
    scalar,
    expr_text,
    count,
    enum_code,
    color,
    flag,
};

const char* to_string(SemType t);

struct ParamSpec {
    std::string name;
    SemType type = SemType::object_name;
    bool required = true;
    std::string doc;
    bool variadic = false;               // array of names
    std::vector<int> enum_values;        // enum_code options
    std::vector<std::string> enum_choices;  // string-coded enums
    Json default_value;                  // filled into optionals when absent
};

enum class ToolGroup {
    points,
    lines,
    circles_conics,
    polygons_centers,
    measurements,
    functions_calculus,
    other_construction,
    transforms,
    utility,
    query_measure,
    query_verify,
    query_cas,
    render,
    solid3d,
};

const char* to_string(ToolGroup g);

enum class ActionType { construction, query, render, del };

const char* to_string(ActionType t);

struct ToolSpec {
    std::string name;
    ToolGroup group = ToolGroup::points;
    ActionType action_type = ActionType::construction;
    std::string description;
    std::vector<ParamSpec> params;
};

enum class CatalogProfile { solve2d, solve3d, render_pipeline };
enum class AblationMode { full, bare_signature, no_measurement, no_query };

const char* to_string(CatalogProfile p);
const char* to_string(AblationMode m);
CatalogProfile profile_from_string(const std::string& s);
AblationMode mode_from_string(const std::string& s);

/// Runtime description patch; applying to a built catalog never mutates the
/// source table.
struct OverlayPatch {
    std::string tool;
    std::string param;  // empty = tool-level description
    std::string description;
};

struct CatalogCounts {
    std::size_t construction = 0;  // includes delete_object, per the action table
    std::size_t query = 0;
    std::size_t render = 0;
    std::size_t total = 0;
};

class Catalog {
public:
    CatalogProfile profile = CatalogProfile::solve2d;
    AblationMode mode = AblationMode::full;
    std::vector<ToolSpec> specs;
    std::vector<OverlayPatch> overlays;

    const ToolSpec* find(const std::string& tool) const;
    CatalogCounts counts() const;

    /// Canonical export; `digest` is the SHA-256 of the document without the
    /// digest field itself.
    Json export_json() const;
    std::string digest() const;
};

Catalog build_catalog(CatalogProfile profile, AblationMode mode = AblationMode::full,
                      const std::vector<OverlayPatch>& overlays = {});

/// Schema validation of a raw call: unknown tool, missing or unknown
/// arguments, JSON-type mismatches. Returns the normalized action with
/// defaulted optionals in spec order. Object-kind preconditions are enforced
/// later by the engine.
Action validate_call(const Catalog& c, const std::string& tool, const Json& raw_args);

std::vector<OverlayPatch> overlays_from_json(const Json& j);

std::string sha256_hex(const std::string& bytes);

}  // namespace geocanvas
