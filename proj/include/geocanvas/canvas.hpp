#pragma once

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "geocanvas/errors.hpp"
#include "geocanvas/value.hpp"

namespace geocanvas {

/// One validated tool call.
struct Action {
    std::string tool;
    Json args = Json::object();

    Json to_json() const;
    static Action from_json(const Json& j);
};

struct Definition {
    std::string tool;
    Json args = Json::object();
    std::vector<std::string> parents;       // referenced objects, in argument order
    std::vector<std::string> ref_arg_keys;  // which arg keys hold object references
};

struct CanvasObject {
    std::string name;
    std::string kind;  // display kind ("point", "segment", "ellipse", "list<line>", ...)
    Definition definition;
    std::vector<Value> values;  // one entry, or several for list-valued results
    bool is_list = false;
    Json style = Json::object();

    bool is_defined() const;
    const Value& single() const { return values.front(); }
};

struct View3D {
    double x_angle = 30.0;
    double z_angle = 30.0;
    double scale = 20.0;
    bool axes = true;
};

enum class StylePresetKind { standard, textbook };

/// The environment state: named objects plus the dependency DAG induced by
/// their definitions. The initial state is empty.
struct CanvasState {
    std::vector<std::string> order;  // insertion order; a topological order of the DAG
    std::unordered_map<std::string, CanvasObject> objects;
    std::map<std::string, std::vector<std::string>> children;  // parent -> children
    std::optional<View3D> view;
    StylePresetKind style_preset = StylePresetKind::standard;
    Json canvas_style = Json::object();  // axes/grid visibility, viewport bounds
    std::vector<std::array<std::string, 3>> right_angle_marks;

    bool has(const std::string& name) const { return objects.count(name) != 0; }
    const CanvasObject& at(const std::string& name) const;
    std::size_t size() const { return order.size(); }
};

struct Observation {
    enum class Type { created, value, deleted, style_changed, error };

    struct ObjRecord {
        std::string name;
        std::string kind;
        std::string value;  // printable snapshot
    };

    Type type = Type::error;
    std::vector<ObjRecord> created;
    Json value;  // scalar, boolean or array payload for queries
    std::string units;
    Json extra = Json::object();  // e.g. {"numeric_fallback": true}
    std::vector<std::string> deleted;  // removal set in topological order
    std::vector<std::string> styled;
    ErrorCode code = ErrorCode::engine_error;
    std::string message;
    std::string tool;
    std::string offending_arg;

    bool is_error() const { return type == Type::error; }
    Json to_json() const;
    static Observation from_json(const Json& j);
};

enum class EngineMode { strict, silent };

/// Deterministic transition. Construction tools extend the state, query tools
/// leave it untouched, render tools change style only. In strict mode a
/// failing action returns the input state unchanged together with an Error
/// observation; in silent mode degenerate constructions commit an
/// undefined-valued object instead of erroring.
std::pair<CanvasState, Observation> apply_action(const CanvasState& state, const Action& a,
                                                 EngineMode mode = EngineMode::strict,
                                                 const TolerancePolicy& policy = {});

/// Remove `name` together with its full descendant closure; the observation
/// lists the removal set in topological order.
std::pair<CanvasState, Observation> delete_cascade(const CanvasState& state,
                                                   const std::string& name);

/// Reachability set used by delete_cascade (name included), topological order.
std::vector<std::string> descendants_closure(const CanvasState& state, const std::string& name);

/// Re-evaluate every object from its definition in topological order.
/// Undefined parents propagate; kernel rejections become undefined values.
CanvasState recompute(const CanvasState& state, const TolerancePolicy& policy = {});

/// Canonical JSON document; import(export(s)) is bit-identical to s.
Json export_state(const CanvasState& state);
CanvasState import_state(const Json& doc);

/// Export with style, view and annotations stripped: the geometry-only
/// projection used to check that render tools never touch geometry.
Json export_geometry_only(const CanvasState& state);

inline std::string dump_canonical(const Json& j) { return j.dump(2); }

}  // namespace geocanvas
