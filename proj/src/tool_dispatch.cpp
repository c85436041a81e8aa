#include "geocanvas/tool_dispatch.hpp"

#include "tool_args.hpp"

namespace geocanvas {

using detail::ArgReader;
using detail::ToolResult;
using detail::UndefinedInputSignal;

bool is_query_tool(const std::string& tool) { return tool.rfind("query_", 0) == 0; }

bool is_render_tool(const std::string& tool) { return tool.rfind("render_", 0) == 0; }

bool is_construction_tool(const std::string& tool) {
    if (is_query_tool(tool) || is_render_tool(tool)) return false;
    if (tool == "delete_object" || tool == "set_value" || tool == "rename_object" ||
        tool == "set_label_visible" || tool == "set_object_visible")
        return false;
    return tool.rfind("add_", 0) == 0 || tool.rfind("transform_", 0) == 0;
}

namespace {

std::string derive_kind(const ToolResult& result, const std::string& tool) {
    if (!result.kind.empty()) return result.kind;
    if (result.values.empty()) return "list";
    if (!is_defined_value(result.values.front())) return detail::nominal_kind(tool);
    return value_kind(result.values.front());
}

Observation created_observation(const CanvasObject& obj, Json extra) {
    Observation obs;
    obs.type = Observation::Type::created;
    std::string printable;
    if (obj.is_list) {
        printable = "[";
        for (std::size_t i = 0; i < obj.values.size(); ++i) {
            if (i) printable += ", ";
            printable += value_brief(obj.values[i]);
        }
        printable += "]";
    } else {
        printable = obj.values.empty() ? "undefined" : value_brief(obj.single());
    }
    obs.created.push_back({obj.name, obj.kind, printable});
    obs.extra = std::move(extra);
    return obs;
}

void insert_object(CanvasState& st, CanvasObject obj) {
    st.order.push_back(obj.name);
    for (const std::string& parent : obj.definition.parents) {
        auto& kids = st.children[parent];
        if (std::find(kids.begin(), kids.end(), obj.name) == kids.end())
            kids.push_back(obj.name);
    }
    st.objects.emplace(obj.name, std::move(obj));
}

Observation run_construction(CanvasState& st, const Action& a, EngineMode mode,
                             const TolerancePolicy& policy) {
    ArgReader r(st, a.args);
    const std::string name = r.out_name();
    if (st.has(name))
        throw ToolError(ErrorCode::name_conflict, "an object named '" + name + "' exists",
                        "name");

    CanvasObject obj;
    obj.name = name;
    Json extra = Json::object();
    try {
        ToolResult result = detail::compute_construction(st, a.tool, a.args, r, policy);
        obj.kind = derive_kind(result, a.tool);  // before the move below
        obj.is_list = result.is_list;
        obj.values = std::move(result.values);
        extra = std::move(result.extra);
    } catch (const UndefinedInputSignal&) {
        // undefined parents propagate silently in both engine modes
        obj.values = {Value(Undefined{})};
        obj.kind = detail::nominal_kind(a.tool);
    } catch (const ToolError& e) {
        const bool silently_undefined =
            mode == EngineMode::silent && (e.code() == ErrorCode::degenerate_input ||
                                           e.code() == ErrorCode::precondition_failed ||
                                           e.code() == ErrorCode::index_out_of_range);
        if (!silently_undefined) throw;
        obj.values = {Value(Undefined{})};
        obj.kind = detail::nominal_kind(a.tool);
    }
    obj.definition.tool = a.tool;
    obj.definition.args = a.args;
    obj.definition.parents = std::move(r.parents);
    obj.definition.ref_arg_keys = std::move(r.ref_keys);

    Observation obs = created_observation(obj, std::move(extra));
    insert_object(st, std::move(obj));
    return obs;
}

}  // namespace

Observation dispatch_tool(CanvasState& st, const Action& a, EngineMode mode,
                          const TolerancePolicy& policy) {
    if (is_query_tool(a.tool)) {
        ArgReader r(st, a.args);
        try {
            detail::QueryResult q = detail::run_query(st, a.tool, r, policy);
            Observation obs;
            obs.type = Observation::Type::value;
            obs.value = std::move(q.value);
            obs.units = std::move(q.units);
            obs.extra = std::move(q.extra);
            return obs;
        } catch (const UndefinedInputSignal&) {
            Observation obs;
            obs.type = Observation::Type::value;
            obs.value = nullptr;
            obs.extra["undefined"] = true;
            return obs;
        }
    }
    if (is_render_tool(a.tool)) {
        ArgReader r(st, a.args);
        return detail::run_render_tool(st, a.tool, r);
    }
    if (is_construction_tool(a.tool)) return run_construction(st, a, mode, policy);
    ArgReader r(st, a.args);
    return detail::run_utility_tool(st, a.tool, r, policy);
}

void recompute_object(CanvasState& st, CanvasObject& obj, const TolerancePolicy& policy) {
    for (const std::string& parent : obj.definition.parents) {
        if (!st.has(parent) || !st.at(parent).is_defined()) {
            obj.values = {Value(Undefined{})};
            return;
        }
    }
    ArgReader r(st, obj.definition.args);
    try {
        ToolResult result =
            detail::compute_construction(st, obj.definition.tool, obj.definition.args, r, policy);
        obj.kind = derive_kind(result, obj.definition.tool);  // before the move below
        obj.is_list = result.is_list;
        obj.values = std::move(result.values);
    } catch (const UndefinedInputSignal&) {
        obj.values = {Value(Undefined{})};
    } catch (const ToolError&) {
        obj.values = {Value(Undefined{})};
    }
}

}  // namespace geocanvas
