#include "geocanvas/canvas.hpp"

#include <algorithm>

#include "geocanvas/tool_dispatch.hpp"

namespace geocanvas {

Json Action::to_json() const {
    Json j;
    j["tool"] = tool;
    j["args"] = args;
    return j;
}

Action Action::from_json(const Json& j) {
    Action a;
    a.tool = j.at("tool").get<std::string>();
    a.args = j.value("args", Json::object());
    return a;
}

bool CanvasObject::is_defined() const {
    if (values.empty()) return false;
    for (const Value& v : values)
        if (!is_defined_value(v)) return false;
    return true;
}

const CanvasObject& CanvasState::at(const std::string& name) const {
    auto it = objects.find(name);
    if (it == objects.end())
        throw ToolError(ErrorCode::entity_not_found, "no object named '" + name + "'", name);
    return it->second;
}

Json Observation::to_json() const {
    Json j;
    switch (type) {
        case Type::created: {
            j["type"] = "created";
            Json arr = Json::array();
            for (const ObjRecord& r : created) {
                Json o;
                o["name"] = r.name;
                o["kind"] = r.kind;
                o["value"] = r.value;
                arr.push_back(o);
            }
            j["objects"] = arr;
            if (!extra.empty()) j["extra"] = extra;
            break;
        }
        case Type::value:
            j["type"] = "value";
            j["value"] = value;
            if (!units.empty()) j["units"] = units;
            if (!extra.empty()) j["extra"] = extra;
            break;
        case Type::deleted:
            j["type"] = "deleted";
            j["names"] = deleted;
            break;
        case Type::style_changed:
            j["type"] = "style_changed";
            j["names"] = styled;
            break;
        case Type::error:
            j["type"] = "error";
            j["code"] = to_string(code);
            j["message"] = message;
            j["tool"] = tool;
            if (!offending_arg.empty()) j["offending_arg"] = offending_arg;
            break;
    }
    return j;
}

Observation Observation::from_json(const Json& j) {
    Observation o;
    const std::string type = j.at("type").get<std::string>();
    if (type == "created") {
        o.type = Type::created;
        for (const Json& r : j.at("objects"))
            o.created.push_back({r.at("name").get<std::string>(), r.at("kind").get<std::string>(),
                                 r.at("value").get<std::string>()});
        o.extra = j.value("extra", Json::object());
    } else if (type == "value") {
        o.type = Type::value;
        o.value = j.at("value");
        o.units = j.value("units", std::string());
        o.extra = j.value("extra", Json::object());
    } else if (type == "deleted") {
        o.type = Type::deleted;
        o.deleted = j.at("names").get<std::vector<std::string>>();
    } else if (type == "style_changed") {
        o.type = Type::style_changed;
        o.styled = j.at("names").get<std::vector<std::string>>();
    } else {
        o.type = Type::error;
        const std::string code = j.at("code").get<std::string>();
        for (ErrorCode c : {ErrorCode::entity_not_found, ErrorCode::precondition_failed,
                            ErrorCode::degenerate_input, ErrorCode::type_mismatch,
                            ErrorCode::name_conflict, ErrorCode::unsupported_tool,
                            ErrorCode::index_out_of_range, ErrorCode::engine_error,
                            ErrorCode::timeout})
            if (code == to_string(c)) o.code = c;
        o.message = j.value("message", std::string());
        o.tool = j.value("tool", std::string());
        o.offending_arg = j.value("offending_arg", std::string());
    }
    return o;
}

std::pair<CanvasState, Observation> apply_action(const CanvasState& state, const Action& a,
                                                 EngineMode mode, const TolerancePolicy& policy) {
    CanvasState next = state;
    try {
        Observation obs = dispatch_tool(next, a, mode, policy);
        return {std::move(next), std::move(obs)};
    } catch (const ToolError& e) {
        Observation obs;
        obs.type = Observation::Type::error;
        obs.code = e.code();
        obs.message = e.what();
        obs.tool = a.tool;
        obs.offending_arg = e.offending_arg();
        return {state, std::move(obs)};  // local rollback: input state unchanged
    } catch (const std::exception& e) {
        Observation obs;
        obs.type = Observation::Type::error;
        obs.code = ErrorCode::engine_error;
        obs.message = e.what();
        obs.tool = a.tool;
        return {state, std::move(obs)};
    }
}

std::vector<std::string> descendants_closure(const CanvasState& state, const std::string& name) {
    state.at(name);  // throws EntityNotFound
    std::vector<std::string> stack{name};
    std::unordered_map<std::string, bool> seen{{name, true}};
    while (!stack.empty()) {
        const std::string cur = stack.back();
        stack.pop_back();
        auto it = state.children.find(cur);
        if (it == state.children.end()) continue;
        for (const std::string& child : it->second) {
            if (!seen[child]) {
                seen[child] = true;
                stack.push_back(child);
            }
        }
    }
    std::vector<std::string> out;
    for (const std::string& n : state.order)
        if (seen.count(n) && seen[n]) out.push_back(n);
    return out;
}

namespace {

void erase_object(CanvasState& st, const std::string& name) {
    const CanvasObject& obj = st.at(name);
    for (const std::string& parent : obj.definition.parents) {
        auto it = st.children.find(parent);
        if (it == st.children.end()) continue;
        auto& vec = it->second;
        vec.erase(std::remove(vec.begin(), vec.end(), name), vec.end());
        if (vec.empty()) st.children.erase(it);
    }
    st.children.erase(name);
    st.objects.erase(name);
    st.order.erase(std::remove(st.order.begin(), st.order.end(), name), st.order.end());
    auto& marks = st.right_angle_marks;
    marks.erase(std::remove_if(marks.begin(), marks.end(),
                               [&](const auto& m) {
                                   return m[0] == name || m[1] == name || m[2] == name;
                               }),
                marks.end());
}

}  // namespace

std::pair<CanvasState, Observation> delete_cascade(const CanvasState& state,
                                                   const std::string& name) {
    std::vector<std::string> removal = descendants_closure(state, name);
    CanvasState next = state;
    for (auto it = removal.rbegin(); it != removal.rend(); ++it) erase_object(next, *it);
    Observation obs;
    obs.type = Observation::Type::deleted;
    obs.deleted = std::move(removal);
    return {std::move(next), std::move(obs)};
}

CanvasState recompute(const CanvasState& state, const TolerancePolicy& policy) {
    CanvasState next = state;
    for (const std::string& name : next.order) {
        CanvasObject& obj = next.objects.at(name);
        recompute_object(next, obj, policy);
    }
    return next;
}

namespace {

Json object_record(const CanvasObject& obj, bool with_style) {
    Json r;
    r["name"] = obj.name;
    r["kind"] = obj.kind;
    Json def;
    def["tool"] = obj.definition.tool;
    def["args"] = obj.definition.args;
    def["parents"] = obj.definition.parents;
    def["ref_args"] = obj.definition.ref_arg_keys;
    r["definition"] = def;
    r["is_list"] = obj.is_list;
    Json vals = Json::array();
    for (const Value& v : obj.values) vals.push_back(value_to_json(v));
    r["values"] = vals;
    if (with_style) r["style"] = obj.style;
    return r;
}

}  // namespace

Json export_state(const CanvasState& state) {
    Json doc;
    doc["format_version"] = 1;
    doc["style_preset"] = state.style_preset == StylePresetKind::textbook ? "textbook" : "standard";
    if (state.view) {
        Json v;
        v["x_angle"] = state.view->x_angle;
        v["z_angle"] = state.view->z_angle;
        v["scale"] = state.view->scale;
        v["axes"] = state.view->axes;
        doc["view"] = v;
    } else {
        doc["view"] = nullptr;
    }
    doc["canvas_style"] = state.canvas_style;
    Json marks = Json::array();
    for (const auto& m : state.right_angle_marks) marks.push_back(Json::array({m[0], m[1], m[2]}));
    doc["right_angle_marks"] = marks;
    Json objs = Json::array();
    for (const std::string& name : state.order)
        objs.push_back(object_record(state.objects.at(name), /*with_style=*/true));
    doc["objects"] = objs;
    return doc;
}

CanvasState import_state(const Json& doc) {
    CanvasState st;
    st.style_preset = doc.value("style_preset", std::string("standard")) == "textbook"
                          ? StylePresetKind::textbook
                          : StylePresetKind::standard;
    if (doc.contains("view") && !doc.at("view").is_null()) {
        const Json& v = doc.at("view");
        View3D view;
        view.x_angle = v.at("x_angle").get<double>();
        view.z_angle = v.at("z_angle").get<double>();
        view.scale = v.at("scale").get<double>();
        view.axes = v.at("axes").get<bool>();
        st.view = view;
    }
    st.canvas_style = doc.value("canvas_style", Json::object());
    for (const Json& m : doc.value("right_angle_marks", Json::array()))
        st.right_angle_marks.push_back({m.at(0).get<std::string>(), m.at(1).get<std::string>(),
                                        m.at(2).get<std::string>()});
    for (const Json& r : doc.value("objects", Json::array())) {
        CanvasObject obj;
        obj.name = r.at("name").get<std::string>();
        obj.kind = r.at("kind").get<std::string>();
        const Json& def = r.at("definition");
        obj.definition.tool = def.at("tool").get<std::string>();
        obj.definition.args = def.at("args");
        obj.definition.parents = def.at("parents").get<std::vector<std::string>>();
        obj.definition.ref_arg_keys = def.at("ref_args").get<std::vector<std::string>>();
        obj.is_list = r.value("is_list", false);
        for (const Json& v : r.at("values")) obj.values.push_back(value_from_json(v));
        obj.style = r.value("style", Json::object());
        st.order.push_back(obj.name);
        for (const std::string& parent : obj.definition.parents) {
            auto& kids = st.children[parent];
            if (std::find(kids.begin(), kids.end(), obj.name) == kids.end())
                kids.push_back(obj.name);
        }
        st.objects.emplace(obj.name, std::move(obj));
    }
    return st;
}

Json export_geometry_only(const CanvasState& state) {
    Json doc;
    doc["format_version"] = 1;
    Json objs = Json::array();
    for (const std::string& name : state.order)
        objs.push_back(object_record(state.objects.at(name), /*with_style=*/false));
    doc["objects"] = objs;
    return doc;
}

}  // namespace geocanvas
