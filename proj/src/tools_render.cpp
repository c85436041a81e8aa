#include "tool_args.hpp"
#include "geocanvas/tool_dispatch.hpp"

namespace geocanvas::detail {

namespace {

Observation style_changed(std::vector<std::string> names) {
    Observation obs;
    obs.type = Observation::Type::style_changed;
    obs.styled = std::move(names);
    return obs;
}

CanvasObject& target(CanvasState& st, ArgReader& r, const std::string& key = "obj") {
    const std::string name = r.str(key);
    auto it = st.objects.find(name);
    if (it == st.objects.end())
        throw ToolError(ErrorCode::entity_not_found, "no object named '" + name + "'", name);
    return it->second;
}

bool valid_color(const std::string& c) {
    if (c.size() == 7 && c[0] == '#') {
        for (std::size_t i = 1; i < 7; ++i)
            if (!std::isxdigit(static_cast<unsigned char>(c[i]))) return false;
        return true;
    }
    for (char ch : c)
        if (!std::isalpha(static_cast<unsigned char>(ch))) return false;
    return !c.empty();
}

}  // namespace

Observation run_render_tool(CanvasState& st, const std::string& tool, ArgReader& r) {
    if (tool == "render_set_color") {
        CanvasObject& o = target(st, r);
        const std::string color = r.str("color");
        if (!valid_color(color))
            throw ToolError(ErrorCode::type_mismatch,
                            "'color' must be #rrggbb or a color name", "color");
        o.style["color"] = color;
        return style_changed({o.name});
    }
    if (tool == "render_set_line_style") {
        CanvasObject& o = target(st, r);
        const std::string style = r.str("style");
        if (style != "solid" && style != "dashed" && style != "dotted")
            throw ToolError(ErrorCode::type_mismatch, "'style' is solid, dashed or dotted",
                            "style");
        o.style["line_style"] = style;
        return style_changed({o.name});
    }
    if (tool == "render_set_line_thickness") {
        CanvasObject& o = target(st, r);
        const double t = r.scalar("thickness");
        if (!(t > 0.0))
            throw ToolError(ErrorCode::type_mismatch, "'thickness' must be positive",
                            "thickness");
        o.style["thickness"] = t;
        return style_changed({o.name});
    }
    if (tool == "render_set_point_style") {
        CanvasObject& o = target(st, r);
        const int code = r.code("style");
        if (code < 0 || code > 4)
            throw ToolError(ErrorCode::type_mismatch,
                            "'style' is 0=dot 1=circle 2=cross 3=plus 4=diamond", "style");
        o.style["point_style"] = code;
        return style_changed({o.name});
    }
    if (tool == "render_set_point_size") {
        CanvasObject& o = target(st, r);
        const double s = r.scalar("size");
        if (!(s > 0.0))
            throw ToolError(ErrorCode::type_mismatch, "'size' must be positive", "size");
        o.style["point_size"] = s;
        return style_changed({o.name});
    }
    if (tool == "render_set_filling") {
        CanvasObject& o = target(st, r);
        const double f = r.scalar("opacity");
        if (f < 0.0 || f > 1.0)
            throw ToolError(ErrorCode::type_mismatch, "'opacity' lies in [0, 1]", "opacity");
        o.style["fill_opacity"] = f;
        return style_changed({o.name});
    }
    if (tool == "render_set_decoration") {
        CanvasObject& o = target(st, r);
        const int code = r.code("decoration");
        if (code < 0 || code > 4)
            throw ToolError(ErrorCode::type_mismatch,
                            "'decoration' is 0=none 1..3=tick marks 4=arrow", "decoration");
        o.style["decoration"] = code;
        return style_changed({o.name});
    }
    if (tool == "render_show_axes" || tool == "render_show_grid") {
        const bool visible = r.flag("visible");
        st.canvas_style[tool == "render_show_axes" ? "axes" : "grid"] = visible;
        return style_changed({});
    }
    if (tool == "render_set_caption") {
        CanvasObject& o = target(st, r);
        o.style["caption"] = r.str("caption");
        return style_changed({o.name});
    }
    if (tool == "render_set_label_mode") {
        CanvasObject& o = target(st, r);
        const int mode = r.code("mode");
        if (mode < 0 || mode > 3)
            throw ToolError(ErrorCode::type_mismatch,
                            "'mode' is 0=name 1=name+value 2=value 3=caption", "mode");
        if (mode == 3 && !o.style.contains("caption"))
            throw ToolError(ErrorCode::precondition_failed,
                            "set a caption before selecting caption mode", "mode");
        o.style["label_mode"] = mode;
        o.style["label_visible"] = true;  // selecting a mode reveals the label
        return style_changed({o.name});
    }
    if (tool == "render_set_coord_system") {
        const double xmin = r.scalar("xmin"), xmax = r.scalar("xmax");
        const double ymin = r.scalar("ymin"), ymax = r.scalar("ymax");
        if (!(xmin < xmax) || !(ymin < ymax))
            throw ToolError(ErrorCode::precondition_failed,
                            "viewport needs xmin < xmax and ymin < ymax", "xmax");
        st.canvas_style["bounds"] = Json::array({xmin, xmax, ymin, ymax});
        return style_changed({});
    }
    if (tool == "render_add_right_angle_mark") {
        for (const char* key : {"a", "b", "c"}) {
            const CanvasObject& o = r.ref(key);
            if (o.kind != "point")
                throw ToolError(ErrorCode::type_mismatch,
                                "'" + o.name + "' is a " + o.kind + "; the mark needs points",
                                key);
        }
        st.right_angle_marks.push_back({r.str("a"), r.str("b"), r.str("c")});
        return style_changed({r.str("b")});
    }
    if (tool == "render_set_3d_view") {
        View3D view = st.view.value_or(View3D{});
        view.x_angle = r.scalar("x_angle");
        view.z_angle = r.scalar("z_angle");
        view.scale = r.scalar("scale");
        view.axes = r.flag_or("axes", view.axes);
        st.view = view;
        return style_changed({});
    }
    throw ToolError(ErrorCode::unsupported_tool, "unknown tool '" + tool + "'");
}

namespace {

void rename_refs(Json& args, const std::vector<std::string>& ref_keys, const std::string& from,
                 const std::string& to) {
    for (const std::string& key : ref_keys) {
        if (!args.contains(key)) continue;
        Json& slot = args.at(key);
        if (slot.is_string() && slot.get<std::string>() == from) slot = to;
        if (slot.is_array())
            for (Json& item : slot)
                if (item.is_string() && item.get<std::string>() == from) item = to;
    }
}

}  // namespace

Observation run_utility_tool(CanvasState& st, const std::string& tool, ArgReader& r,
                             const TolerancePolicy& policy) {
    if (tool == "delete_object") {
        const std::string name = r.str("name");
        auto [next, obs] = delete_cascade(st, name);
        st = std::move(next);
        return obs;
    }
    if (tool == "set_value") {
        const std::string name = r.str("name");
        const double value = r.scalar("value");
        CanvasObject& obj = st.objects.count(name)
                                ? st.objects.at(name)
                                : throw ToolError(ErrorCode::entity_not_found,
                                                  "no object named '" + name + "'", name);
        if (!obj.definition.parents.empty() || obj.is_list ||
            !std::holds_alternative<double>(obj.single()))
            throw ToolError(ErrorCode::precondition_failed,
                            "'" + name + "' is not a free numeric value", "name");
        if (obj.definition.tool == "add_slider") {
            const double lo = obj.definition.args.at("min").get<double>();
            const double hi = obj.definition.args.at("max").get<double>();
            if (value < lo || value > hi)
                throw ToolError(ErrorCode::precondition_failed,
                                "value outside the slider range", "value");
        }
        obj.definition.args["value"] = value;
        obj.values = {Value(value)};
        st = recompute(st, policy);
        Observation obs;
        obs.type = Observation::Type::created;
        obs.created.push_back({name, st.objects.at(name).kind, format_number(value)});
        obs.extra["updated"] = true;
        return obs;
    }
    if (tool == "rename_object") {
        const std::string from = r.str("name");
        const std::string to = r.str("new_name");
        if (!valid_identifier(to))
            throw ToolError(ErrorCode::type_mismatch, "'" + to + "' is not a valid name",
                            "new_name");
        if (!st.has(from))
            throw ToolError(ErrorCode::entity_not_found, "no object named '" + from + "'", from);
        if (from != to && st.has(to))
            throw ToolError(ErrorCode::name_conflict, "an object named '" + to + "' exists",
                            "new_name");
        if (from == to) {
            Observation obs;
            obs.type = Observation::Type::created;
            const CanvasObject& o = st.objects.at(from);
            obs.created.push_back({to, o.kind, o.values.empty() ? "undefined"
                                                                 : value_brief(o.single())});
            obs.extra["renamed_from"] = from;
            return obs;
        }
        CanvasObject obj = std::move(st.objects.at(from));
        st.objects.erase(from);
        obj.name = to;
        obj.definition.args["name"] = to;
        st.objects.emplace(to, std::move(obj));
        for (std::string& n : st.order)
            if (n == from) n = to;
        // children map: the renamed node's own bucket plus every mention
        auto node = st.children.find(from);
        if (node != st.children.end()) {
            st.children[to] = std::move(node->second);
            st.children.erase(from);
        }
        for (auto& [parent, kids] : st.children)
            for (std::string& kid : kids)
                if (kid == from) kid = to;
        // rewrite references held by dependents
        for (const std::string& n : st.order) {
            CanvasObject& other = st.objects.at(n);
            for (std::string& p : other.definition.parents)
                if (p == from) p = to;
            rename_refs(other.definition.args, other.definition.ref_arg_keys, from, to);
        }
        for (auto& mark : st.right_angle_marks)
            for (std::string& n : mark)
                if (n == from) n = to;
        Observation obs;
        obs.type = Observation::Type::created;
        const CanvasObject& o = st.objects.at(to);
        obs.created.push_back(
            {to, o.kind, o.values.empty() ? "undefined" : value_brief(o.single())});
        obs.extra["renamed_from"] = from;
        return obs;
    }
    if (tool == "set_label_visible" || tool == "set_object_visible") {
        const std::string name = r.str("name");
        auto it = st.objects.find(name);
        if (it == st.objects.end())
            throw ToolError(ErrorCode::entity_not_found, "no object named '" + name + "'", name);
        const bool visible = r.flag("visible");
        it->second.style[tool == "set_label_visible" ? "label_visible" : "visible"] = visible;
        Observation obs;
        obs.type = Observation::Type::style_changed;
        obs.styled = {name};
        return obs;
    }
    throw ToolError(ErrorCode::unsupported_tool, "unknown tool '" + tool + "'");
}

}  // namespace geocanvas::detail
