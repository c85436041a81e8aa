#pragma once

#include "geocanvas/canvas.hpp"

namespace geocanvas {

/// Execute one validated tool call against a mutable state copy. Construction
/// tools insert objects, query tools compute a value, render tools touch
/// style only. Throws ToolError; apply_action converts it into an Error
/// observation and discards the mutated copy.
Observation dispatch_tool(CanvasState& st, const Action& a, EngineMode mode,
                          const TolerancePolicy& policy);

bool is_construction_tool(const std::string& tool);
bool is_query_tool(const std::string& tool);
bool is_render_tool(const std::string& tool);

/// Re-evaluate one object from its definition; undefined parents and kernel
/// rejections become undefined values.
void recompute_object(CanvasState& st, CanvasObject& obj, const TolerancePolicy& policy);

}  // namespace geocanvas
