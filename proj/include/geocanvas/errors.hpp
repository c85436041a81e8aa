#pragma once

#include <stdexcept>
#include <string>

namespace geocanvas {

/// Engine error taxonomy. Every failed tool call reports exactly one code.
enum class ErrorCode {
    entity_not_found,
    precondition_failed,
    degenerate_input,
    type_mismatch,
    name_conflict,
    unsupported_tool,
    index_out_of_range,
    engine_error,
    timeout,
};

inline const char* to_string(ErrorCode c) {
    switch (c) {
        case ErrorCode::entity_not_found: return "EntityNotFound";
        case ErrorCode::precondition_failed: return "PreconditionFailed";
        case ErrorCode::degenerate_input: return "DegenerateInput";
        case ErrorCode::type_mismatch: return "TypeMismatch";
        case ErrorCode::name_conflict: return "NameConflict";
        case ErrorCode::unsupported_tool: return "UnsupportedTool";
        case ErrorCode::index_out_of_range: return "IndexOutOfRange";
        case ErrorCode::engine_error: return "EngineError";
        case ErrorCode::timeout: return "Timeout";
    }
    return "EngineError";
}

/// Thrown by kernels and tool handlers; the canvas boundary converts it into
/// an Error observation (never propagated to callers of apply_action).
class ToolError : public std::runtime_error {
public:
    ToolError(ErrorCode code, std::string message, std::string offending_arg = {})
        : std::runtime_error(std::move(message)),
          code_(code),
          offending_arg_(std::move(offending_arg)) {}

    ErrorCode code() const { return code_; }
    const std::string& offending_arg() const { return offending_arg_; }

private:
    ErrorCode code_;
    std::string offending_arg_;
};

}  // namespace geocanvas
