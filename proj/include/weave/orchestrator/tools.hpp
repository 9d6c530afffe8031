#pragma once

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "weave/workflow/spec.hpp"

namespace weave::orchestrator {

class ToolError : public std::runtime_error {
public:
    enum class Reason { unknown_tool, unknown_handler, bad_arguments, handler_failed };

    ToolError(Reason reason, const std::string& what) : std::runtime_error(what), reason_(reason) {}
    Reason reason() const noexcept { return reason_; }

private:
    Reason reason_;
};

using ToolHandler = std::function<std::string(const nlohmann::json& arguments)>;

/// An in-process handler addressable by symbolic name from a ToolSpec.
struct HandlerDef {
    std::string name;
    std::string description;
    std::vector<workflow::FieldSpec> parameters;  // what the handler expects
    ToolHandler handler;
};

class HandlerCatalog {
public:
    /// `echo` (text -> text) and `calculator` (expr -> number).
    static HandlerCatalog builtins();

    void add(HandlerDef def);
    const HandlerDef* find(std::string_view name) const;
    std::vector<std::string> names() const;

private:
    std::map<std::string, HandlerDef, std::less<>> handlers_;
};

/// Tools of one workflow, keyed by tool id and bound to their handlers.
class ToolRegistry {
public:
    ToolRegistry() = default;

    /// Binds every tool of `spec`. Throws ToolError(unknown_handler).
    static ToolRegistry from_spec(const workflow::WorkflowSpec& spec, const HandlerCatalog& catalog);

    void add(workflow::ToolSpec spec, ToolHandler handler);
    const workflow::ToolSpec* find(std::string_view tool_id) const;

    /// Runs the tool after checking `arguments` against its declared parameters.
    std::string invoke(std::string_view tool_id, const nlohmann::json& arguments) const;

private:
    struct Bound {
        workflow::ToolSpec spec;
        ToolHandler handler;
    };
    std::map<std::string, Bound, std::less<>> tools_;
};

inline std::string invoke_tool(const ToolRegistry& registry, std::string_view tool_id, const nlohmann::json& arguments) {
    return registry.invoke(tool_id, arguments);
}

/// Every declared parameter present with a value of its kind, and nothing undeclared.
void check_arguments(const workflow::ToolSpec& spec, const nlohmann::json& arguments);

/// Evaluates + - * / and parentheses over decimal numbers.
double evaluate_arithmetic(std::string_view expression);

/// Integral values print without a fractional part; others with up to 12 significant digits.
std::string format_number(double value);

}  // namespace weave::orchestrator
