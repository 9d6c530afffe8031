#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace weave::orchestrator {

enum class DirectiveKind { delegate, tool_call, final };

std::string_view to_string(DirectiveKind kind);

/// A supervisor's (or tool-using agent's) decision for one turn.
///
/// Written by the model as a single fenced block tagged `directive` whose body
/// is a YAML mapping with keys kind, target, task, arguments, answer:
///
///     ```directive
///     kind: delegate
///     target: math_agent
///     task: compute the angle
///     ```
struct Directive {
    DirectiveKind kind = DirectiveKind::final;
    std::optional<std::string> target;
    std::optional<std::string> task;
    std::optional<nlohmann::json> arguments;  // JSON object
    std::optional<std::string> answer;

    bool operator==(const Directive&) const = default;
};

class DirectiveError : public std::runtime_error {
public:
    enum class Reason { no_block, multiple_blocks, malformed, invalid };

    DirectiveError(Reason reason, const std::string& what) : std::runtime_error(what), reason_(reason) {}
    Reason reason() const noexcept { return reason_; }

private:
    Reason reason_;
};

/// Extracts the single directive block from `text`; surrounding prose and
/// other fenced blocks are ignored.
Directive parse_directive(std::string_view text);

/// Renders `d` as a directive block that parse_directive accepts.
std::string format_directive(const Directive& d);

}  // namespace weave::orchestrator
