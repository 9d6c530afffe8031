#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "weave/llm/types.hpp"

namespace weave::workflow {

enum class FieldKind { text, number, boolean, list };

std::string_view to_string(FieldKind kind);
std::optional<FieldKind> field_kind_from_string(std::string_view s);

struct FieldSpec {
    std::string name;  // [a-z][a-z0-9_]*
    std::string description;
    FieldKind kind = FieldKind::text;

    bool operator==(const FieldSpec&) const = default;
};

struct SupervisorSpec {
    std::string id;
    std::string system_message;
    std::vector<std::string> children;  // supervisor or agent ids, in delegation order

    bool operator==(const SupervisorSpec&) const = default;
};

struct AgentSpec {
    std::string id;
    std::string role;
    std::string system_message;
    std::vector<FieldSpec> inputs;
    std::vector<FieldSpec> outputs;
    std::vector<std::string> tool_ids;

    bool operator==(const AgentSpec&) const = default;
};

struct ToolSpec {
    std::string id;
    std::string description;
    std::vector<FieldSpec> parameters;
    std::string handler;  // resolved by the orchestrator's handler catalog

    bool operator==(const ToolSpec&) const = default;
};

/// Declarative description of a supervisor tree. Values are plain data: copy
/// freely, share const references across threads.
struct WorkflowSpec {
    std::string name;
    std::string description;
    llm::LlmProfile llm_profile;
    std::string root_supervisor;
    std::vector<SupervisorSpec> supervisors;
    std::vector<AgentSpec> agents;
    std::vector<ToolSpec> tools;

    bool operator==(const WorkflowSpec&) const = default;

    const SupervisorSpec* find_supervisor(std::string_view id) const;
    const AgentSpec* find_agent(std::string_view id) const;
    const ToolSpec* find_tool(std::string_view id) const;

    /// System message of the supervisor or agent `id`, or nullptr.
    const std::string* system_message_of(std::string_view id) const;
    std::string* system_message_of(std::string_view id);

    /// Supervisor ids followed by agent ids, in declaration order.
    std::vector<std::string> component_ids() const;
};

}  // namespace weave::workflow
