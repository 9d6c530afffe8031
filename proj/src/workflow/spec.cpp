#include "weave/workflow/spec.hpp"

#include <algorithm>

namespace weave::workflow {
namespace {

template <typename T>
const T* find_by_id(const std::vector<T>& items, std::string_view id) {
    auto it = std::find_if(items.begin(), items.end(), [&](const T& item) { return item.id == id; });
    return it == items.end() ? nullptr : &*it;
}

}  // namespace

std::string_view to_string(FieldKind kind) {
    switch (kind) {
        case FieldKind::text: return "text";
        case FieldKind::number: return "number";
        case FieldKind::boolean: return "boolean";
        case FieldKind::list: return "list";
    }
    return "text";
}

std::optional<FieldKind> field_kind_from_string(std::string_view s) {
    if (s == "text") return FieldKind::text;
    if (s == "number") return FieldKind::number;
    if (s == "boolean") return FieldKind::boolean;
    if (s == "list") return FieldKind::list;
    return std::nullopt;
}

const SupervisorSpec* WorkflowSpec::find_supervisor(std::string_view id) const {
    return find_by_id(supervisors, id);
}

const AgentSpec* WorkflowSpec::find_agent(std::string_view id) const {
    return find_by_id(agents, id);
}

const ToolSpec* WorkflowSpec::find_tool(std::string_view id) const {
    return find_by_id(tools, id);
}

const std::string* WorkflowSpec::system_message_of(std::string_view id) const {
    if (const auto* s = find_supervisor(id)) return &s->system_message;
    if (const auto* a = find_agent(id)) return &a->system_message;
    return nullptr;
}

std::string* WorkflowSpec::system_message_of(std::string_view id) {
    return const_cast<std::string*>(std::as_const(*this).system_message_of(id));
}

std::vector<std::string> WorkflowSpec::component_ids() const {
    std::vector<std::string> ids;
    ids.reserve(supervisors.size() + agents.size());
    for (const auto& s : supervisors) ids.push_back(s.id);
    for (const auto& a : agents) ids.push_back(a.id);
    return ids;
}

}  // namespace weave::workflow
