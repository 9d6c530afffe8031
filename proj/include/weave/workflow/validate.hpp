#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "weave/workflow/spec.hpp"

namespace weave::workflow {

enum class IssueCode {
    DUPLICATE_ID,
    DANGLING_REF,
    NOT_A_TREE,
    EMPTY_CHILDREN,
    BAD_ROOT,
    BAD_FIELD_NAME,
    DUPLICATE_FIELD,
    EMPTY_OUTPUTS,
    EMPTY_SYSTEM_MESSAGE,
    EMPTY_HANDLER,
    BAD_PROFILE,
    BAD_IDENTIFIER,
};

std::string_view to_string(IssueCode code);

struct Issue {
    IssueCode code;
    std::string path;
    std::string message;

    bool operator==(const Issue&) const = default;
};

struct ValidationReport {
    std::vector<Issue> issues;

    bool ok() const noexcept { return issues.empty(); }
    std::set<IssueCode> codes() const;
    /// One line per issue: "CODE at /path: message".
    std::string render() const;
};

/// Ids a component may not take: the envelope sender of the user query and the
/// built-in memory tools.
inline constexpr std::string_view kReservedIds[] = {"user", "memory_read", "memory_write"};

bool is_valid_identifier(std::string_view id);
bool is_valid_field_name(std::string_view name);

/// Checks every structural invariant of `spec`. Never throws; problems are data.
ValidationReport validate_workflow(const WorkflowSpec& spec);

}  // namespace weave::workflow
