#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "weave/workflow/spec.hpp"

namespace weave::workflow {

class WorkflowParseError : public std::runtime_error {
public:
    enum class Kind { syntax, schema, duplicate_id };

    WorkflowParseError(Kind kind, std::string path, std::string message, int line = 0, int column = 0);

    Kind kind() const noexcept { return kind_; }
    /// JSON-pointer style locator ("/agents/1/outputs"); empty for syntax errors.
    const std::string& path() const noexcept { return path_; }
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }
    /// SYNTAX, SCHEMA or DUPLICATE_ID.
    std::string_view code() const noexcept;

private:
    Kind kind_;
    std::string path_;
    int line_;
    int column_;
};

/// Parses a `.workflow.yaml` document. Unknown keys are rejected at every level.
WorkflowSpec parse_workflow(std::string_view yaml);

/// Canonical form: schema key order, declaration list order, every string
/// double-quoted, empty lists written as `[]`. Byte-identical for equal specs.
std::string serialize_workflow(const WorkflowSpec& spec);

/// "sha256:<hex>" of the canonical serialization.
std::string spec_hash(const WorkflowSpec& spec);

/// Parses a standalone LLM profile document (the `llm_profile` block schema).
llm::LlmProfile parse_profile(std::string_view yaml);
std::string serialize_profile(const llm::LlmProfile& profile);

}  // namespace weave::workflow
