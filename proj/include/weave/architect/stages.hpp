#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "weave/architect/capabilities.hpp"
#include "weave/architect/prompts.hpp"
#include "weave/eval/dataset.hpp"
#include "weave/llm/gateway.hpp"
#include "weave/orchestrator/tools.hpp"
#include "weave/workflow/spec.hpp"
#include "weave/workflow/validate.hpp"

namespace weave::architect {

enum class Stage { decompose, design, build, validate, evaluate, ipr, emit };

std::string_view to_string(Stage stage);
std::optional<Stage> stage_from_string(std::string_view s);

struct PlannedTask {
    std::string id;
    std::string description;
    std::vector<std::string> requirements;

    bool operator==(const PlannedTask&) const = default;
};

struct TaskPlan {
    std::vector<PlannedTask> tasks;

    bool operator==(const TaskPlan&) const = default;
};

struct BlueprintSupervisor {
    std::string id;
    std::string purpose;
    std::vector<std::string> children;

    bool operator==(const BlueprintSupervisor&) const = default;
};

struct BlueprintAgent {
    std::string id;
    std::string purpose;
    std::vector<workflow::FieldSpec> inputs;
    std::vector<workflow::FieldSpec> outputs;
    std::vector<std::string> tool_needs;

    bool operator==(const BlueprintAgent&) const = default;
};

struct BlueprintTool {
    std::string id;
    std::string purpose;
    std::string handler;  // defaults to the tool id

    bool operator==(const BlueprintTool&) const = default;
};

struct WorkflowBlueprint {
    std::string name;
    std::vector<BlueprintSupervisor> supervisors;
    std::vector<BlueprintAgent> agents;
    std::vector<BlueprintTool> tools;

    bool operator==(const WorkflowBlueprint&) const = default;

    /// The only supervisor that is nobody's child, or empty when there is not exactly one.
    std::string root() const;
};

/// Any synthesis failure, tagged with the stage that raised it.
class StageError : public std::runtime_error {
public:
    StageError(Stage stage, const std::string& what)
        : std::runtime_error(std::string(to_string(stage)) + ": " + what), stage_(stage) {}
    Stage stage() const noexcept { return stage_; }

private:
    Stage stage_;
};

/// A stage reply that could not be read as the expected document.
class StageParseError : public StageError {
public:
    using StageError::StageError;
};

/// A blueprint breaking the reference, tree or handler rules.
class BlueprintError : public StageError {
public:
    BlueprintError(const std::string& what, workflow::ValidationReport report)
        : StageError(Stage::design, what), report_(std::move(report)) {}
    const workflow::ValidationReport& report() const noexcept { return report_; }

private:
    workflow::ValidationReport report_;
};

/// The assembled spec failed validate_workflow.
class BuildValidationError : public StageError {
public:
    BuildValidationError(workflow::WorkflowSpec spec, workflow::ValidationReport report)
        : StageError(Stage::validate, "built workflow is invalid:\n" + report.render()),
          spec_(std::move(spec)),
          report_(std::move(report)) {}
    const workflow::WorkflowSpec& spec() const noexcept { return spec_; }
    const workflow::ValidationReport& report() const noexcept { return report_; }

private:
    workflow::WorkflowSpec spec_;
    workflow::ValidationReport report_;
};

/// Everything a stage may read besides its declared input.
struct StageContext {
    llm::Gateway& gateway;
    const CapabilitiesDoc& doc;
    const PromptLibrary& prompts;
    std::map<Stage, llm::LlmProfile> profiles;  // missing stages use gpt41_profile()
    int repair_retries = 1;
    const orchestrator::HandlerCatalog* handlers = nullptr;  // null means builtins
    /// Profile written into the built spec.
    llm::LlmProfile workflow_profile = llm::gpt41_profile();

    const llm::LlmProfile& profile(Stage stage) const;
};

inline constexpr std::size_t kMaxPromptExamples = 10;
inline constexpr std::string_view kStageRepairMarker = "Your previous reply could not be used";

/// Reads the YAML document of a stage reply: the first ```yaml fence, or the
/// whole reply when it has none.
std::string stage_document(std::string_view reply);

TaskPlan parse_task_plan(std::string_view reply);
WorkflowBlueprint parse_blueprint(std::string_view reply);
std::string serialize_task_plan(const TaskPlan& plan);
std::string serialize_blueprint(const WorkflowBlueprint& blueprint);

/// Reference closure, tree shape and handler availability, checked before build.
void check_blueprint(const WorkflowBlueprint& blueprint, const CapabilitiesDoc& doc);

TaskPlan decompose(std::string_view user_prompt, const eval::Dataset& examples, const StageContext& ctx);
WorkflowBlueprint design(const TaskPlan& plan, const StageContext& ctx);
/// One call per supervisor and agent for its seed system message.
workflow::WorkflowSpec build(const WorkflowBlueprint& blueprint, const StageContext& ctx);

}  // namespace weave::architect
