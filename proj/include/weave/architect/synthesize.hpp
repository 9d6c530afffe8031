#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "weave/architect/stages.hpp"
#include "weave/eval/judge.hpp"
#include "weave/ipr/loop.hpp"

namespace weave::architect {

struct SynthesisConfig {
    int repair_retries = 1;
    std::map<Stage, llm::LlmProfile> stage_profiles;
    llm::LlmProfile workflow_profile = llm::gpt41_profile();
    std::filesystem::path output_dir;
    std::filesystem::path asset_dir = default_asset_dir();
    /// Replaces `<asset_dir>/capabilities.md` when set.
    std::optional<std::filesystem::path> capabilities_path;
    ipr::IprConfig ipr;
    /// Value of the `run` column in report.csv.
    std::size_t run_index = 0;
};

std::vector<std::string> config_problems(const SynthesisConfig& config);

struct SynthesisResult {
    TaskPlan plan;
    WorkflowBlueprint blueprint;
    workflow::WorkflowSpec spec;  // final, after refinement
    ipr::IprReport report;
};

/// decompose, design, build, validate, then the refinement loop on `examples`
/// (iteration 0 is the baseline; a met threshold ends it there). Artifacts go to
/// config.output_dir: task_plan.yaml, blueprint.yaml, iteration_<k>.workflow.yaml,
/// final.workflow.yaml, ipr_report.json, report.csv, manifest.json. On a StageError
/// whatever was produced stays on disk next to error.txt.
SynthesisResult synthesize(std::string_view user_prompt, const eval::Dataset& examples, const eval::Dataset* dataset,
                           const SynthesisConfig& config, llm::Gateway& gateway, const eval::Judge& judge);

}  // namespace weave::architect
