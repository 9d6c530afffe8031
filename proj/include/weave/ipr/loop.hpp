#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "weave/eval/evaluate.hpp"
#include "weave/ipr/feedback.hpp"
#include "weave/workflow/spec.hpp"

namespace weave::ipr {

struct IprConfig {
    /// Evaluated iterations, the baseline included: 5 gives iterations 0 to 4.
    std::size_t max_iterations = 5;
    std::size_t sample_size = 10;
    double pass_threshold = 1.0;
    std::uint64_t seed = 0;
    int repair_retries = 1;
    llm::LlmProfile feedback_profile = llm::gpt41_profile();
    /// Evaluate the final spec on the full dataset when one is given.
    bool evaluate_full = true;
    eval::EvaluateOptions evaluate;
};

/// Human-readable problems with `config`; empty when usable. The sample size is
/// checked only when `dataset_size` is given.
std::vector<std::string> config_problems(const IprConfig& config, std::optional<std::size_t> dataset_size = {});

struct IterationRecord {
    std::size_t index = 0;
    eval::PassRate sample_pass_rate;
    std::vector<FeedbackRecord> feedback;
    std::string spec_hash;  // of the workflow evaluated in this iteration
    std::vector<std::string> failures;
    std::vector<std::string> warnings;
};

struct IprReport {
    std::vector<IterationRecord> iterations;
    std::optional<eval::PassRate> final_full_pass_rate;
    std::uint64_t seed = 0;
    std::vector<std::string> sample_ids;
    eval::JudgeMode judge_mode = eval::JudgeMode::exact;
};

struct IprResult {
    workflow::WorkflowSpec spec;  // the last evaluated spec
    IprReport report;
    std::vector<workflow::WorkflowSpec> snapshots;  // snapshots[k] was evaluated in iteration k
};

/// The loop stopped on an evaluation, feedback or gateway error. Everything
/// recorded before the failure is kept.
class IprAborted : public std::runtime_error {
public:
    IprAborted(const std::string& what, IprReport partial, std::vector<workflow::WorkflowSpec> snapshots)
        : std::runtime_error(what), partial_(std::move(partial)), snapshots_(std::move(snapshots)) {}
    const IprReport& partial() const noexcept { return partial_; }
    const std::vector<workflow::WorkflowSpec>& snapshots() const noexcept { return snapshots_; }

private:
    IprReport partial_;
    std::vector<workflow::WorkflowSpec> snapshots_;
};

/// Called after each iteration is recorded, before feedback is applied.
using IterationObserver = std::function<void(const IterationRecord&, const workflow::WorkflowSpec&)>;

/// Evaluate `examples`, stop once the pass threshold or the iteration limit is
/// reached, otherwise collect feedback for every failure and apply it as one batch.
/// `full_dataset` (optional) feeds final_full_pass_rate.
IprResult run_ipr(const workflow::WorkflowSpec& spec, const eval::Dataset& examples, const eval::Dataset* full_dataset,
                  llm::Gateway& gateway, const eval::Judge& judge, const IprConfig& config,
                  const IterationObserver& observer = {});

}  // namespace weave::ipr
