#pragma once

#include <chrono>
#include <stdexcept>
#include <string>
#include <vector>

#include "weave/eval/dataset.hpp"
#include "weave/eval/judge.hpp"
#include "weave/orchestrator/execute.hpp"
#include "weave/workflow/spec.hpp"

namespace weave::eval {

/// Exact fraction of passes. Kept unreduced so the counts stay visible.
struct PassRate {
    std::size_t passes = 0;
    std::size_t total = 0;

    double value() const { return total == 0 ? 0.0 : static_cast<double>(passes) / static_cast<double>(total); }
    /// Decimal rendering rounded half-up, e.g. 71/158 -> "0.4494".
    std::string render(int decimals = 4) const;
    /// passes / total >= threshold, decided without floating-point error on the fraction.
    bool at_least(double threshold) const;
    /// Cross-multiplied equality, so 6/10 == 3/5.
    bool same_value(const PassRate& other) const { return passes * other.total == other.passes * total; }

    bool operator==(const PassRate&) const = default;
};

struct EvaluationReport {
    std::vector<Verdict> verdicts;  // dataset order
    std::vector<orchestrator::ExecutionTrace> traces;
    PassRate pass_rate;
    std::size_t total = 0;
    std::chrono::milliseconds wall_time{0};
    std::size_t prompt_tokens = 0;
    std::size_t completion_tokens = 0;

    std::vector<std::string> failed_ids() const;
};

class EvaluationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct EvaluateOptions {
    /// Worker pool width. Forced to 1 when the gateway replays a transcript.
    std::size_t workers = 4;
    orchestrator::ExecuteOptions execute;
};

inline constexpr std::string_view kExecutionErrorPrefix = "execution error: ";

/// Runs the workflow on every example and judges each answer. A failing run is a
/// failed verdict, never an abort. Replay desynchronisation (TranscriptError) is
/// rethrown because every later result would be meaningless.
EvaluationReport evaluate(const workflow::WorkflowSpec& spec, const Dataset& examples, llm::Gateway& gateway,
                          const Judge& judge, const EvaluateOptions& options = {});

}  // namespace weave::eval
