#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace weave::orchestrator {

enum class StepKind { llm_call, delegate, tool_call, memory_read, memory_write, final };

std::string_view to_string(StepKind kind);
std::optional<StepKind> step_kind_from_string(std::string_view s);

struct TraceStep {
    std::string actor;
    StepKind kind = StepKind::llm_call;
    std::string envelope_id;
    std::string detail;

    bool operator==(const TraceStep&) const = default;
};

/// Ordered record of one run. In a successful run the last step, and only
/// that step, is `final`.
struct ExecutionTrace {
    std::vector<TraceStep> steps;

    std::size_t step_count() const noexcept { return steps.size(); }
    std::size_t count(StepKind kind) const;

    bool operator==(const ExecutionTrace&) const = default;
};

/// JSON Lines, one object per step: {"index","actor","step_kind","envelope_id","detail"}.
std::string trace_to_jsonl(const ExecutionTrace& trace);
ExecutionTrace trace_from_jsonl(std::string_view jsonl);

/// Compact text rendering for feedback prompts; each detail cut to `max_detail` bytes.
std::string trace_digest(const ExecutionTrace& trace, std::size_t max_detail = 400);

}  // namespace weave::orchestrator
