#pragma once

#include <chrono>
#include <exception>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "weave/llm/gateway.hpp"
#include "weave/orchestrator/directive.hpp"
#include "weave/orchestrator/envelope.hpp"
#include "weave/orchestrator/memory.hpp"
#include "weave/orchestrator/tools.hpp"
#include "weave/orchestrator/trace.hpp"
#include "weave/workflow/spec.hpp"

namespace weave::orchestrator {

struct ExecuteOptions {
    std::size_t max_steps = 32;
    /// Metadata placed on the initial envelope; every envelope of the run carries it.
    Metadata metadata;
    /// Handler catalog for the workflow's tools. Null means HandlerCatalog::builtins().
    const HandlerCatalog* handlers = nullptr;
};

struct RunResult {
    std::string final_answer;
    ExecutionTrace trace;
    std::vector<Envelope> envelopes;
    MemoryStore memory;
    std::size_t prompt_tokens = 0;
    std::size_t completion_tokens = 0;
    std::chrono::milliseconds wall_time{0};
};

/// Any failure of a run. The trace up to the failure is preserved.
class ExecutionError : public std::runtime_error {
public:
    ExecutionError(const std::string& what, ExecutionTrace trace)
        : std::runtime_error(what), trace_(std::move(trace)) {}
    const ExecutionTrace& trace() const noexcept { return trace_; }

private:
    ExecutionTrace trace_;
};

class InvalidWorkflow : public ExecutionError {
public:
    using ExecutionError::ExecutionError;
};

class StepBudgetExceeded : public ExecutionError {
public:
    using ExecutionError::ExecutionError;
};

/// The model failed to produce a usable directive even after a repair retry.
class DirectiveFailure : public ExecutionError {
public:
    using ExecutionError::ExecutionError;
};

/// Delegation to a non-child, or a tool the actor does not hold.
class UnknownTarget : public ExecutionError {
public:
    using ExecutionError::ExecutionError;
};

class GatewayFailure : public ExecutionError {
public:
    GatewayFailure(const std::string& what, ExecutionTrace trace, std::exception_ptr cause)
        : ExecutionError(what, std::move(trace)), cause_(std::move(cause)) {}
    const std::exception_ptr& cause() const noexcept { return cause_; }
    /// True when the underlying error is a TranscriptError (replay out of sync).
    bool transcript_exhausted() const;

private:
    std::exception_ptr cause_;
};

/// Runs `spec` on `query`: the root supervisor receives the query, delegates
/// depth-first one child at a time, and finishes with a `final` directive.
RunResult execute(const workflow::WorkflowSpec& spec, std::string_view query, llm::Gateway& gateway,
                  const ExecuteOptions& options = {});

/// Prompt text appended to supervisor system messages (roster + directive format).
std::string supervisor_protocol(const workflow::WorkflowSpec& spec, const workflow::SupervisorSpec& supervisor);
/// Prompt text appended to agent system messages (fields + tool usage).
std::string agent_protocol(const workflow::WorkflowSpec& spec, const workflow::AgentSpec& agent);

inline constexpr std::string_view kRepairMarker = "Your previous reply could not be parsed";

}  // namespace weave::orchestrator
