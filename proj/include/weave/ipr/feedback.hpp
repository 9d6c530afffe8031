#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "weave/eval/dataset.hpp"
#include "weave/llm/gateway.hpp"
#include "weave/orchestrator/trace.hpp"
#include "weave/workflow/spec.hpp"

namespace weave::ipr {

enum class FeedbackAction { modify, rewrite, none };

std::string_view to_string(FeedbackAction action);  // MODIFY, REWRITE, NONE
std::optional<FeedbackAction> feedback_action_from_string(std::string_view s);

struct FeedbackRecord {
    std::string target_id;
    std::string issue;
    std::string root_cause;
    FeedbackAction action = FeedbackAction::none;
    std::string guideline_change;  // required unless action is NONE

    bool operator==(const FeedbackRecord&) const = default;
};

class FeedbackParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parses labelled records of the form
///
///   Target: answer_agent
///   Issue: ...
///   Root Cause: ...
///   Action Required: MODIFY
///   Guideline Change: "..."
///
/// Labels are case-insensitive and may be wrapped in `**`. A value runs until the
/// next label, so it may span lines. A new record starts at each `Target:` or
/// when a label repeats. Quotes around the guideline are stripped. A record
/// without a target keeps target_id empty.
std::vector<FeedbackRecord> parse_feedback(std::string_view text);

/// Inverse of parse_feedback for one record.
std::string format_feedback(const FeedbackRecord& record);

struct FeedbackResult {
    std::vector<FeedbackRecord> records;
    std::vector<std::string> warnings;  // dropped records
    std::size_t calls = 0;
};

std::string feedback_prompt(const orchestrator::ExecutionTrace& trace, const eval::QaPair& example,
                            std::string_view candidate, const workflow::WorkflowSpec& spec);
inline constexpr std::string_view kFeedbackRepairMarker = "Your previous feedback could not be parsed";

/// One analysis call for a failed example, plus up to `repair_retries` repairs on
/// parse failure. Records naming an unknown component are dropped with a warning;
/// a record without a target applies to the root supervisor.
FeedbackResult generate_feedback(const orchestrator::ExecutionTrace& trace, const eval::QaPair& example,
                                 std::string_view candidate, const workflow::WorkflowSpec& spec,
                                 llm::Gateway& gateway, const llm::LlmProfile& profile, int repair_retries = 1);

/// MODIFY appends the guideline to the target's system message after a single
/// space, REWRITE replaces the message, NONE changes nothing. A guideline that
/// already occurs verbatim in the message is not added again. Unknown targets
/// leave the workflow unchanged.
workflow::WorkflowSpec apply_feedback(workflow::WorkflowSpec spec, const FeedbackRecord& record);

}  // namespace weave::ipr
