#include "weave/ipr/feedback.hpp"

#include <array>
#include <cctype>

#include "weave/util/text.hpp"

namespace weave::ipr {
namespace {

enum class Label { target, issue, root_cause, action, guideline };

struct LabelName {
    std::string_view text;
    Label label;
};

// Longer names first so "action required" wins over "action".
constexpr std::array kLabels{
    LabelName{"guideline change", Label::guideline}, LabelName{"action required", Label::action},
    LabelName{"root cause", Label::root_cause},      LabelName{"guideline", Label::guideline},
    LabelName{"target", Label::target},              LabelName{"issue", Label::issue},
    LabelName{"action", Label::action},
};

std::string strip_emphasis(std::string_view line) {
    std::string out;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line.compare(i, 2, "**") == 0) {
            ++i;
            continue;
        }
        out += line[i];
    }
    return out;
}

/// Recognises "<label>: value" at the start of a line, ignoring list markers.
std::optional<std::pair<Label, std::string>> match_label(std::string_view raw) {
    auto line = strip_emphasis(raw);
    std::string_view rest = text::trim(line);
    if (rest.starts_with("- ")) rest = text::trim(rest.substr(2));
    const auto lowered = text::to_lower_ascii(rest);
    for (const auto& [name, label] : kLabels) {
        if (!lowered.starts_with(name)) continue;
        auto after = text::trim(rest.substr(name.size()));
        if (!after.starts_with(":")) continue;
        return std::pair{label, std::string(text::trim(after.substr(1)))};
    }
    return std::nullopt;
}

std::string strip_quotes(std::string_view s) {
    s = text::trim(s);
    const std::array<std::pair<std::string_view, std::string_view>, 3> pairs{
        std::pair{std::string_view("\""), std::string_view("\"")},
        std::pair{std::string_view("“"), std::string_view("”")},
        std::pair{std::string_view("'"), std::string_view("'")},
    };
    for (const auto& [open, close] : pairs) {
        if (s.size() >= open.size() + close.size() && s.starts_with(open) && s.ends_with(close)) {
            return std::string(text::trim(s.substr(open.size(), s.size() - open.size() - close.size())));
        }
    }
    return std::string(s);
}

struct Draft {
    std::optional<std::string> target, issue, root_cause, action, guideline;

    std::optional<std::string>& slot(Label l) {
        switch (l) {
            case Label::target: return target;
            case Label::issue: return issue;
            case Label::root_cause: return root_cause;
            case Label::action: return action;
            case Label::guideline: return guideline;
        }
        return target;
    }
    bool empty() const { return !target && !issue && !root_cause && !action && !guideline; }
};

FeedbackRecord finish(const Draft& d, std::size_t index) {
    const auto where = "feedback record " + std::to_string(index + 1);
    if (!d.action) throw FeedbackParseError(where + ": missing `Action Required`");
    auto action_text = text::to_lower_ascii(strip_quotes(*d.action));
    std::string word;
    for (char c : action_text) {
        if (!std::isalpha(static_cast<unsigned char>(c))) break;
        word += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    auto action = feedback_action_from_string(word);
    if (!action) throw FeedbackParseError(where + ": unknown action `" + *d.action + "`");
    FeedbackRecord r;
    r.action = *action;
    r.target_id = d.target ? strip_quotes(*d.target) : "";
    std::erase(r.target_id, '`');
    r.issue = d.issue ? std::string(text::trim(*d.issue)) : "";
    r.root_cause = d.root_cause ? std::string(text::trim(*d.root_cause)) : "";
    r.guideline_change = d.guideline ? strip_quotes(*d.guideline) : "";
    if (r.action != FeedbackAction::none && r.guideline_change.empty()) {
        throw FeedbackParseError(where + ": `Guideline Change` is required for " + std::string(to_string(r.action)));
    }
    return r;
}

std::string roster(const workflow::WorkflowSpec& spec) {
    std::string out;
    for (const auto& s : spec.supervisors) {
        out += "- `" + s.id + "` (supervisor" + (s.id == spec.root_supervisor ? ", root" : "") + ")\n  System message: " +
               s.system_message + "\n";
    }
    for (const auto& a : spec.agents) {
        out += "- `" + a.id + "` (agent)\n  System message: " + a.system_message + "\n";
    }
    return out;
}

}  // namespace

std::string_view to_string(FeedbackAction action) {
    switch (action) {
        case FeedbackAction::modify: return "MODIFY";
        case FeedbackAction::rewrite: return "REWRITE";
        case FeedbackAction::none: return "NONE";
    }
    return "NONE";
}

std::optional<FeedbackAction> feedback_action_from_string(std::string_view s) {
    if (s == "MODIFY") return FeedbackAction::modify;
    if (s == "REWRITE") return FeedbackAction::rewrite;
    if (s == "NONE") return FeedbackAction::none;
    return std::nullopt;
}

std::vector<FeedbackRecord> parse_feedback(std::string_view input) {
    std::vector<FeedbackRecord> records;
    Draft draft;
    std::optional<Label> current;
    auto flush = [&] {
        if (!draft.empty()) records.push_back(finish(draft, records.size()));
        draft = {};
        current.reset();
    };
    for (auto line : text::split_lines(input)) {
        if (auto m = match_label(line)) {
            auto& [label, value] = *m;
            if (label == Label::target || draft.slot(label)) flush();
            draft.slot(label) = value;
            current = label;
        } else if (current && !text::trim(line).empty()) {
            auto& slot = *draft.slot(*current);
            if (!slot.empty()) slot += ' ';
            slot += text::trim(strip_emphasis(line));
        }
    }
    flush();
    if (records.empty()) throw FeedbackParseError("no feedback records found");
    return records;
}

std::string format_feedback(const FeedbackRecord& r) {
    std::string out;
    if (!r.target_id.empty()) out += "Target: " + r.target_id + "\n";
    out += "Issue: " + r.issue + "\n";
    out += "Root Cause: " + r.root_cause + "\n";
    out += "Action Required: " + std::string(to_string(r.action)) + "\n";
    if (!r.guideline_change.empty()) out += "Guideline Change: \"" + r.guideline_change + "\"\n";
    return out;
}

std::string feedback_prompt(const orchestrator::ExecutionTrace& trace, const eval::QaPair& example,
                            std::string_view candidate, const workflow::WorkflowSpec& spec) {
    std::string p =
        "A multi-agent workflow answered a question incorrectly. Find which component's system message "
        "caused the failure and state the change that would fix it.\n\n";
    p += "Question:\n" + example.question + "\n\n";
    p += "Expected answer:\n" + example.answer + "\n\n";
    p += "Workflow answer:\n" + std::string(candidate) + "\n\n";
    p += "Components:\n" + roster(spec) + "\n";
    p += "Execution trace:\n" + orchestrator::trace_digest(trace) + "\n\n";
    p += "Reply with one or more records in exactly this form:\n"
         "Target: <component id>\n"
         "Issue: <what went wrong>\n"
         "Root Cause: <which part of the system message led to it>\n"
         "Action Required: MODIFY | REWRITE | NONE\n"
         "Guideline Change: \"<instruction text to add to the system message>\"\n\n"
         "Prefer MODIFY, which appends the guideline to the existing system message. Use REWRITE only when "
         "the whole message must be replaced, and NONE when no prompt change would help.";
    return p;
}

FeedbackResult generate_feedback(const orchestrator::ExecutionTrace& trace, const eval::QaPair& example,
                                 std::string_view candidate, const workflow::WorkflowSpec& spec,
                                 llm::Gateway& gateway, const llm::LlmProfile& profile, int repair_retries) {
    std::vector<llm::ChatMessage> messages{
        {llm::Role::system, "You analyse failures of multi-agent workflows and write precise prompt fixes."},
        {llm::Role::user, feedback_prompt(trace, example, candidate, spec)},
    };
    FeedbackResult result;
    for (int attempt = 0;; ++attempt) {
        auto response = gateway.complete(profile, messages);
        ++result.calls;
        try {
            for (auto& r : parse_feedback(response.content)) {
                if (r.target_id.empty()) r.target_id = spec.root_supervisor;
                if (!spec.system_message_of(r.target_id)) {
                    result.warnings.push_back("dropped feedback for unknown component `" + r.target_id + "`");
                    continue;
                }
                result.records.push_back(std::move(r));
            }
            return result;
        } catch (const FeedbackParseError& e) {
            if (attempt >= repair_retries) {
                throw FeedbackParseError(std::string(e.what()) + " (after " + std::to_string(attempt) + " repair retries)");
            }
            messages.push_back({llm::Role::assistant, response.content});
            messages.push_back({llm::Role::user, std::string(kFeedbackRepairMarker) + ": " + e.what() +
                                                     ". Reply again using the record format exactly."});
        }
    }
}

workflow::WorkflowSpec apply_feedback(workflow::WorkflowSpec spec, const FeedbackRecord& record) {
    auto* message = spec.system_message_of(record.target_id);
    if (!message) return spec;
    switch (record.action) {
        case FeedbackAction::none:
            break;
        case FeedbackAction::rewrite:
            *message = record.guideline_change;
            break;
        case FeedbackAction::modify:
            if (message->find(record.guideline_change) != std::string::npos) break;
            if (!message->empty() && !std::isspace(static_cast<unsigned char>(message->back()))) *message += ' ';
            *message += record.guideline_change;
            break;
    }
    return spec;
}

}  // namespace weave::ipr
