#include "weave/orchestrator/trace.hpp"

#include <algorithm>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "weave/util/text.hpp"

namespace weave::orchestrator {

std::string_view to_string(StepKind kind) {
    switch (kind) {
        case StepKind::llm_call: return "llm_call";
        case StepKind::delegate: return "delegate";
        case StepKind::tool_call: return "tool_call";
        case StepKind::memory_read: return "memory_read";
        case StepKind::memory_write: return "memory_write";
        case StepKind::final: return "final";
    }
    return "llm_call";
}

std::optional<StepKind> step_kind_from_string(std::string_view s) {
    for (auto k : {StepKind::llm_call, StepKind::delegate, StepKind::tool_call, StepKind::memory_read,
                   StepKind::memory_write, StepKind::final}) {
        if (to_string(k) == s) return k;
    }
    return std::nullopt;
}

std::size_t ExecutionTrace::count(StepKind kind) const {
    return static_cast<std::size_t>(
        std::count_if(steps.begin(), steps.end(), [&](const TraceStep& s) { return s.kind == kind; }));
}

std::string trace_to_jsonl(const ExecutionTrace& trace) {
    std::string out;
    for (std::size_t i = 0; i < trace.steps.size(); ++i) {
        const auto& s = trace.steps[i];
        nlohmann::ordered_json line = {
            {"index", i},
            {"actor", s.actor},
            {"step_kind", to_string(s.kind)},
            {"envelope_id", s.envelope_id},
            {"detail", s.detail},
        };
        out += line.dump() + "\n";
    }
    return out;
}

ExecutionTrace trace_from_jsonl(std::string_view jsonl) {
    ExecutionTrace trace;
    std::size_t line_no = 0;
    for (auto line : text::split_lines(jsonl)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        auto j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            throw std::runtime_error("trace line " + std::to_string(line_no) + ": not a JSON object");
        }
        auto kind = step_kind_from_string(j.value("step_kind", ""));
        if (!kind) throw std::runtime_error("trace line " + std::to_string(line_no) + ": unknown step_kind");
        trace.steps.push_back(TraceStep{j.value("actor", ""), *kind, j.value("envelope_id", ""), j.value("detail", "")});
    }
    return trace;
}

std::string trace_digest(const ExecutionTrace& trace, std::size_t max_detail) {
    std::string out;
    for (std::size_t i = 0; i < trace.steps.size(); ++i) {
        const auto& s = trace.steps[i];
        out += std::to_string(i + 1) + ". [" + std::string(to_string(s.kind)) + "] " + s.actor;
        if (!s.detail.empty()) out += ": " + text::truncate(s.detail, max_detail);
        out += "\n";
    }
    return out;
}

}  // namespace weave::orchestrator
