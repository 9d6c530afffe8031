#pragma once

#include <chrono>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "weave/eval/dataset.hpp"
#include "weave/llm/gateway.hpp"

namespace weave::eval {

enum class JudgeMode { exact, llm };
enum class MatchMode { equal, substring };

std::string_view to_string(JudgeMode mode);
std::optional<JudgeMode> judge_mode_from_string(std::string_view s);
std::string_view to_string(MatchMode mode);
std::optional<MatchMode> match_mode_from_string(std::string_view s);

struct Verdict {
    std::string example_id;
    bool passed = false;
    JudgeMode judge_mode = JudgeMode::exact;
    std::string candidate;
    std::optional<std::string> rationale;
    std::chrono::milliseconds wall{0};
    std::size_t prompt_tokens = 0;  // workflow run plus judge calls
    std::size_t completion_tokens = 0;
    std::size_t judge_calls = 0;
};

/// The judge model never produced a `VERDICT: PASS|FAIL` line, even after a repair retry.
class JudgeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Lowercase, trim, collapse internal whitespace, strip terminal `.`, `!`, `?`.
std::string normalize_answer(std::string_view s);

Verdict judge_exact(std::string_view candidate, std::string_view expected, MatchMode mode);

/// Finds a line `VERDICT: PASS` or `VERDICT: FAIL` (case-insensitive, surrounding
/// markdown emphasis tolerated). The last such line wins.
std::optional<bool> parse_verdict(std::string_view response);

std::string judge_prompt(std::string_view question, std::string_view candidate, std::string_view expected);
inline constexpr std::string_view kJudgeRepairMarker = "Your previous reply had no verdict line";

/// Asks the model whether `candidate` conveys `expected`. The rationale is the
/// judge's full reply.
Verdict judge_llm(std::string_view candidate, std::string_view expected, llm::Gateway& gateway,
                  const llm::LlmProfile& profile, std::string_view question = {});

/// A configured judge, shared across examples of an evaluation.
class Judge {
public:
    static Judge exact(MatchMode match = MatchMode::substring);
    static Judge model(llm::Gateway& gateway, llm::LlmProfile profile);

    JudgeMode mode() const noexcept { return mode_; }
    Verdict operator()(const QaPair& example, std::string_view candidate) const;

private:
    Judge() = default;

    JudgeMode mode_ = JudgeMode::exact;
    MatchMode match_ = MatchMode::substring;
    llm::Gateway* gateway_ = nullptr;
    llm::LlmProfile profile_;
};

}  // namespace weave::eval
