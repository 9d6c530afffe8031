#include "weave/eval/judge.hpp"

#include "weave/util/text.hpp"

namespace weave::eval {

std::string_view to_string(JudgeMode mode) { return mode == JudgeMode::exact ? "exact" : "llm"; }

std::optional<JudgeMode> judge_mode_from_string(std::string_view s) {
    if (s == "exact") return JudgeMode::exact;
    if (s == "llm") return JudgeMode::llm;
    return std::nullopt;
}

std::string_view to_string(MatchMode mode) { return mode == MatchMode::equal ? "equal" : "substring"; }

std::optional<MatchMode> match_mode_from_string(std::string_view s) {
    if (s == "equal") return MatchMode::equal;
    if (s == "substring") return MatchMode::substring;
    return std::nullopt;
}

std::string normalize_answer(std::string_view s) {
    auto out = text::collapse_whitespace(text::to_lower_ascii(s));
    while (!out.empty() && (out.back() == '.' || out.back() == '!' || out.back() == '?')) {
        out.pop_back();
        while (!out.empty() && out.back() == ' ') out.pop_back();
    }
    return out;
}

Verdict judge_exact(std::string_view candidate, std::string_view expected, MatchMode mode) {
    auto c = normalize_answer(candidate);
    auto e = normalize_answer(expected);
    Verdict v;
    v.judge_mode = JudgeMode::exact;
    v.candidate = std::string(candidate);
    v.passed = mode == MatchMode::equal ? c == e : (!e.empty() && c.find(e) != std::string::npos);
    return v;
}

std::optional<bool> parse_verdict(std::string_view response) {
    std::optional<bool> found;
    for (auto raw : text::split_lines(response)) {
        std::string line = text::to_lower_ascii(text::trim(raw));
        std::erase_if(line, [](char c) { return c == '*' || c == '_' || c == '`' || c == '#'; });
        auto body = text::trim(line);
        if (!body.starts_with("verdict")) continue;
        body.remove_prefix(7);
        body = text::trim(body);
        if (!body.starts_with(":")) continue;
        body = text::trim(body.substr(1));
        while (!body.empty() && (body.back() == '.' || body.back() == '!')) body.remove_suffix(1);
        if (body == "pass") found = true;
        else if (body == "fail") found = false;
    }
    return found;
}

std::string judge_prompt(std::string_view question, std::string_view candidate, std::string_view expected) {
    std::string p =
        "You are grading an answer to a question. Decide whether the candidate answer conveys the same "
        "meaning as the expected answer. Wording may differ; the substance must match.\n\n";
    if (!question.empty()) p += "Question:\n" + std::string(question) + "\n\n";
    p += "Expected answer:\n" + std::string(expected) + "\n\n";
    p += "Candidate answer:\n" + std::string(candidate) + "\n\n";
    p += "Explain briefly, then end with exactly one line `VERDICT: PASS` or `VERDICT: FAIL`.";
    return p;
}

Verdict judge_llm(std::string_view candidate, std::string_view expected, llm::Gateway& gateway,
                  const llm::LlmProfile& profile, std::string_view question) {
    std::vector<llm::ChatMessage> messages{
        {llm::Role::system, "You are a strict but fair answer grader."},
        {llm::Role::user, judge_prompt(question, candidate, expected)},
    };
    Verdict v;
    v.judge_mode = JudgeMode::llm;
    v.candidate = std::string(candidate);
    for (int attempt = 0; attempt < 2; ++attempt) {
        auto response = gateway.complete(profile, messages);
        ++v.judge_calls;
        v.prompt_tokens += response.prompt_tokens;
        v.completion_tokens += response.completion_tokens;
        if (auto verdict = parse_verdict(response.content)) {
            v.passed = *verdict;
            v.rationale = response.content;
            return v;
        }
        messages.push_back({llm::Role::assistant, response.content});
        messages.push_back({llm::Role::user, std::string(kJudgeRepairMarker) +
                                                 ". Reply again and end with exactly one line "
                                                 "`VERDICT: PASS` or `VERDICT: FAIL`."});
    }
    throw JudgeError("judge reply has no VERDICT line after one repair retry");
}

Judge Judge::exact(MatchMode match) {
    Judge j;
    j.mode_ = JudgeMode::exact;
    j.match_ = match;
    return j;
}

Judge Judge::model(llm::Gateway& gateway, llm::LlmProfile profile) {
    Judge j;
    j.mode_ = JudgeMode::llm;
    j.gateway_ = &gateway;
    j.profile_ = std::move(profile);
    return j;
}

Verdict Judge::operator()(const QaPair& example, std::string_view candidate) const {
    auto v = mode_ == JudgeMode::exact ? judge_exact(candidate, example.answer, match_)
                                       : judge_llm(candidate, example.answer, *gateway_, profile_, example.question);
    v.example_id = example.id;
    return v;
}

}  // namespace weave::eval
