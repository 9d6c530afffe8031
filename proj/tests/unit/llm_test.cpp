#include <gtest/gtest.h>

#include "test_support.hpp"
#include "weave/llm/gateway.hpp"
#include "weave/llm/transcript.hpp"
#include "weave/llm/types.hpp"

using namespace weave;
using namespace weave::llm;
using weave::testing::FunctionBackend;

namespace {

std::vector<ChatMessage> hello() { return {{Role::system, "sys"}, {Role::user, "hello"}}; }

}  // namespace

TEST(Profile, Gpt41Defaults) {
    auto p = gpt41_profile();
    EXPECT_EQ(p.model_id, "gpt-4.1-2025-04-14");
    EXPECT_EQ(p.temperature, 1.0);
    EXPECT_EQ(p.top_p, 1.0);
    EXPECT_TRUE(profile_problems(p).empty());
}

TEST(Profile, ProblemsNameTheField) {
    auto p = gpt41_profile();
    p.temperature = 2.5;
    p.top_p = 0;
    auto problems = profile_problems(p);
    ASSERT_EQ(problems.size(), 2u);
    EXPECT_EQ(problems[0].first, "temperature");
    EXPECT_EQ(problems[1].first, "top_p");
}

TEST(Tokens, EstimateIsCeilOfQuarterLength) {
    EXPECT_EQ(estimate_tokens(""), 0u);
    EXPECT_EQ(estimate_tokens("abcd"), 1u);
    EXPECT_EQ(estimate_tokens("abcde"), 2u);
}

TEST(Gateway, ReturnsContentAndReportedUsage) {
    auto backend = std::make_shared<FunctionBackend>([](auto&, auto) { return RawCompletion{"hi", 12, 3}; });
    auto gw = weave::testing::function_gateway(backend);
    auto r = gw.complete(gpt41_profile(), hello());
    EXPECT_EQ(r.content, "hi");
    EXPECT_EQ(r.prompt_tokens, 12u);
    EXPECT_EQ(r.completion_tokens, 3u);
    EXPECT_FALSE(r.tokens_estimated);
    EXPECT_EQ(r.attempts, 1);
}

TEST(Gateway, EstimatesMissingUsage) {
    auto backend = std::make_shared<FunctionBackend>([](auto&, auto) { return RawCompletion{"12345678", {}, {}}; });
    auto gw = weave::testing::function_gateway(backend);
    auto r = gw.complete(gpt41_profile(), hello());
    EXPECT_TRUE(r.tokens_estimated);
    EXPECT_EQ(r.completion_tokens, 2u);
    EXPECT_GT(r.prompt_tokens, 0u);
}

TEST(Gateway, RetriesTransientThenSucceeds) {
    int calls = 0;
    auto backend = std::make_shared<FunctionBackend>([&](auto&, auto) -> RawCompletion {
        if (++calls < 3) throw TransientError("429");
        return {"ok", 1, 1};
    });
    std::vector<std::chrono::milliseconds> sleeps;
    Gateway gw(backend, {}, [&](auto d) { sleeps.push_back(d); }, frozen_clock());
    auto r = gw.complete(gpt41_profile(), hello());
    EXPECT_EQ(r.attempts, 3);
    ASSERT_EQ(sleeps.size(), 2u);
    EXPECT_LE(sleeps[0], backoff_cap({}, 0));
    EXPECT_LE(sleeps[1], backoff_cap({}, 1));
    EXPECT_EQ(gw.call_count(), 1u);
    EXPECT_EQ(gw.attempt_count(), 3u);
}

TEST(Gateway, BackoffCapDoubles) {
    RetryPolicy p;
    EXPECT_EQ(backoff_cap(p, 0).count(), 1000);
    EXPECT_EQ(backoff_cap(p, 1).count(), 2000);
    EXPECT_EQ(backoff_cap(p, 3).count(), 8000);
}

TEST(Gateway, GivesUpAfterMaxRetries) {
    auto backend = std::make_shared<FunctionBackend>([](auto&, auto) -> RawCompletion { throw TransientError("503"); });
    auto gw = weave::testing::function_gateway(backend);
    auto profile = gpt41_profile();
    profile.max_retries = 2;
    try {
        gw.complete(profile, hello());
        FAIL() << "expected RetriesExhausted";
    } catch (const RetriesExhausted& e) {
        EXPECT_EQ(e.attempts(), 3);
    }
    EXPECT_EQ(backend->requests().size(), 3u);
}

TEST(Gateway, AuthErrorIsNotRetried) {
    auto backend = std::make_shared<FunctionBackend>([](auto&, auto) -> RawCompletion { throw AuthError("401"); });
    auto gw = weave::testing::function_gateway(backend);
    EXPECT_THROW(gw.complete(gpt41_profile(), hello()), AuthError);
    EXPECT_EQ(backend->requests().size(), 1u);
}

TEST(Gateway, RejectsInvalidRequests) {
    auto backend = std::make_shared<FunctionBackend>([](auto&, auto) { return RawCompletion{"x", {}, {}}; });
    auto gw = weave::testing::function_gateway(backend);
    auto bad = gpt41_profile();
    bad.temperature = -1;
    EXPECT_THROW(gw.complete(bad, hello()), RequestError);
    EXPECT_THROW(gw.complete(gpt41_profile(), {}), RequestError);
    EXPECT_THROW(gw.complete(gpt41_profile(), {{Role::assistant, "x"}}), RequestError);
    EXPECT_TRUE(backend->requests().empty());
}

TEST(Transcript, ServesInOrderAndChecksMatchers) {
    Transcript t({weave::testing::any("first"), weave::testing::containing("needle", "second")});
    EXPECT_EQ(t.serve("anything").response, "first");
    EXPECT_THROW(t.serve("no match here"), TranscriptError);
    EXPECT_EQ(t.cursor(), 1u);
    EXPECT_EQ(t.serve("hay needle hay").response, "second");
    EXPECT_THROW(t.serve("more"), TranscriptError);
}

TEST(Transcript, LoadAndDumpRoundTrip) {
    const auto text = R"(entries:
  - match: any
    response: "plain"
  - match: contains
    text: "needle"
    response: |
      multi
      line
  - match: any
    error: transient
)";
    auto t = load_transcript(text);
    ASSERT_EQ(t.size(), 3u);
    EXPECT_EQ(t.entries()[1].response, "multi\nline\n");
    EXPECT_EQ(t.entries()[2].failure, TranscriptEntry::Failure::transient);
    EXPECT_EQ(load_transcript(dump_transcript(t)).entries(), t.entries());
}

TEST(Transcript, BareListAndErrors) {
    EXPECT_EQ(load_transcript("- response: a\n- response: b\n").size(), 2u);
    EXPECT_THROW(load_transcript("- match: regex\n  text: x\n  response: a\n"), TranscriptFormatError);
    EXPECT_THROW(load_transcript("- match: contains\n  response: a\n"), TranscriptFormatError);
    EXPECT_THROW(load_transcript("- response: a\n  error: auth\n"), TranscriptFormatError);
    EXPECT_THROW(load_transcript("- response: a\n  colour: red\n"), TranscriptFormatError);
}

TEST(ScriptedBackend, InjectedFailuresGoThroughRetry) {
    Transcript t({{TranscriptEntry::Match::any, "", "", TranscriptEntry::Failure::transient},
                  weave::testing::any("recovered")});
    weave::testing::Scripted s(std::move(t));
    auto r = s.gateway.complete(gpt41_profile(), hello());
    EXPECT_EQ(r.content, "recovered");
    EXPECT_EQ(r.attempts, 2);
    EXPECT_EQ(s.backend->remaining(), 0u);
    EXPECT_TRUE(s.gateway.order_sensitive());
}

TEST(ScriptedBackend, ExhaustionIsTranscriptError) {
    weave::testing::Scripted s(std::vector<TranscriptEntry>{});
    EXPECT_THROW(s.gateway.complete(gpt41_profile(), hello()), TranscriptError);
}
