#include <gtest/gtest.h>

#include <nlohmann/json.hpp>
#include <thread>

#include "test_support.hpp"
#include "weave/eval/dataset.hpp"
#include "weave/eval/evaluate.hpp"
#include "weave/eval/judge.hpp"
#include "weave/eval/report_io.hpp"
#include "weave/workflow/yaml_io.hpp"

using namespace weave;
using namespace weave::eval;
using weave::testing::final_block;
using weave::testing::FunctionBackend;
using weave::testing::read_fixture;

namespace {

workflow::WorkflowSpec minimal() { return workflow::parse_workflow(read_fixture("workflows/minimal.workflow.yaml")); }

std::string question_of(std::span<const llm::ChatMessage> msgs) { return msgs[1].content; }

Dataset numbered(std::size_t n) {
    Dataset d;
    for (std::size_t i = 0; i < n; ++i) {
        d.push_back({"q" + std::to_string(i), "question " + std::to_string(i), "answer " + std::to_string(i)});
    }
    return d;
}

}  // namespace

TEST(Dataset, ParsesInOrderAndSkipsBlankLines) {
    auto d = parse_dataset("{\"id\":\"a\",\"question\":\"q1\",\"answer\":\"x\"}\n\n{\"id\":7,\"question\":\"q2\",\"answer\":\"y\"}\n");
    ASSERT_EQ(d.size(), 2u);
    EXPECT_EQ(d[0], (QaPair{"a", "q1", "x"}));
    EXPECT_EQ(d[1].id, "7");
    EXPECT_EQ(parse_dataset(dump_dataset(d)), d);
}

TEST(Dataset, ErrorsCarryLineNumbers) {
    auto line_of = [](std::string_view text) {
        try {
            parse_dataset(text);
        } catch (const DatasetError& e) {
            return e.line();
        }
        return std::size_t{0};
    };
    const std::string ok = "{\"id\":\"a\",\"question\":\"q\",\"answer\":\"x\"}\n";
    EXPECT_EQ(line_of(ok + "\n{not json}\n"), 3u);
    EXPECT_EQ(line_of(ok + "{\"id\":\"b\",\"question\":\"q\"}\n"), 2u);
    EXPECT_EQ(line_of(ok + "{\"id\":\"b\",\"question\":\"\",\"answer\":\"x\"}\n"), 2u);
    EXPECT_EQ(line_of(ok + "{\"id\":\"b\",\"question\":3,\"answer\":\"x\"}\n"), 2u);
    EXPECT_EQ(line_of(ok + ok), 2u);
    EXPECT_EQ(line_of("[1,2]\n"), 1u);
}

TEST(Dataset, StandInHas158UniqueRows) {
    auto d = load_dataset(weave::testing::fixture("datasets/arcbench_standin.jsonl"));
    EXPECT_EQ(d.size(), 158u);
    EXPECT_EQ(d[0].id, "arc-001");
}

TEST(Judge, Normalization) {
    EXPECT_EQ(normalize_answer("  Hello,   WORLD!?  "), "hello, world");
    EXPECT_EQ(normalize_answer("\tA\nb ..."), "a b");
    EXPECT_EQ(normalize_answer(""), "");
}

TEST(Judge, ExactModes) {
    EXPECT_TRUE(judge_exact("Forty Two.", "forty two", MatchMode::equal).passed);
    EXPECT_FALSE(judge_exact("It is forty two", "forty two", MatchMode::equal).passed);
    EXPECT_TRUE(judge_exact("It is forty two", "forty two", MatchMode::substring).passed);
    EXPECT_FALSE(judge_exact("forty", "forty two", MatchMode::substring).passed);
    auto v = judge_exact("a", "a", MatchMode::equal);
    EXPECT_EQ(v.judge_mode, JudgeMode::exact);
    EXPECT_FALSE(v.rationale);
    EXPECT_EQ(v.judge_calls, 0u);
}

TEST(Judge, VerdictLineParsing) {
    EXPECT_EQ(parse_verdict("reasoning\nVERDICT: PASS"), true);
    EXPECT_EQ(parse_verdict("**Verdict: fail**"), false);
    EXPECT_EQ(parse_verdict("VERDICT: FAIL\nOn reflection:\nVERDICT: PASS\n"), true);
    EXPECT_EQ(parse_verdict("I think it passes."), std::nullopt);
    EXPECT_EQ(parse_verdict("VERDICT: MAYBE"), std::nullopt);
}

TEST(Judge, ModelJudgeRetriesOnceForAVerdict) {
    int calls = 0;
    auto backend = std::make_shared<FunctionBackend>([&](auto&, auto msgs) {
        ++calls;
        if (calls == 1) return llm::RawCompletion{"they look similar", 100, 4};
        EXPECT_TRUE(msgs.back().content.starts_with(kJudgeRepairMarker));
        return llm::RawCompletion{"VERDICT: PASS", 110, 3};
    });
    auto gw = weave::testing::function_gateway(backend);
    auto v = judge_llm("no hands", "There are no hands", gw, llm::gpt41_profile(), "q?");
    EXPECT_TRUE(v.passed);
    EXPECT_EQ(v.judge_mode, JudgeMode::llm);
    EXPECT_EQ(v.judge_calls, 2u);
    EXPECT_EQ(v.prompt_tokens, 210u);
    ASSERT_TRUE(v.rationale);
    EXPECT_EQ(*v.rationale, "VERDICT: PASS");
    auto first = backend->requests()[0];
    EXPECT_NE(first.back().content.find("Candidate answer:"), std::string::npos);
    EXPECT_NE(first.back().content.find("Expected answer:"), std::string::npos);
}

TEST(Judge, ModelJudgeGivesUpAfterRepair) {
    auto backend = std::make_shared<FunctionBackend>([](auto&, auto) { return llm::RawCompletion{"hmm", {}, {}}; });
    auto gw = weave::testing::function_gateway(backend);
    EXPECT_THROW(judge_llm("a", "b", gw, llm::gpt41_profile()), JudgeError);
    EXPECT_EQ(gw.call_count(), 2u);
}

TEST(PassRate, RenderingAndComparison) {
    EXPECT_EQ((PassRate{71, 158}).render(), "0.4494");
    EXPECT_EQ((PassRate{6, 10}).render(), "0.6000");
    EXPECT_EQ((PassRate{1, 8}).render(3), "0.125");
    EXPECT_EQ((PassRate{1, 16}).render(3), "0.063");
    EXPECT_EQ((PassRate{10, 10}).render(), "1.0000");
    EXPECT_TRUE((PassRate{6, 10}).same_value(PassRate{3, 5}));
    EXPECT_TRUE((PassRate{7, 10}).at_least(0.7));
    EXPECT_FALSE((PassRate{69, 100}).at_least(0.7));
    EXPECT_TRUE((PassRate{10, 10}).at_least(1.0));
}

TEST(Evaluate, EmptySetIsAnError) {
    auto backend = std::make_shared<FunctionBackend>([](auto&, auto) { return llm::RawCompletion{"", {}, {}}; });
    auto gw = weave::testing::function_gateway(backend);
    EXPECT_THROW(evaluate(minimal(), {}, gw, Judge::exact()), EvaluationError);
}

TEST(Evaluate, SixOfTen) {
    auto data = numbered(10);
    auto backend = std::make_shared<FunctionBackend>([](auto&, auto msgs) {
        auto q = question_of(msgs);
        auto n = std::stoi(q.substr(q.rfind(' ') + 1));
        return llm::RawCompletion{final_block(n < 6 ? "answer " + std::to_string(n) : "nope"), 5, 1};
    });
    auto gw = weave::testing::function_gateway(backend);
    auto report = evaluate(minimal(), data, gw, Judge::exact(MatchMode::equal));
    EXPECT_EQ(report.pass_rate, (PassRate{6, 10}));
    EXPECT_DOUBLE_EQ(report.pass_rate.value(), 0.6);
    EXPECT_EQ(report.total, 10u);
    EXPECT_EQ(report.failed_ids(), (std::vector<std::string>{"q6", "q7", "q8", "q9"}));
    EXPECT_EQ(report.prompt_tokens, 50u);
    ASSERT_EQ(report.verdicts.size(), 10u);
    for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(report.verdicts[i].example_id, data[i].id);
}

TEST(Evaluate, StandInReplayScores71Of158) {
    auto data = load_dataset(weave::testing::fixture("datasets/arcbench_standin.jsonl"));
    auto s = weave::testing::scripted_from_fixture("transcripts/arcbench_71_of_158.transcript.yaml");
    auto report = evaluate(minimal(), data, s->gateway, Judge::exact(MatchMode::equal));
    EXPECT_EQ(report.pass_rate.passes, 71u);
    EXPECT_EQ(report.pass_rate.total, 158u);
    EXPECT_EQ(report.pass_rate.render(), "0.4494");
    EXPECT_EQ(s->backend->remaining(), 0u);
}

TEST(Evaluate, ParallelWorkersKeepDatasetOrder) {
    auto data = numbered(40);
    auto backend = std::make_shared<FunctionBackend>([](auto&, auto msgs) {
        auto q = question_of(msgs);
        auto n = std::stoi(q.substr(q.rfind(' ') + 1));
        std::this_thread::sleep_for(std::chrono::microseconds((40 - n) * 50));
        return llm::RawCompletion{final_block("answer " + std::to_string(n)), {}, {}};
    });
    auto gw = weave::testing::function_gateway(backend);
    EvaluateOptions opts;
    opts.workers = 8;
    auto report = evaluate(minimal(), data, gw, Judge::exact(MatchMode::equal), opts);
    EXPECT_EQ(report.pass_rate, (PassRate{40, 40}));
    for (std::size_t i = 0; i < data.size(); ++i) {
        EXPECT_EQ(report.verdicts[i].example_id, data[i].id);
        EXPECT_EQ(report.verdicts[i].candidate, data[i].answer);
    }
}

TEST(Evaluate, FailedRunsBecomeFailedVerdicts) {
    auto data = numbered(3);
    auto backend = std::make_shared<FunctionBackend>([](auto&, auto msgs) {
        if (question_of(msgs) == "question 1") return llm::RawCompletion{"prose forever", {}, {}};
        return llm::RawCompletion{final_block("answer " + question_of(msgs).substr(9)), {}, {}};
    });
    auto gw = weave::testing::function_gateway(backend);
    auto report = evaluate(minimal(), data, gw, Judge::exact());
    EXPECT_EQ(report.pass_rate, (PassRate{2, 3}));
    EXPECT_FALSE(report.verdicts[1].passed);
    ASSERT_TRUE(report.verdicts[1].rationale);
    EXPECT_TRUE(report.verdicts[1].rationale->starts_with(kExecutionErrorPrefix));
    EXPECT_FALSE(report.traces[1].steps.empty());
}

TEST(Evaluate, TranscriptDesyncIsRethrown) {
    weave::testing::Scripted s(std::vector<llm::TranscriptEntry>{weave::testing::any(final_block("x"))});
    try {
        evaluate(minimal(), numbered(2), s.gateway, Judge::exact());
        FAIL();
    } catch (const orchestrator::GatewayFailure& e) {
        EXPECT_TRUE(e.transcript_exhausted());
    }
}

TEST(ReportIo, CsvAndJson) {
    EXPECT_EQ(csv_field("plain"), "plain");
    EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
    EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");

    EvaluationReport r;
    r.verdicts.push_back({"x,1", true, JudgeMode::exact, "c", std::nullopt, std::chrono::milliseconds(3), 4, 5, 0});
    r.verdicts.push_back({"y", false, JudgeMode::llm, "d", "VERDICT: FAIL", {}, 0, 0, 1});
    r.pass_rate = {1, 2};
    r.total = 2;
    EXPECT_EQ(report_csv(r),
              "example_id,passed,judge_mode,wall_ms,prompt_tokens,completion_tokens\n"
              "\"x,1\",true,exact,3,4,5\ny,false,llm,0,0,0\n");
    auto j = nlohmann::json::parse(report_json(r));
    EXPECT_EQ(j["verdicts"].size(), 2u);

    weave::testing::TempDir dir;
    write_report(r, dir.path());
    EXPECT_TRUE(std::filesystem::exists(dir / "report.json"));
    EXPECT_EQ(read_file(dir / "report.csv"), report_csv(r));
}
