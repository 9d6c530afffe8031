#include <gtest/gtest.h>

#include <chrono>
#include <iostream>
#include <random>
#include <sstream>

#include "random_specs.hpp"
#include "stub_server.hpp"
#include "test_support.hpp"
#include "weave/architect/synthesize.hpp"
#include "weave/cli/commands.hpp"
#include "weave/eval/evaluate.hpp"
#include "weave/ipr/sampling.hpp"
#include "weave/llm/openai_backend.hpp"
#include "weave/orchestrator/execute.hpp"
#include "weave/util/hash.hpp"
#include "weave/workflow/validate.hpp"
#include "weave/workflow/yaml_io.hpp"

using namespace weave;
using weave::testing::fixture;
using weave::testing::read_fixture;
using weave::testing::TempDir;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = cli::run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string fx(std::string_view rel) { return fixture(rel).string(); }

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::map<std::string, std::string> tree(const std::filesystem::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& e : std::filesystem::recursive_directory_iterator(dir)) {
        if (e.is_regular_file()) out[std::filesystem::relative(e.path(), dir).string()] = read_file(e.path());
    }
    return out;
}

/// One summary line per criterion after the gtest output.
class CriterionPrinter : public ::testing::EmptyTestEventListener {
public:
    void OnTestEnd(const ::testing::TestInfo& info) override {
        lines_.push_back(std::string(info.result()->Passed() ? "PASS" : "FAIL") + "  " + info.name());
    }
    void OnTestProgramEnd(const ::testing::UnitTest&) override {
        std::cout << "\nAcceptance criteria:\n";
        for (const auto& l : lines_) std::cout << "  " << l << "\n";
    }

private:
    std::vector<std::string> lines_;
};

}  // namespace

TEST(Acceptance, C1_RefinementReplayFixesRiddleSupervisor) {
    TempDir dir;
    const auto start = std::chrono::steady_clock::now();
    auto r = invoke({"replay", "--transcript", fx("transcripts/appendix_b.transcript.yaml"), "ipr",
                  fx("workflows/riddle.workflow.yaml"), fx("datasets/appendix_b.jsonl"), "--sample", "1", "--judge", "llm",
                  "--out", dir.path().string()});
    const double elapsed = seconds_since(start);
    ASSERT_EQ(r.code, cli::kExitOk) << r.err;
    EXPECT_EQ(r.out, "iteration=0 sample_pass_rate=0.0000\niteration=1 sample_pass_rate=1.0000\n");
    auto refined = workflow::parse_workflow(read_file(dir / "final.workflow.yaml"));
    EXPECT_EQ(*refined.system_message_of("riddle_supervisor"), read_fixture("riddle_refinement/refined_supervisor_message.txt"));
    EXPECT_EQ(*refined.system_message_of("riddle_supervisor"),
              read_fixture("riddle_refinement/initial_supervisor_message.txt") + " " +
                  read_fixture("riddle_refinement/guideline_change.txt"));
    EXPECT_EQ(llm::load_transcript(read_fixture("transcripts/appendix_b.transcript.yaml")).size(), 6u);
    EXPECT_LT(elapsed, 5.0);
}

TEST(Acceptance, C2_TrajectoryClimbsFromSixtyToNinetyPercent) {
    TempDir dir;
    const auto start = std::chrono::steady_clock::now();
    auto r = invoke({"replay", "--transcript", fx("transcripts/trajectory_4.transcript.yaml"), "ipr",
                  fx("workflows/minimal.workflow.yaml"), fx("datasets/trajectory.jsonl"), "--iterations", "4", "--sample",
                  "10", "--seed", "42", "--match", "equal", "--out", dir.path().string()});
    const double elapsed = seconds_since(start);
    ASSERT_EQ(r.code, cli::kExitOk) << r.err;
    EXPECT_EQ(r.out,
              "iteration=0 sample_pass_rate=0.6000\niteration=1 sample_pass_rate=0.7000\n"
              "iteration=2 sample_pass_rate=0.8000\niteration=3 sample_pass_rate=0.9000\n");
    const auto csv = read_file(dir / "report.csv");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n') - 1, 4);
    EXPECT_LT(elapsed, 10.0);
}

TEST(Acceptance, C3_PassRateArithmetic) {
    auto data = eval::load_dataset(fixture("datasets/arcbench_standin.jsonl"));
    ASSERT_EQ(data.size(), 158u);
    auto s = weave::testing::scripted_from_fixture("transcripts/arcbench_71_of_158.transcript.yaml");
    auto spec = workflow::parse_workflow(read_fixture("workflows/minimal.workflow.yaml"));
    auto report = eval::evaluate(spec, data, s->gateway, eval::Judge::exact(eval::MatchMode::equal));
    EXPECT_EQ(report.pass_rate.render(), "0.4494");
    EXPECT_EQ(report.pass_rate.passes, 71u);
    EXPECT_EQ(report.pass_rate.total, 158u);
    EXPECT_TRUE(report.pass_rate.same_value(eval::PassRate{71, 158}));
}

TEST(Acceptance, C4_WorkflowModelRejectsMalformedAndRoundTrips) {
    std::size_t malformed = 0;
    for (const auto& e : std::filesystem::directory_iterator(fixture("malformed"))) {
        auto stem = e.path().filename().string();
        stem = stem.substr(0, stem.find('.'));
        std::string code;
        for (char c : stem) code += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        ++malformed;
        std::set<std::string> got;
        try {
            auto spec = workflow::parse_workflow(read_file(e.path()));
            for (auto c : workflow::validate_workflow(spec).codes()) got.insert(std::string(workflow::to_string(c)));
        } catch (const workflow::WorkflowParseError& err) {
            got.insert(std::string(err.code()));
        }
        EXPECT_EQ(got, std::set<std::string>{code}) << e.path();
    }
    EXPECT_GE(malformed, 10u);

    std::vector<std::string> corpus;
    for (const auto& e : std::filesystem::directory_iterator(fixture("workflows"))) corpus.push_back(read_file(e.path()));
    std::mt19937_64 rng(99);
    for (int i = 0; i < 50; ++i) corpus.push_back(workflow::serialize_workflow(weave::testing::random_spec(rng)));
    for (const auto& text : corpus) {
        auto spec = workflow::parse_workflow(text);
        EXPECT_TRUE(workflow::validate_workflow(spec).ok());
        const auto once = workflow::serialize_workflow(spec);
        EXPECT_EQ(workflow::parse_workflow(once), spec);
        EXPECT_EQ(workflow::spec_hash(spec), workflow::spec_hash(workflow::parse_workflow(once)));
        EXPECT_EQ(sha256_hex(once), sha256_hex(workflow::serialize_workflow(workflow::parse_workflow(once))));
    }
}

TEST(Acceptance, C5_OrchestratorProperties) {
    std::mt19937_64 rng(123);
    for (int trial = 0; trial < 100; ++trial) {
        auto spec = weave::testing::random_spec(rng);
        auto gw = weave::testing::function_gateway(weave::testing::tree_walker(spec));
        orchestrator::ExecuteOptions opts;
        opts.max_steps = 1000;
        opts.metadata = {{"trial", std::to_string(trial)}, {"tenant", "acceptance"}};
        auto r = orchestrator::execute(spec, "q", gw, opts);
        for (const auto& e : r.envelopes) {
            for (const auto& [k, v] : opts.metadata) {
                ASSERT_TRUE(e.metadata.count(k) && e.metadata.at(k) == v) << e.id;
            }
        }
        EXPECT_EQ(r.trace.count(orchestrator::StepKind::llm_call), gw.call_count());
    }

    auto minimal = workflow::parse_workflow(read_fixture("workflows/minimal.workflow.yaml"));
    auto looping = std::make_shared<weave::testing::FunctionBackend>([&](auto&, auto msgs) {
        if (msgs[0].content.starts_with(minimal.supervisors[0].system_message)) {
            return llm::RawCompletion{weave::testing::delegate_block("worker", "again"), {}, {}};
        }
        return llm::RawCompletion{"more", {}, {}};
    });
    auto gw = weave::testing::function_gateway(looping);
    orchestrator::ExecuteOptions opts;
    opts.max_steps = 32;
    try {
        orchestrator::execute(minimal, "q", gw, opts);
        ADD_FAILURE() << "budget not enforced";
    } catch (const orchestrator::StepBudgetExceeded& e) {
        EXPECT_EQ(e.trace().step_count(), 32u);
        EXPECT_EQ(e.trace().count(orchestrator::StepKind::llm_call), gw.call_count());
    }

    // Every scripted fixture run: llm_call steps equal gateway calls.
    auto riddle = workflow::parse_workflow(read_fixture("workflows/riddle.workflow.yaml"));
    auto s = weave::testing::scripted_from_fixture("transcripts/appendix_b.transcript.yaml");
    auto run = orchestrator::execute(riddle, eval::load_dataset(fixture("datasets/appendix_b.jsonl"))[0].question, s->gateway);
    EXPECT_EQ(run.trace.count(orchestrator::StepKind::llm_call), s->gateway.call_count());
    auto data = eval::load_dataset(fixture("datasets/trajectory.jsonl"));
    auto t = weave::testing::scripted_from_fixture("transcripts/trajectory_4.transcript.yaml");
    std::size_t steps = 0;
    for (const auto& e : ipr::sample_examples(data, 10, 42)) {
        steps += orchestrator::execute(minimal, e.question, t->gateway).trace.count(orchestrator::StepKind::llm_call);
    }
    EXPECT_EQ(steps, t->gateway.call_count());
}

TEST(Acceptance, C6_MemoryAccessMatchesRuleOracle) {
    const std::vector<std::string> actors{"root", "a1", "a2", "a3", "a4"};
    std::mt19937_64 rng(31337);
    std::size_t discrepancies = 0, cases = 0;
    for (int trial = 0; trial < 100; ++trial, ++cases) {
        orchestrator::MemoryStore store({actors.begin(), actors.end()});
        // Random access matrix: per key a writer and a reader set.
        std::map<std::string, std::pair<std::string, std::set<std::string>>> acl;
        for (int k = 0; k < 4; ++k) {
            const auto key = "key" + std::to_string(k);
            const auto& writer = actors[rng() % actors.size()];
            std::set<std::string> readers;
            for (const auto& a : actors) {
                if (rng() % 2) readers.insert(a);
            }
            store.write(writer, key, "value" + std::to_string(k), readers);
            acl[key] = {writer, readers};
        }
        for (const auto& [key, rule] : acl) {
            for (const auto& actor : actors) {
                const bool oracle_read = actor == rule.first || rule.second.count(actor) > 0;
                const bool oracle_write = actor == rule.first;
                const auto before = store.digest();
                bool read_ok = true;
                try {
                    store.read(actor, key);
                } catch (const orchestrator::AccessDenied&) {
                    read_ok = false;
                }
                if (read_ok != oracle_read) ++discrepancies;
                bool write_ok = true;
                if (!oracle_write) {
                    try {
                        store.write(actor, key, "intruder", {actor});
                    } catch (const orchestrator::AccessDenied&) {
                        write_ok = false;
                    }
                    if (write_ok) ++discrepancies;
                    if (store.digest() != before) ++discrepancies;
                }
            }
        }
    }
    EXPECT_EQ(cases, 100u);
    EXPECT_EQ(discrepancies, 0u);
}

TEST(Acceptance, C7_SynthesisReplayIsValidAndByteIdentical) {
    TempDir a, b;
    for (auto* dir : {&a, &b}) {
        auto r = invoke({"replay", "--transcript", fx("synthesis/synthesis.transcript.yaml"), "synthesize",
                      fx("synthesis/task.txt"), fx("synthesis/examples.jsonl"), "--sample", "2", "--seed", "7",
                      "--iterations", "3", "--out", dir->path().string()});
        ASSERT_EQ(r.code, cli::kExitOk) << r.err;
    }
    auto spec = workflow::parse_workflow(read_file(a / "run_0/final.workflow.yaml"));
    EXPECT_TRUE(workflow::validate_workflow(spec).ok());
    auto report = nlohmann::json::parse(read_file(a / "run_0/ipr_report.json"));
    ASSERT_FALSE(report["iterations"].empty());
    EXPECT_EQ(report["iterations"][0]["index"], 0);
    EXPECT_EQ(tree(a.path()), tree(b.path()));
}

TEST(Acceptance, C8_GatewaySendsGpt41ParametersAndBoundsRetries) {
    weave::testing::StubServer server(429, 2);
    auto backend = std::make_shared<llm::OpenAiBackend>(llm::OpenAiBackend::Options{"k", server.base_url()});
    llm::Gateway gw(backend, {}, [](std::chrono::milliseconds) {}, frozen_clock());
    auto profile = llm::gpt41_profile();
    profile.max_retries = 3;
    auto r = gw.complete(profile, {{llm::Role::user, "hello"}});
    EXPECT_EQ(r.content, "stub reply");
    EXPECT_EQ(r.attempts, 3);
    auto requests = server.requests();
    ASSERT_EQ(requests.size(), 3u);
    for (const auto& req : requests) {
        EXPECT_EQ(req.body["model"], "gpt-4.1-2025-04-14");
        EXPECT_EQ(req.body["temperature"], 1.0);
        EXPECT_EQ(req.body["top_p"], 1.0);
        EXPECT_EQ(req.path, "/v1/chat/completions");
    }

    weave::testing::StubServer always(429, 1000);
    auto backend2 = std::make_shared<llm::OpenAiBackend>(llm::OpenAiBackend::Options{"k", always.base_url()});
    llm::Gateway gw2(backend2, {}, [](std::chrono::milliseconds) {}, frozen_clock());
    for (int retries : {0, 1, 2, 3}) {
        profile.max_retries = retries;
        const auto before = always.requests().size();
        try {
            gw2.complete(profile, {{llm::Role::user, "hello"}});
            ADD_FAILURE() << "expected exhaustion";
        } catch (const llm::RetriesExhausted& e) {
            EXPECT_EQ(e.attempts(), retries + 1);
        }
        EXPECT_EQ(always.requests().size() - before, static_cast<std::size_t>(retries + 1));
    }
}

int main(int argc, char** argv) {
    ::testing::InitGoogleTest(&argc, argv);
    ::testing::UnitTest::GetInstance()->listeners().Append(new CriterionPrinter);
    return RUN_ALL_TESTS();
}
