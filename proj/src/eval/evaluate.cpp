#include "weave/eval/evaluate.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "weave/workflow/validate.hpp"

namespace weave::eval {
namespace {

struct Outcome {
    Verdict verdict;
    orchestrator::ExecutionTrace trace;
};

Outcome run_one(const workflow::WorkflowSpec& spec, const QaPair& example, llm::Gateway& gateway,
                const Judge& judge, const orchestrator::ExecuteOptions& options) {
    const auto start = gateway.clock().now();
    Outcome out;
    std::size_t prompt = 0, completion = 0;
    try {
        auto run = orchestrator::execute(spec, example.question, gateway, options);
        prompt = run.prompt_tokens;
        completion = run.completion_tokens;
        out.trace = std::move(run.trace);
        out.verdict = judge(example, run.final_answer);
    } catch (const orchestrator::GatewayFailure& e) {
        if (e.transcript_exhausted()) throw;
        out.trace = e.trace();
        out.verdict.rationale = std::string(kExecutionErrorPrefix) + e.what();
    } catch (const orchestrator::ExecutionError& e) {
        out.trace = e.trace();
        out.verdict.rationale = std::string(kExecutionErrorPrefix) + e.what();
    } catch (const llm::TranscriptError&) {
        throw;
    } catch (const JudgeError& e) {
        out.verdict.rationale = std::string("judge error: ") + e.what();
    } catch (const llm::LlmError& e) {
        out.verdict.rationale = std::string("judge error: ") + e.what();
    }
    if (out.verdict.rationale && !out.verdict.passed && out.verdict.example_id.empty()) {
        out.verdict.example_id = example.id;
        out.verdict.judge_mode = judge.mode();
    }
    out.verdict.prompt_tokens += prompt;
    out.verdict.completion_tokens += completion;
    out.verdict.wall = elapsed(gateway.clock(), start);
    return out;
}

}  // namespace

std::string PassRate::render(int decimals) const {
    if (total == 0) return "n/a";
    std::size_t scale = 1;
    for (int i = 0; i < decimals; ++i) scale *= 10;
    const std::size_t scaled = (2 * passes * scale + total) / (2 * total);
    std::string frac = std::to_string(scaled % scale);
    frac.insert(0, static_cast<std::size_t>(decimals) - frac.size(), '0');
    auto whole = std::to_string(scaled / scale);
    return decimals == 0 ? whole : whole + "." + frac;
}

bool PassRate::at_least(double threshold) const {
    if (total == 0) return false;
    // Compare passes >= threshold * total with a tolerance below one part in total.
    return static_cast<double>(passes) + 1e-9 >= threshold * static_cast<double>(total);
}

std::vector<std::string> EvaluationReport::failed_ids() const {
    std::vector<std::string> ids;
    for (const auto& v : verdicts) {
        if (!v.passed) ids.push_back(v.example_id);
    }
    return ids;
}

EvaluationReport evaluate(const workflow::WorkflowSpec& spec, const Dataset& examples, llm::Gateway& gateway,
                          const Judge& judge, const EvaluateOptions& options) {
    if (examples.empty()) throw EvaluationError("empty evaluation set");
    if (auto report = workflow::validate_workflow(spec); !report.ok()) {
        throw EvaluationError("workflow is invalid:\n" + report.render());
    }

    const auto start = gateway.clock().now();
    std::vector<Outcome> outcomes(examples.size());
    std::size_t width = std::max<std::size_t>(1, options.workers);
    if (gateway.order_sensitive()) width = 1;
    width = std::min(width, examples.size());

    if (width == 1) {
        for (std::size_t i = 0; i < examples.size(); ++i) {
            outcomes[i] = run_one(spec, examples[i], gateway, judge, options.execute);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::atomic<bool> stop{false};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        {
            std::vector<std::jthread> pool;
            for (std::size_t w = 0; w < width; ++w) {
                pool.emplace_back([&] {
                    for (std::size_t i = next++; i < examples.size() && !stop; i = next++) {
                        try {
                            outcomes[i] = run_one(spec, examples[i], gateway, judge, options.execute);
                        } catch (...) {
                            std::lock_guard lock(failure_mutex);
                            if (!failure) failure = std::current_exception();
                            stop = true;
                        }
                    }
                });
            }
        }
        if (failure) std::rethrow_exception(failure);
    }

    EvaluationReport report;
    report.total = examples.size();
    for (auto& o : outcomes) {
        if (o.verdict.passed) ++report.pass_rate.passes;
        report.prompt_tokens += o.verdict.prompt_tokens;
        report.completion_tokens += o.verdict.completion_tokens;
        report.verdicts.push_back(std::move(o.verdict));
        report.traces.push_back(std::move(o.trace));
    }
    report.pass_rate.total = report.total;
    report.wall_time = elapsed(gateway.clock(), start);
    return report;
}

}  // namespace weave::eval
