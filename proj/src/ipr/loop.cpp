#include "weave/ipr/loop.hpp"

#include "weave/workflow/validate.hpp"
#include "weave/workflow/yaml_io.hpp"

namespace weave::ipr {

std::vector<std::string> config_problems(const IprConfig& config, std::optional<std::size_t> dataset_size) {
    std::vector<std::string> out;
    if (config.max_iterations == 0) out.push_back("max_iterations must be at least 1");
    if (config.sample_size == 0) out.push_back("sample_size must be at least 1");
    if (dataset_size && config.sample_size > *dataset_size) {
        out.push_back("sample_size " + std::to_string(config.sample_size) + " exceeds dataset size " +
                      std::to_string(*dataset_size));
    }
    if (!(config.pass_threshold > 0.0 && config.pass_threshold <= 1.0)) out.push_back("pass_threshold must be in (0, 1]");
    if (config.repair_retries < 0 || config.repair_retries > 2) out.push_back("repair_retries must be in [0, 2]");
    for (const auto& [field, message] : llm::profile_problems(config.feedback_profile)) {
        out.push_back("feedback_profile." + field + ": " + message);
    }
    return out;
}

IprResult run_ipr(const workflow::WorkflowSpec& spec, const eval::Dataset& examples, const eval::Dataset* full_dataset,
                  llm::Gateway& gateway, const eval::Judge& judge, const IprConfig& config,
                  const IterationObserver& observer) {
    if (auto problems = config_problems(config); !problems.empty()) {
        throw std::invalid_argument("invalid IPR config: " + problems.front());
    }
    if (auto v = workflow::validate_workflow(spec); !v.ok()) {
        throw std::invalid_argument("workflow is invalid:\n" + v.render());
    }

    IprResult result;
    result.spec = spec;
    result.report.seed = config.seed;
    result.report.judge_mode = judge.mode();
    for (const auto& e : examples) result.report.sample_ids.push_back(e.id);

    auto abort = [&](const std::string& stage, const std::exception& e) -> IprAborted {
        return IprAborted(stage + ": " + e.what(), result.report, result.snapshots);
    };

    for (std::size_t k = 0; k < config.max_iterations; ++k) {
        IterationRecord record;
        record.index = k;
        record.spec_hash = workflow::spec_hash(result.spec);

        eval::EvaluationReport evaluation;
        try {
            evaluation = eval::evaluate(result.spec, examples, gateway, judge, config.evaluate);
        } catch (const std::exception& e) {
            throw abort("iteration " + std::to_string(k) + " evaluation", e);
        }
        record.sample_pass_rate = evaluation.pass_rate;
        record.failures = evaluation.failed_ids();

        const bool last = k + 1 == config.max_iterations;
        const bool done = evaluation.pass_rate.at_least(config.pass_threshold);
        if (!done && !last) {
            for (std::size_t i = 0; i < examples.size(); ++i) {
                const auto& verdict = evaluation.verdicts[i];
                if (verdict.passed) continue;
                try {
                    auto fb = generate_feedback(evaluation.traces[i], examples[i], verdict.candidate, result.spec,
                                                gateway, config.feedback_profile, config.repair_retries);
                    for (auto& r : fb.records) record.feedback.push_back(std::move(r));
                    for (auto& w : fb.warnings) record.warnings.push_back(examples[i].id + ": " + w);
                } catch (const std::exception& e) {
                    result.report.iterations.push_back(record);
                    result.snapshots.push_back(result.spec);
                    throw abort("iteration " + std::to_string(k) + " feedback for `" + examples[i].id + "`", e);
                }
            }
        }

        result.report.iterations.push_back(record);
        result.snapshots.push_back(result.spec);
        if (observer) observer(record, result.spec);
        if (done || last) break;

        auto patched = result.spec;
        for (const auto& r : record.feedback) patched = apply_feedback(std::move(patched), r);
        result.spec = std::move(patched);
    }

    if (config.evaluate_full && full_dataset && !full_dataset->empty()) {
        try {
            auto full = eval::evaluate(result.spec, *full_dataset, gateway, judge, config.evaluate);
            result.report.final_full_pass_rate = full.pass_rate;
        } catch (const std::exception& e) {
            throw abort("full-dataset evaluation", e);
        }
    }
    return result;
}

}  // namespace weave::ipr
