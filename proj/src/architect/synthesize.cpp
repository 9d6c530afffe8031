#include "weave/architect/synthesize.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "weave/ipr/report_io.hpp"
#include "weave/util/file.hpp"
#include "weave/workflow/yaml_io.hpp"

namespace weave::architect {
namespace {

class Artifacts {
public:
    explicit Artifacts(std::filesystem::path dir) : dir_(std::move(dir)) {}

    void write(const std::string& name, const std::string& contents) {
        write_file(dir_ / name, contents);
        names_.push_back(name);
    }

    void manifest(nlohmann::ordered_json j) {
        auto files = names_;
        std::sort(files.begin(), files.end());
        j["artifacts"] = files;
        write_file(dir_ / "manifest.json", j.dump(2) + "\n");
    }

private:
    std::filesystem::path dir_;
    std::vector<std::string> names_;
};

void write_ipr(Artifacts& out, const ipr::IprReport& report, std::size_t run) {
    out.write("ipr_report.json", ipr::ipr_report_json(report));
    out.write("report.csv", ipr::ipr_report_csv_header() + ipr::ipr_report_csv_rows(run, report));
}

}  // namespace

std::vector<std::string> config_problems(const SynthesisConfig& config) {
    std::vector<std::string> out;
    if (config.repair_retries < 0 || config.repair_retries > 2) out.push_back("repair_retries must be in [0, 2]");
    if (config.output_dir.empty()) out.push_back("output_dir is required");
    for (const auto& [stage, profile] : config.stage_profiles) {
        for (const auto& [field, message] : llm::profile_problems(profile)) {
            out.push_back(std::string(to_string(stage)) + " profile " + field + ": " + message);
        }
    }
    for (const auto& [field, message] : llm::profile_problems(config.workflow_profile)) {
        out.push_back("workflow profile " + field + ": " + message);
    }
    for (auto& p : ipr::config_problems(config.ipr)) out.push_back("ipr: " + p);
    return out;
}

SynthesisResult synthesize(std::string_view user_prompt, const eval::Dataset& examples, const eval::Dataset* dataset,
                           const SynthesisConfig& config, llm::Gateway& gateway, const eval::Judge& judge) {
    if (auto problems = config_problems(config); !problems.empty()) {
        throw std::invalid_argument("invalid synthesis config: " + problems.front());
    }
    const auto doc = load_capabilities(config.capabilities_path.value_or(config.asset_dir / "capabilities.md"));
    const PromptLibrary prompts(config.asset_dir);
    StageContext ctx{gateway, doc, prompts, config.stage_profiles, config.repair_retries, nullptr,
                     config.workflow_profile};

    Artifacts out(config.output_dir);
    nlohmann::ordered_json manifest = {
        {"seed", config.ipr.seed},
        {"run", config.run_index},
        {"capabilities_version", doc.version},
    };

    SynthesisResult result;
    auto stage = Stage::decompose;
    try {
        result.plan = decompose(user_prompt, examples, ctx);
        out.write("task_plan.yaml", serialize_task_plan(result.plan));

        stage = Stage::design;
        result.blueprint = design(result.plan, ctx);
        out.write("blueprint.yaml", serialize_blueprint(result.blueprint));

        stage = Stage::build;
        try {
            result.spec = build(result.blueprint, ctx);
        } catch (const BuildValidationError& e) {
            out.write("invalid.workflow.yaml", workflow::serialize_workflow(e.spec()));
            throw;
        }

        stage = Stage::evaluate;
        auto snapshot = [&](const ipr::IterationRecord& record, const workflow::WorkflowSpec& spec) {
            out.write("iteration_" + std::to_string(record.index) + ".workflow.yaml", workflow::serialize_workflow(spec));
            stage = Stage::ipr;
        };
        try {
            auto run = ipr::run_ipr(result.spec, examples, dataset, gateway, judge, config.ipr, snapshot);
            result.spec = std::move(run.spec);
            result.report = std::move(run.report);
        } catch (const ipr::IprAborted& e) {
            write_ipr(out, e.partial(), config.run_index);
            throw StageError(stage, e.what());
        } catch (const std::invalid_argument& e) {
            throw StageError(stage, e.what());
        }

        stage = Stage::emit;
        out.write("final.workflow.yaml", workflow::serialize_workflow(result.spec));
        write_ipr(out, result.report, config.run_index);
    } catch (const StageError& e) {
        out.write("error.txt", std::string(e.what()) + "\n");
        manifest["status"] = "failed";
        manifest["stage"] = to_string(e.stage());
        out.manifest(manifest);
        throw;
    } catch (const std::exception& e) {
        StageError tagged(stage, e.what());
        out.write("error.txt", std::string(tagged.what()) + "\n");
        manifest["status"] = "failed";
        manifest["stage"] = to_string(stage);
        out.manifest(manifest);
        throw tagged;
    }

    manifest["status"] = "ok";
    manifest["spec_hash"] = workflow::spec_hash(result.spec);
    manifest["iterations"] = result.report.iterations.size();
    manifest["final_sample_pass_rate"] = result.report.iterations.back().sample_pass_rate.render();
    manifest["final_full_pass_rate"] = result.report.final_full_pass_rate
                                           ? nlohmann::ordered_json(result.report.final_full_pass_rate->render())
                                           : nlohmann::ordered_json(nullptr);
    out.manifest(manifest);
    return result;
}

}  // namespace weave::architect
