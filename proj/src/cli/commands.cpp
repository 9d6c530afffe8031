#include "weave/cli/commands.hpp"

#include <algorithm>
#include <filesystem>
#include <memory>
#include <optional>
#include <ostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "weave/architect/synthesize.hpp"
#include "weave/eval/report_io.hpp"
#include "weave/ipr/report_io.hpp"
#include "weave/ipr/sampling.hpp"
#include "weave/llm/openai_backend.hpp"
#include "weave/llm/transcript.hpp"
#include "weave/util/file.hpp"
#include "weave/util/text.hpp"
#include "weave/workflow/validate.hpp"
#include "weave/workflow/yaml_io.hpp"

namespace weave::cli {
namespace {

namespace fs = std::filesystem;

/// Bad input; maps to exit code 1.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string transcript;
    std::string profile_path;
    std::string out_dir = "weave-out";
    std::uint64_t seed = 0;
    std::size_t runs = 1;
    std::string judge;
    std::string match = "substring";
    bool verbose = false;
    std::size_t workers = 4;
    std::size_t max_steps = 32;

    std::string workflow_path;
    std::string query;
    std::string trace_path;
    std::string dataset_path;
    std::string full_dataset_path;
    std::string task_path;
    std::string assets;
    std::string capabilities;
    std::size_t iterations = 5;
    std::size_t sample = 10;
    double threshold = 1.0;
    int repair_retries = 1;
    bool full = false;

    std::string import_source;
};

class Session {
public:
    Session(const Options& opts, std::ostream& out, std::ostream& err) : opts_(opts), out_(out), err_(err) {
        if (!opts.profile_path.empty()) {
            profile_ = workflow::parse_profile(read_file(opts.profile_path));
            if (auto problems = llm::profile_problems(*profile_); !problems.empty()) {
                throw InputError(opts.profile_path + ": " + problems.front().first + ": " + problems.front().second);
            }
        }
        llm::RetryPolicy policy;
        policy.jitter_seed = opts.seed;
        if (!opts.transcript.empty()) {
            scripted_ = std::make_shared<llm::ScriptedBackend>(llm::load_transcript(read_file(opts.transcript)));
            gateway_ = std::make_unique<llm::Gateway>(scripted_, policy, [](std::chrono::milliseconds) {},
                                                      frozen_clock());
        } else {
            auto backend = std::make_shared<llm::OpenAiBackend>(llm::OpenAiBackend::options_from_environment());
            gateway_ = std::make_unique<llm::Gateway>(backend, policy);
        }
    }

    ~Session() {
        if (scripted_ && scripted_->remaining() > 0) {
            err_ << "warning: " << scripted_->remaining() << " transcript entries were not used\n";
        }
    }

    llm::Gateway& gateway() { return *gateway_; }
    std::ostream& out() { return out_; }
    std::ostream& err() { return err_; }
    const Options& opts() const { return opts_; }

    void log(const std::string& line) {
        if (opts_.verbose) err_ << line << "\n";
    }

    /// --profile, else the workflow's own profile, else GPT-4.1 settings.
    llm::LlmProfile profile_or(const llm::LlmProfile& fallback) const { return profile_.value_or(fallback); }
    bool has_profile() const { return profile_.has_value(); }

    eval::Judge judge(const llm::LlmProfile& fallback) {
        auto mode = opts_.judge.empty() ? (has_profile() ? eval::JudgeMode::llm : eval::JudgeMode::exact)
                                        : *eval::judge_mode_from_string(opts_.judge);
        if (mode == eval::JudgeMode::llm) return eval::Judge::model(*gateway_, profile_or(fallback));
        return eval::Judge::exact(*eval::match_mode_from_string(opts_.match));
    }

private:
    const Options& opts_;
    std::ostream& out_;
    std::ostream& err_;
    std::optional<llm::LlmProfile> profile_;
    std::shared_ptr<llm::ScriptedBackend> scripted_;
    std::unique_ptr<llm::Gateway> gateway_;
};

workflow::WorkflowSpec load_valid_workflow(const std::string& path) {
    workflow::WorkflowSpec spec;
    try {
        spec = workflow::parse_workflow(read_file(path));
    } catch (const workflow::WorkflowParseError& e) {
        throw InputError(path + ": " + std::string(e.code()) + ": " + e.what());
    }
    if (auto report = workflow::validate_workflow(spec); !report.ok()) {
        throw InputError(path + ": workflow is invalid:\n" + report.render());
    }
    return spec;
}

int cmd_run(Session& s) {
    const auto& o = s.opts();
    auto spec = load_valid_workflow(o.workflow_path);
    orchestrator::ExecuteOptions exec;
    exec.max_steps = o.max_steps;
    try {
        auto result = orchestrator::execute(spec, o.query, s.gateway(), exec);
        if (!o.trace_path.empty()) write_file(o.trace_path, orchestrator::trace_to_jsonl(result.trace));
        s.out() << result.final_answer << "\n";
        return kExitOk;
    } catch (const orchestrator::ExecutionError& e) {
        if (!o.trace_path.empty()) write_file(o.trace_path, orchestrator::trace_to_jsonl(e.trace()));
        throw;
    }
}

int cmd_evaluate(Session& s) {
    const auto& o = s.opts();
    auto spec = load_valid_workflow(o.workflow_path);
    auto dataset = eval::load_dataset(o.dataset_path);
    eval::EvaluateOptions options;
    options.workers = o.workers;
    options.execute.max_steps = o.max_steps;
    auto judge = s.judge(spec.llm_profile);
    auto report = eval::evaluate(spec, dataset, s.gateway(), judge, options);
    eval::write_report(report, o.out_dir);
    s.out() << "pass_rate=" << report.pass_rate.render() << "\n";
    s.log("passes " + std::to_string(report.pass_rate.passes) + " of " + std::to_string(report.total));
    return kExitOk;
}

ipr::IprConfig ipr_config(const Options& o, std::uint64_t seed, const llm::LlmProfile& feedback_profile) {
    ipr::IprConfig c;
    c.max_iterations = o.iterations;
    c.sample_size = o.sample;
    c.pass_threshold = o.threshold;
    c.seed = seed;
    c.repair_retries = o.repair_retries;
    c.feedback_profile = feedback_profile;
    c.evaluate_full = o.full;
    c.evaluate.workers = o.workers;
    c.evaluate.execute.max_steps = o.max_steps;
    return c;
}

int cmd_ipr(Session& s) {
    const auto& o = s.opts();
    auto spec = load_valid_workflow(o.workflow_path);
    auto dataset = eval::load_dataset(o.dataset_path);
    auto config = ipr_config(o, o.seed, s.profile_or(spec.llm_profile));
    if (auto problems = ipr::config_problems(config, dataset.size()); !problems.empty()) throw InputError(problems.front());
    auto sample = ipr::sample_examples(dataset, config.sample_size, o.seed);
    auto judge = s.judge(spec.llm_profile);

    const fs::path out_dir = o.out_dir;
    auto snapshot = [&](const ipr::IterationRecord& record, const workflow::WorkflowSpec& evaluated) {
        write_file(out_dir / ("iteration_" + std::to_string(record.index) + ".workflow.yaml"),
                   workflow::serialize_workflow(evaluated));
        s.out() << "iteration=" << record.index << " sample_pass_rate=" << record.sample_pass_rate.render() << "\n";
    };
    auto write_reports = [&](const ipr::IprReport& report) {
        write_file(out_dir / "ipr_report.json", ipr::ipr_report_json(report));
        write_file(out_dir / "report.csv", ipr::ipr_report_csv({report}));
    };
    try {
        auto result = ipr::run_ipr(spec, sample, &dataset, s.gateway(), judge, config, snapshot);
        write_file(out_dir / "final.workflow.yaml", workflow::serialize_workflow(result.spec));
        write_reports(result.report);
        if (result.report.final_full_pass_rate) {
            s.out() << "full_pass_rate=" << result.report.final_full_pass_rate->render() << "\n";
        }
        return kExitOk;
    } catch (const ipr::IprAborted& e) {
        write_reports(e.partial());
        throw;
    }
}

int cmd_synthesize(Session& s) {
    const auto& o = s.opts();
    const auto task = read_file(o.task_path);
    auto examples = eval::load_dataset(o.dataset_path);
    std::optional<eval::Dataset> full;
    if (!o.full_dataset_path.empty()) full = eval::load_dataset(o.full_dataset_path);

    architect::SynthesisConfig base;
    if (!o.assets.empty()) base.asset_dir = o.assets;
    if (!o.capabilities.empty()) base.capabilities_path = o.capabilities;
    base.repair_retries = o.repair_retries;
    const auto profile = s.profile_or(llm::gpt41_profile());
    for (auto st : {architect::Stage::decompose, architect::Stage::design, architect::Stage::build}) {
        base.stage_profiles[st] = profile;
    }
    base.workflow_profile = profile;
    auto judge = s.judge(profile);

    const fs::path out_dir = o.out_dir;
    std::string merged = ipr::ipr_report_csv_header();
    int status = kExitOk;
    for (std::size_t i = 0; i < o.runs; ++i) {
        const auto seed = o.seed + i;
        auto config = base;
        config.output_dir = out_dir / ("run_" + std::to_string(i));
        config.run_index = i;
        config.ipr = ipr_config(o, seed, profile);
        config.ipr.sample_size = std::min(o.sample, examples.size());
        config.ipr.evaluate_full = full.has_value();
        if (auto problems = architect::config_problems(config); !problems.empty()) throw InputError(problems.front());
        auto sample = ipr::sample_examples(examples, config.ipr.sample_size, seed);
        s.log("run " + std::to_string(i) + ": seed " + std::to_string(seed));
        try {
            auto result = architect::synthesize(task, sample, full ? &*full : nullptr, config, s.gateway(), judge);
            merged += ipr::ipr_report_csv_rows(i, result.report);
            s.out() << "run=" << i << " iterations=" << result.report.iterations.size()
                    << " sample_pass_rate=" << result.report.iterations.back().sample_pass_rate.render();
            if (result.report.final_full_pass_rate) {
                s.out() << " full_pass_rate=" << result.report.final_full_pass_rate->render();
            }
            s.out() << "\n";
        } catch (const architect::StageError& e) {
            s.err() << "run " << i << " failed at " << e.what() << "\n";
            status = kExitPipeline;
        }
    }
    write_file(out_dir / "report.csv", merged);
    return status;
}

/// Converts a JSON array or JSON Lines file of question/answer objects into the
/// dataset format. Keys are matched case-insensitively; missing ids become the
/// 1-based position.
int cmd_import(Session& s) {
    const auto& o = s.opts();
    const auto text = read_file(o.import_source);
    std::vector<nlohmann::json> rows;
    auto whole = nlohmann::json::parse(text, nullptr, false);
    if (!whole.is_discarded() && whole.is_array()) {
        rows.assign(whole.begin(), whole.end());
    } else {
        for (auto line : text::split_lines(text)) {
            if (text::trim(line).empty()) continue;
            auto j = nlohmann::json::parse(line, nullptr, false);
            if (j.is_discarded()) throw InputError(o.import_source + ": line " + std::to_string(rows.size() + 1) + " is not JSON");
            rows.push_back(std::move(j));
        }
    }
    eval::Dataset dataset;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!rows[i].is_object()) throw InputError(o.import_source + ": record " + std::to_string(i + 1) + " is not an object");
        std::map<std::string, std::string> fields;
        for (const auto& [key, value] : rows[i].items()) {
            fields[text::to_lower_ascii(key)] = value.is_string() ? value.get<std::string>() : value.dump();
        }
        auto get = [&](const char* key) -> std::string {
            auto it = fields.find(key);
            if (it == fields.end() || text::trim(it->second).empty()) {
                throw InputError(o.import_source + ": record " + std::to_string(i + 1) + " has no `" + key + "`");
            }
            return it->second;
        };
        auto id = fields.count("id") ? fields["id"] : std::to_string(i + 1);
        dataset.push_back({id, get("question"), get("answer")});
    }
    auto out = eval::dump_dataset(dataset);
    eval::parse_dataset(out);  // duplicate ids and empty fields
    write_file(o.dataset_path, out);
    s.out() << "imported " << dataset.size() << " pairs\n";
    return kExitOk;
}

struct Commands {
    CLI::App* synthesize;
    CLI::App* run;
    CLI::App* evaluate;
    CLI::App* ipr;
};

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("--profile", o.profile_path, "LLM profile YAML for stages, judge and feedback")->check(CLI::ExistingFile);
    cmd->add_option("--workers", o.workers, "Evaluation worker pool width")->check(CLI::PositiveNumber);
    cmd->add_option("--max-steps", o.max_steps, "Trace step budget per workflow run")->check(CLI::PositiveNumber);
    cmd->add_flag("-v,--verbose", o.verbose, "Progress on stderr");
}

void add_judge(CLI::App* cmd, Options& o) {
    cmd->add_option("--judge", o.judge, "exact or llm (default: llm with --profile, else exact)")
        ->check(CLI::IsMember({"exact", "llm"}));
    cmd->add_option("--match", o.match, "Exact judge mode")->check(CLI::IsMember({"equal", "substring"}));
}

void add_refinement(CLI::App* cmd, Options& o) {
    cmd->add_option("--iterations", o.iterations, "Evaluated iterations, baseline included")->check(CLI::PositiveNumber);
    cmd->add_option("--sample", o.sample, "Examples per iteration")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", o.seed, "Sampling seed");
    cmd->add_option("--threshold", o.threshold, "Sample pass rate that ends refinement")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--repair-retries", o.repair_retries, "Repair attempts per stage reply")->check(CLI::Range(0, 2));
}

Commands add_commands(CLI::App& parent, Options& o) {
    Commands c{};
    c.synthesize = parent.add_subcommand("synthesize", "Synthesize and refine a workflow for a task");
    c.synthesize->add_option("task", o.task_path, "Plain-text task prompt")->required();
    c.synthesize->add_option("examples", o.dataset_path, "Example pairs (.jsonl)")->required();
    c.synthesize->add_option("--dataset", o.full_dataset_path, "Full dataset for the final pass rate");
    c.synthesize->add_option("--out", o.out_dir, "Output directory");
    c.synthesize->add_option("--runs", o.runs, "Independent runs, seeded seed, seed+1, ...")->check(CLI::PositiveNumber);
    c.synthesize->add_option("--assets", o.assets, "Prompt template and capabilities directory");
    c.synthesize->add_option("--capabilities", o.capabilities, "Capabilities document override");
    add_refinement(c.synthesize, o);
    add_judge(c.synthesize, o);
    add_common(c.synthesize, o);

    c.run = parent.add_subcommand("run", "Run a workflow on one query");
    c.run->add_option("workflow", o.workflow_path, "Workflow file")->required();
    c.run->add_option("query", o.query, "Question text")->required();
    c.run->add_option("--trace", o.trace_path, "Write the execution trace as JSON Lines");
    add_common(c.run, o);

    c.evaluate = parent.add_subcommand("evaluate", "Evaluate a workflow on a dataset");
    c.evaluate->add_option("workflow", o.workflow_path, "Workflow file")->required();
    c.evaluate->add_option("dataset", o.dataset_path, "Dataset (.jsonl)")->required();
    c.evaluate->add_option("--out", o.out_dir, "Output directory");
    add_judge(c.evaluate, o);
    add_common(c.evaluate, o);

    c.ipr = parent.add_subcommand("ipr", "Refine a workflow's system messages on sampled examples");
    c.ipr->add_option("workflow", o.workflow_path, "Workflow file")->required();
    c.ipr->add_option("dataset", o.dataset_path, "Dataset (.jsonl)")->required();
    c.ipr->add_option("--out", o.out_dir, "Output directory");
    c.ipr->add_flag("--full", o.full, "Evaluate the final workflow on the whole dataset");
    add_refinement(c.ipr, o);
    add_judge(c.ipr, o);
    add_common(c.ipr, o);
    return c;
}

int dispatch(const Commands& c, Session& s) {
    if (c.synthesize->parsed()) return cmd_synthesize(s);
    if (c.run->parsed()) return cmd_run(s);
    if (c.evaluate->parsed()) return cmd_evaluate(s);
    if (c.ipr->parsed()) return cmd_ipr(s);
    throw InputError("no command given");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Synthesize, run, evaluate and refine multi-agent LLM workflows"};
    app.require_subcommand(1);
    auto live = add_commands(app, o);

    auto* replay = app.add_subcommand("replay", "Run a command against a recorded transcript");
    replay->add_option("--transcript", o.transcript, "Transcript YAML")->required()->check(CLI::ExistingFile);
    replay->require_subcommand(1);
    auto replayed = add_commands(*replay, o);

    auto* import = app.add_subcommand("import", "Convert a question/answer export to the dataset format");
    import->add_option("source", o.import_source, "JSON array or JSON Lines export")->required()->check(CLI::ExistingFile);
    import->add_option("dest", o.dataset_path, "Dataset to write (.jsonl)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        Session session(o, out, err);
        if (import->parsed()) return cmd_import(session);
        return dispatch(replay->parsed() ? replayed : live, session);
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const FileError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const workflow::WorkflowParseError& e) {
        err << "error: " << e.code() << ": " << e.what() << "\n";
        return kExitInput;
    } catch (const eval::DatasetError& e) {
        err << "error: dataset: " << e.what() << "\n";
        return kExitInput;
    } catch (const llm::TranscriptFormatError& e) {
        err << "error: transcript: " << e.what() << "\n";
        return kExitInput;
    } catch (const architect::AssetError& e) {
        err << "error: assets: " << e.what() << "\n";
        return kExitInput;
    } catch (const eval::EvaluationError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const ipr::SampleError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const orchestrator::ExecutionError& e) {
        err << "execution failed: " << e.what() << "\n";
        return kExitPipeline;
    } catch (const ipr::IprAborted& e) {
        err << "refinement aborted: " << e.what() << "\n";
        return kExitPipeline;
    } catch (const architect::StageError& e) {
        err << "synthesis failed: " << e.what() << "\n";
        return kExitPipeline;
    } catch (const std::exception& e) {
        err << "failed: " << e.what() << "\n";
        return kExitPipeline;
    }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"weave"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace weave::cli
