#include "weave/ipr/report_io.hpp"

#include <nlohmann/json.hpp>

namespace weave::ipr {
namespace {

nlohmann::ordered_json rate_json(const eval::PassRate& r) {
    return {{"passes", r.passes}, {"total", r.total}, {"rate", r.render()}};
}

}  // namespace

std::string ipr_report_json(const IprReport& report) {
    nlohmann::ordered_json iterations = nlohmann::ordered_json::array();
    for (const auto& it : report.iterations) {
        nlohmann::ordered_json feedback = nlohmann::ordered_json::array();
        for (const auto& f : it.feedback) {
            feedback.push_back({{"target_id", f.target_id},
                                {"issue", f.issue},
                                {"root_cause", f.root_cause},
                                {"action", to_string(f.action)},
                                {"guideline_change", f.guideline_change}});
        }
        iterations.push_back({{"index", it.index},
                              {"sample_pass_rate", rate_json(it.sample_pass_rate)},
                              {"spec_hash", it.spec_hash},
                              {"failures", it.failures},
                              {"feedback", std::move(feedback)},
                              {"warnings", it.warnings}});
    }
    nlohmann::ordered_json j = {
        {"seed", report.seed},
        {"judge_mode", eval::to_string(report.judge_mode)},
        {"sample_ids", report.sample_ids},
        {"iterations", std::move(iterations)},
    };
    j["final_full_pass_rate"] =
        report.final_full_pass_rate ? rate_json(*report.final_full_pass_rate) : nlohmann::ordered_json(nullptr);
    return j.dump(2) + "\n";
}

std::string ipr_report_csv_header() { return "run,iteration,sample_pass_rate,full_pass_rate\n"; }

std::string ipr_report_csv_rows(std::size_t run, const IprReport& report) {
    std::string out;
    for (std::size_t i = 0; i < report.iterations.size(); ++i) {
        const auto& it = report.iterations[i];
        const bool last = i + 1 == report.iterations.size();
        out += std::to_string(run) + "," + std::to_string(it.index) + "," + it.sample_pass_rate.render() + ",";
        if (last && report.final_full_pass_rate) out += report.final_full_pass_rate->render();
        out += "\n";
    }
    return out;
}

std::string ipr_report_csv(const std::vector<IprReport>& runs) {
    auto out = ipr_report_csv_header();
    for (std::size_t r = 0; r < runs.size(); ++r) out += ipr_report_csv_rows(r, runs[r]);
    return out;
}

}  // namespace weave::ipr
