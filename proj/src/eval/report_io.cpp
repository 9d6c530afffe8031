#include "weave/eval/report_io.hpp"

#include <nlohmann/json.hpp>

#include "weave/util/file.hpp"

namespace weave::eval {

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string report_csv(const EvaluationReport& report) {
    std::string out = "example_id,passed,judge_mode,wall_ms,prompt_tokens,completion_tokens\n";
    for (const auto& v : report.verdicts) {
        out += csv_field(v.example_id) + "," + (v.passed ? "true" : "false") + "," + std::string(to_string(v.judge_mode)) +
               "," + std::to_string(v.wall.count()) + "," + std::to_string(v.prompt_tokens) + "," +
               std::to_string(v.completion_tokens) + "\n";
    }
    return out;
}

std::string report_json(const EvaluationReport& report) {
    nlohmann::ordered_json verdicts = nlohmann::ordered_json::array();
    for (const auto& v : report.verdicts) {
        nlohmann::ordered_json j = {
            {"example_id", v.example_id},
            {"passed", v.passed},
            {"judge_mode", to_string(v.judge_mode)},
            {"candidate", v.candidate},
        };
        j["rationale"] = v.rationale ? nlohmann::ordered_json(*v.rationale) : nlohmann::ordered_json(nullptr);
        j["wall_ms"] = v.wall.count();
        j["prompt_tokens"] = v.prompt_tokens;
        j["completion_tokens"] = v.completion_tokens;
        verdicts.push_back(std::move(j));
    }
    nlohmann::ordered_json j = {
        {"pass_rate", report.pass_rate.render()},
        {"passes", report.pass_rate.passes},
        {"total", report.total},
        {"wall_ms", report.wall_time.count()},
        {"prompt_tokens", report.prompt_tokens},
        {"completion_tokens", report.completion_tokens},
        {"verdicts", std::move(verdicts)},
    };
    return j.dump(2) + "\n";
}

void write_report(const EvaluationReport& report, const std::filesystem::path& dir) {
    write_file(dir / "report.json", report_json(report));
    write_file(dir / "report.csv", report_csv(report));
}

}  // namespace weave::eval
