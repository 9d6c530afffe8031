#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "weave/eval/evaluate.hpp"

namespace weave::eval {

/// RFC 4180 field quoting, applied only when needed.
std::string csv_field(std::string_view s);

/// Columns: example_id, passed, judge_mode, wall_ms, prompt_tokens, completion_tokens.
std::string report_csv(const EvaluationReport& report);
std::string report_json(const EvaluationReport& report);

/// Writes report.json and report.csv into `dir`.
void write_report(const EvaluationReport& report, const std::filesystem::path& dir);

}  // namespace weave::eval
