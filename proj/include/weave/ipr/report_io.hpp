#pragma once

#include <string>
#include <vector>

#include "weave/ipr/loop.hpp"

namespace weave::ipr {

std::string ipr_report_json(const IprReport& report);

/// Columns: run, iteration, sample_pass_rate, full_pass_rate. One row per recorded
/// iteration; full_pass_rate is filled on a run's last row only.
std::string ipr_report_csv(const std::vector<IprReport>& runs);
std::string ipr_report_csv_header();
std::string ipr_report_csv_rows(std::size_t run, const IprReport& report);

}  // namespace weave::ipr
