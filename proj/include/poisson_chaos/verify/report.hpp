#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace poisson_chaos::verify {

struct ReportRow {
  std::string suite;
  std::string case_id;
  double lhs = 0.0;
  double rhs = 0.0;
  double se_combined = 0.0;
  double abs_diff = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
  std::int64_t wall_time_ms = 0;
  // identity exercised by the case; registry metadata, not serialized
  std::string identity;
};

enum class ReportFormat { csv, jsonl };

inline constexpr std::string_view kReportColumns[] = {
    "suite",     "case_id", "lhs",        "rhs",  "se_combined",  "abs_diff",
    "tolerance", "verdict", "replicates", "seed", "wall_time_ms"};

std::string format_report(const std::vector<ReportRow>& rows, ReportFormat format);

/// Inverse of format_report (identity is not recovered). Throws std::runtime_error on bad input.
std::vector<ReportRow> parse_report(std::string_view text, ReportFormat format);

}  // namespace poisson_chaos::verify
