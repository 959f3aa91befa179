#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "poisson_chaos/compare.hpp"
#include "poisson_chaos/estimate.hpp"
#include "poisson_chaos/functional.hpp"
#include "poisson_chaos/point_pattern.hpp"
#include "poisson_chaos/verify/config.hpp"
#include "poisson_chaos/verify/report.hpp"

namespace poisson_chaos::verify {

/// Collects rows for one suite and hands out non-overlapping RNG stream ranges per case.
class SuiteRun {
 public:
  SuiteRun(const SuiteConfig& config, const SuiteSpec& spec, std::uint64_t suite_index, bool timing);

  const SuiteConfig& config;
  const SuiteSpec& spec;

  McPlan plan();
  McPlan plan(std::size_t replicates);
  std::size_t replicates() const { return config.replicates_for(spec); }

  /// Statistical comparison under the configured policy.
  void record(const std::string& case_id, std::string_view identity, const Estimate& lhs,
              const Estimate& rhs, Relation relation = Relation::equal);
  /// Statistical comparison with a case-specific absolute slack.
  void record_slack(const std::string& case_id, std::string_view identity, const Estimate& lhs,
                    const Estimate& rhs, double abs_tol, Relation relation = Relation::equal);
  /// Deterministic comparison with a pinned tolerance.
  void record_exact(const std::string& case_id, std::string_view identity, double lhs, double rhs,
                    double tol, Relation relation = Relation::equal);

  std::vector<ReportRow> take_rows() { return std::move(rows_); }

 private:
  void push(const std::string& case_id, std::string_view identity, const Estimate& lhs,
            const Estimate& rhs, const Verdict& v);

  std::uint64_t suite_index_;
  std::uint64_t next_case_ = 0;
  bool timing_;
  std::chrono::steady_clock::time_point last_;
  std::vector<ReportRow> rows_;
};

/// Largest |lhs - rhs| seen over a sweep, with the values where it occurred.
struct Worst {
  double lhs = 0.0;
  double rhs = 0.0;
  double diff = -1.0;

  void see(double l, double r) {
    const double d = std::abs(l - r);
    if (d > diff || std::isnan(d)) {
      lhs = l;
      rhs = r;
      diff = std::isnan(d) ? HUGE_VAL : d;
    }
  }
};

std::string pattern_label(const PointPattern& chi);
std::string fmt_param(double x);

}  // namespace poisson_chaos::verify

namespace poisson_chaos {
class ChaosVector;
}

namespace poisson_chaos::verify {

[[noreturn]] void suite_error(const SuiteSpec& spec, const std::string& what);

/// Space id of a functional or kernel reference.
const std::string& functional_space(const SuiteConfig& config, const std::string& id);
const std::string& kernel_space(const SuiteConfig& config, const std::string& id);

void require_exp_family(const SuiteConfig& config, const SuiteSpec& spec, const std::string& id);
void require_case_size(const SuiteSpec& spec, std::size_t index, std::size_t min, std::size_t max);
void require_same_space(const SuiteSpec& spec, const std::string& a, const std::string& space_a,
                        const std::string& b, const std::string& space_b);

/// Largest entrywise gap between two chaos vectors (shorter one padded with zeros).
Worst chaos_worst(const ChaosVector& a, const ChaosVector& b);

}  // namespace poisson_chaos::verify
