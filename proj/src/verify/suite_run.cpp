#include "suite_run.hpp"

#include <fmt/format.h>

namespace poisson_chaos::verify {

SuiteRun::SuiteRun(const SuiteConfig& cfg, const SuiteSpec& s, std::uint64_t suite_index,
                   bool timing)
    : config(cfg), spec(s), suite_index_(suite_index), timing_(timing),
      last_(std::chrono::steady_clock::now()) {}

McPlan SuiteRun::plan() { return plan(replicates()); }

McPlan SuiteRun::plan(std::size_t replicates) {
  // 2^16 suites x 2^16 cases x 2^32 replicates per case
  const std::uint64_t base =
      config.mc.stream_base + (suite_index_ << 48) + (next_case_++ << 32);
  return McPlan{replicates, config.mc.seed, base};
}

void SuiteRun::record(const std::string& case_id, std::string_view identity, const Estimate& lhs,
                      const Estimate& rhs, Relation relation) {
  push(case_id, identity, lhs, rhs, compare(lhs, rhs, config.tolerances, relation));
}

void SuiteRun::record_slack(const std::string& case_id, std::string_view identity,
                            const Estimate& lhs, const Estimate& rhs, double abs_tol,
                            Relation relation) {
  push(case_id, identity, lhs, rhs,
       compare_with_tolerance(lhs, rhs, config.tolerances.z, abs_tol, relation));
}

void SuiteRun::record_exact(const std::string& case_id, std::string_view identity, double lhs,
                            double rhs, double tol, Relation relation) {
  const auto l = Estimate::exact(lhs);
  const auto r = Estimate::exact(rhs);
  push(case_id, identity, l, r, compare_with_tolerance(l, r, config.tolerances.z, tol, relation));
}

void SuiteRun::push(const std::string& case_id, std::string_view identity, const Estimate& lhs,
                    const Estimate& rhs, const Verdict& v) {
  ReportRow row;
  row.suite = spec.name;
  row.case_id = case_id;
  row.lhs = lhs.mean;
  row.rhs = rhs.mean;
  row.se_combined = v.se_combined;
  row.abs_diff = v.abs_diff;
  row.tolerance = v.tolerance;
  row.pass = v.pass;
  row.replicates = std::max(lhs.replicates, rhs.replicates);
  row.seed = config.mc.seed;
  const auto now = std::chrono::steady_clock::now();
  if (timing_) {
    row.wall_time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(now - last_).count();
  }
  last_ = now;
  row.identity = std::string(identity);
  rows_.push_back(std::move(row));
}

std::string pattern_label(const PointPattern& chi) {
  std::string s = "(";
  for (std::size_t i = 0; i < chi.size(); ++i) {
    s += fmt::format("{}{}", i ? " " : "", chi.count(i));
  }
  return s + ")";
}

std::string fmt_param(double x) { return fmt::format("{:g}", x); }

}  // namespace poisson_chaos::verify

#include <algorithm>

#include "poisson_chaos/chaos_vector.hpp"

namespace poisson_chaos::verify {

void suite_error(const SuiteSpec& spec, const std::string& what) {
  throw ConfigError(fmt::format("suite '{}': {}", spec.name, what));
}

const std::string& functional_space(const SuiteConfig& config, const std::string& id) {
  return config.functional(id).space;
}

const std::string& kernel_space(const SuiteConfig& config, const std::string& id) {
  return config.kernel(id).space;
}

void require_exp_family(const SuiteConfig& config, const SuiteSpec& spec, const std::string& id) {
  if (!config.functional(id).functional.is_exponential_family()) {
    suite_error(spec, fmt::format("functional '{}' must be exponential or linear_combo", id));
  }
}

void require_case_size(const SuiteSpec& spec, std::size_t index, std::size_t min, std::size_t max) {
  const std::size_t n = spec.cases.at(index).size();
  if (n < min || n > max) {
    suite_error(spec, fmt::format("case {} has {} entries, expected {}..{}", index, n, min, max));
  }
}

void require_same_space(const SuiteSpec& spec, const std::string& a, const std::string& space_a,
                        const std::string& b, const std::string& space_b) {
  if (space_a != space_b) {
    suite_error(spec, fmt::format("'{}' lives on space '{}' but '{}' on '{}'", a, space_a, b,
                                  space_b));
  }
}

Worst chaos_worst(const ChaosVector& a, const ChaosVector& b) {
  const std::size_t order = std::max(a.order(), b.order());
  const auto pa = a.truncated(order);
  const auto pb = b.truncated(order);
  Worst w;
  for (std::size_t n = 0; n <= order; ++n) {
    for (std::size_t i = 0; i < pa[n].size(); ++i) {
      w.see(pa[n][i], pb[n][i]);
    }
  }
  return w;
}

}  // namespace poisson_chaos::verify
