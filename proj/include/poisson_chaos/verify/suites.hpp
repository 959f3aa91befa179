#pragma once

#include <string_view>
#include <vector>

#include "poisson_chaos/verify/config.hpp"
#include "poisson_chaos/verify/report.hpp"

namespace poisson_chaos::verify {

class SuiteRun;

struct SuiteInfo {
  std::string_view name;
  std::string_view summary;
  // identities the suite can emit; every emitted row carries one of them
  std::vector<std::string_view> identities;
  void (*validate)(const SuiteConfig&, const SuiteSpec&);
  void (*run)(SuiteRun&);
};

const std::vector<SuiteInfo>& suite_registry();
const SuiteInfo* find_suite(std::string_view name);

struct RunOptions {
  bool timing = false;
};

/// Checks every configured suite name and its inputs; throws ConfigError.
void validate_suites(const SuiteConfig& config);

/// Runs one configured suite. A suite that the config does not list runs on an empty spec.
std::vector<ReportRow> run_suite(std::string_view name, const SuiteConfig& config,
                                 const RunOptions& options = {});

/// Runs every suite listed in the config, in registry order.
std::vector<ReportRow> run_all(const SuiteConfig& config, const RunOptions& options = {});

}  // namespace poisson_chaos::verify
