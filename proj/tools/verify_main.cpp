#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "poisson_chaos/error.hpp"
#include "poisson_chaos/verify/config.hpp"
#include "poisson_chaos/verify/report.hpp"
#include "poisson_chaos/verify/suites.hpp"

namespace pv = poisson_chaos::verify;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

void list_suites() {
  for (const auto& s : pv::suite_registry()) {
    fmt::print("{:<22} {}\n", s.name, s.summary);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verify Poisson stochastic-analysis identities by exact enumeration and Monte Carlo",
               "verify"};
  std::string suite;
  std::string config_path = "default";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> replicates;
  std::string report_path;
  std::string format = "csv";
  bool list = false;
  bool timing = false;

  app.add_option("suite", suite, "suite name, or 'all' for every suite in the config");
  app.add_option("--config", config_path, "JSON config path, or 'default' for the built-in one");
  app.add_option("--seed", seed, "override mc.seed");
  app.add_option("--replicates", replicates, "override every Monte-Carlo replicate count")
      ->check(CLI::Range(std::size_t{2}, std::numeric_limits<std::size_t>::max()));
  app.add_option("--report", report_path, "write the report here instead of stdout");
  app.add_option("--format", format, "report format")->check(CLI::IsMember({"csv", "jsonl"}));
  app.add_flag("--list", list, "list the available suites and exit");
  app.add_flag("--timing", timing, "record per-case wall time (reports are then not reproducible)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  if (list) {
    list_suites();
    return kExitPass;
  }
  if (suite.empty()) {
    std::cerr << "verify: a suite name or 'all' is required (see --list)\n";
    return kExitUsage;
  }
  if (suite != "all" && !pv::find_suite(suite)) {
    std::cerr << fmt::format("verify: unknown suite '{}' (see --list)\n", suite);
    return kExitUsage;
  }

  std::vector<pv::ReportRow> rows;
  try {
    auto config = pv::load_config(config_path);
    if (seed) config.mc.seed = *seed;
    if (replicates) config.replicates_override = *replicates;
    pv::validate_suites(config);
    const pv::RunOptions options{timing};
    rows = suite == "all" ? pv::run_all(config, options) : pv::run_suite(suite, config, options);
  } catch (const pv::ConfigError& e) {
    std::cerr << "verify: config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    // library errors while running a suite leave no verdict to report
    std::cerr << "verify: error: " << e.what() << '\n';
    return kExitUsage;
  }

  const std::string text =
      pv::format_report(rows, format == "jsonl" ? pv::ReportFormat::jsonl : pv::ReportFormat::csv);
  if (report_path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
  } else {
    std::ofstream out(report_path, std::ios::binary);
    out << text;
    if (!out) {
      std::cerr << fmt::format("verify: cannot write report '{}'\n", report_path);
      return kExitUsage;
    }
  }

  std::size_t failed = 0;
  for (const auto& r : rows) {
    if (!r.pass) {
      ++failed;
      std::cerr << fmt::format("FAIL {}/{}: |{:.6g} - {:.6g}| = {:.3g} > {:.3g}\n", r.suite,
                               r.case_id, r.lhs, r.rhs, r.abs_diff, r.tolerance);
    }
  }
  std::cerr << fmt::format("verify: {} cases, {} failed\n", rows.size(), failed);
  return failed == 0 ? kExitPass : kExitFail;
}
