#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "poisson_chaos/compare.hpp"
#include "poisson_chaos/estimate.hpp"
#include "poisson_chaos/functional.hpp"
#include "poisson_chaos/kernel.hpp"
#include "poisson_chaos/measure_space.hpp"
#include "poisson_chaos/oracle.hpp"

namespace poisson_chaos::verify {

/// Malformed or inconsistent configuration (exit status 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NamedSpace {
  std::string id;
  MeasureSpace space;
};

struct NamedFunctional {
  std::string id;
  std::string space;
  Functional functional;
  // atoms on which the functional is declared increasing (decreasing elsewhere); FKG input
  std::optional<std::vector<std::string>> increasing_on;
};

struct NamedKernel {
  std::string id;
  std::string space;
  Kernel kernel;
};

/// One entry of the `suites` list. Which fields a suite reads is suite-specific.
struct SuiteSpec {
  std::string name;
  std::vector<std::string> functionals;
  std::vector<std::string> kernels;
  std::vector<std::vector<std::string>> cases;
  std::optional<std::size_t> replicates;
};

struct NestedSettings {
  std::size_t inner_replicates = 64;
  std::size_t t_nodes = 16;
  std::size_t quadrature_nodes = 16;
};

struct SuiteConfig {
  std::vector<NamedSpace> spaces;
  std::vector<NamedFunctional> functionals;
  std::vector<NamedKernel> kernels;
  McPlan mc;
  NestedSettings nested;
  std::size_t pattern_cutoff = 6;
  double tail_tolerance = kDefaultTailTolerance;
  std::size_t max_states = kDefaultMaxOracleStates;
  TolerancePolicy tolerances;
  std::vector<SuiteSpec> suites;
  // set by --replicates; wins over per-suite values
  std::optional<std::size_t> replicates_override;

  const MeasureSpace& space(std::string_view id) const;
  const NamedFunctional& functional(std::string_view id) const;
  const NamedKernel& kernel(std::string_view id) const;
  const SuiteSpec* suite(std::string_view name) const;
  std::size_t replicates_for(const SuiteSpec& spec) const;
  OracleBudget budget(const MeasureSpace& space, unsigned degree) const;
  OracleBudget budget_for_mass(double mass, unsigned degree) const;
};

SuiteConfig parse_config(std::string_view json_text);

/// Reads a config file; the name `default` selects the built-in configuration.
SuiteConfig load_config(const std::string& path);

std::string_view default_config_text();

}  // namespace poisson_chaos::verify
