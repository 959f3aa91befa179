#pragma once

#include "poisson_chaos/verify/config.hpp"
#include "suite_run.hpp"

namespace poisson_chaos::verify {

#define POISSON_CHAOS_SUITE(name)                                    \
  void validate_##name(const SuiteConfig& config, const SuiteSpec& spec); \
  void run_##name(SuiteRun& run);

POISSON_CHAOS_SUITE(laplace)
POISSON_CHAOS_SUITE(mecke)
POISSON_CHAOS_SUITE(factorial_moments)
POISSON_CHAOS_SUITE(fock_isometry)
POISSON_CHAOS_SUITE(wi_isometry)
POISSON_CHAOS_SUITE(chaos_reconstruction)
POISSON_CHAOS_SUITE(product_formula)
POISSON_CHAOS_SUITE(malliavin_derivative)
POISSON_CHAOS_SUITE(duality)
POISSON_CHAOS_SUITE(skorohod_isometry)
POISSON_CHAOS_SUITE(ou_operators)
POISSON_CHAOS_SUITE(mehler)
POISSON_CHAOS_SUITE(covariance)
POISSON_CHAOS_SUITE(poincare)
POISSON_CHAOS_SUITE(fkg)

#undef POISSON_CHAOS_SUITE

}  // namespace poisson_chaos::verify
