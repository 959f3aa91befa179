#include "poisson_chaos/verify/suites.hpp"

#include <fmt/format.h>

#include "suite_list.hpp"
#include "suite_run.hpp"

namespace poisson_chaos::verify {

const std::vector<SuiteInfo>& suite_registry() {
  static const std::vector<SuiteInfo> registry{
      {"laplace", "Laplace functional of exponential functionals",
       {"laplace_functional"}, validate_laplace, run_laplace},
      {"mecke", "Mecke equation, univariate and for ordered pairs of distinct points",
       {"mecke_univariate", "mecke_bivariate"}, validate_mecke, run_mecke},
      {"factorial_moments", "factorial moment measures equal product measures",
       {"factorial_moment"}, validate_factorial_moments, run_factorial_moments},
      {"fock_isometry", "Fock space isometry on exponential-family pairs",
       {"fock_isometry"}, validate_fock_isometry, run_fock_isometry},
      {"wi_isometry", "Wiener-Ito integrals: isometry, zero mean, symmetrization invariance",
       {"wiener_ito_isometry", "wiener_ito_mean_zero", "symmetrization_invariance"},
       validate_wi_isometry, run_wi_isometry},
      {"chaos_reconstruction", "pathwise finite chaos sum, coefficient uniqueness, L2 convergence",
       {"chaos_finite_sum", "chaos_uniqueness", "chaos_l2_convergence"},
       validate_chaos_reconstruction, run_chaos_reconstruction},
      {"product_formula", "pathwise product formula for multiple integrals",
       {"product_formula_first_order", "product_formula_general"}, validate_product_formula,
       run_product_formula},
      {"malliavin_derivative", "difference operator versus chaos-domain derivative",
       {"difference_exponential", "malliavin_derivative_chaos"}, validate_malliavin_derivative,
       run_malliavin_derivative},
      {"duality", "partial integration between D and the Skorohod integral",
       {"duality"}, validate_duality, run_duality},
      {"skorohod_isometry", "Skorohod isometry, zero mean, chaos versus pathwise integral",
       {"skorohod_isometry", "skorohod_mean_zero", "skorohod_chaos_pathwise"},
       validate_skorohod_isometry, run_skorohod_isometry},
      {"ou_operators", "delta(DF) = -LF, birth-death generator, inverse generator",
       {"ou_delta_d", "ou_delta_d_pathwise", "ou_generator_chaos", "ou_inverse",
        "ou_generator_mean_zero"},
       validate_ou_operators, run_ou_operators},
      {"mehler", "thinning semigroup: closed form, commutation, mean, contractivity, inverse",
       {"semigroup_thinning", "semigroup_commutation", "semigroup_mean", "semigroup_contractivity",
        "semigroup_law", "inverse_ou_quadrature"},
       validate_mehler, run_mehler},
      {"covariance", "covariance identities via the semigroup and conditional expectations",
       {"covariance_semigroup", "covariance_conditional"}, validate_covariance, run_covariance},
      {"poincare", "Poincare inequality and its L1 extension",
       {"poincare", "poincare_equality", "poincare_l1"}, validate_poincare, run_poincare},
      {"fkg", "Harris-FKG inequality for monotone functionals", {"fkg"}, validate_fkg, run_fkg},
  };
  return registry;
}

const SuiteInfo* find_suite(std::string_view name) {
  for (const auto& s : suite_registry()) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

void validate_suites(const SuiteConfig& config) {
  for (const auto& spec : config.suites) {
    const SuiteInfo* info = find_suite(spec.name);
    if (!info) {
      throw ConfigError(fmt::format("suites: unknown suite '{}'", spec.name));
    }
    info->validate(config, spec);
  }
}

std::vector<ReportRow> run_suite(std::string_view name, const SuiteConfig& config,
                                 const RunOptions& options) {
  const auto& registry = suite_registry();
  std::size_t index = 0;
  while (index < registry.size() && registry[index].name != name) ++index;
  if (index == registry.size()) {
    throw ConfigError(fmt::format("unknown suite '{}'", name));
  }
  const SuiteSpec empty{std::string(name), {}, {}, {}, std::nullopt};
  const SuiteSpec* spec = config.suite(name);
  SuiteRun run(config, spec ? *spec : empty, index, options.timing);
  registry[index].run(run);
  return run.take_rows();
}

std::vector<ReportRow> run_all(const SuiteConfig& config, const RunOptions& options) {
  std::vector<ReportRow> rows;
  for (const auto& info : suite_registry()) {
    if (config.suite(info.name)) {
      auto part = run_suite(info.name, config, options);
      rows.insert(rows.end(), std::make_move_iterator(part.begin()),
                  std::make_move_iterator(part.end()));
    }
  }
  return rows;
}

}  // namespace poisson_chaos::verify
