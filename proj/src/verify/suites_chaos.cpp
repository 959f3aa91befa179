#include <cmath>

#include <fmt/format.h>

#include "poisson_chaos/chaos_vector.hpp"
#include "poisson_chaos/monte_carlo.hpp"
#include "poisson_chaos/oracle.hpp"
#include "poisson_chaos/wiener_ito.hpp"
#include "suite_list.hpp"

namespace poisson_chaos::verify {

namespace {

constexpr double kSymmetrizationTol = 1e-10;
constexpr double kFiniteSumTol = 1e-10;
constexpr double kUniquenessTol = 1e-8;
constexpr double kProductTol = 1e-9;
constexpr double kL2Bound = 1e-6;
constexpr double kOracleIsometryMassLimit = 2.0;
constexpr std::size_t kRecoveryOrder = 4;
constexpr std::size_t kMaxIsometryArity = 3;

double factorial(std::size_t n) { return std::tgamma(static_cast<double>(n) + 1.0); }

}  // namespace

void validate_wi_isometry(const SuiteConfig& config, const SuiteSpec& spec) {
  for (const auto& id : spec.kernels) {
    const auto arity = config.kernel(id).kernel.arity();
    if (arity < 1 || arity > kMaxIsometryArity) {
      suite_error(spec, fmt::format("kernel '{}' must have arity 1..{}", id, kMaxIsometryArity));
    }
  }
}

void run_wi_isometry(SuiteRun& run) {
  const auto& cfg = run.config;
  const auto& ids = run.spec.kernels;
  for (const auto& id : ids) {
    const auto& nk = cfg.kernel(id);
    const auto& space = cfg.space(nk.space);
    const Kernel& g = nk.kernel;
    const PatternFn in = [&](const PointPattern& chi) { return wiener_ito(WiState(space, chi), g); };
    run.record(id + "/mean", "wiener_ito_mean_zero", mc_expectation(space, in, run.plan()),
               Estimate::exact(0.0));
    if (g.arity() >= 2) {
      const Kernel sym = symmetrize(g);
      WiState state(space, PointPattern::empty(space));
      Worst w;
      for_each_pattern(space.size(), cfg.pattern_cutoff, [&](const PointPattern& chi) {
        state.set_pattern(chi);
        w.see(wiener_ito(state, g), wiener_ito(state, sym));
      });
      run.record_exact(id + "/symmetrization", "symmetrization_invariance", w.lhs, w.rhs,
                       kSymmetrizationTol);
    }
  }
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (std::size_t j = i; j < ids.size(); ++j) {
      const auto& a = cfg.kernel(ids[i]);
      const auto& b = cfg.kernel(ids[j]);
      if (a.space != b.space) {
        continue;
      }
      const auto& space = cfg.space(a.space);
      const std::size_t m = a.kernel.arity();
      const std::size_t n = b.kernel.arity();
      const double rhs =
          m == n ? factorial(m) * inner_product(space, symmetrize(a.kernel), symmetrize(b.kernel))
                 : 0.0;
      const PatternFn prod = [&](const PointPattern& chi) {
        WiState st(space, chi);
        return wiener_ito(st, a.kernel) * wiener_ito(st, b.kernel);
      };
      const std::string id = fmt::format("{}*{}", ids[i], ids[j]);
      if (m <= 2 && n <= 2 && space.total_mass() <= kOracleIsometryMassLimit) {
        run.record_exact(id + "/oracle", "wiener_ito_isometry",
                         oracle_expectation(space, prod, cfg.budget(space, static_cast<unsigned>(m + n))),
                         rhs, cfg.tolerances.exact_abs_tol);
      }
      run.record(id + "/mc", "wiener_ito_isometry", mc_expectation(space, prod, run.plan()),
                 Estimate::exact(rhs));
    }
  }
}

void validate_chaos_reconstruction(const SuiteConfig& config, const SuiteSpec& spec) {
  for (const auto& id : spec.functionals) {
    require_exp_family(config, spec, id);
  }
}

void run_chaos_reconstruction(SuiteRun& run) {
  const auto& cfg = run.config;
  for (const auto& id : run.spec.functionals) {
    const auto& nf = cfg.functional(id);
    const auto& space = cfg.space(nf.space);
    const Functional& f = nf.functional;
    const auto terms = f.exp_terms();

    WiState state(space, PointPattern::empty(space));
    Worst finite;
    for_each_pattern(space.size(), cfg.pattern_cutoff, [&](const PointPattern& chi) {
      state.set_pattern(chi);
      double sum = 0.0;
      for (const auto& t : terms) {
        sum += t.coeff * chaos_finite_sum(state, t.v);
      }
      finite.see(sum, f(chi));
    });
    run.record_exact(id + "/finite_sum", "chaos_finite_sum", finite.lhs, finite.rhs, kFiniteSumTol);

    const auto cv = chaos_of_exponential(space, f, kRecoveryOrder);
    const auto recovered = recover_chaos(
        space, [&](const PointPattern& chi) { return chaos_reconstruct(WiState(space, chi), cv); },
        kRecoveryOrder, kRecoveryOrder + 2);
    const Worst u = chaos_worst(recovered, cv);
    run.record_exact(id + "/uniqueness", "chaos_uniqueness", u.lhs, u.rhs, kUniquenessTol);

    // E (F - Σ_{n≤N} I_n(f_n))² for N = 0..4
    const auto budget = cfg.budget(space, static_cast<unsigned>(2 * kMaxChaosOrder));
    const PoissonEnumeration law(space, budget);
    std::vector<double> err;
    for (std::size_t n = 0; n <= kMaxChaosOrder; ++n) {
      const auto tn = cv.truncated(n);
      err.push_back(law.expect([&](const PointPattern& chi) {
        const double r = f(chi) - chaos_reconstruct(WiState(space, chi), tn);
        return r * r;
      }));
    }
    for (std::size_t n = 1; n < err.size(); ++n) {
      run.record_exact(fmt::format("{}/l2_error_N{}", id, n), "chaos_l2_convergence", err[n],
                       err[n - 1], 0.0, Relation::less_equal);
    }
    run.record_exact(fmt::format("{}/l2_error_N{}_bound", id, kMaxChaosOrder),
                     "chaos_l2_convergence", err.back(), kL2Bound, 0.0, Relation::less_equal);
  }
}

void validate_product_formula(const SuiteConfig& config, const SuiteSpec& spec) {
  for (std::size_t i = 0; i < spec.cases.size(); ++i) {
    require_case_size(spec, i, 2, 2);
    const auto& c = spec.cases[i];
    require_same_space(spec, c[0], kernel_space(config, c[0]), c[1], kernel_space(config, c[1]));
    std::size_t total = 0;
    for (const auto& id : c) {
      const auto& k = config.kernel(id).kernel;
      if (k.arity() < 1 || !k.is_symmetric(1e-12)) {
        suite_error(spec, fmt::format("kernel '{}' must be symmetric with arity >= 1", id));
      }
      total += k.arity();
    }
    if (total > kMaxIntegralOrder) {
      suite_error(spec, fmt::format("case {} has p+q = {} above {}", i, total, kMaxIntegralOrder));
    }
  }
}

void run_product_formula(SuiteRun& run) {
  const auto& cfg = run.config;
  for (const auto& c : run.spec.cases) {
    const auto& f = cfg.kernel(c[0]).kernel;
    const auto& g = cfg.kernel(c[1]).kernel;
    const auto& space = cfg.space(cfg.kernel(c[0]).space);
    WiState state(space, PointPattern::empty(space));
    Worst w;
    for_each_pattern(space.size(), cfg.pattern_cutoff, [&](const PointPattern& chi) {
      state.set_pattern(chi);
      w.see(wiener_ito(state, f) * wiener_ito(state, g), product_formula_rhs(f, g, state));
    });
    const bool first_order = f.arity() == 1 && g.arity() == 1;
    run.record_exact(fmt::format("{}*{}", c[0], c[1]),
                     first_order ? "product_formula_first_order" : "product_formula_general", w.lhs,
                     w.rhs, kProductTol);
  }
}

}  // namespace poisson_chaos::verify
