#include <cmath>

#include <fmt/format.h>

#include "poisson_chaos/chaos_vector.hpp"
#include "poisson_chaos/monte_carlo.hpp"
#include "poisson_chaos/oracle.hpp"
#include "suite_list.hpp"

namespace poisson_chaos::verify {

namespace {

constexpr double kFockClosedTol = 1e-10;
constexpr double kFockTermCutoff = 1e-14;

// h(χ, x) = k(x)·F(χ) with k of arity 1, or h(χ, x, y) = k(x, y)·F(χ) with k of arity 2
double mecke_lhs(const Functional& f, const Kernel& k, const PointPattern& chi) {
  return f(chi) * factorial_apply(chi, k);
}

double mecke_rhs(const MeasureSpace& space, const Functional& f, const Kernel& k,
                 const PointPattern& chi) {
  const std::size_t d = space.size();
  double total = 0.0;
  if (k.arity() == 1) {
    for (Atom x = 0; x < d; ++x) {
      total += space.weight(x) * k.at({x}) * f(chi.plus(x));
    }
    return total;
  }
  for (Atom x = 0; x < d; ++x) {
    const PointPattern cx = chi.plus(x);
    for (Atom y = 0; y < d; ++y) {
      total += space.weight(x) * space.weight(y) * k.at({x, y}) * f(cx.plus(y));
    }
  }
  return total;
}

double factorial(std::size_t n) { return std::tgamma(static_cast<double>(n) + 1.0); }

// EF·EG + Σ_n (1/n!)⟨T_nF, T_nG⟩: kernel inner products up to the chaos-order cap, then the
// scalar form of the same terms until they drop below the cutoff
double fock_series(const MeasureSpace& space, const Functional& f, const Functional& g) {
  const auto cf = chaos_of_exponential(space, f, kMaxChaosOrder);
  const auto cg = chaos_of_exponential(space, g, kMaxChaosOrder);
  double total = cf.mean() * cg.mean();
  for (std::size_t n = 1; n <= kMaxChaosOrder; ++n) {
    total += factorial(n) * inner_product(space, cf[n], cg[n]);
  }
  struct Pair {
    double scale;
    double c;
  };
  std::vector<Pair> pairs;
  for (const auto& a : f.exp_terms()) {
    for (const auto& b : g.exp_terms()) {
      double ma = 0.0;
      double mb = 0.0;
      double c = 0.0;
      for (Atom x = 0; x < space.size(); ++x) {
        const double ea = std::expm1(-a.v[x]);
        const double eb = std::expm1(-b.v[x]);
        ma += space.weight(x) * ea;
        mb += space.weight(x) * eb;
        c += space.weight(x) * ea * eb;
      }
      pairs.push_back({a.coeff * b.coeff * std::exp(ma + mb), c});
    }
  }
  for (std::size_t n = kMaxChaosOrder + 1; n < 400; ++n) {
    double term = 0.0;
    for (const auto& p : pairs) {
      term += p.scale * std::exp(static_cast<double>(n) * std::log(std::abs(p.c)) -
                                 std::lgamma(static_cast<double>(n) + 1.0)) *
              ((p.c < 0.0 && n % 2 == 1) ? -1.0 : 1.0);
    }
    total += term;
    if (std::abs(term) < kFockTermCutoff) {
      break;
    }
  }
  return total;
}

// E[f g] for exponential-family f, g: Σ a_i b_j exp(-μ(1 - e^{-(v_i + w_j)}))
double fock_closed(const MeasureSpace& space, const Functional& f, const Functional& g) {
  double total = 0.0;
  for (const auto& a : f.exp_terms()) {
    for (const auto& b : g.exp_terms()) {
      double m = 0.0;
      for (Atom x = 0; x < space.size(); ++x) {
        m += space.weight(x) * -std::expm1(-(a.v[x] + b.v[x]));
      }
      total += a.coeff * b.coeff * std::exp(-m);
    }
  }
  return total;
}

}  // namespace

void validate_laplace(const SuiteConfig& config, const SuiteSpec& spec) {
  for (const auto& id : spec.functionals) {
    require_exp_family(config, spec, id);
  }
}

void run_laplace(SuiteRun& run) {
  const auto& cfg = run.config;
  for (const auto& id : run.spec.functionals) {
    const auto& nf = cfg.functional(id);
    const auto& space = cfg.space(nf.space);
    const double closed = *nf.functional.closed_form_mean(space);
    run.record(id + "/mc", "laplace_functional", mc_expectation(space, nf.functional, run.plan()),
               Estimate::exact(closed));
    run.record_exact(id + "/oracle", "laplace_functional",
                     oracle_expectation(space, nf.functional, cfg.budget(space, 0)), closed,
                     cfg.tolerances.exact_abs_tol);
  }
}

void validate_mecke(const SuiteConfig& config, const SuiteSpec& spec) {
  for (std::size_t i = 0; i < spec.cases.size(); ++i) {
    require_case_size(spec, i, 2, 2);
    const auto& c = spec.cases[i];
    require_same_space(spec, c[0], functional_space(config, c[0]), c[1], kernel_space(config, c[1]));
    const auto arity = config.kernel(c[1]).kernel.arity();
    if (arity != 1 && arity != 2) {
      suite_error(spec, fmt::format("kernel '{}' must have arity 1 or 2", c[1]));
    }
  }
}

void run_mecke(SuiteRun& run) {
  const auto& cfg = run.config;
  for (const auto& c : run.spec.cases) {
    const auto& nf = cfg.functional(c[0]);
    const auto& k = cfg.kernel(c[1]).kernel;
    const auto& space = cfg.space(nf.space);
    const auto& f = nf.functional;
    const std::string_view identity = k.arity() == 1 ? "mecke_univariate" : "mecke_bivariate";
    const std::string id = fmt::format("{}*{}", c[0], c[1]);
    const PatternFn lhs = [&](const PointPattern& chi) { return mecke_lhs(f, k, chi); };
    const PatternFn rhs = [&](const PointPattern& chi) { return mecke_rhs(space, f, k, chi); };
    run.record(id + "/mc", identity, mc_expectation(space, lhs, run.plan()),
               mc_expectation(space, rhs, run.plan()));
    const auto budget =
        cfg.budget(space, f.growth_degree() + static_cast<unsigned>(k.arity()));
    run.record_exact(id + "/oracle", identity, oracle_expectation(space, lhs, budget),
                     oracle_expectation(space, rhs, budget), cfg.tolerances.exact_abs_tol);
  }
}

void validate_factorial_moments(const SuiteConfig& config, const SuiteSpec& spec) {
  for (const auto& id : spec.kernels) {
    const auto arity = config.kernel(id).kernel.arity();
    if (arity < 1 || arity > 3) {
      suite_error(spec, fmt::format("kernel '{}' must have arity 1..3", id));
    }
  }
}

void run_factorial_moments(SuiteRun& run) {
  const auto& cfg = run.config;
  for (const auto& id : run.spec.kernels) {
    const auto& nk = cfg.kernel(id);
    const auto& space = cfg.space(nk.space);
    const PatternFn g = [&](const PointPattern& chi) { return factorial_apply(chi, nk.kernel); };
    const double exact = integrate(space, nk.kernel);
    run.record(id + "/mc", "factorial_moment", mc_expectation(space, g, run.plan()),
               Estimate::exact(exact));
    run.record_exact(id + "/oracle", "factorial_moment",
                     oracle_expectation(space, g, cfg.budget(space, static_cast<unsigned>(nk.kernel.arity()))),
                     exact, cfg.tolerances.exact_abs_tol);
  }
}

void validate_fock_isometry(const SuiteConfig& config, const SuiteSpec& spec) {
  for (std::size_t i = 0; i < spec.cases.size(); ++i) {
    require_case_size(spec, i, 2, 2);
    const auto& c = spec.cases[i];
    require_exp_family(config, spec, c[0]);
    require_exp_family(config, spec, c[1]);
    require_same_space(spec, c[0], functional_space(config, c[0]), c[1],
                       functional_space(config, c[1]));
  }
}

void run_fock_isometry(SuiteRun& run) {
  const auto& cfg = run.config;
  for (const auto& c : run.spec.cases) {
    const auto& f = cfg.functional(c[0]).functional;
    const auto& g = cfg.functional(c[1]).functional;
    const auto& space = cfg.space(cfg.functional(c[0]).space);
    const std::string id = fmt::format("{}*{}", c[0], c[1]);
    const double series = fock_series(space, f, g);
    const PatternFn fg = [&](const PointPattern& chi) { return f(chi) * g(chi); };
    run.record_exact(id + "/closed", "fock_isometry", series, fock_closed(space, f, g),
                     kFockClosedTol);
    run.record_exact(id + "/oracle", "fock_isometry", series,
                     oracle_expectation(space, fg, cfg.budget(space, 0)),
                     cfg.tolerances.exact_abs_tol);
    run.record(id + "/mc", "fock_isometry", Estimate::exact(series),
               mc_expectation(space, fg, run.plan()));
  }
}

}  // namespace poisson_chaos::verify
