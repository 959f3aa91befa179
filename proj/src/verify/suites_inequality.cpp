#include <memory>

#include <fmt/format.h>

#include "poisson_chaos/monte_carlo.hpp"
#include "poisson_chaos/oracle.hpp"
#include "poisson_chaos/semigroup.hpp"
#include "suite_list.hpp"

namespace poisson_chaos::verify {

namespace {

constexpr double kPoincareEqualityTol = 1e-9;
constexpr std::size_t kMonotoneCheckTotal = 5;

struct Moments {
  double mean = 0.0;
  double second = 0.0;
  double energy = 0.0;  // E ∫ (D_x F)² μ(dx)
};

Moments poincare_moments(const SuiteConfig& cfg, const MeasureSpace& space, const Functional& f) {
  const PoissonEnumeration law(space, cfg.budget(space, 2 * f.growth_degree()));
  Moments m;
  m.mean = law.expect(f);
  m.second = law.expect([&](const PointPattern& chi) {
    const double v = f(chi);
    return v * v;
  });
  m.energy = law.expect([&](const PointPattern& chi) {
    double total = 0.0;
    for (Atom x = 0; x < space.size(); ++x) {
      const double dx = difference(f, x, chi);
      total += space.weight(x) * dx * dx;
    }
    return total;
  });
  return m;
}

bool is_linear_in_counts(const Functional& f) {
  return f.as_count_polynomial() != nullptr && f.growth_degree() <= 1;
}

std::vector<std::string> fkg_set(const SuiteConfig& cfg, const std::vector<std::string>& c) {
  if (c.size() > 2) {
    return {c.begin() + 2, c.end()};
  }
  return cfg.functional(c[0]).increasing_on.value_or(std::vector<std::string>{});
}

}  // namespace

void validate_covariance(const SuiteConfig& config, const SuiteSpec& spec) {
  for (std::size_t i = 0; i < spec.cases.size(); ++i) {
    require_case_size(spec, i, 2, 2);
    const auto& c = spec.cases[i];
    require_same_space(spec, c[0], functional_space(config, c[0]), c[1],
                       functional_space(config, c[1]));
  }
}

void run_covariance(SuiteRun& run) {
  const auto& cfg = run.config;
  for (const auto& c : run.spec.cases) {
    const auto& f = cfg.functional(c[0]).functional;
    const auto& g = cfg.functional(c[1]).functional;
    const auto& space = cfg.space(cfg.functional(c[0]).space);
    const PoissonEnumeration law(space, cfg.budget(space, f.growth_degree() + g.growth_degree()));
    const double efg = law.expect([&](const PointPattern& chi) { return f(chi) * g(chi); });
    const double efeg = law.expect(f) * law.expect(g);
    const std::string id = fmt::format("{}*{}", c[0], c[1]);
    auto nested = [&] {
      return NestedPlan{run.plan(), cfg.nested.inner_replicates, cfg.nested.t_nodes};
    };
    const Estimate cov = Estimate::exact(efg - efeg);
    run.record(id + "/semigroup", "covariance_semigroup", cov,
               covariance_semigroup_mc(space, f, g, nested()));
    run.record(id + "/conditional", "covariance_conditional", cov,
               covariance_conditional_mc(space, f, g, nested()));
  }
}

void validate_poincare(const SuiteConfig& config, const SuiteSpec& spec) {
  for (std::size_t i = 0; i < spec.cases.size(); ++i) {
    require_case_size(spec, i, 1, 1);
    config.functional(spec.cases[i][0]);
  }
}

void run_poincare(SuiteRun& run) {
  const auto& cfg = run.config;
  const double tol = cfg.tolerances.exact_abs_tol;
  for (const auto& id : run.spec.functionals) {
    const auto& nf = cfg.functional(id);
    const auto& space = cfg.space(nf.space);
    const Moments m = poincare_moments(cfg, space, nf.functional);
    const double var = m.second - m.mean * m.mean;
    run.record_exact(id, "poincare", var, m.energy, tol, Relation::less_equal);
    if (is_linear_in_counts(nf.functional)) {
      run.record_exact(id + "/equality", "poincare_equality", var, m.energy, kPoincareEqualityTol);
    }
  }
  for (const auto& c : run.spec.cases) {
    const auto& nf = cfg.functional(c[0]);
    const auto& space = cfg.space(nf.space);
    const Moments m = poincare_moments(cfg, space, nf.functional);
    run.record_exact(c[0] + "/l1_extension", "poincare_l1", m.second,
                     m.mean * m.mean + m.energy, tol, Relation::less_equal);
  }
}

void validate_fkg(const SuiteConfig& config, const SuiteSpec& spec) {
  for (std::size_t i = 0; i < spec.cases.size(); ++i) {
    const auto& c = spec.cases[i];
    if (c.size() < 2) {
      suite_error(spec, fmt::format("case {} needs two functionals", i));
    }
    const auto& space_id = functional_space(config, c[0]);
    require_same_space(spec, c[0], space_id, c[1], functional_space(config, c[1]));
    const auto& space = config.space(space_id);
    if (c.size() == 2 && !config.functional(c[0]).increasing_on) {
      suite_error(spec, fmt::format("case {} names no increasing set and '{}' declares none", i, c[0]));
    }
    const auto set = fkg_set(config, c);
    auto mask = std::make_unique<bool[]>(space.size());
    for (const auto& a : set) {
      const auto x = space.find(a);
      if (!x) {
        suite_error(spec, fmt::format("atom '{}' not in space '{}'", a, space_id));
      }
      mask[*x] = true;
    }
    for (std::size_t j = 0; j < 2; ++j) {
      if (!is_monotone(config.functional(c[j]).functional,
                       std::span<const bool>(mask.get(), space.size()), kMonotoneCheckTotal)) {
        suite_error(spec, fmt::format("'{}' is not increasing on the given set and decreasing off it",
                                      c[j]));
      }
    }
  }
}

void run_fkg(SuiteRun& run) {
  const auto& cfg = run.config;
  for (const auto& c : run.spec.cases) {
    const auto& f = cfg.functional(c[0]).functional;
    const auto& g = cfg.functional(c[1]).functional;
    const auto& space = cfg.space(cfg.functional(c[0]).space);
    const PoissonEnumeration law(space, cfg.budget(space, f.growth_degree() + g.growth_degree()));
    const PatternFn fg = [&](const PointPattern& chi) { return f(chi) * g(chi); };
    const double efeg = law.expect(f) * law.expect(g);
    const std::string id = fmt::format("{}*{}", c[0], c[1]);
    run.record(id + "/mc", "fkg", mc_expectation(space, fg, run.plan()), Estimate::exact(efeg),
               Relation::greater_equal);
    run.record_exact(id + "/oracle", "fkg", law.expect(fg), efeg, cfg.tolerances.exact_abs_tol,
                     Relation::greater_equal);
  }
}

}  // namespace poisson_chaos::verify
