#include <algorithm>
#include <array>
#include <cmath>
#include <memory>

#include <fmt/format.h>

#include "poisson_chaos/chaos_vector.hpp"
#include "poisson_chaos/malliavin.hpp"
#include "poisson_chaos/monte_carlo.hpp"
#include "poisson_chaos/oracle.hpp"
#include "poisson_chaos/semigroup.hpp"
#include "poisson_chaos/wiener_ito.hpp"
#include "suite_list.hpp"

namespace poisson_chaos::verify {

namespace {

constexpr double kDifferenceTol = 1e-12;
constexpr double kDerivativeChaosTol = 1e-9;
constexpr double kDeltaDChaosTol = 1e-12;
constexpr double kPathwiseTol = 1e-9;
constexpr double kGeneratorL2Tol = 1e-6;
constexpr double kInverseTol = 1e-12;
constexpr double kCommutationTol = 1e-10;
constexpr double kCommutationMeanTol = 1e-8;
constexpr double kMeanTol = 1e-8;
constexpr double kContractivityTol = 1e-9;
constexpr double kSemigroupLawTol = 1e-15;
constexpr double kQuadratureTol = 1e-4;
constexpr std::size_t kPathwiseCutoff = 5;
constexpr std::size_t kCommutationCutoff = 3;
constexpr std::size_t kThinningCutoff = 2;
constexpr std::array<double, 5> kSGrid{0.0, 0.25, 0.5, 0.75, 1.0};

std::size_t pathwise_cutoff(const SuiteConfig& cfg) {
  return std::min(cfg.pattern_cutoff, kPathwiseCutoff);
}

// chaos coefficients up to the order cap: closed form for the exponential family, oracle
// enumeration for count polynomials (whose expansion stops at the polynomial degree)
ChaosVector chaos_of(const SuiteConfig& cfg, const MeasureSpace& space, const Functional& f) {
  if (f.is_exponential_family()) {
    return chaos_of_exponential(space, f, kMaxChaosOrder);
  }
  const auto order = std::min<std::size_t>(std::max(f.growth_degree(), 1u), kMaxChaosOrder);
  return chaos_from_oracle(space, f, order,
                           cfg.budget(space, 2 * static_cast<unsigned>(order)));
}

IntegrandField field_of(const SuiteConfig& cfg, const std::vector<std::string>& c,
                        std::size_t kernel_pos) {
  const Kernel& k = cfg.kernel(c[kernel_pos]).kernel;
  if (c.size() > kernel_pos + 1) {
    return IntegrandField::product(k, cfg.functional(c[kernel_pos + 1]).functional);
  }
  return IntegrandField::deterministic(k);
}

unsigned field_degree(const SuiteConfig& cfg, const std::vector<std::string>& c,
                      std::size_t kernel_pos) {
  return c.size() > kernel_pos + 1 ? cfg.functional(c[kernel_pos + 1]).functional.growth_degree()
                                   : 0u;
}

std::string case_name(const std::vector<std::string>& c) {
  std::string s;
  for (std::size_t i = 0; i < c.size(); ++i) {
    s += (i ? "*" : "") + c[i];
  }
  return s;
}

void validate_field_case(const SuiteConfig& cfg, const SuiteSpec& spec, std::size_t i,
                         std::size_t kernel_pos) {
  const auto& c = spec.cases[i];
  const auto& kspace = kernel_space(cfg, c[kernel_pos]);
  if (cfg.kernel(c[kernel_pos]).kernel.arity() != 1) {
    suite_error(spec, fmt::format("kernel '{}' must have arity 1", c[kernel_pos]));
  }
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (j != kernel_pos) {
      require_same_space(spec, c[kernel_pos], kspace, c[j], functional_space(cfg, c[j]));
    }
  }
}

void validate_functional_list(const SuiteConfig& cfg, const SuiteSpec& spec, bool exp_only) {
  for (const auto& id : spec.functionals) {
    const auto& f = cfg.functional(id).functional;
    if (exp_only) {
      require_exp_family(cfg, spec, id);
    } else if (!f.is_exponential_family() && f.growth_degree() > kMaxChaosOrder) {
      suite_error(spec, fmt::format("functional '{}' has degree above {}", id, kMaxChaosOrder));
    }
  }
}

void all_tuples(std::size_t side, std::size_t n, const std::function<void(std::span<const Atom>)>& fn) {
  for_each_tuple(side, n, [&](std::span<const Atom> xs, std::size_t) { fn(xs); });
}

}  // namespace

void validate_malliavin_derivative(const SuiteConfig& config, const SuiteSpec& spec) {
  validate_functional_list(config, spec, true);
}

void run_malliavin_derivative(SuiteRun& run) {
  const auto& cfg = run.config;
  for (const auto& id : run.spec.functionals) {
    const auto& nf = cfg.functional(id);
    const auto& space = cfg.space(nf.space);
    const Functional& f = nf.functional;
    const auto terms = f.exp_terms();
    const auto cv = chaos_of_exponential(space, f, kMaxChaosOrder);
    std::vector<ChaosVector> dcv;
    for (Atom x = 0; x < space.size(); ++x) {
      dcv.push_back(malliavin_chaos(cv, x));
    }
    Worst closed;
    Worst chaos;
    for_each_pattern(space.size(), pathwise_cutoff(cfg), [&](const PointPattern& chi) {
      const WiState here(space, chi);
      const double r = chaos_reconstruct(here, cv);
      for (Atom x = 0; x < space.size(); ++x) {
        double factorized = 0.0;
        for (const auto& t : terms) {
          factorized += t.coeff * std::expm1(-t.v[x]) * std::exp(-linear_statistic(chi, t.v));
        }
        closed.see(difference(f, x, chi), factorized);
        chaos.see(chaos_reconstruct(here, dcv[x]),
                  chaos_reconstruct(WiState(space, chi.plus(x)), cv) - r);
      }
    });
    run.record_exact(id + "/difference", "difference_exponential", closed.lhs, closed.rhs,
                     kDifferenceTol);
    run.record_exact(id + "/chaos", "malliavin_derivative_chaos", chaos.lhs, chaos.rhs,
                     kDerivativeChaosTol);
  }
}

void validate_duality(const SuiteConfig& config, const SuiteSpec& spec) {
  for (std::size_t i = 0; i < spec.cases.size(); ++i) {
    require_case_size(spec, i, 2, 3);
    validate_field_case(config, spec, i, 1);
  }
}

void run_duality(SuiteRun& run) {
  const auto& cfg = run.config;
  for (const auto& c : run.spec.cases) {
    const auto& nf = cfg.functional(c[0]);
    const auto& space = cfg.space(nf.space);
    const Functional& f = nf.functional;
    const IntegrandField h = field_of(cfg, c, 1);
    const auto budget = cfg.budget(space, f.growth_degree() + field_degree(cfg, c, 1) + 1);
    const PoissonEnumeration law(space, budget);
    const double lhs = law.expect([&](const PointPattern& chi) {
      double total = 0.0;
      for (Atom x = 0; x < space.size(); ++x) {
        total += space.weight(x) * difference(f, x, chi) * h(chi, x);
      }
      return total;
    });
    const double rhs = law.expect(
        [&](const PointPattern& chi) { return f(chi) * skorohod_pathwise(space, h, chi); });
    run.record_exact(case_name(c), "duality", lhs, rhs, cfg.tolerances.exact_abs_tol);
  }
}

void validate_skorohod_isometry(const SuiteConfig& config, const SuiteSpec& spec) {
  for (std::size_t i = 0; i < spec.cases.size(); ++i) {
    require_case_size(spec, i, 1, 2);
    validate_field_case(config, spec, i, 0);
  }
}

void run_skorohod_isometry(SuiteRun& run) {
  const auto& cfg = run.config;
  for (const auto& c : run.spec.cases) {
    const auto& space = cfg.space(kernel_space(cfg, c[0]));
    const std::size_t d = space.size();
    const IntegrandField h = field_of(cfg, c, 0);
    const std::string id = case_name(c);
    const PatternFn delta = [&](const PointPattern& chi) { return skorohod_pathwise(space, h, chi); };

    const PoissonEnumeration law(space, cfg.budget(space, 2 * (field_degree(cfg, c, 0) + 1)));
    const double lhs = law.expect([&](const PointPattern& chi) {
      const double v = delta(chi);
      return v * v;
    });
    const double rhs = law.expect([&](const PointPattern& chi) {
      double total = 0.0;
      for (Atom x = 0; x < d; ++x) {
        const double hx = h(chi, x);
        total += space.weight(x) * hx * hx;
        for (Atom y = 0; y < d; ++y) {
          const double dy_hx = h(chi.plus(y), x) - hx;
          const double dx_hy = h(chi.plus(x), y) - h(chi, y);
          total += space.weight(x) * space.weight(y) * dy_hx * dx_hy;
        }
      }
      return total;
    });
    run.record_exact(id + "/oracle", "skorohod_isometry", lhs, rhs, cfg.tolerances.exact_abs_tol);
    run.record(id + "/mean", "skorohod_mean_zero", mc_expectation(space, delta, run.plan()),
               Estimate::exact(0.0));

    if (c.size() == 1) {
      const auto chaos = skorohod_chaos(chaos_field(space, h, 0, cfg.budget(space, 0)));
      Worst w;
      for_each_pattern(d, cfg.pattern_cutoff, [&](const PointPattern& chi) {
        w.see(chaos_reconstruct(WiState(space, chi), chaos), delta(chi));
      });
      run.record_exact(id + "/chaos", "skorohod_chaos_pathwise", w.lhs, w.rhs, kPathwiseTol);
    }
  }
}

void validate_ou_operators(const SuiteConfig& config, const SuiteSpec& spec) {
  validate_functional_list(config, spec, false);
}

void run_ou_operators(SuiteRun& run) {
  const auto& cfg = run.config;
  for (const auto& id : run.spec.functionals) {
    const auto& nf = cfg.functional(id);
    const auto& space = cfg.space(nf.space);
    const Functional& f = nf.functional;
    const auto cv = chaos_of(cfg, space, f);

    const Worst dd = chaos_worst(skorohod_chaos(derivative_field(cv)), ou_chaos(cv).scaled(-1.0));
    run.record_exact(id + "/delta_d", "ou_delta_d", dd.lhs, dd.rhs, kDeltaDChaosTol);

    const IntegrandField df = IntegrandField::derivative_of(f);
    Worst path;
    for_each_pattern(space.size(), pathwise_cutoff(cfg), [&](const PointPattern& chi) {
      path.see(skorohod_pathwise(space, df, chi), -ou_generator_pathwise(space, f, chi));
    });
    run.record_exact(id + "/delta_d_pathwise", "ou_delta_d_pathwise", path.lhs, path.rhs,
                     kPathwiseTol);

    const auto lcv = ou_chaos(cv);
    const unsigned degree = 2 * std::max<unsigned>(f.growth_degree(), kMaxChaosOrder);
    const double l2 = oracle_expectation(
        space,
        [&](const PointPattern& chi) {
          const double r = ou_generator_pathwise(space, f, chi) - chaos_reconstruct(WiState(space, chi), lcv);
          return r * r;
        },
        cfg.budget(space, degree));
    run.record_exact(id + "/generator_l2", "ou_generator_chaos", l2, 0.0, kGeneratorL2Tol,
                     Relation::less_equal);

    auto coeffs = cv.coefficients();
    coeffs[0] = Kernel::scalar(0.0);
    const ChaosVector centered(cv.side(), std::move(coeffs));
    const Worst inv = chaos_worst(ou_chaos(ou_inverse_chaos(centered)), centered);
    run.record_exact(id + "/inverse", "ou_inverse", inv.lhs, inv.rhs, kInverseTol);

    run.record(id + "/generator_mean", "ou_generator_mean_zero",
               mc_expectation(
                   space, [&](const PointPattern& chi) { return ou_generator_pathwise(space, f, chi); },
                   run.plan()),
               Estimate::exact(0.0));
  }
}

void validate_mehler(const SuiteConfig& config, const SuiteSpec& spec) {
  validate_functional_list(config, spec, false);
}

namespace {

void mehler_exponential(SuiteRun& run, const std::string& id, const MeasureSpace& space,
                        const Functional& f) {
  const auto& cfg = run.config;
  const std::size_t d = space.size();
  const auto terms = f.exp_terms();
  const double mean = *f.closed_form_mean(space);
  const PoissonEnumeration law(space, cfg.budget(space, 0));
  const double second = law.expect([&](const PointPattern& chi) {
    const double v = f(chi);
    return v * v;
  });

  for (double s : kSGrid) {
    const std::string sl = fmt_param(s);
    for_each_pattern(d, kThinningCutoff, [&](const PointPattern& chi) {
      run.record(fmt::format("{}/thinning/s={}/{}", id, sl, pattern_label(chi)), "semigroup_thinning",
                 ou_semigroup_mc(space, f, s, chi, run.plan()),
                 Estimate::exact(semigroup_exponential(space, f, s, chi)));
    });

    const Functional ps = semigroup_of_exponential(space, f, s);
    std::vector<Functional> ps_terms;
    for (const auto& t : terms) {
      ps_terms.push_back(semigroup_of_exponential(space, Functional::exponential(t.v), s));
    }
    for (std::size_t n = 1; n <= 2; ++n) {
      Worst w;
      for_each_pattern(d, kCommutationCutoff, [&](const PointPattern& chi) {
        all_tuples(d, n, [&](std::span<const Atom> xs) {
          double rhs = 0.0;
          for (std::size_t i = 0; i < terms.size(); ++i) {
            double factor = terms[i].coeff;
            for (Atom x : xs) {
              factor *= std::expm1(-terms[i].v[x]);
            }
            rhs += factor * ps_terms[i](chi);
          }
          w.see(iterated_difference(ps, xs, chi), std::pow(s, static_cast<double>(n)) * rhs);
        });
      });
      run.record_exact(fmt::format("{}/commutation/n={}/s={}", id, n, sl), "semigroup_commutation",
                       w.lhs, w.rhs, kCommutationTol);
    }

    run.record_exact(fmt::format("{}/mean/s={}", id, sl), "semigroup_mean", law.expect(ps), mean,
                     kMeanTol);
    run.record_exact(fmt::format("{}/contractivity/s={}", id, sl), "semigroup_contractivity",
                     law.expect([&](const PointPattern& chi) {
                       const double v = ps(chi);
                       return v * v;
                     }),
                     second, kContractivityTol, Relation::less_equal);
  }

  const auto cv = chaos_of_exponential(space, f, kMaxChaosOrder);
  Worst law_gap;
  for (double s : kSGrid) {
    for (double t : kSGrid) {
      const Worst w = chaos_worst(semigroup_chaos(semigroup_chaos(cv, s), t), semigroup_chaos(cv, s * t));
      law_gap.see(w.lhs, w.rhs);
    }
  }
  run.record_exact(id + "/semigroup_law", "semigroup_law", law_gap.lhs, law_gap.rhs,
                   kSemigroupLawTol);

  const auto inverse = ou_inverse_chaos(cv);
  const QuadraturePlan qp{cfg.nested.quadrature_nodes, McPlan{}};
  for_each_pattern(d, kThinningCutoff, [&](const PointPattern& chi) {
    const QuadraturePlan plan{qp.nodes, run.plan()};
    run.record_slack(fmt::format("{}/inverse_quadrature/{}", id, pattern_label(chi)),
                     "inverse_ou_quadrature", ou_inverse_quadrature(space, f, chi, plan),
                     Estimate::exact(chaos_reconstruct(WiState(space, chi), inverse)),
                     kQuadratureTol);
  });
}

void mehler_polynomial(SuiteRun& run, const std::string& id, const MeasureSpace& space,
                       const Functional& f) {
  const auto& cfg = run.config;
  const std::size_t d = space.size();
  const unsigned deg = f.growth_degree();
  const PoissonEnumeration law(space, cfg.budget(space, 2 * deg));
  const double mean = law.expect(f);
  const double second = law.expect([&](const PointPattern& chi) {
    const double v = f(chi);
    return v * v;
  });
  const PatternFn fn = [&](const PointPattern& chi) { return f(chi); };
  for (double s : kSGrid) {
    const std::string sl = fmt_param(s);
    const auto exact = std::make_shared<ExactSemigroup>(
        space, fn, s, cfg.budget_for_mass((1.0 - s) * space.total_mass(), 2 * deg));
    const PatternFn ps = [exact](const PointPattern& chi) { return (*exact)(chi); };
    const Functional ps_f = Functional::opaque(d, ps);

    run.record_exact(fmt::format("{}/mean/s={}", id, sl), "semigroup_mean", law.expect(ps), mean,
                     kMeanTol);
    run.record_exact(fmt::format("{}/contractivity/s={}", id, sl), "semigroup_contractivity",
                     law.expect([&](const PointPattern& chi) {
                       const double v = ps(chi);
                       return v * v;
                     }),
                     second, kContractivityTol, Relation::less_equal);
    for (std::size_t n = 1; n <= 2; ++n) {
      Worst w;
      all_tuples(d, n, [&](std::span<const Atom> xs) {
        const double lhs = law.expect(
            [&](const PointPattern& chi) { return iterated_difference(ps_f, xs, chi); });
        const double rhs =
            law.expect([&](const PointPattern& chi) { return iterated_difference(f, xs, chi); });
        w.see(lhs, std::pow(s, static_cast<double>(n)) * rhs);
      });
      run.record_exact(fmt::format("{}/commutation_mean/n={}/s={}", id, n, sl),
                       "semigroup_commutation", w.lhs, w.rhs, kCommutationMeanTol);
    }
  }
}

}  // namespace

void run_mehler(SuiteRun& run) {
  const auto& cfg = run.config;
  for (const auto& id : run.spec.functionals) {
    const auto& nf = cfg.functional(id);
    const auto& space = cfg.space(nf.space);
    if (nf.functional.is_exponential_family()) {
      mehler_exponential(run, id, space, nf.functional);
    } else {
      mehler_polynomial(run, id, space, nf.functional);
    }
  }
}

}  // namespace poisson_chaos::verify
