#include "poisson_chaos/semigroup.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/legendre.hpp>
#include <fmt/format.h>

#include "poisson_chaos/error.hpp"
#include "poisson_chaos/monte_carlo.hpp"

namespace poisson_chaos {

namespace {

void check_unit(double s) {
  if (!(s >= 0.0 && s <= 1.0)) {
    throw ContractViolation(fmt::format("semigroup parameter {} outside [0,1]", s));
  }
}

// Per-replicate uniforms that drive one coupled family {χ^{(s)} + ξ_{1-s}}_{s∈[0,1]}:
// a point is kept at level s iff its uniform is < s, and the refresh count at atom i
// is the Poisson((1-s)w_i) quantile of a single uniform.
struct CoupledDraws {
  std::vector<std::vector<double>> keep;
  std::vector<double> refresh;

  CoupledDraws(const PointPattern& chi, RngStream& rng) : keep(chi.size()), refresh(chi.size()) {
    for (Atom i = 0; i < chi.size(); ++i) {
      keep[i].resize(chi.count(i));
      for (auto& u : keep[i]) {
        u = rng.uniform();
      }
      refresh[i] = rng.uniform();
    }
  }

  PointPattern at(const MeasureSpace& space, double s) const {
    std::vector<Count> counts(space.size());
    for (Atom i = 0; i < space.size(); ++i) {
      Count kept = 0;
      for (double u : keep[i]) {
        kept += (u < s) ? 1 : 0;
      }
      counts[i] = kept + static_cast<Count>(poisson_quantile((1.0 - s) * space.weight(i), refresh[i]));
    }
    return PointPattern(std::move(counts));
  }
};

}  // namespace

QuadratureRule gauss_legendre_unit(std::size_t points) {
  if (points < 1 || points > 64) {
    throw ContractViolation(fmt::format("Gauss-Legendre rule with {} points is not supported", points));
  }
  const auto n = static_cast<unsigned>(points);
  // non-negative zeros of P_n; the rule is symmetric about 0
  const auto zeros = boost::math::legendre_p_zeros<double>(static_cast<int>(n));
  std::vector<double> x;
  for (double z : zeros) {
    x.push_back(z);
    if (z != 0.0) {
      x.push_back(-z);
    }
  }
  std::sort(x.begin(), x.end());
  QuadratureRule rule;
  for (double xi : x) {
    const double dp = boost::math::legendre_p_prime(static_cast<int>(n), xi);
    const double w = 2.0 / ((1.0 - xi * xi) * dp * dp);
    rule.nodes.push_back(0.5 * (xi + 1.0));
    rule.weights.push_back(0.5 * w);
  }
  return rule;
}

Estimate ou_semigroup_mc(const MeasureSpace& space, const Functional& f, double s,
                         const PointPattern& chi, const McPlan& inner) {
  check_unit(s);
  check_on_space(space, chi);
  return mc_estimate(
      [&](RngStream& rng) {
        const PointPattern kept = thin(chi, s, rng);
        const PointPattern fresh = sample_poisson(space, rng, 1.0 - s);
        return f(superpose(kept, fresh));
      },
      inner);
}

Functional semigroup_of_exponential(const MeasureSpace& space, const Functional& f, double s) {
  check_unit(s);
  auto terms = f.exp_terms();
  for (auto& t : terms) {
    double decay = 0.0;
    std::vector<double> vs(space.size());
    for (Atom i = 0; i < space.size(); ++i) {
      const double e = std::exp(-t.v[i]);
      decay += space.weight(i) * (1.0 - e);
      vs[i] = -std::log((1.0 - s) + s * e);
    }
    t.coeff *= std::exp(-(1.0 - s) * decay);
    t.v = Kernel::vector(std::move(vs));
  }
  return Functional::linear_combo(std::move(terms));
}

double semigroup_exponential(const MeasureSpace& space, const Functional& f, double s,
                             const PointPattern& chi) {
  return semigroup_of_exponential(space, f, s)(chi);
}

ExactSemigroup::ExactSemigroup(const MeasureSpace& space, PatternFn f, double s,
                               const OracleBudget& refresh)
    : space_(space), f_(std::move(f)), s_(s), refresh_(space, refresh, 1.0 - s) {
  check_unit(s);
}

double ExactSemigroup::refreshed(const PointPattern& kept) const {
  std::vector<Count> key(kept.counts().begin(), kept.counts().end());
  if (auto it = memo_.find(key); it != memo_.end()) {
    return it->second;
  }
  const double value =
      refresh_.expect([&](const PointPattern& xi) { return f_(superpose(kept, xi)); });
  memo_.emplace(std::move(key), value);
  return value;
}

double ExactSemigroup::operator()(const PointPattern& chi) const {
  check_on_space(space_, chi);
  const std::size_t d = chi.size();
  // binomial(count_i, s) pmf per atom
  std::vector<std::vector<double>> pmf(d);
  for (Atom i = 0; i < d; ++i) {
    const Count n = chi.count(i);
    pmf[i].resize(n + 1);
    for (Count k = 0; k <= n; ++k) {
      pmf[i][k] = std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)) *
                  std::pow(s_, k) * std::pow(1.0 - s_, n - k);
    }
  }
  double total = 0.0;
  std::vector<Count> kept(d, 0);
  while (true) {
    double p = 1.0;
    for (Atom i = 0; i < d; ++i) {
      p *= pmf[i][kept[i]];
    }
    if (p != 0.0) {
      total += p * refreshed(PointPattern(kept));
    }
    Atom i = 0;
    while (i < d && ++kept[i] > chi.count(i)) {
      kept[i] = 0;
      ++i;
    }
    if (i == d) {
      break;
    }
  }
  return total;
}

Estimate ou_inverse_quadrature(const MeasureSpace& space, const Functional& f,
                               const PointPattern& chi, const QuadraturePlan& plan,
                               std::optional<double> mean) {
  check_on_space(space, chi);
  if (!mean) {
    mean = f.closed_form_mean(space);
  }
  if (!mean) {
    throw PreconditionError(
        "inverse generator quadrature needs E F: supply a mean for an opaque functional");
  }
  const double ef = *mean;
  const QuadratureRule rule = gauss_legendre_unit(plan.nodes);
  return mc_estimate(
      [&](RngStream& rng) {
        const CoupledDraws draws(chi, rng);
        double total = 0.0;
        for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
          const double s = rule.nodes[j];
          total -= rule.weights[j] / s * (f(draws.at(space, s)) - ef);
        }
        return total;
      },
      plan.inner);
}

namespace {

void check_nested(const NestedPlan& plan) {
  plan.outer.validate();
  if (plan.inner_replicates < 1 || plan.t_nodes < 1) {
    throw ContractViolation("nested plan needs inner replicates and t nodes >= 1");
  }
}

}  // namespace

Estimate covariance_semigroup_mc(const MeasureSpace& space, const Functional& f,
                                 const Functional& g, const NestedPlan& plan) {
  check_nested(plan);
  const QuadratureRule rule = gauss_legendre_unit(plan.t_nodes);
  const std::size_t d = space.size();
  return mc_estimate(
      [&](RngStream& rng) {
        const PointPattern eta = sample_poisson(space, rng);
        std::vector<double> df(d);
        for (Atom x = 0; x < d; ++x) {
          df[x] = difference(f, x, eta);
        }
        double total = 0.0;
        for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
          const double t = rule.nodes[j];
          std::vector<double> pt(d, 0.0);
          for (std::size_t k = 0; k < plan.inner_replicates; ++k) {
            const PointPattern moved = superpose(thin(eta, t, rng), sample_poisson(space, rng, 1.0 - t));
            for (Atom x = 0; x < d; ++x) {
              pt[x] += difference(g, x, moved);
            }
          }
          double inner = 0.0;
          for (Atom x = 0; x < d; ++x) {
            inner += space.weight(x) * df[x] * pt[x] / static_cast<double>(plan.inner_replicates);
          }
          total += rule.weights[j] * inner;
        }
        return total;
      },
      plan.outer);
}

Estimate covariance_conditional_mc(const MeasureSpace& space, const Functional& f,
                                   const Functional& g, const NestedPlan& plan) {
  check_nested(plan);
  const QuadratureRule rule = gauss_legendre_unit(plan.t_nodes);
  const std::size_t d = space.size();
  const auto n_in = static_cast<double>(plan.inner_replicates);
  return mc_estimate(
      [&](RngStream& rng) {
        const PointPattern eta = sample_poisson(space, rng);
        double total = 0.0;
        for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
          const double t = rule.nodes[j];
          const PointPattern eta_t = thin(eta, t, rng);
          std::vector<double> a(d, 0.0);
          std::vector<double> b(d, 0.0);
          for (std::size_t k = 0; k < plan.inner_replicates; ++k) {
            const PointPattern pf = superpose(eta_t, sample_poisson(space, rng, 1.0 - t));
            const PointPattern pg = superpose(eta_t, sample_poisson(space, rng, 1.0 - t));
            for (Atom x = 0; x < d; ++x) {
              a[x] += difference(f, x, pf);
              b[x] += difference(g, x, pg);
            }
          }
          double inner = 0.0;
          for (Atom x = 0; x < d; ++x) {
            inner += space.weight(x) * (a[x] / n_in) * (b[x] / n_in);
          }
          total += rule.weights[j] * inner;
        }
        return total;
      },
      plan.outer);
}

}  // namespace poisson_chaos
