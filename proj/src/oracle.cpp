#include "poisson_chaos/oracle.hpp"

#include <cmath>

#include <fmt/format.h>

#include "poisson_chaos/error.hpp"

namespace poisson_chaos {

double poisson_tail_moment(double mass, std::size_t k, unsigned degree) {
  if (mass == 0.0) {
    return 0.0;
  }
  // log-space pmf, summed upward until the terms are negligible past the mode
  double tail = 0.0;
  for (std::size_t n = k + 1;; ++n) {
    const double dn = static_cast<double>(n);
    const double log_term = -mass + dn * std::log(mass) - std::lgamma(dn + 1.0) +
                            static_cast<double>(degree) * std::log1p(dn);
    const double term = std::exp(log_term);
    tail += term;
    if (dn > mass + 1.0 && (term < 1e-300 || term < tail * 1e-17)) {
      break;
    }
  }
  return tail;
}

OracleBudget OracleBudget::for_mass(double total_mass, unsigned degree, double tail_tolerance,
                                    std::size_t max_states) {
  std::size_t k = 0;
  while (poisson_tail_moment(total_mass, k, degree) > tail_tolerance) {
    ++k;
  }
  return OracleBudget{k, poisson_tail_moment(total_mass, k, degree), degree, max_states};
}

OracleBudget OracleBudget::for_space(const MeasureSpace& space, unsigned degree,
                                     double tail_tolerance, std::size_t max_states) {
  return for_mass(space.total_mass(), degree, tail_tolerance, max_states);
}

PoissonEnumeration::PoissonEnumeration(const MeasureSpace& space, const OracleBudget& budget,
                                       double scale)
    : budget_(budget) {
  const std::size_t d = space.size();
  const std::size_t states = pattern_count(d, budget.max_total);
  if (states > budget.max_states) {
    throw BudgetError(fmt::format(
        "exact enumeration needs {} count vectors (d={}, K={}), above the limit of {}", states, d,
        budget.max_total, budget.max_states));
  }
  // per-atom pmf tables up to K
  std::vector<std::vector<double>> pmf(d, std::vector<double>(budget.max_total + 1, 0.0));
  for (Atom i = 0; i < d; ++i) {
    const double lambda = scale * space.weight(i);
    double p = std::exp(-lambda);
    for (std::size_t k = 0; k <= budget.max_total; ++k) {
      pmf[i][k] = p;
      p *= lambda / static_cast<double>(k + 1);
    }
  }
  patterns_.reserve(states);
  probs_.reserve(states);
  for_each_pattern(d, budget.max_total, [&](const PointPattern& chi) {
    double p = 1.0;
    for (Atom i = 0; i < d; ++i) {
      p *= pmf[i][chi.count(i)];
    }
    patterns_.push_back(chi);
    probs_.push_back(p);
  });
}

double PoissonEnumeration::expect(const PatternFn& g) const {
  double total = 0.0;
  for (std::size_t s = 0; s < patterns_.size(); ++s) {
    if (probs_[s] != 0.0) {
      total += probs_[s] * g(patterns_[s]);
    }
  }
  return total;
}

double oracle_expectation(const MeasureSpace& space, const PatternFn& g,
                          const OracleBudget& budget) {
  return PoissonEnumeration(space, budget).expect(g);
}

double oracle_expectation(const MeasureSpace& space, const Functional& g,
                          const OracleBudget& budget) {
  if (g.side() != space.size()) {
    throw ContractViolation("functional and space differ in atom count");
  }
  return oracle_expectation(
      space, [&](const PointPattern& chi) { return g(chi); }, budget);
}

}  // namespace poisson_chaos
