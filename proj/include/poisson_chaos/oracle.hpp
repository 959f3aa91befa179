#pragma once

#include <cstddef>
#include <vector>

#include "poisson_chaos/functional.hpp"
#include "poisson_chaos/measure_space.hpp"
#include "poisson_chaos/point_pattern.hpp"

namespace poisson_chaos {

inline constexpr std::size_t kDefaultMaxOracleStates = 5'000'000;
inline constexpr double kDefaultTailTolerance = 1e-10;

/// Truncation of the exact Poisson enumeration to patterns with total count <= max_total.
/// tail_bound is E[(1+N)^degree · 1{N > max_total}] for N ~ Poisson(μ(X)): the truncation
/// error for any G with |G(χ)| <= (1+χ(X))^degree.
struct OracleBudget {
  std::size_t max_total = 0;
  double tail_bound = 0.0;
  unsigned degree = 0;
  std::size_t max_states = kDefaultMaxOracleStates;

  /// Smallest max_total whose tail bound is <= tail_tolerance.
  static OracleBudget for_space(const MeasureSpace& space, unsigned degree = 0,
                                double tail_tolerance = kDefaultTailTolerance,
                                std::size_t max_states = kDefaultMaxOracleStates);
  static OracleBudget for_mass(double total_mass, unsigned degree = 0,
                               double tail_tolerance = kDefaultTailTolerance,
                               std::size_t max_states = kDefaultMaxOracleStates);
};

/// E[(1+N)^degree · 1{N > k}] for N ~ Poisson(mass).
double poisson_tail_moment(double mass, std::size_t k, unsigned degree);

/// The truncated Poisson law on a discrete space: every pattern with total <= K
/// together with its probability Π_i Poisson(w_i)(k_i).
class PoissonEnumeration {
 public:
  /// `scale` multiplies every atom weight (scale 0 gives the point mass at the empty pattern).
  PoissonEnumeration(const MeasureSpace& space, const OracleBudget& budget, double scale = 1.0);

  std::size_t size() const noexcept { return patterns_.size(); }
  const std::vector<PointPattern>& patterns() const noexcept { return patterns_; }
  const std::vector<double>& probabilities() const noexcept { return probs_; }
  const OracleBudget& budget() const noexcept { return budget_; }

  double expect(const PatternFn& g) const;

 private:
  OracleBudget budget_;
  std::vector<PointPattern> patterns_;
  std::vector<double> probs_;
};

/// E G(η) by exact enumeration over count vectors with total <= budget.max_total.
double oracle_expectation(const MeasureSpace& space, const PatternFn& g, const OracleBudget& budget);
double oracle_expectation(const MeasureSpace& space, const Functional& g,
                          const OracleBudget& budget);

}  // namespace poisson_chaos
