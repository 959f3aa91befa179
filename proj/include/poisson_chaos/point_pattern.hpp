#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

#include "poisson_chaos/kernel.hpp"
#include "poisson_chaos/measure_space.hpp"
#include "poisson_chaos/rng.hpp"

namespace poisson_chaos {

using Count = std::uint32_t;

/// Counting measure on a discrete space: one multiplicity per atom.
class PointPattern {
 public:
  explicit PointPattern(std::size_t side) : counts_(side, 0) {}
  explicit PointPattern(std::vector<Count> counts);
  PointPattern(std::initializer_list<Count> counts) : PointPattern(std::vector<Count>(counts)) {}

  static PointPattern empty(const MeasureSpace& space) { return PointPattern(space.size()); }

  std::size_t size() const noexcept { return counts_.size(); }
  Count count(Atom x) const { return counts_.at(x); }
  std::span<const Count> counts() const noexcept { return counts_; }
  std::size_t total() const noexcept;

  /// χ + δ_x
  PointPattern plus(Atom x) const;
  /// χ - δ_x; requires count(x) >= 1.
  PointPattern minus(Atom x) const;
  void add(Atom x, Count k = 1);
  void remove(Atom x);

  friend bool operator==(const PointPattern&, const PointPattern&) = default;

 private:
  std::vector<Count> counts_;
};

void check_on_space(const MeasureSpace& space, const PointPattern& pattern);

/// Independent Poisson(scale·w_i) counts per atom; scale >= 0.
PointPattern sample_poisson(const MeasureSpace& space, RngStream& rng, double scale = 1.0);

/// Keeps each point independently with probability s.
PointPattern thin(const PointPattern& pattern, double s, RngStream& rng);

PointPattern superpose(const PointPattern& p, const PointPattern& q);

/// χ(v) = Σ_i counts_i·v(i) for an arity-1 kernel.
double linear_statistic(const PointPattern& pattern, const Kernel& v);

/// Number of ordered tuples of pairwise distinct points whose atom labels equal `atoms`.
double distinct_tuple_multiplicity(const PointPattern& pattern, std::span<const Atom> atoms);

/// Factorial-measure integral η^{(m)}(f), m = arity of f; η^{(0)}(c) = c.
double factorial_apply(const PointPattern& pattern, const Kernel& f);

/// e_k = (1/k!)·η^{(k)}(h^{⊗k}) for k = 0..N, the elementary symmetric polynomials
/// of h evaluated over the points of the pattern.
std::vector<double> factorial_product_series(const PointPattern& pattern, const Kernel& h);

/// Number of patterns on `side` atoms with total count <= max_total.
std::size_t pattern_count(std::size_t side, std::size_t max_total);

/// Visits all patterns with total <= max_total, ordered by total then lexicographically.
void for_each_pattern(std::size_t side, std::size_t max_total,
                      const std::function<void(const PointPattern&)>& fn);

}  // namespace poisson_chaos
