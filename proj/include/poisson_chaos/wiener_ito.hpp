#pragma once

#include <array>
#include <cstddef>
#include <optional>

#include "poisson_chaos/chaos_vector.hpp"
#include "poisson_chaos/functional.hpp"
#include "poisson_chaos/kernel.hpp"
#include "poisson_chaos/measure_space.hpp"
#include "poisson_chaos/point_pattern.hpp"

namespace poisson_chaos {

inline constexpr std::size_t kMaxIntegralOrder = 4;

/// Evaluation context for pathwise multiple integrals on one pattern. Caches the
/// factorial-measure weights and the compensated weights per arity; not for
/// concurrent use.
class WiState {
 public:
  WiState(MeasureSpace space, PointPattern pattern);

  const MeasureSpace& space() const noexcept { return space_; }
  const PointPattern& pattern() const noexcept { return pattern_; }
  void set_pattern(PointPattern pattern);

  /// W_k(a_1..a_k): number of ordered distinct-point k-tuples sitting on (a_1..a_k).
  const Kernel& factorial_weights(std::size_t k) const;

  /// M_n(a) = Σ_{J⊂[n]} (-1)^{n-|J|} W_{|J|}(a_J) Π_{j∉J} w(a_j), so that I_n(g) = Σ_a g(a)·M_n(a).
  const Kernel& compensated_weights(std::size_t n) const;

 private:
  MeasureSpace space_;
  PointPattern pattern_;
  mutable std::array<std::optional<Kernel>, kMaxIntegralOrder + 1> factorial_;
  mutable std::array<std::optional<Kernel>, kMaxIntegralOrder + 1> compensated_;
};

/// Pathwise I_n(g), n = arity of g (<= 4); I_0(c) = c.
double wiener_ito(const WiState& state, const Kernel& g);

/// Σ_{n=0}^{N} I_n(f_n) on the state's pattern.
double chaos_reconstruct(const WiState& state, const ChaosVector& cv);

/// Σ_{k=0}^{N} (1/k!)·η^{(k)}((e^{-v}-1)^{⊗k}) with N = η(X).
double chaos_finite_sum(const WiState& state, const Kernel& v);

/// Σ_r r!·C(p,r)·C(q,r)·Σ_l C(r,l)·I_{p+q-r-l}(f ∗ˡᵣ g) for symmetric f, g.
double product_formula_rhs(const Kernel& f, const Kernel& g, const WiState& state);

/// Chaos coefficients up to `order` whose reconstruction matches `values` on every
/// pattern with total <= max_total (least squares; the system must have full column rank).
ChaosVector recover_chaos(const MeasureSpace& space, const PatternFn& values, std::size_t order,
                          std::size_t max_total);

}  // namespace poisson_chaos
