#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "poisson_chaos/estimate.hpp"
#include "poisson_chaos/functional.hpp"
#include "poisson_chaos/measure_space.hpp"
#include "poisson_chaos/oracle.hpp"
#include "poisson_chaos/point_pattern.hpp"

namespace poisson_chaos {

/// Gauss-Legendre rule mapped to (0, 1).
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
QuadratureRule gauss_legendre_unit(std::size_t points);

/// Inner-MC estimate of P_sF(χ) = E[f(χ^{(s)} + ξ)], ξ ~ Poisson((1-s)μ) independent of the thinning.
Estimate ou_semigroup_mc(const MeasureSpace& space, const Functional& f, double s,
                         const PointPattern& chi, const McPlan& inner);

/// P_sF for exponential-family F as a linear combination of exponentials:
/// P_s e^{-χ(v)} = exp[-(1-s)μ(1-e^{-v})]·exp[-χ(v_s)], v_s = -log((1-s) + s·e^{-v}).
Functional semigroup_of_exponential(const MeasureSpace& space, const Functional& f, double s);

/// P_sF(χ) from the closed form above.
double semigroup_exponential(const MeasureSpace& space, const Functional& f, double s,
                             const PointPattern& chi);

/// Exact P_sF(χ): binomial sum over thinned sub-patterns, each refreshed by an exact
/// enumeration of Poisson((1-s)μ). Memoizes the refresh expectations; not for concurrent use.
class ExactSemigroup {
 public:
  ExactSemigroup(const MeasureSpace& space, PatternFn f, double s, const OracleBudget& refresh);

  double operator()(const PointPattern& chi) const;
  double s() const noexcept { return s_; }

 private:
  double refreshed(const PointPattern& kept) const;

  MeasureSpace space_;
  PatternFn f_;
  double s_;
  PoissonEnumeration refresh_;
  mutable std::map<std::vector<Count>, double> memo_;
};

inline constexpr std::size_t kDefaultQuadratureNodes = 16;
inline constexpr std::size_t kDefaultInnerReplicates = 64;

struct QuadraturePlan {
  std::size_t nodes = kDefaultQuadratureNodes;
  McPlan inner;
};

/// L⁻¹F(χ) ≈ -Σ_j w_j s_j⁻¹ P_{s_j}(F - EF)(χ) over a Gauss-Legendre rule on (0,1).
/// Each inner replicate reuses one set of uniforms for every node (monotone coupling of the
/// thinnings and refresh fields), so the replicate values are exact quadratures of one
/// coupled path and the SE covers the whole sum. EF comes from `mean` or the closed form;
/// an opaque F without a mean raises PreconditionError.
Estimate ou_inverse_quadrature(const MeasureSpace& space, const Functional& f,
                               const PointPattern& chi, const QuadraturePlan& plan,
                               std::optional<double> mean = std::nullopt);

struct NestedPlan {
  McPlan outer;
  std::size_t inner_replicates = kDefaultInnerReplicates;
  std::size_t t_nodes = kDefaultQuadratureNodes;
};

/// E ∫∫_0^1 (D_xF)(P_t D_xG) dt μ(dx), P_t by inner MC around each outer η.
Estimate covariance_semigroup_mc(const MeasureSpace& space, const Functional& f,
                                 const Functional& g, const NestedPlan& plan);

/// E ∫∫_0^1 E[D_xF | η^{(t)}]·E[D_xG | η^{(t)}] dt μ(dx). The two conditional means use
/// independent inner samples, so their product is unbiased.
Estimate covariance_conditional_mc(const MeasureSpace& space, const Functional& f,
                                   const Functional& g, const NestedPlan& plan);

}  // namespace poisson_chaos
