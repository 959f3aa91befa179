#include "poisson_chaos/compare.hpp"

#include <algorithm>
#include <cmath>

namespace poisson_chaos {

Verdict compare_with_tolerance(const Estimate& lhs, const Estimate& rhs, double z, double abs_tol,
                               Relation relation) {
  Verdict v;
  v.se_combined = std::sqrt(lhs.se * lhs.se + rhs.se * rhs.se);
  v.tolerance = z * v.se_combined + abs_tol;
  switch (relation) {
    case Relation::equal:
      v.abs_diff = std::abs(lhs.mean - rhs.mean);
      break;
    case Relation::less_equal:
      v.abs_diff = std::max(0.0, lhs.mean - rhs.mean);
      break;
    case Relation::greater_equal:
      v.abs_diff = std::max(0.0, rhs.mean - lhs.mean);
      break;
  }
  // NaN never passes
  v.pass = verdict_from(v.abs_diff, v.tolerance);
  v.margin = v.tolerance - v.abs_diff;
  return v;
}

Verdict compare(const Estimate& lhs, const Estimate& rhs, const TolerancePolicy& policy,
                Relation relation) {
  const bool both_exact = lhs.is_exact() && rhs.is_exact();
  return compare_with_tolerance(lhs, rhs, policy.z,
                                both_exact ? policy.exact_abs_tol : policy.abs_tol, relation);
}

}  // namespace poisson_chaos
