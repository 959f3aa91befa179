#pragma once

#include "poisson_chaos/estimate.hpp"

namespace poisson_chaos {

/// Pass rule: |lhs - rhs| <= z·sqrt(se_l² + se_r²) + abs_tol, with exact_abs_tol
/// replacing abs_tol when both sides are exact.
struct TolerancePolicy {
  double z = 4.0;
  double abs_tol = 1e-6;
  double exact_abs_tol = 1e-9;
};

/// equal: two-sided. less_equal: lhs <= rhs. greater_equal: lhs >= rhs.
enum class Relation { equal, less_equal, greater_equal };

/// abs_diff is |lhs - rhs| for equalities and the one-sided violation (0 when the
/// inequality holds) for inequalities; pass == (abs_diff <= tolerance) in both cases.
struct Verdict {
  bool pass = false;
  double abs_diff = 0.0;
  double tolerance = 0.0;
  double se_combined = 0.0;
  double margin = 0.0;
};

Verdict compare(const Estimate& lhs, const Estimate& rhs, const TolerancePolicy& policy = {},
                Relation relation = Relation::equal);

/// Same rule with an explicit absolute tolerance instead of the policy's defaults.
Verdict compare_with_tolerance(const Estimate& lhs, const Estimate& rhs, double z, double abs_tol,
                               Relation relation = Relation::equal);

/// The verdict implied by a stored (abs_diff, tolerance) pair.
inline bool verdict_from(double abs_diff, double tolerance) { return abs_diff <= tolerance; }

}  // namespace poisson_chaos
