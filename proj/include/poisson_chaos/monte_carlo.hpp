#pragma once

#include "poisson_chaos/estimate.hpp"
#include "poisson_chaos/functional.hpp"
#include "poisson_chaos/measure_space.hpp"

namespace poisson_chaos {

/// Called once per replicate with that replicate's private stream.
using ReplicateFn = std::function<double(RngStream&)>;

/// Mean and SE of `sample` over plan.replicates independent streams. Results are
/// bit-identical across runs and worker counts. A non-finite replicate value raises
/// EvaluationError naming the replicate index.
Estimate mc_estimate(const ReplicateFn& sample, const McPlan& plan);

/// E G(η) by Monte Carlo over Poisson samples of `space`.
Estimate mc_expectation(const MeasureSpace& space, const PatternFn& g, const McPlan& plan);
Estimate mc_expectation(const MeasureSpace& space, const Functional& g, const McPlan& plan);

}  // namespace poisson_chaos
