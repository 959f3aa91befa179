#include "poisson_chaos/monte_carlo.hpp"

#include <cmath>

#include <fmt/format.h>

#include "poisson_chaos/error.hpp"
#include "poisson_chaos/parallel.hpp"

namespace poisson_chaos {

void McPlan::validate() const {
  if (replicates < 1) {
    throw ContractViolation("Monte Carlo plan needs at least one replicate");
  }
}

Estimate mc_estimate(const ReplicateFn& sample, const McPlan& plan) {
  plan.validate();
  const auto acc =
      deterministic_reduce(plan.replicates, Accumulator{}, [&](std::size_t r, Accumulator& a) {
        RngStream rng = plan.stream(r);
        const double x = sample(rng);
        if (!std::isfinite(x)) {
          throw EvaluationError(fmt::format("replicate {} produced a non-finite value", r));
        }
        a.add(x);
      });
  return acc.estimate();
}

Estimate mc_expectation(const MeasureSpace& space, const PatternFn& g, const McPlan& plan) {
  return mc_estimate([&](RngStream& rng) { return g(sample_poisson(space, rng)); }, plan);
}

Estimate mc_expectation(const MeasureSpace& space, const Functional& g, const McPlan& plan) {
  if (g.side() != space.size()) {
    throw ContractViolation("functional and space differ in atom count");
  }
  return mc_expectation(
      space, [&](const PointPattern& chi) { return g(chi); }, plan);
}

}  // namespace poisson_chaos
