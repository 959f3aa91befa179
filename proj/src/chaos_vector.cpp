#include "poisson_chaos/chaos_vector.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <fmt/format.h>

#include "poisson_chaos/error.hpp"

namespace poisson_chaos {

namespace {

double factorial(std::size_t n) {
  double f = 1.0;
  for (std::size_t i = 2; i <= n; ++i) {
    f *= static_cast<double>(i);
  }
  return f;
}

void check_order(std::size_t order) {
  if (order > kMaxChaosOrder) {
    throw UnsupportedArity(fmt::format("chaos order {} exceeds cap {}", order, kMaxChaosOrder));
  }
}

}  // namespace

ChaosVector::ChaosVector(std::size_t side, std::vector<Kernel> coefficients)
    : side_(side), coeffs_(std::move(coefficients)) {
  if (coeffs_.empty()) {
    throw ContractViolation("chaos vector needs at least the level-0 coefficient");
  }
  for (std::size_t n = 0; n < coeffs_.size(); ++n) {
    const Kernel& k = coeffs_[n];
    if (k.arity() != n) {
      throw ContractViolation(fmt::format("chaos level {} holds a kernel of arity {}", n, k.arity()));
    }
    if (n > 0 && k.side() != side_) {
      throw ContractViolation(fmt::format("chaos level {} has side {} on a space of {} atoms", n,
                                          k.side(), side_));
    }
    if (!k.is_symmetric(1e-12)) {
      throw ContractViolation(fmt::format("chaos level {} is not symmetric", n));
    }
  }
}

ChaosVector ChaosVector::zero(std::size_t side, std::size_t order) {
  std::vector<Kernel> c;
  c.reserve(order + 1);
  for (std::size_t n = 0; n <= order; ++n) {
    c.push_back(Kernel::constant(side, n, 0.0));
  }
  return ChaosVector(side, std::move(c));
}

ChaosVector ChaosVector::truncated(std::size_t order) const {
  std::vector<Kernel> c;
  for (std::size_t n = 0; n <= order; ++n) {
    c.push_back(n < coeffs_.size() ? coeffs_[n] : Kernel::constant(side_, n, 0.0));
  }
  return ChaosVector(side_, std::move(c));
}

ChaosVector ChaosVector::scaled(double c) const {
  std::vector<Kernel> out;
  out.reserve(coeffs_.size());
  for (const auto& k : coeffs_) {
    out.push_back(k.scaled(c));
  }
  return ChaosVector(side_, std::move(out));
}

ChaosVector operator+(const ChaosVector& a, const ChaosVector& b) {
  if (a.side_ != b.side_) {
    throw ContractViolation("sum of chaos vectors on different spaces");
  }
  const std::size_t order = std::max(a.order(), b.order());
  auto sum = a.truncated(order);
  const auto rhs = b.truncated(order);
  for (std::size_t n = 0; n <= order; ++n) {
    sum.coeffs_[n] += rhs.coeffs_[n];
  }
  return sum;
}

double max_abs_diff(const ChaosVector& a, const ChaosVector& b) {
  const std::size_t order = std::max(a.order(), b.order());
  const auto lhs = a.truncated(order);
  const auto rhs = b.truncated(order);
  double out = 0.0;
  for (std::size_t n = 0; n <= order; ++n) {
    out = std::max(out, max_abs_diff(lhs[n], rhs[n]));
  }
  return out;
}

double chaos_second_moment(const MeasureSpace& space, const ChaosVector& cv) {
  double m = cv.mean() * cv.mean();
  for (std::size_t n = 1; n <= cv.order(); ++n) {
    m += factorial(n) * inner_product(space, cv[n], cv[n]);
  }
  return m;
}

ChaosVector chaos_of_exponential(const MeasureSpace& space, const Functional& f, std::size_t order) {
  check_order(order);
  if (f.side() != space.size()) {
    throw ContractViolation("functional and space differ in atom count");
  }
  const auto terms = f.exp_terms();
  auto out = ChaosVector::zero(space.size(), order);
  for (const auto& t : terms) {
    const double f0 = Functional::exponential(t.v).closed_form_mean(space).value();
    std::vector<Kernel> c;
    for (std::size_t n = 0; n <= order; ++n) {
      c.push_back(exponential_difference_factor(t.v, n).scaled(t.coeff * f0 / factorial(n)));
    }
    out = out + ChaosVector(space.size(), std::move(c));
  }
  return out;
}

ChaosVector chaos_from_oracle(const MeasureSpace& space, const Functional& f, std::size_t order,
                              const OracleBudget& budget) {
  check_order(order);
  if (f.side() != space.size()) {
    throw ContractViolation("functional and space differ in atom count");
  }
  const PoissonEnumeration law(space, budget);
  const std::size_t d = space.size();
  std::vector<Kernel> c;
  for (std::size_t n = 0; n <= order; ++n) {
    std::vector<double> values(int_pow(d, n), 0.0);
    std::vector<bool> done(values.size(), false);
    std::array<Atom, kMaxKernelArity> sorted{};
    const double scale = 1.0 / factorial(n);
    for_each_tuple(d, n, [&](std::span<const Atom> xs, std::size_t flat) {
      if (done[flat]) {
        return;
      }
      // one expectation per multiset; permutations are filled by symmetry
      const double value =
          scale * law.expect([&](const PointPattern& eta) { return iterated_difference(f, xs, eta); });
      std::copy(xs.begin(), xs.end(), sorted.begin());
      std::sort(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(n));
      do {
        const std::size_t idx = [&] {
          std::size_t k = 0;
          for (std::size_t j = 0; j < n; ++j) {
            k = k * d + sorted[j];
          }
          return k;
        }();
        values[idx] = value;
        done[idx] = true;
      } while (std::next_permutation(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(n)));
    });
    c.push_back(Kernel::from_values(d, n, std::move(values)));
  }
  return ChaosVector(d, std::move(c));
}

}  // namespace poisson_chaos
