#include "poisson_chaos/wiener_ito.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "poisson_chaos/error.hpp"

namespace poisson_chaos {

namespace {

void check_integral_order(std::size_t n) {
  if (n > kMaxIntegralOrder) {
    throw UnsupportedArity(
        fmt::format("multiple integral order {} exceeds cap {}", n, kMaxIntegralOrder));
  }
}

double binomial(std::size_t n, std::size_t k) {
  double c = 1.0;
  for (std::size_t i = 1; i <= k; ++i) {
    c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return c;
}

double factorial(std::size_t n) {
  double f = 1.0;
  for (std::size_t i = 2; i <= n; ++i) {
    f *= static_cast<double>(i);
  }
  return f;
}

}  // namespace

WiState::WiState(MeasureSpace space, PointPattern pattern)
    : space_(std::move(space)), pattern_(std::move(pattern)) {
  check_on_space(space_, pattern_);
}

void WiState::set_pattern(PointPattern pattern) {
  check_on_space(space_, pattern);
  pattern_ = std::move(pattern);
  factorial_.fill(std::nullopt);
  compensated_.fill(std::nullopt);
}

const Kernel& WiState::factorial_weights(std::size_t k) const {
  check_integral_order(k);
  if (!factorial_[k]) {
    factorial_[k] = Kernel::generate(space_.size(), k, [&](std::span<const Atom> atoms) {
      return distinct_tuple_multiplicity(pattern_, atoms);
    });
  }
  return *factorial_[k];
}

const Kernel& WiState::compensated_weights(std::size_t n) const {
  check_integral_order(n);
  if (!compensated_[n]) {
    std::array<Atom, kMaxIntegralOrder> sub{};
    compensated_[n] = Kernel::generate(space_.size(), n, [&](std::span<const Atom> a) {
      double total = 0.0;
      for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        std::size_t size = 0;
        double mu_part = 1.0;
        for (std::size_t j = 0; j < n; ++j) {
          if (mask & (std::size_t{1} << j)) {
            sub[size++] = a[j];
          } else {
            mu_part *= space_.weight(a[j]);
          }
        }
        const double eta_part =
            distinct_tuple_multiplicity(pattern_, std::span<const Atom>(sub.data(), size));
        const double sign = ((n - size) % 2 == 0) ? 1.0 : -1.0;
        total += sign * eta_part * mu_part;
      }
      return total;
    });
  }
  return *compensated_[n];
}

double wiener_ito(const WiState& state, const Kernel& g) {
  const std::size_t n = g.arity();
  check_integral_order(n);
  if (n == 0) {
    return g.value();
  }
  if (g.side() != state.space().size()) {
    throw ContractViolation("kernel side does not match the state's space");
  }
  const Kernel& m = state.compensated_weights(n);
  double total = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    total += g[i] * m[i];
  }
  return total;
}

double chaos_reconstruct(const WiState& state, const ChaosVector& cv) {
  if (cv.side() != state.space().size()) {
    throw ContractViolation("chaos vector and state live on different spaces");
  }
  double total = 0.0;
  for (std::size_t n = 0; n <= cv.order(); ++n) {
    total += wiener_ito(state, cv[n]);
  }
  return total;
}

double chaos_finite_sum(const WiState& state, const Kernel& v) {
  for (double x : v.values()) {
    if (!(x >= 0.0)) {
      throw ContractViolation("chaos finite sum needs v >= 0");
    }
  }
  const Kernel h = exponential_difference_factor(v, 1);
  const auto series = factorial_product_series(state.pattern(), h);
  double total = 0.0;
  for (double term : series) {
    total += term;
  }
  return total;
}

double product_formula_rhs(const Kernel& f, const Kernel& g, const WiState& state) {
  const std::size_t p = f.arity();
  const std::size_t q = g.arity();
  check_integral_order(p + q);
  const MeasureSpace& space = state.space();
  double total = 0.0;
  for (std::size_t r = 0; r <= std::min(p, q); ++r) {
    double inner = 0.0;
    for (std::size_t l = 0; l <= r; ++l) {
      inner += binomial(r, l) * wiener_ito(state, contraction(space, f, g, r, l));
    }
    total += factorial(r) * binomial(p, r) * binomial(q, r) * inner;
  }
  return total;
}

ChaosVector recover_chaos(const MeasureSpace& space, const PatternFn& values, std::size_t order,
                          std::size_t max_total) {
  if (order > kMaxIntegralOrder) {
    throw UnsupportedArity(fmt::format("chaos order {} exceeds cap {}", order, kMaxIntegralOrder));
  }
  const std::size_t d = space.size();

  // one unknown per (level, multiset of atoms)
  struct Unknown {
    std::size_t level;
    std::vector<std::size_t> orbit;  // flat indices of all tuples in the multiset's orbit
  };
  std::vector<Unknown> unknowns;
  for (std::size_t n = 0; n <= order; ++n) {
    std::map<std::vector<Atom>, std::size_t> slot;
    for_each_tuple(d, n, [&](std::span<const Atom> xs, std::size_t flat) {
      std::vector<Atom> key(xs.begin(), xs.end());
      std::sort(key.begin(), key.end());
      auto [it, inserted] = slot.try_emplace(key, unknowns.size());
      if (inserted) {
        unknowns.push_back(Unknown{n, {}});
      }
      unknowns[it->second].orbit.push_back(flat);
    });
  }

  std::vector<PointPattern> patterns;
  for_each_pattern(d, max_total, [&](const PointPattern& chi) { patterns.push_back(chi); });

  Eigen::MatrixXd a(static_cast<Eigen::Index>(patterns.size()),
                    static_cast<Eigen::Index>(unknowns.size()));
  Eigen::VectorXd b(static_cast<Eigen::Index>(patterns.size()));
  for (std::size_t row = 0; row < patterns.size(); ++row) {
    const WiState state(space, patterns[row]);
    b(static_cast<Eigen::Index>(row)) = values(patterns[row]);
    for (std::size_t col = 0; col < unknowns.size(); ++col) {
      const auto& u = unknowns[col];
      double basis = 1.0;
      if (u.level > 0) {
        const Kernel& m = state.compensated_weights(u.level);
        basis = 0.0;
        for (std::size_t flat : u.orbit) {
          basis += m[flat];
        }
      }
      a(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = basis;
    }
  }

  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  if (qr.rank() < static_cast<Eigen::Index>(unknowns.size())) {
    throw ContractViolation(fmt::format(
        "patterns with total <= {} do not determine chaos coefficients up to order {}", max_total,
        order));
  }
  const Eigen::VectorXd solution = qr.solve(b);

  std::vector<std::vector<double>> levels;
  for (std::size_t n = 0; n <= order; ++n) {
    levels.emplace_back(int_pow(d, n), 0.0);
  }
  for (std::size_t col = 0; col < unknowns.size(); ++col) {
    for (std::size_t flat : unknowns[col].orbit) {
      levels[unknowns[col].level][flat] = solution(static_cast<Eigen::Index>(col));
    }
  }
  std::vector<Kernel> coeffs;
  for (std::size_t n = 0; n <= order; ++n) {
    coeffs.push_back(Kernel::from_values(d, n, std::move(levels[n])));
  }
  return ChaosVector(d, std::move(coeffs));
}

}  // namespace poisson_chaos
