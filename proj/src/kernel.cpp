#include "poisson_chaos/kernel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "poisson_chaos/error.hpp"

namespace poisson_chaos {

std::size_t int_pow(std::size_t base, std::size_t exp) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    out *= base;
  }
  return out;
}

void for_each_tuple(std::size_t side, std::size_t arity,
                    const std::function<void(std::span<const Atom>, std::size_t)>& fn) {
  std::array<Atom, kMaxKernelArity> idx{};
  if (arity > kMaxKernelArity) {
    throw UnsupportedArity(fmt::format("tuple arity {} exceeds cap {}", arity, kMaxKernelArity));
  }
  const std::size_t total = int_pow(side, arity);
  for (std::size_t flat = 0; flat < total; ++flat) {
    fn(std::span<const Atom>(idx.data(), arity), flat);
    // odometer increment, last coordinate fastest
    for (std::size_t k = arity; k-- > 0;) {
      if (++idx[k] < side) {
        break;
      }
      idx[k] = 0;
    }
  }
}

Kernel::Kernel(std::size_t side, std::size_t arity, std::vector<double> values)
    : side_(arity == 0 ? 1 : side), arity_(arity), values_(std::move(values)) {
  if (side_ == 0) {
    throw ContractViolation("kernel side must be >= 1");
  }
  if (arity_ > kMaxKernelArity) {
    throw UnsupportedArity(fmt::format("kernel arity {} exceeds cap {}", arity_, kMaxKernelArity));
  }
  const std::size_t expected = int_pow(side_, arity_);
  if (values_.size() != expected) {
    throw ContractViolation(fmt::format("kernel of side {} and arity {} needs {} values, got {}",
                                        side_, arity_, expected, values_.size()));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) {
      throw ContractViolation("kernel entries must be finite");
    }
  }
}

Kernel Kernel::scalar(double c) { return Kernel(1, 0, {c}); }

Kernel Kernel::constant(std::size_t side, std::size_t arity, double c) {
  if (arity > kMaxKernelArity) {
    throw UnsupportedArity(fmt::format("kernel arity {} exceeds cap {}", arity, kMaxKernelArity));
  }
  return Kernel(side, arity, std::vector<double>(int_pow(side, arity), c));
}

Kernel Kernel::from_values(std::size_t side, std::size_t arity, std::vector<double> values) {
  return Kernel(side, arity, std::move(values));
}

Kernel Kernel::vector(std::vector<double> values) {
  const std::size_t side = values.size();
  return Kernel(side, 1, std::move(values));
}

Kernel Kernel::generate(std::size_t side, std::size_t arity,
                        const std::function<double(std::span<const Atom>)>& fn) {
  if (arity > kMaxKernelArity) {
    throw UnsupportedArity(fmt::format("kernel arity {} exceeds cap {}", arity, kMaxKernelArity));
  }
  std::vector<double> values(int_pow(side, arity));
  for_each_tuple(side, arity,
                 [&](std::span<const Atom> args, std::size_t flat) { values[flat] = fn(args); });
  return Kernel(side, arity, std::move(values));
}

double Kernel::value() const {
  if (arity_ != 0) {
    throw ContractViolation("value() requires an arity-0 kernel");
  }
  return values_[0];
}

std::size_t Kernel::flat_index(std::span<const Atom> args) const {
  if (args.size() != arity_) {
    throw ContractViolation(
        fmt::format("kernel of arity {} indexed with {} arguments", arity_, args.size()));
  }
  std::size_t flat = 0;
  for (Atom a : args) {
    if (a >= side_) {
      throw ContractViolation(fmt::format("atom index {} out of range for side {}", a, side_));
    }
    flat = flat * side_ + a;
  }
  return flat;
}

Kernel Kernel::section(Atom x) const {
  if (arity_ == 0) {
    throw ContractViolation("cannot take a section of a scalar kernel");
  }
  if (x >= side_) {
    throw ContractViolation(fmt::format("atom index {} out of range for side {}", x, side_));
  }
  const std::size_t block = int_pow(side_, arity_ - 1);
  std::vector<double> out(values_.begin() + static_cast<std::ptrdiff_t>(x * block),
                          values_.begin() + static_cast<std::ptrdiff_t>((x + 1) * block));
  return Kernel(arity_ == 1 ? 1 : side_, arity_ - 1, std::move(out));
}

Kernel Kernel::scaled(double factor) const {
  std::vector<double> out(values_);
  for (auto& v : out) {
    v *= factor;
  }
  return Kernel(side_, arity_, std::move(out));
}

Kernel& Kernel::operator+=(const Kernel& other) {
  if (other.arity_ != arity_ || (arity_ > 0 && other.side_ != side_)) {
    throw ContractViolation("kernel sum requires equal arity and side");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    values_[i] += other.values_[i];
  }
  return *this;
}

bool Kernel::is_symmetric(double tol) const {
  if (arity_ < 2) {
    return true;
  }
  bool symmetric = true;
  std::array<Atom, kMaxKernelArity> swapped{};
  // adjacent transpositions generate the symmetric group
  for_each_tuple(side_, arity_, [&](std::span<const Atom> args, std::size_t flat) {
    if (!symmetric) {
      return;
    }
    for (std::size_t k = 0; k + 1 < arity_; ++k) {
      std::copy(args.begin(), args.end(), swapped.begin());
      std::swap(swapped[k], swapped[k + 1]);
      const double other = values_[flat_index(std::span<const Atom>(swapped.data(), arity_))];
      if (std::abs(other - values_[flat]) > tol) {
        symmetric = false;
        return;
      }
    }
  });
  return symmetric;
}

double max_abs_diff(const Kernel& a, const Kernel& b) {
  if (a.arity() != b.arity() || a.size() != b.size()) {
    throw ContractViolation("max_abs_diff requires kernels of identical shape");
  }
  double out = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    out = std::max(out, std::abs(a[i] - b[i]));
  }
  return out;
}

namespace {

void check_on_space(const MeasureSpace& space, const Kernel& f) {
  if (f.arity() > 0 && f.side() != space.size()) {
    throw ContractViolation(fmt::format("kernel side {} does not match space with {} atoms",
                                        f.side(), space.size()));
  }
}

}  // namespace

double integrate(const MeasureSpace& space, const Kernel& f) {
  check_on_space(space, f);
  if (f.arity() > kMaxIntegrationArity) {
    throw UnsupportedArity(
        fmt::format("integration arity {} exceeds cap {}", f.arity(), kMaxIntegrationArity));
  }
  double total = 0.0;
  for_each_tuple(space.size(), f.arity(), [&](std::span<const Atom> args, std::size_t flat) {
    double w = 1.0;
    for (Atom a : args) {
      w *= space.weight(a);
    }
    total += f[flat] * w;
  });
  return total;
}

double inner_product(const MeasureSpace& space, const Kernel& f, const Kernel& g) {
  if (f.arity() != g.arity()) {
    throw ContractViolation(
        fmt::format("inner product of arities {} and {}", f.arity(), g.arity()));
  }
  check_on_space(space, f);
  check_on_space(space, g);
  std::vector<double> prod(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    prod[i] = f[i] * g[i];
  }
  return integrate(space, Kernel::from_values(f.arity() == 0 ? 1 : f.side(), f.arity(),
                                              std::move(prod)));
}

double norm(const MeasureSpace& space, const Kernel& f) {
  return std::sqrt(inner_product(space, f, f));
}

Kernel tensor(std::span<const Kernel> factors) {
  if (factors.empty()) {
    throw ContractViolation("tensor product of an empty factor list");
  }
  std::size_t side = 0;
  std::size_t arity = 0;
  for (const auto& k : factors) {
    if (k.arity() == 0) {
      continue;
    }
    if (side != 0 && k.side() != side) {
      throw ContractViolation("tensor factors live on different spaces");
    }
    side = k.side();
    arity += k.arity();
  }
  if (arity == 0) {
    double c = 1.0;
    for (const auto& k : factors) {
      c *= k.value();
    }
    return Kernel::scalar(c);
  }
  return Kernel::generate(side, arity, [&](std::span<const Atom> args) {
    double v = 1.0;
    std::size_t offset = 0;
    for (const auto& k : factors) {
      v *= k.at(args.subspan(offset, k.arity()));
      offset += k.arity();
    }
    return v;
  });
}

Kernel tensor(const Kernel& f, const Kernel& g) {
  const std::array<Kernel, 2> factors{f, g};
  return tensor(std::span<const Kernel>(factors));
}

Kernel tensor_power(const Kernel& h, std::size_t n) {
  if (n == 0) {
    return Kernel::scalar(1.0);
  }
  std::vector<Kernel> factors(n, h);
  return tensor(factors);
}

Kernel symmetrize(const Kernel& f) {
  const std::size_t n = f.arity();
  if (n > kMaxSymmetrizationArity) {
    throw UnsupportedArity(
        fmt::format("symmetrization arity {} exceeds cap {}", n, kMaxSymmetrizationArity));
  }
  if (n < 2) {
    return f;
  }
  std::array<Atom, kMaxKernelArity> sorted{};
  std::array<std::size_t, kMaxKernelArity> perm{};
  std::array<Atom, kMaxKernelArity> permuted{};
  return Kernel::generate(f.side(), n, [&](std::span<const Atom> args) {
    // every tuple of one orbit starts from the same sorted key, so the result is exactly
    // symmetric; averaging deviations from the first value keeps symmetric input unchanged
    std::copy(args.begin(), args.end(), sorted.begin());
    std::sort(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(n));
    std::iota(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n), std::size_t{0});
    const double anchor = f.at(std::span<const Atom>(sorted.data(), n));
    double deviation = 0.0;
    std::size_t count = 0;
    do {
      for (std::size_t k = 0; k < n; ++k) {
        permuted[k] = sorted[perm[k]];
      }
      deviation += f.at(std::span<const Atom>(permuted.data(), n)) - anchor;
      ++count;
    } while (std::next_permutation(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n)));
    return anchor + deviation / static_cast<double>(count);
  });
}

Kernel contraction(const MeasureSpace& space, const Kernel& f, const Kernel& g, std::size_t r,
                   std::size_t l) {
  const std::size_t p = f.arity();
  const std::size_t q = g.arity();
  if (r > std::min(p, q) || l > r) {
    throw ContractViolation(
        fmt::format("contraction indices r={}, l={} invalid for arities {} and {}", r, l, p, q));
  }
  check_on_space(space, f);
  check_on_space(space, g);
  constexpr double kSymmetryTol = 1e-12;
  if (!f.is_symmetric(kSymmetryTol) || !g.is_symmetric(kSymmetryTol)) {
    throw ContractViolation("contraction requires symmetric kernels");
  }
  const std::size_t m = p + q - r - l;
  if (m > kMaxKernelArity) {
    throw UnsupportedArity(fmt::format("contraction arity {} exceeds cap {}", m, kMaxKernelArity));
  }
  const std::size_t d = space.size();
  std::array<Atom, kMaxKernelArity> fargs{};
  std::array<Atom, kMaxKernelArity> gargs{};
  auto body = [&](std::span<const Atom> x) {
    double sum = 0.0;
    for_each_tuple(d, l, [&](std::span<const Atom> y, std::size_t) {
      double wy = 1.0;
      for (std::size_t k = 0; k < l; ++k) {
        fargs[k] = y[k];
        gargs[k] = y[k];
        wy *= space.weight(y[k]);
      }
      // f(y, x_1..x_{p-l});  g(y, x_1..x_{r-l}, x_{p-l+1}..x_m)
      for (std::size_t k = 0; k < p - l; ++k) {
        fargs[l + k] = x[k];
      }
      for (std::size_t k = 0; k < r - l; ++k) {
        gargs[l + k] = x[k];
      }
      for (std::size_t k = p - l; k < m; ++k) {
        gargs[r + (k - (p - l))] = x[k];
      }
      sum += wy * f.at(std::span<const Atom>(fargs.data(), p)) *
             g.at(std::span<const Atom>(gargs.data(), q));
    });
    return sum;
  };
  if (m == 0) {
    return Kernel::scalar(body(std::span<const Atom>()));
  }
  return Kernel::generate(d, m, body);
}

}  // namespace poisson_chaos
