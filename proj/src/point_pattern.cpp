#include "poisson_chaos/point_pattern.hpp"

#include <algorithm>
#include <array>
#include <numeric>

#include <fmt/format.h>

#include "poisson_chaos/error.hpp"

namespace poisson_chaos {

PointPattern::PointPattern(std::vector<Count> counts) : counts_(std::move(counts)) {
  if (counts_.empty()) {
    throw ContractViolation("point pattern needs at least one atom");
  }
}

std::size_t PointPattern::total() const noexcept {
  return std::accumulate(counts_.begin(), counts_.end(), std::size_t{0});
}

PointPattern PointPattern::plus(Atom x) const {
  PointPattern out(*this);
  out.add(x);
  return out;
}

PointPattern PointPattern::minus(Atom x) const {
  PointPattern out(*this);
  out.remove(x);
  return out;
}

void PointPattern::add(Atom x, Count k) {
  if (x >= counts_.size()) {
    throw ContractViolation(fmt::format("atom {} out of range", x));
  }
  counts_[x] += k;
}

void PointPattern::remove(Atom x) {
  if (x >= counts_.size()) {
    throw ContractViolation(fmt::format("atom {} out of range", x));
  }
  if (counts_[x] == 0) {
    throw ContractViolation(fmt::format("cannot remove a point from empty atom {}", x));
  }
  --counts_[x];
}

void check_on_space(const MeasureSpace& space, const PointPattern& pattern) {
  if (pattern.size() != space.size()) {
    throw ContractViolation(fmt::format("pattern over {} atoms used with a space of {} atoms",
                                        pattern.size(), space.size()));
  }
}

PointPattern sample_poisson(const MeasureSpace& space, RngStream& rng, double scale) {
  if (!(scale >= 0.0)) {
    throw ContractViolation("intensity scale must be >= 0");
  }
  std::vector<Count> counts(space.size());
  for (Atom i = 0; i < space.size(); ++i) {
    counts[i] = static_cast<Count>(sample_poisson_count(scale * space.weight(i), rng));
  }
  return PointPattern(std::move(counts));
}

PointPattern thin(const PointPattern& pattern, double s, RngStream& rng) {
  if (!(s >= 0.0 && s <= 1.0)) {
    throw ContractViolation(fmt::format("thinning probability {} outside [0,1]", s));
  }
  std::vector<Count> kept(pattern.size(), 0);
  for (Atom i = 0; i < pattern.size(); ++i) {
    for (Count j = 0; j < pattern.count(i); ++j) {
      if (rng.uniform() < s) {
        ++kept[i];
      }
    }
  }
  return PointPattern(std::move(kept));
}

PointPattern superpose(const PointPattern& p, const PointPattern& q) {
  if (p.size() != q.size()) {
    throw ContractViolation("superposition of patterns on different spaces");
  }
  std::vector<Count> sum(p.size());
  for (Atom i = 0; i < p.size(); ++i) {
    sum[i] = p.count(i) + q.count(i);
  }
  return PointPattern(std::move(sum));
}

double linear_statistic(const PointPattern& pattern, const Kernel& v) {
  if (v.arity() != 1 || v.side() != pattern.size()) {
    throw ContractViolation("linear statistic needs an arity-1 kernel on the pattern's space");
  }
  double s = 0.0;
  for (Atom i = 0; i < pattern.size(); ++i) {
    s += static_cast<double>(pattern.count(i)) * v[i];
  }
  return s;
}

double distinct_tuple_multiplicity(const PointPattern& pattern, std::span<const Atom> atoms) {
  // each atom used j times contributes the falling factorial k(k-1)...(k-j+1)
  std::array<Count, kMaxKernelArity> used{};
  std::array<Atom, kMaxKernelArity> seen{};
  std::size_t distinct = 0;
  double mult = 1.0;
  for (Atom a : atoms) {
    std::size_t slot = 0;
    while (slot < distinct && seen[slot] != a) {
      ++slot;
    }
    if (slot == distinct) {
      seen[distinct++] = a;
    }
    const Count k = pattern.count(a);
    if (used[slot] >= k) {
      return 0.0;
    }
    mult *= static_cast<double>(k - used[slot]);
    ++used[slot];
  }
  return mult;
}

double factorial_apply(const PointPattern& pattern, const Kernel& f) {
  if (f.arity() == 0) {
    return f.value();
  }
  if (f.arity() > kMaxIntegrationArity) {
    throw UnsupportedArity(
        fmt::format("factorial measure arity {} exceeds cap {}", f.arity(), kMaxIntegrationArity));
  }
  if (f.side() != pattern.size()) {
    throw ContractViolation("kernel and pattern live on different spaces");
  }
  double total = 0.0;
  for_each_tuple(f.side(), f.arity(), [&](std::span<const Atom> atoms, std::size_t flat) {
    const double m = distinct_tuple_multiplicity(pattern, atoms);
    if (m != 0.0) {
      total += m * f[flat];
    }
  });
  return total;
}

std::vector<double> factorial_product_series(const PointPattern& pattern, const Kernel& h) {
  if (h.arity() != 1 || h.side() != pattern.size()) {
    throw ContractViolation("product series needs an arity-1 kernel on the pattern's space");
  }
  const std::size_t n = pattern.total();
  std::vector<double> e(n + 1, 0.0);
  e[0] = 1.0;
  std::size_t seen = 0;
  for (Atom i = 0; i < pattern.size(); ++i) {
    for (Count j = 0; j < pattern.count(i); ++j) {
      ++seen;
      for (std::size_t k = seen; k >= 1; --k) {
        e[k] += h[i] * e[k - 1];
      }
    }
  }
  return e;
}

std::size_t pattern_count(std::size_t side, std::size_t max_total) {
  // C(max_total + side, side)
  long double c = 1.0L;
  for (std::size_t i = 1; i <= side; ++i) {
    c = c * static_cast<long double>(max_total + i) / static_cast<long double>(i);
  }
  return static_cast<std::size_t>(c + 0.5L);
}

namespace {

void compositions(std::vector<Count>& counts, std::size_t pos, std::size_t remaining,
                  const std::function<void(const PointPattern&)>& fn) {
  if (pos + 1 == counts.size()) {
    counts[pos] = static_cast<Count>(remaining);
    fn(PointPattern(counts));
    return;
  }
  for (std::size_t k = remaining + 1; k-- > 0;) {
    counts[pos] = static_cast<Count>(k);
    compositions(counts, pos + 1, remaining - k, fn);
  }
}

}  // namespace

void for_each_pattern(std::size_t side, std::size_t max_total,
                      const std::function<void(const PointPattern&)>& fn) {
  if (side == 0) {
    throw ContractViolation("pattern enumeration needs at least one atom");
  }
  std::vector<Count> counts(side, 0);
  for (std::size_t n = 0; n <= max_total; ++n) {
    compositions(counts, 0, n, fn);
  }
}

}  // namespace poisson_chaos
