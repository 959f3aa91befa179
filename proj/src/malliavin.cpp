#include "poisson_chaos/malliavin.hpp"

#include <cmath>

#include <fmt/format.h>

#include "poisson_chaos/error.hpp"

namespace poisson_chaos {

IntegrandField::IntegrandField(std::vector<Functional> per_atom) : per_atom_(std::move(per_atom)) {
  if (per_atom_.empty()) {
    throw ContractViolation("integrand field needs one functional per atom");
  }
  for (const auto& f : per_atom_) {
    if (f.side() != per_atom_.size()) {
      throw ContractViolation(fmt::format("field component on {} atoms inside a field of {} atoms",
                                          f.side(), per_atom_.size()));
    }
  }
}

IntegrandField IntegrandField::deterministic(const Kernel& g) {
  if (g.arity() != 1) {
    throw ContractViolation("deterministic field needs an arity-1 kernel");
  }
  std::vector<Functional> parts;
  for (Atom x = 0; x < g.side(); ++x) {
    parts.push_back(Functional::constant(g.side(), g[x]));
  }
  return IntegrandField(std::move(parts));
}

IntegrandField IntegrandField::product(const Kernel& k, const Functional& g) {
  if (k.arity() != 1 || k.side() != g.side()) {
    throw ContractViolation("product field needs an arity-1 kernel on the functional's space");
  }
  std::vector<Functional> parts;
  for (Atom x = 0; x < k.side(); ++x) {
    parts.push_back(g.scaled(k[x]));
  }
  return IntegrandField(std::move(parts));
}

IntegrandField IntegrandField::derivative_of(const Functional& f) {
  std::vector<Functional> parts;
  for (Atom x = 0; x < f.side(); ++x) {
    if (f.is_exponential_family()) {
      // D_x e^{-χ(v)} = (e^{-v(x)} - 1)·e^{-χ(v)}
      auto terms = f.exp_terms();
      for (auto& t : terms) {
        t.coeff *= std::expm1(-t.v[x]);
      }
      parts.push_back(Functional::linear_combo(std::move(terms)));
    } else {
      parts.push_back(Functional::opaque(
          f.side(), [f, x](const PointPattern& chi) { return difference(f, x, chi); }));
    }
  }
  return IntegrandField(std::move(parts));
}

ChaosField::ChaosField(std::size_t side, std::vector<Kernel> levels)
    : side_(side), levels_(std::move(levels)) {
  if (levels_.empty()) {
    throw ContractViolation("chaos field needs at least level 0");
  }
  if (order() > kMaxFieldOrder) {
    throw UnsupportedArity(
        fmt::format("chaos field order {} exceeds cap {}", order(), kMaxFieldOrder));
  }
  for (std::size_t n = 0; n < levels_.size(); ++n) {
    const Kernel& k = levels_[n];
    if (k.arity() != n + 1 || k.side() != side_) {
      throw ContractViolation(fmt::format("chaos field level {} must have arity {} on side {}", n,
                                          n + 1, side_));
    }
    for (Atom x = 0; x < side_; ++x) {
      if (!k.section(x).is_symmetric(1e-12)) {
        throw ContractViolation(
            fmt::format("chaos field level {} is not symmetric in its trailing arguments", n));
      }
    }
  }
}

ChaosField ChaosField::from_sections(std::span<const ChaosVector> per_atom) {
  if (per_atom.empty()) {
    throw ContractViolation("chaos field needs one chaos vector per atom");
  }
  const std::size_t d = per_atom.size();
  const std::size_t order = per_atom.front().order();
  std::vector<Kernel> levels;
  for (std::size_t n = 0; n <= order; ++n) {
    std::vector<double> values;
    values.reserve(int_pow(d, n + 1));
    for (const auto& cv : per_atom) {
      if (cv.order() != order || cv.side() != d) {
        throw ContractViolation("chaos field sections must share order and space");
      }
      const auto v = cv[n].values();
      values.insert(values.end(), v.begin(), v.end());
    }
    levels.push_back(Kernel::from_values(d, n + 1, std::move(values)));
  }
  return ChaosField(d, std::move(levels));
}

ChaosVector ChaosField::section(Atom x) const {
  std::vector<Kernel> c;
  for (const auto& k : levels_) {
    c.push_back(k.section(x));
  }
  return ChaosVector(side_, std::move(c));
}

ChaosField chaos_field(const MeasureSpace& space, const IntegrandField& h, std::size_t order,
                       const OracleBudget& budget) {
  if (h.side() != space.size()) {
    throw ContractViolation("field and space differ in atom count");
  }
  std::vector<ChaosVector> sections;
  for (Atom x = 0; x < space.size(); ++x) {
    const Functional& hx = h.at(x);
    sections.push_back(hx.is_exponential_family() ? chaos_of_exponential(space, hx, order)
                                                  : chaos_from_oracle(space, hx, order, budget));
  }
  return ChaosField::from_sections(sections);
}

double skorohod_pathwise(const MeasureSpace& space, const IntegrandField& h, const PointPattern& chi) {
  check_on_space(space, chi);
  if (h.side() != space.size()) {
    throw ContractViolation("field and space differ in atom count");
  }
  double total = 0.0;
  for (Atom x = 0; x < space.size(); ++x) {
    if (chi.count(x) > 0) {
      total += static_cast<double>(chi.count(x)) * h(chi.minus(x), x);
    }
    total -= space.weight(x) * h(chi, x);
  }
  return total;
}

ChaosVector skorohod_chaos(const ChaosField& h) {
  std::vector<Kernel> c;
  c.push_back(Kernel::scalar(0.0));
  for (std::size_t n = 0; n <= h.order(); ++n) {
    c.push_back(symmetrize(h[n]));
  }
  return ChaosVector(h.side(), std::move(c));
}

ChaosVector malliavin_chaos(const ChaosVector& cv, Atom x) {
  if (cv.order() == 0) {
    return ChaosVector::constant(cv.side(), 0.0);
  }
  std::vector<Kernel> c;
  for (std::size_t n = 1; n <= cv.order(); ++n) {
    c.push_back(cv[n].section(x).scaled(static_cast<double>(n)));
  }
  return ChaosVector(cv.side(), std::move(c));
}

ChaosField derivative_field(const ChaosVector& cv) {
  if (cv.order() == 0) {
    return ChaosField(cv.side(), {Kernel::constant(cv.side(), 1, 0.0)});
  }
  std::vector<Kernel> levels;
  for (std::size_t n = 0; n + 1 <= cv.order(); ++n) {
    levels.push_back(cv[n + 1].scaled(static_cast<double>(n + 1)));
  }
  return ChaosField(cv.side(), std::move(levels));
}

double ou_generator_pathwise(const MeasureSpace& space, const Functional& f, const PointPattern& chi) {
  check_on_space(space, chi);
  const double base = f(chi);
  double total = 0.0;
  for (Atom x = 0; x < space.size(); ++x) {
    if (chi.count(x) > 0) {
      total += static_cast<double>(chi.count(x)) * (f(chi.minus(x)) - base);
    }
    total += space.weight(x) * (f(chi.plus(x)) - base);
  }
  return total;
}

namespace {

ChaosVector scale_levels(const ChaosVector& cv, const auto& factor) {
  std::vector<Kernel> c;
  for (std::size_t n = 0; n <= cv.order(); ++n) {
    c.push_back(cv[n].scaled(factor(n)));
  }
  return ChaosVector(cv.side(), std::move(c));
}

}  // namespace

ChaosVector ou_chaos(const ChaosVector& cv) {
  return scale_levels(cv, [](std::size_t n) { return -static_cast<double>(n); });
}

ChaosVector ou_inverse_chaos(const ChaosVector& cv) {
  return scale_levels(cv, [](std::size_t n) { return n == 0 ? 0.0 : -1.0 / static_cast<double>(n); });
}

ChaosVector semigroup_chaos(const ChaosVector& cv, double s) {
  if (!(s >= 0.0 && s <= 1.0)) {
    throw ContractViolation(fmt::format("semigroup parameter {} outside [0,1]", s));
  }
  return scale_levels(cv, [s](std::size_t n) { return std::pow(s, static_cast<double>(n)); });
}

}  // namespace poisson_chaos
