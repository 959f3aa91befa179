#include "poisson_chaos/measure_space.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <fmt/format.h>

#include "poisson_chaos/error.hpp"

namespace poisson_chaos {

namespace {

std::vector<std::string> default_names(std::size_t n) {
  std::vector<std::string> names;
  names.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    names.push_back(i < 26 ? std::string(1, static_cast<char>('a' + i)) : fmt::format("x{}", i));
  }
  return names;
}

}  // namespace

MeasureSpace::MeasureSpace(std::vector<std::string> atoms, std::vector<double> weights)
    : atoms_(std::move(atoms)), weights_(std::move(weights)) {
  if (weights_.empty()) {
    throw ContractViolation("measure space needs at least one atom");
  }
  if (atoms_.size() != weights_.size()) {
    throw ContractViolation(fmt::format("measure space has {} atom ids but {} weights",
                                        atoms_.size(), weights_.size()));
  }
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (!std::isfinite(weights_[i]) || weights_[i] <= 0.0) {
      throw ContractViolation(
          fmt::format("atom '{}' has weight {}; weights must be finite and > 0", atoms_[i],
                      weights_[i]));
    }
  }
  auto sorted = atoms_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ContractViolation("measure space atom ids must be unique");
  }
  total_mass_ = std::accumulate(weights_.begin(), weights_.end(), 0.0);
}

MeasureSpace::MeasureSpace(std::vector<double> weights)
    : MeasureSpace(default_names(weights.size()), std::vector<double>(weights)) {}

std::optional<Atom> MeasureSpace::find(std::string_view id) const {
  auto it = std::find(atoms_.begin(), atoms_.end(), id);
  if (it == atoms_.end()) {
    return std::nullopt;
  }
  return static_cast<Atom>(it - atoms_.begin());
}

MeasureSpace MeasureSpace::scaled(double factor) const {
  std::vector<double> w(weights_);
  for (auto& x : w) {
    x *= factor;
  }
  return MeasureSpace(atoms_, std::move(w));
}

}  // namespace poisson_chaos
