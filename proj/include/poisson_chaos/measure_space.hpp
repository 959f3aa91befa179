#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace poisson_chaos {

/// Index of an atom inside a MeasureSpace.
using Atom = std::size_t;

/// Finite discrete measure space: an ordered list of atoms carrying strictly positive masses.
class MeasureSpace {
 public:
  MeasureSpace(std::vector<std::string> atoms, std::vector<double> weights);
  /// Atoms are named "a", "b", ... in order.
  explicit MeasureSpace(std::vector<double> weights);

  std::size_t size() const noexcept { return weights_.size(); }
  double weight(Atom x) const { return weights_.at(x); }
  std::span<const double> weights() const noexcept { return weights_; }
  const std::vector<std::string>& atoms() const noexcept { return atoms_; }
  double total_mass() const noexcept { return total_mass_; }

  std::optional<Atom> find(std::string_view id) const;

  /// Same atoms with every weight multiplied by `factor` (> 0).
  MeasureSpace scaled(double factor) const;

  friend bool operator==(const MeasureSpace&, const MeasureSpace&) = default;

 private:
  std::vector<std::string> atoms_;
  std::vector<double> weights_;
  double total_mass_ = 0.0;
};

}  // namespace poisson_chaos
