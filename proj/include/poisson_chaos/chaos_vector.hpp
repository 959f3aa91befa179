#pragma once

#include <cstddef>
#include <vector>

#include "poisson_chaos/functional.hpp"
#include "poisson_chaos/kernel.hpp"
#include "poisson_chaos/oracle.hpp"

namespace poisson_chaos {

inline constexpr std::size_t kMaxChaosOrder = 4;

/// Truncated chaos coefficients (f_0, f_1, ..., f_N) with F ≈ Σ_n I_n(f_n) and
/// f_n = E D^n F / n!. f_0 is a scalar; each f_n is symmetric of arity n.
class ChaosVector {
 public:
  ChaosVector(std::size_t side, std::vector<Kernel> coefficients);

  static ChaosVector zero(std::size_t side, std::size_t order);
  static ChaosVector constant(std::size_t side, double c) { return ChaosVector(side, {Kernel::scalar(c)}); }

  std::size_t order() const noexcept { return coeffs_.size() - 1; }
  std::size_t side() const noexcept { return side_; }
  const Kernel& operator[](std::size_t n) const { return coeffs_.at(n); }
  const std::vector<Kernel>& coefficients() const noexcept { return coeffs_; }
  double mean() const { return coeffs_[0].value(); }

  /// Coefficients above `order` dropped (or zero-padded up to it).
  ChaosVector truncated(std::size_t order) const;
  ChaosVector scaled(double c) const;
  friend ChaosVector operator+(const ChaosVector& a, const ChaosVector& b);
  friend ChaosVector operator-(const ChaosVector& a, const ChaosVector& b) {
    return a + b.scaled(-1.0);
  }

 private:
  std::size_t side_;
  std::vector<Kernel> coeffs_;
};

/// Largest entrywise difference, missing levels treated as zero.
double max_abs_diff(const ChaosVector& a, const ChaosVector& b);

/// f_0² + Σ n!·‖f_n‖², the second moment of the reconstructed variable.
double chaos_second_moment(const MeasureSpace& space, const ChaosVector& cv);

/// Closed-form coefficients of an exponential-family functional:
/// f_n = Σ_j a_j·exp(-μ(1-e^{-v_j}))·(e^{-v_j}-1)^{⊗n}/n!.
ChaosVector chaos_of_exponential(const MeasureSpace& space, const Functional& f, std::size_t order);

/// f_n = E D^n F / n! by exact enumeration; works for any functional.
ChaosVector chaos_from_oracle(const MeasureSpace& space, const Functional& f, std::size_t order,
                              const OracleBudget& budget);

}  // namespace poisson_chaos
