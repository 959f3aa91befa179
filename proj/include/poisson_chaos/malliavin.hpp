#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "poisson_chaos/chaos_vector.hpp"
#include "poisson_chaos/functional.hpp"
#include "poisson_chaos/kernel.hpp"
#include "poisson_chaos/measure_space.hpp"
#include "poisson_chaos/oracle.hpp"
#include "poisson_chaos/point_pattern.hpp"

namespace poisson_chaos {

inline constexpr std::size_t kMaxFieldOrder = 3;

/// Random field H(χ, x): one functional per atom x.
class IntegrandField {
 public:
  explicit IntegrandField(std::vector<Functional> per_atom);

  /// H(χ, x) = g(x).
  static IntegrandField deterministic(const Kernel& g);
  /// H(χ, x) = k(x)·G(χ).
  static IntegrandField product(const Kernel& k, const Functional& g);
  /// H(χ, x) = D_x F(χ); exponential-family F stays structured.
  static IntegrandField derivative_of(const Functional& f);

  std::size_t side() const noexcept { return per_atom_.size(); }
  const Functional& at(Atom x) const { return per_atom_.at(x); }
  double operator()(const PointPattern& chi, Atom x) const { return per_atom_.at(x)(chi); }

 private:
  std::vector<Functional> per_atom_;
};

/// Chaos representation of a random field: h_n has arity n+1, the first argument
/// is the field index x and h_n(x, ·) are the chaos coefficients of H(·, x).
/// Kernels are kept unsymmetrized in x; symmetrization happens in skorohod_chaos.
class ChaosField {
 public:
  ChaosField(std::size_t side, std::vector<Kernel> levels);

  /// h_n(x, ·) = per_atom[x][n].
  static ChaosField from_sections(std::span<const ChaosVector> per_atom);

  std::size_t order() const noexcept { return levels_.size() - 1; }
  std::size_t side() const noexcept { return side_; }
  const Kernel& operator[](std::size_t n) const { return levels_.at(n); }
  /// Chaos coefficients of H(·, x).
  ChaosVector section(Atom x) const;

 private:
  std::size_t side_;
  std::vector<Kernel> levels_;
};

/// Per-atom chaos coefficients of H: closed form for exponential-family components,
/// exact enumeration otherwise.
ChaosField chaos_field(const MeasureSpace& space, const IntegrandField& h, std::size_t order,
                       const OracleBudget& budget);

/// δ'(H)(χ) = Σ_x χ_x·h(χ-δ_x, x) - Σ_x w_x·h(χ, x).
double skorohod_pathwise(const MeasureSpace& space, const IntegrandField& h, const PointPattern& chi);

/// δ(H) = Σ_n I_{n+1}(h̃_n): level n+1 of the result is the full symmetrization of h_n.
ChaosVector skorohod_chaos(const ChaosField& h);

/// D_x F = Σ_n n·I_{n-1}(f_n(x, ·)).
ChaosVector malliavin_chaos(const ChaosVector& cv, Atom x);

/// DF as a chaos field: h_n = (n+1)·f_{n+1}.
ChaosField derivative_field(const ChaosVector& cv);

/// LF(χ) = Σ_x χ_x (f(χ-δ_x) - f(χ)) + Σ_x w_x (f(χ+δ_x) - f(χ)).
double ou_generator_pathwise(const MeasureSpace& space, const Functional& f, const PointPattern& chi);

/// L: level n scaled by -n.
ChaosVector ou_chaos(const ChaosVector& cv);
/// L⁻¹: level n scaled by -1/n for n >= 1, level 0 set to 0.
ChaosVector ou_inverse_chaos(const ChaosVector& cv);
/// P_s: level n scaled by s^n.
ChaosVector semigroup_chaos(const ChaosVector& cv, double s);

}  // namespace poisson_chaos
