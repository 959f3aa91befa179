#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "poisson_chaos/estimate.hpp"
#include "poisson_chaos/kernel.hpp"
#include "poisson_chaos/measure_space.hpp"
#include "poisson_chaos/point_pattern.hpp"

namespace poisson_chaos {

using PatternFn = std::function<double(const PointPattern&)>;

inline constexpr std::size_t kMaxDifferenceOrder = 6;
inline constexpr std::size_t kMaxCoefficientOrder = 4;

/// A map from point patterns to reals. The structured variants carry enough
/// information for closed-form expectations; Opaque wraps an arbitrary callback.
class Functional {
 public:
  /// χ ↦ exp(-χ(v)) with v >= 0.
  struct Exponential {
    Kernel v;
  };
  struct ExpTerm {
    double coeff = 0.0;
    Kernel v;
  };
  /// Finite linear combination of exponentials.
  struct LinearCombo {
    std::vector<ExpTerm> terms;
  };
  /// coeff · Π_i counts_i^{powers_i}
  struct Monomial {
    double coeff = 0.0;
    std::vector<unsigned> powers;
  };
  struct CountPolynomial {
    std::vector<Monomial> terms;
  };
  struct Opaque {
    PatternFn fn;
  };

  enum class Kind { exponential, linear_combo, count_polynomial, opaque };

  static Functional exponential(Kernel v);
  static Functional linear_combo(std::vector<ExpTerm> terms);
  static Functional count_polynomial(std::size_t side, std::vector<Monomial> terms);
  static Functional opaque(std::size_t side, PatternFn fn);
  static Functional constant(std::size_t side, double c);
  /// χ ↦ χ(X), the total number of points.
  static Functional total_count(std::size_t side);
  /// χ ↦ χ({x}).
  static Functional atom_count(std::size_t side, Atom x);

  Kind kind() const noexcept { return static_cast<Kind>(repr_.index()); }
  std::string_view kind_name() const noexcept;
  std::size_t side() const noexcept { return side_; }
  bool is_exponential_family() const noexcept {
    return kind() == Kind::exponential || kind() == Kind::linear_combo;
  }

  const Exponential* as_exponential() const noexcept { return std::get_if<Exponential>(&repr_); }
  const LinearCombo* as_linear_combo() const noexcept { return std::get_if<LinearCombo>(&repr_); }
  const CountPolynomial* as_count_polynomial() const noexcept {
    return std::get_if<CountPolynomial>(&repr_);
  }

  /// Exponential-family members expressed as a list of terms (Exponential → one term).
  std::vector<ExpTerm> exp_terms() const;

  /// E f(η) when a closed form exists (not for Opaque).
  std::optional<double> closed_form_mean(const MeasureSpace& space) const;

  /// Polynomial growth degree in the total count; 0 means bounded. Opaque is assumed bounded.
  unsigned growth_degree() const noexcept;

  /// c·F, keeping the structured representation where possible.
  Functional scaled(double c) const;

  double operator()(const PointPattern& chi) const;

 private:
  using Repr = std::variant<Exponential, LinearCombo, CountPolynomial, Opaque>;
  Functional(std::size_t side, Repr repr) : side_(side), repr_(std::move(repr)) {}

  std::size_t side_;
  Repr repr_;
};

/// f(χ); throws EvaluationError on a non-finite value.
double evaluate(const Functional& f, const PointPattern& chi);

/// D_x f(χ) = f(χ+δ_x) - f(χ).
double difference(const Functional& f, Atom x, const PointPattern& chi);

/// D^n_{x_1..x_n} f(χ) as the 2^n-term signed subset sum; n <= 6.
double iterated_difference(const Functional& f, std::span<const Atom> xs, const PointPattern& chi);

/// (e^{-v}-1)^{⊗n}
Kernel exponential_difference_factor(const Kernel& v, std::size_t n);

struct KernelEstimate {
  Kernel mean;
  Kernel se;
  std::size_t replicates = 0;
};

/// Monte Carlo estimate of T_n f(x_1..x_n) = E D^n f(η) on every atom tuple,
/// with one pool of η replicates shared across all entries.
KernelEstimate t_coefficient_mc(const MeasureSpace& space, const Functional& f, std::size_t n,
                                const McPlan& plan);

/// True iff f(χ+δ_x) >= f(χ) for x in B and <= for x outside B, on all χ with total <= max_total.
bool is_monotone(const Functional& f, std::span<const bool> increasing_on, std::size_t max_total);

}  // namespace poisson_chaos
