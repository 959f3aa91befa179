#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

#include "poisson_chaos/measure_space.hpp"

namespace poisson_chaos {

inline constexpr std::size_t kMaxKernelArity = 6;
inline constexpr std::size_t kMaxIntegrationArity = 4;
inline constexpr std::size_t kMaxSymmetrizationArity = 6;

/// Dense real function on X^n for a space with `side` atoms. Entries are stored
/// row-major with the first argument most significant. Arity 0 is a scalar.
class Kernel {
 public:
  Kernel() : Kernel(scalar(0.0)) {}

  static Kernel scalar(double c);
  static Kernel constant(std::size_t side, std::size_t arity, double c);
  static Kernel from_values(std::size_t side, std::size_t arity, std::vector<double> values);
  /// Arity-1 kernel; side is the length of `values`.
  static Kernel vector(std::vector<double> values);
  static Kernel vector(std::initializer_list<double> values) {
    return vector(std::vector<double>(values));
  }
  static Kernel generate(std::size_t side, std::size_t arity,
                         const std::function<double(std::span<const Atom>)>& fn);

  std::size_t arity() const noexcept { return arity_; }
  std::size_t side() const noexcept { return side_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }

  double operator[](std::size_t flat) const { return values_[flat]; }
  double at(std::span<const Atom> args) const { return values_[flat_index(args)]; }
  double at(std::initializer_list<Atom> args) const {
    return at(std::span<const Atom>(args.begin(), args.size()));
  }
  /// Scalar value of an arity-0 kernel.
  double value() const;

  std::size_t flat_index(std::span<const Atom> args) const;

  /// f(x, ·): fixes the first argument, arity drops by one.
  Kernel section(Atom x) const;

  Kernel scaled(double factor) const;
  Kernel& operator+=(const Kernel& other);
  friend Kernel operator+(Kernel a, const Kernel& b) { return a += b; }
  friend Kernel operator*(double c, const Kernel& k) { return k.scaled(c); }

  bool is_symmetric(double tol = 0.0) const;

 private:
  Kernel(std::size_t side, std::size_t arity, std::vector<double> values);

  std::size_t side_ = 1;
  std::size_t arity_ = 0;
  std::vector<double> values_;
};

/// Visits every n-tuple over `side` atoms in flat-index order.
void for_each_tuple(std::size_t side, std::size_t arity,
                    const std::function<void(std::span<const Atom>, std::size_t)>& fn);

std::size_t int_pow(std::size_t base, std::size_t exp);

double max_abs_diff(const Kernel& a, const Kernel& b);

/// μ^n(f): weighted sum over all atom n-tuples. Arity 0 returns the scalar.
double integrate(const MeasureSpace& space, const Kernel& f);

/// ⟨f,g⟩_n in L²(μ^n).
double inner_product(const MeasureSpace& space, const Kernel& f, const Kernel& g);
double norm(const MeasureSpace& space, const Kernel& f);

/// (x_1..x_n) ↦ Π f_i(x_i-block); arities concatenate.
Kernel tensor(std::span<const Kernel> factors);
Kernel tensor(const Kernel& f, const Kernel& g);
/// h^{⊗n}; n = 0 yields the scalar 1.
Kernel tensor_power(const Kernel& h, std::size_t n);

/// Average over all argument permutations.
Kernel symmetrize(const Kernel& f);

/// f ∗ˡᵣ g for symmetric f (arity p) and g (arity q): l shared coordinates
/// integrated against μ, r-l identified, the rest free; arity p+q-r-l.
Kernel contraction(const MeasureSpace& space, const Kernel& f, const Kernel& g, std::size_t r,
                   std::size_t l);

}  // namespace poisson_chaos
