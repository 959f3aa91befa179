#include "poisson_chaos/functional.hpp"

#include <array>
#include <cmath>

#include <fmt/format.h>

#include "poisson_chaos/error.hpp"
#include "poisson_chaos/parallel.hpp"

namespace poisson_chaos {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void validate_exponent(const Kernel& v) {
  if (v.arity() != 1) {
    throw ContractViolation("exponential functional needs an arity-1 kernel");
  }
  for (double x : v.values()) {
    if (!(x >= 0.0)) {
      throw ContractViolation("exponential functional needs v >= 0");
    }
  }
}

// E[k^p] for k ~ Poisson(lambda): Σ_j S(p,j) lambda^j (Stirling numbers of the second kind).
double poisson_raw_moment(double lambda, unsigned p) {
  std::vector<double> stirling(p + 1, 0.0);
  stirling[0] = 1.0;  // row 0
  for (unsigned n = 1; n <= p; ++n) {
    for (unsigned j = n; j >= 1; --j) {
      stirling[j] = static_cast<double>(j) * stirling[j] + stirling[j - 1];
    }
    stirling[0] = 0.0;
  }
  double out = 0.0;
  double pw = 1.0;
  for (unsigned j = 0; j <= p; ++j) {
    out += stirling[j] * pw;
    pw *= lambda;
  }
  return out;
}

}  // namespace

Functional Functional::exponential(Kernel v) {
  validate_exponent(v);
  const std::size_t side = v.side();
  return Functional(side, Exponential{std::move(v)});
}

Functional Functional::linear_combo(std::vector<ExpTerm> terms) {
  if (terms.empty()) {
    throw ContractViolation("linear combination needs at least one term");
  }
  const std::size_t side = terms.front().v.side();
  for (const auto& t : terms) {
    validate_exponent(t.v);
    if (t.v.side() != side) {
      throw ContractViolation("linear combination terms live on different spaces");
    }
    if (!std::isfinite(t.coeff)) {
      throw ContractViolation("linear combination coefficients must be finite");
    }
  }
  return Functional(side, LinearCombo{std::move(terms)});
}

Functional Functional::count_polynomial(std::size_t side, std::vector<Monomial> terms) {
  for (const auto& m : terms) {
    if (m.powers.size() != side) {
      throw ContractViolation(fmt::format("monomial has {} powers for a space of {} atoms",
                                          m.powers.size(), side));
    }
    if (!std::isfinite(m.coeff)) {
      throw ContractViolation("polynomial coefficients must be finite");
    }
  }
  return Functional(side, CountPolynomial{std::move(terms)});
}

Functional Functional::opaque(std::size_t side, PatternFn fn) {
  if (!fn) {
    throw ContractViolation("opaque functional needs a callback");
  }
  return Functional(side, Opaque{std::move(fn)});
}

Functional Functional::constant(std::size_t side, double c) {
  return count_polynomial(side, {Monomial{c, std::vector<unsigned>(side, 0)}});
}

Functional Functional::total_count(std::size_t side) {
  std::vector<Monomial> terms;
  for (Atom x = 0; x < side; ++x) {
    std::vector<unsigned> powers(side, 0);
    powers[x] = 1;
    terms.push_back(Monomial{1.0, std::move(powers)});
  }
  return count_polynomial(side, std::move(terms));
}

Functional Functional::atom_count(std::size_t side, Atom x) {
  std::vector<unsigned> powers(side, 0);
  powers.at(x) = 1;
  return count_polynomial(side, {Monomial{1.0, std::move(powers)}});
}

std::string_view Functional::kind_name() const noexcept {
  switch (kind()) {
    case Kind::exponential:
      return "exponential";
    case Kind::linear_combo:
      return "linear_combo";
    case Kind::count_polynomial:
      return "count_polynomial";
    case Kind::opaque:
      return "opaque";
  }
  return "unknown";
}

std::vector<Functional::ExpTerm> Functional::exp_terms() const {
  if (const auto* e = as_exponential()) {
    return {ExpTerm{1.0, e->v}};
  }
  if (const auto* c = as_linear_combo()) {
    return c->terms;
  }
  throw ContractViolation(fmt::format("{} functional is not in the exponential family",
                                      kind_name()));
}

std::optional<double> Functional::closed_form_mean(const MeasureSpace& space) const {
  if (space.size() != side_) {
    throw ContractViolation("functional evaluated against a space of different size");
  }
  return std::visit(
      Overloaded{
          [&](const Exponential&) -> std::optional<double> {
            const auto terms = exp_terms();
            return std::exp(-integrate(space, Kernel::generate(side_, 1, [&](auto a) {
                                         return 1.0 - std::exp(-terms[0].v[a[0]]);
                                       })));
          },
          [&](const LinearCombo& c) -> std::optional<double> {
            double m = 0.0;
            for (const auto& t : c.terms) {
              double s = 0.0;
              for (Atom i = 0; i < side_; ++i) {
                s += space.weight(i) * (1.0 - std::exp(-t.v[i]));
              }
              m += t.coeff * std::exp(-s);
            }
            return m;
          },
          [&](const CountPolynomial& p) -> std::optional<double> {
            double m = 0.0;
            for (const auto& mono : p.terms) {
              double term = mono.coeff;
              for (Atom i = 0; i < side_; ++i) {
                term *= poisson_raw_moment(space.weight(i), mono.powers[i]);
              }
              m += term;
            }
            return m;
          },
          [](const Opaque&) -> std::optional<double> { return std::nullopt; }},
      repr_);
}

unsigned Functional::growth_degree() const noexcept {
  if (const auto* p = as_count_polynomial()) {
    unsigned deg = 0;
    for (const auto& m : p->terms) {
      unsigned d = 0;
      for (unsigned e : m.powers) {
        d += e;
      }
      deg = std::max(deg, d);
    }
    return deg;
  }
  return 0;
}

Functional Functional::scaled(double c) const {
  return std::visit(Overloaded{[&](const Exponential& e) {
                                 return linear_combo({ExpTerm{c, e.v}});
                               },
                               [&](const LinearCombo& lc) {
                                 auto terms = lc.terms;
                                 for (auto& t : terms) {
                                   t.coeff *= c;
                                 }
                                 return linear_combo(std::move(terms));
                               },
                               [&](const CountPolynomial& p) {
                                 auto terms = p.terms;
                                 for (auto& m : terms) {
                                   m.coeff *= c;
                                 }
                                 return count_polynomial(side_, std::move(terms));
                               },
                               [&](const Opaque& o) {
                                 return opaque(side_, [fn = o.fn, c](const PointPattern& chi) {
                                   return c * fn(chi);
                                 });
                               }},
                    repr_);
}

double Functional::operator()(const PointPattern& chi) const {
  if (chi.size() != side_) {
    throw ContractViolation(fmt::format("pattern over {} atoms passed to a functional on {} atoms",
                                        chi.size(), side_));
  }
  const double value = std::visit(
      Overloaded{[&](const Exponential& e) { return std::exp(-linear_statistic(chi, e.v)); },
                 [&](const LinearCombo& c) {
                   double s = 0.0;
                   for (const auto& t : c.terms) {
                     s += t.coeff * std::exp(-linear_statistic(chi, t.v));
                   }
                   return s;
                 },
                 [&](const CountPolynomial& p) {
                   double s = 0.0;
                   for (const auto& m : p.terms) {
                     double term = m.coeff;
                     for (Atom i = 0; i < side_; ++i) {
                       for (unsigned e = 0; e < m.powers[i]; ++e) {
                         term *= static_cast<double>(chi.count(i));
                       }
                     }
                     s += term;
                   }
                   return s;
                 },
                 [&](const Opaque& o) { return o.fn(chi); }},
      repr_);
  if (!std::isfinite(value)) {
    throw EvaluationError(fmt::format("{} functional produced a non-finite value", kind_name()));
  }
  return value;
}

double evaluate(const Functional& f, const PointPattern& chi) { return f(chi); }

double difference(const Functional& f, Atom x, const PointPattern& chi) {
  return f(chi.plus(x)) - f(chi);
}

double iterated_difference(const Functional& f, std::span<const Atom> xs, const PointPattern& chi) {
  const std::size_t n = xs.size();
  if (n > kMaxDifferenceOrder) {
    throw UnsupportedArity(
        fmt::format("difference order {} exceeds cap {}", n, kMaxDifferenceOrder));
  }
  double total = 0.0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    PointPattern shifted(chi);
    std::size_t size = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (mask & (std::size_t{1} << j)) {
        shifted.add(xs[j]);
        ++size;
      }
    }
    const double sign = ((n - size) % 2 == 0) ? 1.0 : -1.0;
    total += sign * f(shifted);
  }
  return total;
}

Kernel exponential_difference_factor(const Kernel& v, std::size_t n) {
  if (v.arity() != 1) {
    throw ContractViolation("difference factor needs an arity-1 exponent");
  }
  std::vector<double> h(v.side());
  for (Atom i = 0; i < v.side(); ++i) {
    h[i] = std::expm1(-v[i]);
  }
  return tensor_power(Kernel::vector(std::move(h)), n);
}

KernelEstimate t_coefficient_mc(const MeasureSpace& space, const Functional& f, std::size_t n,
                                const McPlan& plan) {
  plan.validate();
  if (n > kMaxCoefficientOrder) {
    throw UnsupportedArity(
        fmt::format("coefficient order {} exceeds cap {}", n, kMaxCoefficientOrder));
  }
  if (f.side() != space.size()) {
    throw ContractViolation("functional and space differ in atom count");
  }
  const std::size_t d = space.size();
  const std::size_t entries = int_pow(d, n);
  auto acc = deterministic_reduce(
      plan.replicates, VectorAccumulator(entries), [&](std::size_t r, VectorAccumulator& a) {
        RngStream rng = plan.stream(r);
        const PointPattern eta = sample_poisson(space, rng);
        std::vector<double> row(entries);
        for_each_tuple(d, n, [&](std::span<const Atom> xs, std::size_t flat) {
          row[flat] = iterated_difference(f, xs, eta);
        });
        a.add(row);
      });
  std::vector<double> mean(entries);
  std::vector<double> se(entries);
  for (std::size_t i = 0; i < entries; ++i) {
    mean[i] = acc[i].mean();
    se[i] = acc[i].se();
  }
  return KernelEstimate{Kernel::from_values(d, n, std::move(mean)),
                        Kernel::from_values(d, n, std::move(se)), plan.replicates};
}

bool is_monotone(const Functional& f, std::span<const bool> increasing_on, std::size_t max_total) {
  if (increasing_on.size() != f.side()) {
    throw ContractViolation("monotonicity mask must have one entry per atom");
  }
  bool ok = true;
  for_each_pattern(f.side(), max_total, [&](const PointPattern& chi) {
    if (!ok) {
      return;
    }
    for (Atom x = 0; x < f.side(); ++x) {
      const double d = difference(f, x, chi);
      if (increasing_on[x] ? d < 0.0 : d > 0.0) {
        ok = false;
        return;
      }
    }
  });
  return ok;
}

}  // namespace poisson_chaos
