#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "brute_force.hpp"
#include "poisson_chaos/chaos_vector.hpp"
#include "poisson_chaos/error.hpp"
#include "poisson_chaos/functional.hpp"
#include "poisson_chaos/oracle.hpp"

using namespace poisson_chaos;

namespace {

const MeasureSpace S1({"a"}, {1.0});
const MeasureSpace S2({"a", "b"}, {0.5, 1.0});
const Functional exp_ln2 = Functional::exponential(Kernel::vector({std::log(2.0)}));

Functional count_poly(std::size_t side, std::vector<Functional::Monomial> terms) {
  return Functional::count_polynomial(side, std::move(terms));
}

}  // namespace

TEST_CASE("evaluate") {
  CHECK(evaluate(Functional::exponential(Kernel::vector({0.0, 0.0})), PointPattern{4, 2}) == 1.0);
  CHECK(evaluate(exp_ln2, PointPattern{3}) == doctest::Approx(0.125));
  CHECK(evaluate(Functional::total_count(2), PointPattern{2, 1}) == 3.0);
  CHECK(evaluate(Functional::atom_count(2, 1), PointPattern{2, 1}) == 1.0);
  const Functional mixed = count_poly(2, {{2.0, {1, 1}}, {-1.0, {0, 2}}, {0.5, {0, 0}}});
  CHECK(evaluate(mixed, PointPattern{3, 2}) == doctest::Approx(12.0 - 4.0 + 0.5));
  const Functional huge = count_poly(1, {{1e308, {3}}});
  CHECK_THROWS_AS(evaluate(huge, PointPattern{10}), EvaluationError);
  CHECK_THROWS_AS(Functional::exponential(Kernel::vector({-1.0})), ContractViolation);
  CHECK_THROWS_AS(evaluate(exp_ln2, PointPattern{1, 1}), ContractViolation);
}

TEST_CASE("difference") {
  const Functional c = Functional::constant(2, 3.0);
  for (const auto& chi : bf::patterns_up_to(2, 3)) {
    CHECK(difference(c, 0, chi) == 0.0);
    CHECK(difference(Functional::total_count(2), 1, chi) == 1.0);
  }
  CHECK(difference(exp_ln2, 0, PointPattern{1}) == doctest::Approx(-0.25));
}

TEST_CASE("iterated difference") {
  const Functional n = Functional::total_count(2);
  CHECK(iterated_difference(n, std::vector<Atom>{0, 1}, PointPattern{1, 1}) == 0.0);
  const Functional e = Functional::exponential(Kernel::vector({0.3, 1.1}));
  const double fa = std::exp(-0.3) - 1, fb = std::exp(-1.1) - 1;
  const PointPattern chi{1, 2};
  CHECK(iterated_difference(e, std::vector<Atom>{0, 1}, chi) ==
        doctest::Approx(fa * fb * evaluate(e, chi)).epsilon(1e-13));
  const std::vector<Atom> too_long(kMaxDifferenceOrder + 1, 0);
  CHECK_THROWS_AS(iterated_difference(e, too_long, chi), UnsupportedArity);

  const Functional poly = count_poly(2, {{1.0, {2, 1}}, {-0.5, {0, 3}}, {2.0, {1, 0}}});
  const std::vector<std::vector<Atom>> tuples = {{0}, {1, 0}, {0, 1, 1}, {1, 0, 1}, {1, 1, 0, 0}};
  for (const auto& chi2 : bf::patterns_up_to(2, 4)) {
    for (const auto& xs : tuples) {
      const double got = iterated_difference(poly, xs, chi2);
      CHECK(got == doctest::Approx(bf::iterated_difference(poly, xs, chi2)).epsilon(1e-12));
    }
    CHECK(iterated_difference(poly, std::vector<Atom>{0, 1, 1}, chi2) ==
          iterated_difference(poly, std::vector<Atom>{1, 1, 0}, chi2));
  }
}

TEST_CASE("iterated difference of an exponential factorizes") {
  const MeasureSpace S3({0.2, 0.3, 0.5});
  const Functional e = Functional::exponential(Kernel::vector({0.2, 0.7, 1.5}));
  for (std::size_t n = 1; n <= 3; ++n) {
    const Kernel factor = exponential_difference_factor(Kernel::vector({0.2, 0.7, 1.5}), n);
    for (const auto& chi : bf::patterns_up_to(3, 5)) {
      bf::for_each_atom_tuple(3, n, [&](const std::vector<Atom>& xs) {
        const double expected = bf::entry(factor, xs) * evaluate(e, chi);
        CHECK(std::abs(iterated_difference(e, xs, chi) - expected) <= 1e-12);
      });
    }
  }
}

TEST_CASE("t_coefficient_mc") {
  const McPlan plan{20'000, 5, 0};
  const auto c = t_coefficient_mc(S2, Functional::constant(2, 2.5), 0, plan);
  CHECK(c.mean.value() == 2.5);
  CHECK(c.se.value() == 0.0);
  const auto c2 = t_coefficient_mc(S2, Functional::constant(2, 2.5), 2, plan);
  for (double v : c2.mean.values()) CHECK(v == 0.0);
  for (double v : c2.se.values()) CHECK(v == 0.0);

  const auto t1 = t_coefficient_mc(S1, exp_ln2, 1, McPlan{200'000, 6, 0});
  const double expected = -0.5 * std::exp(-0.5);
  CHECK(std::abs(t1.mean.at({0}) - expected) <= 4 * t1.se.at({0}));

  const auto lin = t_coefficient_mc(S1, Functional::total_count(1), 1, plan);
  CHECK(lin.mean.at({0}) == 1.0);
  CHECK(lin.se.at({0}) == 0.0);
}

TEST_CASE("t_coefficient_mc standard error shrinks with replicates") {
  const Functional e = Functional::exponential(Kernel::vector({0.4, 0.9}));
  const auto small = t_coefficient_mc(S2, e, 1, McPlan{20'000, 9, 0});
  const auto large = t_coefficient_mc(S2, e, 1, McPlan{80'000, 9, 1'000'000});
  for (std::size_t i = 0; i < 2; ++i) {
    const double ratio = large.se[i] / small.se[i];
    CHECK(ratio > 0.4);
    CHECK(ratio < 0.6);
  }
}

TEST_CASE("closed-form means match the brute-force law") {
  const Functional combo = Functional::linear_combo(
      {{0.7, Kernel::vector({0.3, 0.1})}, {-1.2, Kernel::vector({0.0, 2.0})}});
  const Functional poly = count_poly(2, {{1.0, {2, 1}}, {-0.5, {0, 3}}, {2.0, {1, 0}}, {4, {0, 0}}});
  for (const Functional* f : {&combo, &poly}) {
    const double bf_mean = bf::expectation(S2, [&](const PointPattern& p) { return (*f)(p); });
    CHECK(f->closed_form_mean(S2).value() == doctest::Approx(bf_mean).epsilon(1e-12));
  }
  CHECK_FALSE(Functional::opaque(2, [](const PointPattern&) { return 1.0; })
                  .closed_form_mean(S2)
                  .has_value());
}

TEST_CASE("chaos_of_exponential") {
  const auto zero = chaos_of_exponential(S2, Functional::exponential(Kernel::vector({0, 0})), 3);
  CHECK(zero.mean() == 1.0);
  for (std::size_t n = 1; n <= 3; ++n) {
    for (double v : zero[n].values()) CHECK(v == 0.0);
  }
  const auto cv = chaos_of_exponential(S1, exp_ln2, 2);
  const double f0 = std::exp(-0.5);
  CHECK(cv.mean() == doctest::Approx(f0).epsilon(1e-15));
  CHECK(cv[1].at({0}) == doctest::Approx(-0.5 * f0).epsilon(1e-15));
  CHECK(cv[2].at({0, 0}) == doctest::Approx(0.125 * f0).epsilon(1e-15));

  const Kernel v1 = Kernel::vector({0.3, 0.1}), v2 = Kernel::vector({1.0, 0.5});
  const auto a = chaos_of_exponential(S2, Functional::exponential(v1), 3);
  const auto b = chaos_of_exponential(S2, Functional::exponential(v2), 3);
  const auto sum = chaos_of_exponential(S2, Functional::linear_combo({{2.0, v1}, {-1.0, v2}}), 3);
  CHECK(max_abs_diff(sum, a.scaled(2.0) - b) <= 1e-15);
  CHECK_THROWS_AS(chaos_of_exponential(S2, Functional::total_count(2), 2), ContractViolation);
}

TEST_CASE("chaos coefficients from enumeration") {
  const Functional e = Functional::exponential(Kernel::vector({0.3, 0.1}));
  const auto budget = OracleBudget::for_space(S2, 0, 1e-13);
  const auto from_oracle = chaos_from_oracle(S2, e, 3, budget);
  CHECK(max_abs_diff(from_oracle, chaos_of_exponential(S2, e, 3)) <= 1e-12);

  // f_2 of a count polynomial from brute-force expectations of the recursive difference
  const Functional poly = count_poly(2, {{1.0, {2, 1}}, {-0.5, {0, 3}}});
  const auto cv = chaos_from_oracle(S2, poly, 2, OracleBudget::for_space(S2, 3, 1e-13));
  bf::for_each_atom_tuple(2, 2, [&](const std::vector<Atom>& xs) {
    const double t2 = bf::expectation(S2, [&](const PointPattern& chi) {
      return bf::iterated_difference(poly, xs, chi);
    });
    CHECK(bf::entry(cv[2], xs) == doctest::Approx(t2 / 2.0).epsilon(1e-9));
  });
}

TEST_CASE("chaos vector invariants") {
  CHECK_THROWS_AS(ChaosVector(2, {Kernel::scalar(1), Kernel::vector({1, 2}),
                                  Kernel::from_values(2, 2, {0, 1, 0, 0})}),
                  ContractViolation);
  const ChaosVector cv(2, {Kernel::scalar(1), Kernel::vector({1, 2})});
  CHECK(cv.truncated(3).order() == 3);
  CHECK(cv.truncated(0).order() == 0);
  CHECK(chaos_second_moment(S2, cv) == doctest::Approx(1.0 + 4.5));
}

TEST_CASE("monotonicity check") {
  const bool on_a[] = {true, false};
  const bool on_all[] = {true, true};
  const bool on_none[] = {false, false};
  const bool on_b[] = {false, true};
  CHECK(is_monotone(Functional::atom_count(2, 0), on_a, 5));
  CHECK(is_monotone(Functional::total_count(2), on_all, 5));
  CHECK_FALSE(is_monotone(Functional::total_count(2), on_a, 5));
  const Functional dec = Functional::exponential(Kernel::vector({0.2, 0.0}));
  CHECK(is_monotone(dec, on_none, 5));
  CHECK(is_monotone(dec, on_b, 5));
  CHECK_FALSE(is_monotone(dec, on_all, 5));
}
