#include <doctest.h>

#include <cmath>
#include <random>

#include "brute_force.hpp"
#include "poisson_chaos/chaos_vector.hpp"
#include "poisson_chaos/error.hpp"
#include "poisson_chaos/monte_carlo.hpp"
#include "poisson_chaos/wiener_ito.hpp"

using namespace poisson_chaos;

namespace {

const MeasureSpace S1({"a"}, {1.0});
const MeasureSpace S2({"a", "b"}, {0.5, 1.0});
const MeasureSpace S3({"a", "b", "c"}, {0.2, 0.3, 0.5});

}  // namespace

TEST_CASE("wiener_ito examples") {
  const WiState st(S1, PointPattern{3});
  CHECK(wiener_ito(st, Kernel::constant(1, 1, 1.0)) == doctest::Approx(2.0));
  CHECK(wiener_ito(st, Kernel::constant(1, 2, 1.0)) == doctest::Approx(1.0));
  CHECK(wiener_ito(st, Kernel::scalar(4.0)) == 4.0);
  CHECK_THROWS_AS(wiener_ito(st, Kernel::constant(1, kMaxIntegralOrder + 1, 1.0)),
                  UnsupportedArity);
  CHECK_THROWS_AS(WiState(S2, PointPattern{1}), ContractViolation);
}

TEST_CASE("wiener_ito matches the explicit subset sum") {
  std::mt19937_64 gen(21);
  for (const MeasureSpace* s : {&S2, &S3}) {
    for (std::size_t n = 1; n <= 3; ++n) {
      const Kernel g = bf::random_kernel(gen, s->size(), n);
      for (const auto& chi : bf::patterns_up_to(s->size(), 4)) {
        const WiState st(*s, chi);
        CHECK(std::abs(wiener_ito(st, g) - bf::wiener_ito(*s, chi, g)) <= 1e-10);
      }
    }
  }
}

TEST_CASE("cached state follows pattern changes") {
  std::mt19937_64 gen(22);
  const Kernel g = bf::random_kernel(gen, 2, 2);
  WiState st(S2, PointPattern{1, 1});
  const double before = wiener_ito(st, g);
  st.set_pattern(PointPattern{3, 0});
  CHECK(wiener_ito(st, g) == wiener_ito(WiState(S2, PointPattern{3, 0}), g));
  st.set_pattern(PointPattern{1, 1});
  CHECK(wiener_ito(st, g) == before);
}

TEST_CASE("multiple integrals have mean zero") {
  std::mt19937_64 gen(23);
  for (std::size_t n = 1; n <= 3; ++n) {
    const Kernel g = bf::random_kernel(gen, 2, n);
    const Estimate e = mc_expectation(
        S2, [&](const PointPattern& chi) { return wiener_ito(WiState(S2, chi), g); },
        McPlan{100'000, 23, n << 32});
    CAPTURE(n);
    CHECK(std::abs(e.mean) <= 4 * e.se);
  }
}

TEST_CASE("symmetrization invariance") {
  std::mt19937_64 gen(24);
  for (std::size_t n = 2; n <= 3; ++n) {
    const Kernel g = bf::random_kernel(gen, 3, n);
    const Kernel gs = symmetrize(g);
    for (const auto& chi : bf::patterns_up_to(3, 6)) {
      const WiState st(S3, chi);
      CHECK(std::abs(wiener_ito(st, g) - wiener_ito(st, gs)) <= 1e-10);
    }
  }
}

TEST_CASE("chaos_reconstruct") {
  const ChaosVector c = ChaosVector::constant(2, 1.75);
  for (const auto& chi : bf::patterns_up_to(2, 3)) {
    CHECK(chaos_reconstruct(WiState(S2, chi), c) == 1.75);
  }
  // N - μ(X) = I_1(1)
  const ChaosVector lin(2, {Kernel::scalar(0.0), Kernel::constant(2, 1, 1.0)});
  for (const auto& chi : bf::patterns_up_to(2, 4)) {
    CHECK(chaos_reconstruct(WiState(S2, chi), lin) == doctest::Approx(chi.total() - 1.5));
  }
  // pathwise the truncation error need not shrink at every order (at count 3 order 4 is
  // worse than order 3); it does shrink from order 0 to order 4 and stays small
  const Functional e = Functional::exponential(Kernel::vector({std::log(2.0)}));
  const ChaosVector cv = chaos_of_exponential(S1, e, 4);
  for (Count k = 0; k <= 3; ++k) {
    const WiState st(S1, PointPattern{k});
    const double f = evaluate(e, st.pattern());
    const double err0 = std::abs(chaos_reconstruct(st, cv.truncated(0)) - f);
    const double err4 = std::abs(chaos_reconstruct(st, cv) - f);
    CAPTURE(k);
    CHECK(err4 < err0);
    CHECK(err4 < 5e-3);
  }
}

TEST_CASE("chaos_finite_sum") {
  const Kernel ln2 = Kernel::vector({std::log(2.0)});
  CHECK(chaos_finite_sum(WiState(S1, PointPattern{2}), ln2) == doctest::Approx(0.25));
  CHECK(chaos_finite_sum(WiState(S1, PointPattern{0}), ln2) == 1.0);
  for (const auto& chi : bf::patterns_up_to(2, 5)) {
    CHECK(chaos_finite_sum(WiState(S2, chi), Kernel::vector({0, 0})) == doctest::Approx(1.0));
  }
  const Kernel v = Kernel::vector({0.4, 2.5});
  const Functional e = Functional::exponential(v);
  for (const auto& chi : bf::patterns_up_to(2, 8)) {
    CHECK(std::abs(chaos_finite_sum(WiState(S2, chi), v) - evaluate(e, chi)) <= 1e-10);
  }
}

TEST_CASE("product formula") {
  const Kernel one = Kernel::constant(1, 1, 1.0);
  const WiState st(S1, PointPattern{3});
  CHECK(product_formula_rhs(one, one, st) == doctest::Approx(4.0));
  CHECK(product_formula_rhs(one, Kernel::constant(1, 1, 0.0), st) == 0.0);

  std::mt19937_64 gen(25);
  const std::pair<std::size_t, std::size_t> orders[] = {{1, 1}, {2, 1}, {1, 2}, {2, 2}};
  for (auto [p, q] : orders) {
    const Kernel f = bf::random_symmetric(gen, 2, p);
    const Kernel g = bf::random_symmetric(gen, 2, q);
    for (const auto& chi : bf::patterns_up_to(2, 6)) {
      const WiState s(S2, chi);
      const double lhs = bf::wiener_ito(S2, chi, f) * bf::wiener_ito(S2, chi, g);
      CAPTURE(p);
      CAPTURE(q);
      CHECK(std::abs(product_formula_rhs(f, g, s) - lhs) <= 1e-9);
    }
  }
}

TEST_CASE("chaos coefficients are recovered from pattern values") {
  std::mt19937_64 gen(26);
  std::vector<Kernel> coeffs{Kernel::scalar(0.3)};
  for (std::size_t n = 1; n <= 3; ++n) coeffs.push_back(bf::random_symmetric(gen, 2, n));
  const ChaosVector cv(2, coeffs);
  const ChaosVector back = recover_chaos(
      S2, [&](const PointPattern& chi) { return chaos_reconstruct(WiState(S2, chi), cv); }, 3, 5);
  CHECK(max_abs_diff(back, cv) <= 1e-8);
}
