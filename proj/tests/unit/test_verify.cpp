#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include <json.hpp>

#include "poisson_chaos/verify/config.hpp"
#include "poisson_chaos/verify/report.hpp"
#include "poisson_chaos/verify/suites.hpp"

using namespace poisson_chaos;
using namespace poisson_chaos::verify;
using nlohmann::ordered_json;

namespace {

ordered_json default_json() { return ordered_json::parse(default_config_text()); }

SuiteConfig from_json(const ordered_json& j) { return parse_config(j.dump()); }

SuiteConfig quick_config() {
  SuiteConfig c = load_config("default");
  c.replicates_override = 4000;
  return c;
}

const ReportRow* find_row(const std::vector<ReportRow>& rows, std::string_view id) {
  for (const auto& r : rows) {
    if (r.case_id == id) return &r;
  }
  return nullptr;
}

}  // namespace

TEST_CASE("default config loads") {
  const SuiteConfig c = load_config("default");
  CHECK(c.spaces.size() == 3);
  CHECK(c.space("S2").total_mass() == doctest::Approx(1.5));
  CHECK(c.functional("exp_ln2_S1").functional.kind() == Functional::Kind::exponential);
  CHECK(c.kernel("k2_S2").kernel.arity() == 2);
  CHECK(c.mc.replicates >= 100'000);
  CHECK(c.mc.replicates <= 1'000'000);
  CHECK(c.tail_tolerance <= 1e-8);
  CHECK(c.tolerances.z == 4.0);
  CHECK(c.tolerances.abs_tol == 1e-6);
  CHECK_NOTHROW(validate_suites(c));
  const SuiteSpec* cov = c.suite("covariance");
  REQUIRE(cov != nullptr);
  CHECK(c.replicates_for(*cov) == cov->replicates.value());
  SuiteConfig o = c;
  o.replicates_override = 123;
  CHECK(o.replicates_for(*cov) == 123);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("config errors") {
  auto expect_error = [](ordered_json j) { CHECK_THROWS_AS(from_json(j), ConfigError); };
  CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
  {
    auto j = default_json();
    j["extra"] = 1;
    expect_error(j);
  }
  {
    auto j = default_json();
    j.erase("space");
    expect_error(j);
  }
  {
    auto j = default_json();
    j["space"]["S2"]["weights"] = {0.5, 0.0};
    expect_error(j);
  }
  {
    auto j = default_json();
    j["space"]["S2"]["weights"] = {0.5};
    expect_error(j);
  }
  {
    auto j = default_json();
    j["kernels"]["g_S2"]["values"] = {1.0, 2.0, 3.0};
    expect_error(j);
  }
  {
    auto j = default_json();
    j["kernels"]["g_S2"]["space"] = "S9";
    expect_error(j);
  }
  {
    auto j = default_json();
    j["functionals"][0]["kind"] = "gaussian";
    expect_error(j);
  }
  {
    auto j = default_json();
    j["functionals"][3]["v"] = {0.1, 0.2};  // exp_ln2_S1 lives on a one-atom space
    expect_error(j);
  }
  {
    auto j = default_json();
    j["functionals"][3]["v"] = {-0.1};
    expect_error(j);
  }
  {
    auto j = default_json();
    j["functionals"][1]["id"] = "N_S1";
    expect_error(j);
  }
  {
    auto j = default_json();
    j["oracle"]["tail_tolerance"] = 1e-3;
    expect_error(j);
  }
  {
    auto j = default_json();
    j["mc"]["replicates"] = 0;
    expect_error(j);
  }
  {
    auto j = default_json();
    j["tolerances"]["z"] = -1.0;
    expect_error(j);
  }
  auto expect_validation_error = [](ordered_json j) {
    const SuiteConfig c = from_json(j);
    CHECK_THROWS_AS(validate_suites(c), ConfigError);
  };
  {
    auto j = default_json();
    j["suites"].push_back("nosuch");
    expect_validation_error(j);
  }
  {
    auto j = default_json();
    j["suites"] = ordered_json::parse(R"([{"name": "fock_isometry", "cases": [["exp_S2", "exp_S3"]]}])");
    expect_validation_error(j);
  }
  {
    // exp_S2 decreases in every atom, so it is not increasing on a
    auto j = default_json();
    j["suites"] = ordered_json::parse(R"([{"name": "fkg", "cases": [["exp_S2", "counta_S2", "a"]]}])");
    expect_validation_error(j);
  }
  {
    auto j = default_json();
    j["suites"] = ordered_json::parse(R"([{"name": "laplace", "functionals": ["N_S1"]}])");
    expect_validation_error(j);
  }
  {
    auto j = default_json();
    j["suites"] = ordered_json::parse(R"([{"name": "mecke", "cases": [["N_S1", "nosuch_kernel"]]}])");
    expect_validation_error(j);
  }
}

TEST_CASE("report round trip") {
  std::vector<ReportRow> rows;
  rows.push_back({"mecke", "N_S1*one_S1/mc", 2.0000000000000004, 1.9999, 0.0031, 1.0e-4,
                  0.0124, true, 200000, 20141016, 0, "mecke_univariate"});
  rows.push_back({"odd", "a,\"b\"\nc", -0.1, 1e-300, 0.0, 3.0, 1e-9, false, 0, 7, 12, ""});
  rows.push_back({"nonfinite", "x", std::numeric_limits<double>::quiet_NaN(),
                  std::numeric_limits<double>::infinity(), 0.0,
                  std::numeric_limits<double>::quiet_NaN(), 0.0, false, 1, 0, 0, ""});
  for (auto format : {ReportFormat::csv, ReportFormat::jsonl}) {
    const std::string text = format_report(rows, format);
    const auto back = parse_report(text, format);
    REQUIRE(back.size() == rows.size());
    CHECK(format_report(back, format) == text);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      CHECK(back[i].suite == rows[i].suite);
      CHECK(back[i].case_id == rows[i].case_id);
      CHECK(back[i].seed == rows[i].seed);
      CHECK(back[i].pass == rows[i].pass);
      CHECK(verdict_from(back[i].abs_diff, back[i].tolerance) == back[i].pass);
    }
    CHECK(back[0].lhs == rows[0].lhs);
    CHECK(back[1].rhs == rows[1].rhs);
    CHECK(std::isnan(back[2].lhs));
    CHECK(std::isinf(back[2].rhs));
  }
  const std::string csv = format_report(rows, ReportFormat::csv);
  CHECK(csv.substr(0, csv.find('\n')) ==
        "suite,case_id,lhs,rhs,se_combined,abs_diff,tolerance,verdict,replicates,seed,wall_time_ms");
  CHECK(csv.find("2.0000000000000004") != std::string::npos);
  const std::string jsonl = format_report(rows, ReportFormat::jsonl);
  CHECK(ordered_json::parse(jsonl.substr(0, jsonl.find('\n')))["verdict"] == "PASS");
  CHECK_THROWS_AS(parse_report("suite,case_id\nx,y\n", ReportFormat::csv), std::runtime_error);
  CHECK_THROWS_AS(parse_report("{\"suite\": 1}\n", ReportFormat::jsonl), std::runtime_error);
  CHECK_THROWS_AS(parse_report("[1, 2\n", ReportFormat::jsonl), std::runtime_error);
}

TEST_CASE("suite registry covers every identity") {
  const std::vector<std::string_view> names = {
      "laplace", "mecke", "factorial_moments", "fock_isometry", "wi_isometry",
      "chaos_reconstruction", "product_formula", "malliavin_derivative", "duality",
      "skorohod_isometry", "ou_operators", "mehler", "covariance", "poincare", "fkg"};
  std::set<std::string_view> registered, identities;
  for (const auto& s : suite_registry()) {
    registered.insert(s.name);
    CHECK_FALSE(s.identities.empty());
    identities.insert(s.identities.begin(), s.identities.end());
  }
  CHECK(registered == std::set<std::string_view>(names.begin(), names.end()));
  const std::vector<std::string_view> required = {
      "laplace_functional", "mecke_univariate", "mecke_bivariate", "factorial_moment",
      "fock_isometry", "wiener_ito_isometry", "wiener_ito_mean_zero",
      "symmetrization_invariance", "chaos_finite_sum", "chaos_uniqueness",
      "chaos_l2_convergence", "product_formula_first_order", "product_formula_general",
      "difference_exponential", "malliavin_derivative_chaos", "duality", "skorohod_isometry",
      "skorohod_mean_zero", "ou_delta_d", "ou_generator_chaos", "ou_inverse",
      "semigroup_thinning", "semigroup_commutation", "semigroup_mean", "semigroup_contractivity",
      "semigroup_law", "inverse_ou_quadrature", "covariance_semigroup", "covariance_conditional",
      "poincare", "poincare_equality", "poincare_l1", "fkg"};
  for (auto id : required) {
    CAPTURE(id);
    CHECK(identities.count(id) == 1);
  }
  CHECK(find_suite("mehler") != nullptr);
  CHECK(find_suite("nosuch") == nullptr);
  CHECK_THROWS_AS(run_suite("nosuch", quick_config()), ConfigError);
}

TEST_CASE("every suite emits rows tagged with its identities") {
  const SuiteConfig c = quick_config();
  for (const auto& s : suite_registry()) {
    CAPTURE(s.name);
    const auto rows = run_suite(s.name, c);
    CHECK_FALSE(rows.empty());
    std::set<std::string_view> seen;
    for (const auto& r : rows) {
      CAPTURE(r.case_id);
      CHECK(r.suite == s.name);
      CHECK(std::find(s.identities.begin(), s.identities.end(), r.identity) != s.identities.end());
      CHECK(r.pass == verdict_from(r.abs_diff, r.tolerance));
      CHECK(r.seed == c.mc.seed);
      CHECK(r.wall_time_ms == 0);
      CHECK(r.replicates <= 4000);
      seen.insert(r.identity);
    }
    CHECK(seen.size() == s.identities.size());
  }
}

TEST_CASE("suite examples on the default battery") {
  const SuiteConfig c = quick_config();
  const auto poincare = run_suite("poincare", c);
  const ReportRow* eq = find_row(poincare, "N_S1/equality");
  REQUIRE(eq != nullptr);
  CHECK(eq->lhs == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(eq->rhs == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(eq->pass);

  const auto fkg = run_suite("fkg", c);
  const ReportRow* ca = find_row(fkg, "counta_S2*counta_S2/mc");
  REQUIRE(ca != nullptr);
  CHECK(ca->pass);

  const auto mecke = run_suite("mecke", c);
  const ReportRow* m = find_row(mecke, "N_S1*one_S1/oracle");
  REQUIRE(m != nullptr);
  CHECK(m->lhs == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(m->rhs == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(m->pass);

  const auto cov = run_suite("covariance", c);
  const ReportRow* cv = find_row(cov, "N_S1*N_S1/semigroup");
  REQUIRE(cv != nullptr);
  CHECK(cv->lhs == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(cv->pass);
}

TEST_CASE("runs are reproducible") {
  SuiteConfig c = quick_config();
  c.mc.seed = 7;
  const auto a = format_report(run_suite("poincare", c), ReportFormat::csv);
  const auto b = format_report(run_suite("poincare", c), ReportFormat::csv);
  CHECK(a == b);
  c.mc.seed = 8;
  CHECK(format_report(run_suite("poincare", c), ReportFormat::csv) != a);
}
