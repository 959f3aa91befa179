// Acceptance run over the shipped default configuration. Prints one line per
// criterion and exits non-zero if any criterion fails.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "poisson_chaos/verify/config.hpp"
#include "poisson_chaos/verify/report.hpp"
#include "poisson_chaos/verify/suites.hpp"

namespace pv = poisson_chaos::verify;

namespace {

// pinned ceilings
constexpr double kFiniteSumTol = 1e-10;
constexpr double kProductTol = 1e-9;
constexpr double kSymmetrizationTol = 1e-10;
constexpr double kDeltaDTol = 1e-12;
constexpr double kOracleTol = 1e-6;
constexpr double kOracleTail = 1e-8;
constexpr double kSemigroupSlack = 1e-8;
constexpr double kMcZ = 4.0;
constexpr double kMcAbs = 1e-6;
constexpr double kQuadratureAbs = 1e-4;
constexpr std::size_t kMinReplicates = 100'000;
constexpr std::size_t kMaxReplicates = 1'000'000;
constexpr double kPoincareEqualityTol = 1e-9;
constexpr double kUniquenessTol = 1e-8;
constexpr double kL2Bound = 1e-6;
constexpr std::size_t kMinPatternCutoff = 6;
constexpr std::size_t kMinFockPairs = 10;
constexpr std::size_t kMinPoincareFunctionals = 10;
constexpr std::size_t kMinFkgPairs = 5;
constexpr double kBudget1 = 30.0;
constexpr double kBudget2 = 60.0;
constexpr double kBudget3 = 300.0;

struct SuiteResult {
  std::vector<pv::ReportRow> rows;
  double seconds = 0.0;
};

class Criterion {
 public:
  explicit Criterion(std::string title) : title_(std::move(title)) {}

  void require(bool ok, const std::string& what) {
    if (!ok) problems_.push_back(what);
  }
  void add_runtime(double s) { seconds_ += s; }
  void note(std::string text) { notes_.push_back(std::move(text)); }

  bool passed() const { return problems_.empty(); }

  void print(int index, double budget) const {
    const bool ok = passed();
    if (budget > 0) {
      fmt::print("criterion {}: {}  {} [runtime {:.1f} s, budget {:.0f} s]\n", index,
                 ok ? "PASS" : "FAIL", title_, seconds_, budget);
    } else if (seconds_ > 0) {
      fmt::print("criterion {}: {}  {} [runtime {:.1f} s]\n", index, ok ? "PASS" : "FAIL", title_,
                 seconds_);
    } else {
      fmt::print("criterion {}: {}  {}\n", index, ok ? "PASS" : "FAIL", title_);
    }
    for (const auto& n : notes_) fmt::print("    {}\n", n);
    for (const auto& p : problems_) fmt::print("    problem: {}\n", p);
  }

  double seconds() const { return seconds_; }

 private:
  std::string title_;
  std::vector<std::string> problems_;
  std::vector<std::string> notes_;
  double seconds_ = 0.0;
};

struct Context {
  pv::SuiteConfig config;
  std::map<std::string, SuiteResult> suites;

  std::vector<const pv::ReportRow*> rows(std::string_view identity,
                                         std::string_view suffix = {}) const {
    std::vector<const pv::ReportRow*> out;
    for (const auto& [name, res] : suites) {
      for (const auto& r : res.rows) {
        if (r.identity != identity) continue;
        if (!suffix.empty() && (r.case_id.size() < suffix.size() ||
                                r.case_id.compare(r.case_id.size() - suffix.size(),
                                                  suffix.size(), suffix) != 0)) {
          continue;
        }
        out.push_back(&r);
      }
    }
    return out;
  }

  double seconds(std::initializer_list<std::string_view> names) const {
    double s = 0.0;
    for (auto n : names) {
      if (auto it = suites.find(std::string(n)); it != suites.end()) s += it->second.seconds;
    }
    return s;
  }

  // ids in "<a>*<b>*.../rest"
  static std::vector<std::string> inputs(const pv::ReportRow& r) {
    const std::string head = r.case_id.substr(0, r.case_id.find('/'));
    std::vector<std::string> out;
    std::stringstream ss(head);
    for (std::string item; std::getline(ss, item, '*');) out.push_back(item);
    return out;
  }

  std::string space_of(const std::string& id) const {
    for (const auto& f : config.functionals) {
      if (f.id == id) return f.space;
    }
    for (const auto& k : config.kernels) {
      if (k.id == id) return k.space;
    }
    return "?";
  }

  std::size_t arity_of(const std::string& id) const {
    for (const auto& k : config.kernels) {
      if (k.id == id) return k.kernel.arity();
    }
    return 0;
  }
};

std::string row_name(const pv::ReportRow& r) { return fmt::format("{}/{}", r.suite, r.case_id); }

// every row passes and carries a tolerance no looser than `ceiling`
void check_rows(Criterion& c, const std::vector<const pv::ReportRow*>& rows, std::string_view what,
                double ceiling) {
  c.require(!rows.empty(), fmt::format("no rows for {}", what));
  std::size_t failed = 0;
  double worst = 0.0;
  for (const auto* r : rows) {
    if (!r->pass) {
      ++failed;
      c.require(false, fmt::format("{} FAIL: |{:.6g} - {:.6g}| = {:.3g} > {:.3g}", row_name(*r),
                                   r->lhs, r->rhs, r->abs_diff, r->tolerance));
    }
    c.require(r->tolerance <= ceiling,
              fmt::format("{} tolerance {:.3g} exceeds {:.3g}", row_name(*r), r->tolerance, ceiling));
    worst = std::max(worst, r->abs_diff);
  }
  c.note(fmt::format("{}: {} rows, {} failed, max |diff| {:.3g} (limit {:.0e})", what, rows.size(),
                     failed, worst, ceiling));
}

// rows held to z·se + abs: pass, tolerance no looser, and (MC criteria) replicate count in range
void check_mc_rows(Criterion& c, const std::vector<const pv::ReportRow*>& rows,
                   std::string_view what, double abs_tol, bool need_replicates = true) {
  c.require(!rows.empty(), fmt::format("no rows for {}", what));
  std::size_t failed = 0;
  double worst_z = 0.0;
  for (const auto* r : rows) {
    if (!r->pass) {
      ++failed;
      c.require(false, fmt::format("{} FAIL: |{:.6g} - {:.6g}| = {:.3g} > {:.3g}", row_name(*r),
                                   r->lhs, r->rhs, r->abs_diff, r->tolerance));
    }
    if (need_replicates || r->replicates > 0) {
      c.require(r->replicates >= kMinReplicates && r->replicates <= kMaxReplicates,
                fmt::format("{} uses {} replicates", row_name(*r), r->replicates));
    }
    const double allowed = kMcZ * r->se_combined + abs_tol;
    c.require(r->tolerance <= allowed * (1 + 1e-12),
              fmt::format("{} tolerance {:.3g} exceeds {:.3g}", row_name(*r), r->tolerance, allowed));
    if (r->se_combined > 0) worst_z = std::max(worst_z, r->abs_diff / r->se_combined);
  }
  std::size_t exact = 0;
  for (const auto* r : rows) exact += r->replicates == 0;
  if (exact == rows.size()) {
    c.note(fmt::format("{}: {} rows, {} failed, all by exact enumeration", what, rows.size(), failed));
  } else {
    c.note(fmt::format("{}: {} rows, {} failed, max |diff|/se {:.2f}", what, rows.size(), failed,
                       worst_z));
  }
}

void check_spaces(Criterion& c, const Context& ctx, const std::vector<const pv::ReportRow*>& rows,
                  std::string_view what) {
  std::set<std::string> spaces;
  std::set<std::size_t> sizes;
  for (const auto* r : rows) {
    const auto ids = Context::inputs(*r);
    if (ids.empty()) continue;
    const std::string s = ctx.space_of(ids.front());
    spaces.insert(s);
    if (s != "?") sizes.insert(ctx.config.space(s).size());
  }
  c.require(sizes.count(1) && sizes.count(2) && sizes.count(3),
            fmt::format("{} does not cover spaces with 1, 2 and 3 atoms", what));
}

std::set<std::string> distinct_inputs(const std::vector<const pv::ReportRow*>& rows) {
  std::set<std::string> out;
  for (const auto* r : rows) out.insert(r->case_id.substr(0, r->case_id.find('/')));
  return out;
}

Criterion criterion1(const Context& ctx) {
  Criterion c("pathwise exact identities on every pattern up to the cutoff");
  c.require(ctx.config.pattern_cutoff >= kMinPatternCutoff,
            fmt::format("pattern cutoff {} below {}", ctx.config.pattern_cutoff, kMinPatternCutoff));

  const auto finite = ctx.rows("chaos_finite_sum");
  check_rows(c, finite, "chaos finite sum", kFiniteSumTol);
  check_spaces(c, ctx, finite, "chaos finite sum");

  auto product = ctx.rows("product_formula_first_order");
  const auto general = ctx.rows("product_formula_general");
  product.insert(product.end(), general.begin(), general.end());
  check_rows(c, product, "product formula", kProductTol);
  check_spaces(c, ctx, product, "product formula");
  std::set<std::pair<std::size_t, std::size_t>> orders;
  for (const auto* r : product) {
    const auto ids = Context::inputs(*r);
    if (ids.size() == 2) orders.insert({ctx.arity_of(ids[0]), ctx.arity_of(ids[1])});
  }
  for (auto pq : {std::pair<std::size_t, std::size_t>{1, 1}, {2, 1}, {1, 2}, {2, 2}}) {
    c.require(orders.count(pq) == 1,
              fmt::format("product formula lacks (p,q) = ({},{})", pq.first, pq.second));
  }

  const auto sym = ctx.rows("symmetrization_invariance");
  check_rows(c, sym, "symmetrization invariance", kSymmetrizationTol);
  check_spaces(c, ctx, sym, "symmetrization invariance");

  const auto dd = ctx.rows("ou_delta_d");
  check_rows(c, dd, "delta(DF) + LF in the chaos domain", kDeltaDTol);
  check_spaces(c, ctx, dd, "delta(DF) + LF");

  c.add_runtime(ctx.seconds({"chaos_reconstruction", "product_formula", "wi_isometry", "ou_operators"}));
  c.require(c.seconds() < kBudget1, "runtime over budget");
  return c;
}

Criterion criterion2(const Context& ctx) {
  Criterion c("oracle identities by exact enumeration");
  c.require(ctx.config.tail_tolerance <= kOracleTail,
            fmt::format("oracle tail tolerance {:.1e} above {:.0e}", ctx.config.tail_tolerance,
                        kOracleTail));

  const auto fock = ctx.rows("fock_isometry", "/oracle");
  check_rows(c, fock, "Fock isometry", kOracleTol);
  const auto pairs = distinct_inputs(fock);
  c.require(pairs.size() >= kMinFockPairs,
            fmt::format("only {} Fock pairs (need {})", pairs.size(), kMinFockPairs));
  check_rows(c, ctx.rows("fock_isometry", "/closed"), "Fock series vs closed form", kOracleTol);

  const auto wi = ctx.rows("wiener_ito_isometry", "/oracle");
  check_rows(c, wi, "Wiener-Ito isometry (m, n <= 2)", kOracleTol);
  std::set<std::size_t> wi_orders;
  for (const auto* r : wi) {
    for (const auto& id : Context::inputs(*r)) wi_orders.insert(ctx.arity_of(id));
  }
  c.require(wi_orders.count(1) && wi_orders.count(2), "Wiener-Ito isometry lacks order 1 or 2");

  check_rows(c, ctx.rows("duality"), "duality", kOracleTol);
  check_rows(c, ctx.rows("skorohod_isometry"), "Skorohod isometry", kOracleTol);

  const auto mean = ctx.rows("semigroup_mean");
  const auto contr = ctx.rows("semigroup_contractivity");
  check_rows(c, mean, "semigroup mean preservation", kSemigroupSlack);
  check_rows(c, contr, "semigroup contractivity", kSemigroupSlack);
  for (const char* s : {"s=0", "s=0.25", "s=0.5", "s=0.75", "s=1"}) {
    bool found = false;
    for (const auto* r : contr) found |= r->case_id.ends_with(std::string("/") + s);
    c.require(found, fmt::format("contractivity missing grid point {}", s));
  }

  check_rows(c, ctx.rows("ou_generator_chaos"), "pathwise L vs chaos L (mean square)", kOracleTol);

  c.add_runtime(ctx.seconds({"fock_isometry", "wi_isometry", "duality", "skorohod_isometry",
                             "mehler", "ou_operators"}));
  c.require(c.seconds() < kBudget2, "runtime over budget");
  return c;
}

Criterion criterion3(const Context& ctx) {
  Criterion c("Monte-Carlo identities at 4 SE + 1e-6");
  check_mc_rows(c, ctx.rows("laplace_functional", "/mc"), "Laplace functional", kMcAbs);
  check_mc_rows(c, ctx.rows("mecke_univariate", "/mc"), "Mecke equation", kMcAbs);
  check_mc_rows(c, ctx.rows("mecke_bivariate", "/mc"), "bivariate Mecke equation", kMcAbs);

  const auto fm = ctx.rows("factorial_moment", "/mc");
  check_mc_rows(c, fm, "factorial moments", kMcAbs);
  std::set<std::size_t> fm_orders;
  for (const auto* r : fm) fm_orders.insert(ctx.arity_of(Context::inputs(*r).front()));
  c.require(fm_orders == std::set<std::size_t>{1, 2, 3}, "factorial moments do not cover m = 1..3");

  const auto wm = ctx.rows("wiener_ito_mean_zero");
  check_mc_rows(c, wm, "E I_n = 0", kMcAbs);
  std::set<std::size_t> wm_orders;
  for (const auto* r : wm) wm_orders.insert(ctx.arity_of(Context::inputs(*r).front()));
  c.require(wm_orders == std::set<std::size_t>{1, 2, 3}, "E I_n = 0 does not cover n = 1..3");

  check_mc_rows(c, ctx.rows("semigroup_thinning"), "thinning semigroup vs closed form", kMcAbs);
  check_mc_rows(c, ctx.rows("inverse_ou_quadrature"), "quadrature inverse generator",
                kQuadratureAbs);

  auto cov = ctx.rows("covariance_semigroup");
  const auto cond = ctx.rows("covariance_conditional");
  cov.insert(cov.end(), cond.begin(), cond.end());
  check_mc_rows(c, cov, "covariance identities", kMcAbs);
  const auto cov_pairs = distinct_inputs(cov);
  c.require(cov_pairs.count("N_S1*N_S1") == 1, "covariance lacks F = G = N on S1");
  c.require(cov_pairs.size() >= 3, "covariance needs two exponential pairs besides N");

  c.add_runtime(ctx.seconds({"laplace", "mecke", "factorial_moments", "wi_isometry", "mehler",
                             "covariance"}));
  c.require(c.seconds() < kBudget3, "runtime over budget");
  return c;
}

Criterion criterion4(const Context& ctx) {
  Criterion c("Poincare and FKG inequalities");
  const auto p = ctx.rows("poincare");
  check_mc_rows(c, p, "Poincare inequality", kMcAbs, false);
  const auto pf = distinct_inputs(p);
  c.require(pf.size() >= kMinPoincareFunctionals,
            fmt::format("only {} Poincare functionals", pf.size()));

  const auto eq = ctx.rows("poincare_equality");
  check_rows(c, eq, "Poincare equality for linear functionals", kPoincareEqualityTol);
  c.require(distinct_inputs(eq).count("N_S1") == 1, "equality case N on S1 missing");

  const auto l1 = ctx.rows("poincare_l1");
  c.require(!l1.empty(), "no L1 extension case");
  for (const auto* r : l1) c.require(r->pass, row_name(*r) + " FAIL");
  c.note(fmt::format("Poincare L1 extension: {} rows", l1.size()));

  const auto fkg = ctx.rows("fkg", "/mc");
  check_mc_rows(c, fkg, "FKG inequality", kMcAbs);
  const auto fp = distinct_inputs(fkg);
  c.require(fp.size() >= kMinFkgPairs, fmt::format("only {} FKG pairs", fp.size()));
  check_rows(c, ctx.rows("fkg", "/oracle"), "FKG by enumeration", kOracleTol);
  return c;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& exe, const std::filesystem::path& report, int threads) {
  const std::string cmd = fmt::format("POISSON_CHAOS_THREADS={} '{}' all --report '{}' 2>/dev/null",
                                      threads, exe, report.string());
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Criterion criterion5(const Context& ctx, const std::string& exe) {
  Criterion c("determinism across runs and worker counts");
  std::vector<pv::ReportRow> all;
  for (const auto& s : pv::suite_registry()) {
    if (auto it = ctx.suites.find(std::string(s.name)); it != ctx.suites.end()) {
      all.insert(all.end(), it->second.rows.begin(), it->second.rows.end());
    }
  }
  const std::string in_process = pv::format_report(all, pv::ReportFormat::csv);

  const auto dir = std::filesystem::temp_directory_path() /
                   fmt::format("poisson_chaos_acceptance_{}", ::getpid());
  std::filesystem::create_directories(dir);
  const auto start = std::chrono::steady_clock::now();
  const int a = run_cli(exe, dir / "run1.csv", 1);
  const int b = run_cli(exe, dir / "run2.csv", 4);
  c.add_runtime(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  c.require(a == 0, fmt::format("first `verify all` exited with {}", a));
  c.require(b == 0, fmt::format("second `verify all` exited with {}", b));
  const std::string r1 = read_file(dir / "run1.csv");
  const std::string r2 = read_file(dir / "run2.csv");
  c.require(!r1.empty(), "empty report");
  c.require(r1 == r2, "reports differ between 1 and 4 workers");
  c.require(r1 == in_process, "CLI report differs from the in-process run");
  c.note(fmt::format("two CLI runs (1 and 4 workers): {} bytes each, identical: {}", r1.size(),
                     r1 == r2 ? "yes" : "no"));
  std::filesystem::remove_all(dir);
  return c;
}

Criterion criterion6(const Context& ctx) {
  Criterion c("chaos uniqueness and L2 convergence");
  check_rows(c, ctx.rows("chaos_uniqueness"), "coefficient recovery", kUniquenessTol);
  const auto l2 = ctx.rows("chaos_l2_convergence");
  std::vector<const pv::ReportRow*> monotone, bound;
  for (const auto* r : l2) (r->case_id.ends_with("_bound") ? bound : monotone).push_back(r);
  check_rows(c, monotone, "L2 error nonincreasing in N", 0.0);
  check_rows(c, bound, "L2 error at N = 4", kL2Bound);
  double worst = 0.0;
  for (const auto* r : bound) {
    c.require(r->lhs <= kL2Bound, fmt::format("{} error {:.3g}", row_name(*r), r->lhs));
    worst = std::max(worst, r->lhs);
  }
  c.note(fmt::format("largest L2 error at N = 4: {:.3g}", worst));
  c.require(distinct_inputs(bound).size() == distinct_inputs(ctx.rows("chaos_finite_sum")).size(),
            "every battery functional needs an L2 bound row");
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: acceptance_test <path to verify executable>\n");
    return 2;
  }
  Context ctx;
  ctx.config = pv::load_config("default");
  pv::validate_suites(ctx.config);
  for (const auto& s : pv::suite_registry()) {
    if (ctx.config.suite(s.name) == nullptr) continue;
    const auto start = std::chrono::steady_clock::now();
    SuiteResult res;
    res.rows = pv::run_suite(s.name, ctx.config);
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    fmt::print("suite {:<22} {:>4} rows  {:6.1f} s\n", s.name, res.rows.size(), res.seconds);
    ctx.suites.emplace(std::string(s.name), std::move(res));
  }
  std::fflush(stdout);

  const Criterion results[] = {criterion1(ctx), criterion2(ctx), criterion3(ctx),
                               criterion4(ctx), criterion5(ctx, argv[1]), criterion6(ctx)};
  const double budgets[] = {kBudget1, kBudget2, kBudget3, 0, 0, 0};
  bool all = true;
  for (int i = 0; i < 6; ++i) {
    results[i].print(i + 1, budgets[i]);
    all &= results[i].passed();
  }
  fmt::print("acceptance: {}\n", all ? "PASS" : "FAIL");
  return all ? 0 : 1;
}
