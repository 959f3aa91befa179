#include "poisson_chaos/verify/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "poisson_chaos/error.hpp"

namespace poisson_chaos::verify {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError(fmt::format("{}: {}", where, what));
}

const Json& require(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    fail(where, fmt::format("missing key '{}'", key));
  }
  return obj.at(key);
}

double as_number(const Json& j, const std::string& where) {
  if (!j.is_number()) {
    fail(where, "expected a number");
  }
  return j.get<double>();
}

std::size_t as_count(const Json& j, const std::string& where) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
    fail(where, "expected a non-negative integer");
  }
  return j.get<std::size_t>();
}

std::string as_string(const Json& j, const std::string& where) {
  if (!j.is_string()) {
    fail(where, "expected a string");
  }
  return j.get<std::string>();
}

std::vector<double> as_numbers(const Json& j, const std::string& where) {
  if (!j.is_array()) {
    fail(where, "expected an array of numbers");
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(as_number(j[i], fmt::format("{}[{}]", where, i)));
  }
  return out;
}

std::vector<std::string> as_strings(const Json& j, const std::string& where) {
  if (!j.is_array()) {
    fail(where, "expected an array of strings");
  }
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(as_string(j[i], fmt::format("{}[{}]", where, i)));
  }
  return out;
}

void check_keys(const Json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      fail(where, fmt::format("unknown key '{}'", key));
    }
  }
}

template <class Fn>
auto guarded(const std::string& where, Fn&& fn) {
  try {
    return fn();
  } catch (const ContractViolation& e) {
    fail(where, e.what());
  } catch (const UnsupportedArity& e) {
    fail(where, e.what());
  }
}

void parse_spaces(const Json& j, SuiteConfig& cfg) {
  if (!j.is_object() || j.empty()) {
    fail("space", "expected a non-empty object of named spaces");
  }
  for (const auto& [id, body] : j.items()) {
    const std::string where = fmt::format("space.{}", id);
    if (!body.is_object()) {
      fail(where, "expected an object with 'atoms' and 'weights'");
    }
    check_keys(body, {"atoms", "weights"}, where);
    auto atoms = as_strings(require(body, "atoms", where), where + ".atoms");
    auto weights = as_numbers(require(body, "weights", where), where + ".weights");
    cfg.spaces.push_back(NamedSpace{
        id, guarded(where, [&] { return MeasureSpace(std::move(atoms), std::move(weights)); })});
  }
}

// A kernel value is either an inline array of numbers (arity 1) or the id of a kernel literal.
Kernel kernel_value(const Json& j, const SuiteConfig& cfg, const std::string& space,
                    const std::string& where) {
  if (j.is_string()) {
    const auto id = j.get<std::string>();
    const auto it = std::find_if(cfg.kernels.begin(), cfg.kernels.end(),
                                 [&](const NamedKernel& k) { return k.id == id; });
    if (it == cfg.kernels.end()) {
      fail(where, fmt::format("unknown kernel '{}'", id));
    }
    if (it->space != space) {
      fail(where, fmt::format("kernel '{}' lives on space '{}', not '{}'", id, it->space, space));
    }
    return it->kernel;
  }
  auto values = as_numbers(j, where);
  const std::size_t d = cfg.space(space).size();
  if (values.size() != d) {
    fail(where, fmt::format("has {} entries but space '{}' has {} atoms", values.size(), space, d));
  }
  return guarded(where, [&] { return Kernel::vector(std::move(values)); });
}

void parse_kernels(const Json& j, SuiteConfig& cfg) {
  if (!j.is_object()) {
    fail("kernels", "expected an object of named kernels");
  }
  for (const auto& [id, body] : j.items()) {
    const std::string where = fmt::format("kernels.{}", id);
    check_keys(body, {"space", "arity", "values"}, where);
    const auto space = as_string(require(body, "space", where), where + ".space");
    const std::size_t d = cfg.space(space).size();
    const std::size_t arity = as_count(require(body, "arity", where), where + ".arity");
    auto values = as_numbers(require(body, "values", where), where + ".values");
    if (arity > kMaxKernelArity) {
      fail(where, fmt::format("arity {} above the cap {}", arity, kMaxKernelArity));
    }
    if (values.size() != int_pow(d, arity)) {
      fail(where, fmt::format("has {} values; arity {} on space '{}' needs {}", values.size(),
                              arity, space, int_pow(d, arity)));
    }
    cfg.kernels.push_back(NamedKernel{
        id, space, guarded(where, [&] { return Kernel::from_values(d, arity, std::move(values)); })});
  }
}

Functional parse_functional(const Json& body, const SuiteConfig& cfg, const std::string& space,
                            const std::string& where) {
  const auto kind = as_string(require(body, "kind", where), where + ".kind");
  const std::size_t d = cfg.space(space).size();
  if (kind == "exponential") {
    auto v = kernel_value(require(body, "v", where), cfg, space, where + ".v");
    return guarded(where, [&] { return Functional::exponential(std::move(v)); });
  }
  if (kind == "linear_combo") {
    const auto& terms = require(body, "terms", where);
    if (!terms.is_array() || terms.empty()) {
      fail(where + ".terms", "expected a non-empty array");
    }
    std::vector<Functional::ExpTerm> out;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const std::string tw = fmt::format("{}.terms[{}]", where, i);
      out.push_back(Functional::ExpTerm{as_number(require(terms[i], "coeff", tw), tw + ".coeff"),
                                        kernel_value(require(terms[i], "v", tw), cfg, space, tw + ".v")});
    }
    return guarded(where, [&] { return Functional::linear_combo(std::move(out)); });
  }
  if (kind == "count_polynomial") {
    const auto& terms = require(body, "terms", where);
    if (!terms.is_array() || terms.empty()) {
      fail(where + ".terms", "expected a non-empty array");
    }
    std::vector<Functional::Monomial> out;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const std::string tw = fmt::format("{}.terms[{}]", where, i);
      const auto& powers = require(terms[i], "powers", tw);
      if (!powers.is_array() || powers.size() != d) {
        fail(tw + ".powers", fmt::format("expected {} exponents, one per atom", d));
      }
      std::vector<unsigned> p;
      for (std::size_t k = 0; k < powers.size(); ++k) {
        p.push_back(static_cast<unsigned>(as_count(powers[k], fmt::format("{}.powers[{}]", tw, k))));
      }
      out.push_back(Functional::Monomial{as_number(require(terms[i], "coeff", tw), tw + ".coeff"),
                                         std::move(p)});
    }
    return guarded(where, [&] { return Functional::count_polynomial(d, std::move(out)); });
  }
  fail(where + ".kind", fmt::format("unknown functional kind '{}'", kind));
}

void parse_functionals(const Json& j, SuiteConfig& cfg) {
  if (!j.is_array()) {
    fail("functionals", "expected an array");
  }
  std::set<std::string> seen;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& body = j[i];
    std::string where = fmt::format("functionals[{}]", i);
    const auto id = as_string(require(body, "id", where), where + ".id");
    where = fmt::format("functionals.{}", id);
    if (!seen.insert(id).second) {
      fail(where, "duplicate id");
    }
    check_keys(body, {"id", "space", "kind", "v", "terms", "increasing_on"}, where);
    const auto space = as_string(require(body, "space", where), where + ".space");
    NamedFunctional nf{id, space, parse_functional(body, cfg, space, where), std::nullopt};
    if (body.contains("increasing_on")) {
      auto atoms = as_strings(body.at("increasing_on"), where + ".increasing_on");
      for (const auto& a : atoms) {
        if (!cfg.space(space).find(a)) {
          fail(where + ".increasing_on", fmt::format("atom '{}' not in space '{}'", a, space));
        }
      }
      nf.increasing_on = std::move(atoms);
    }
    cfg.functionals.push_back(std::move(nf));
  }
}

void parse_mc(const Json& j, SuiteConfig& cfg) {
  check_keys(j, {"replicates", "seed", "stream_base", "inner_replicates", "t_nodes",
                 "quadrature_nodes", "pattern_cutoff"},
             "mc");
  if (j.contains("replicates")) cfg.mc.replicates = as_count(j.at("replicates"), "mc.replicates");
  if (j.contains("seed")) cfg.mc.seed = as_count(j.at("seed"), "mc.seed");
  if (j.contains("stream_base")) cfg.mc.stream_base = as_count(j.at("stream_base"), "mc.stream_base");
  if (j.contains("inner_replicates")) {
    cfg.nested.inner_replicates = as_count(j.at("inner_replicates"), "mc.inner_replicates");
  }
  if (j.contains("t_nodes")) cfg.nested.t_nodes = as_count(j.at("t_nodes"), "mc.t_nodes");
  if (j.contains("quadrature_nodes")) {
    cfg.nested.quadrature_nodes = as_count(j.at("quadrature_nodes"), "mc.quadrature_nodes");
  }
  if (j.contains("pattern_cutoff")) {
    cfg.pattern_cutoff = as_count(j.at("pattern_cutoff"), "mc.pattern_cutoff");
  }
  if (cfg.mc.replicates < 2) fail("mc.replicates", "must be at least 2");
  if (cfg.nested.inner_replicates < 1) fail("mc.inner_replicates", "must be at least 1");
  if (cfg.nested.t_nodes < 1 || cfg.nested.t_nodes > 64) fail("mc.t_nodes", "must lie in [1, 64]");
  if (cfg.nested.quadrature_nodes < 1 || cfg.nested.quadrature_nodes > 64) {
    fail("mc.quadrature_nodes", "must lie in [1, 64]");
  }
}

void parse_oracle(const Json& j, SuiteConfig& cfg) {
  check_keys(j, {"tail_tolerance", "max_states"}, "oracle");
  if (j.contains("tail_tolerance")) {
    cfg.tail_tolerance = as_number(j.at("tail_tolerance"), "oracle.tail_tolerance");
    if (!(cfg.tail_tolerance > 0.0 && cfg.tail_tolerance <= 1e-8)) {
      fail("oracle.tail_tolerance", "must lie in (0, 1e-8]");
    }
  }
  if (j.contains("max_states")) cfg.max_states = as_count(j.at("max_states"), "oracle.max_states");
}

void parse_tolerances(const Json& j, SuiteConfig& cfg) {
  check_keys(j, {"z", "abs_tol", "exact_abs_tol"}, "tolerances");
  auto& t = cfg.tolerances;
  if (j.contains("z")) t.z = as_number(j.at("z"), "tolerances.z");
  if (j.contains("abs_tol")) t.abs_tol = as_number(j.at("abs_tol"), "tolerances.abs_tol");
  if (j.contains("exact_abs_tol")) {
    t.exact_abs_tol = as_number(j.at("exact_abs_tol"), "tolerances.exact_abs_tol");
  }
  if (!(t.z > 0.0) || !(t.abs_tol >= 0.0) || !(t.exact_abs_tol >= 0.0)) {
    fail("tolerances", "z must be positive and tolerances non-negative");
  }
}

void parse_suites(const Json& j, SuiteConfig& cfg) {
  if (!j.is_array()) {
    fail("suites", "expected an array of suite names or objects");
  }
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string where = fmt::format("suites[{}]", i);
    SuiteSpec spec;
    if (j[i].is_string()) {
      spec.name = j[i].get<std::string>();
    } else {
      const auto& body = j[i];
      spec.name = as_string(require(body, "name", where), where + ".name");
      check_keys(body, {"name", "functionals", "kernels", "cases", "replicates"}, where);
      if (body.contains("functionals")) {
        spec.functionals = as_strings(body.at("functionals"), where + ".functionals");
      }
      if (body.contains("kernels")) spec.kernels = as_strings(body.at("kernels"), where + ".kernels");
      if (body.contains("cases")) {
        const auto& cases = body.at("cases");
        if (!cases.is_array()) fail(where + ".cases", "expected an array");
        for (std::size_t c = 0; c < cases.size(); ++c) {
          const std::string cw = fmt::format("{}.cases[{}]", where, c);
          if (cases[c].is_string()) {
            spec.cases.push_back({cases[c].get<std::string>()});
          } else {
            spec.cases.push_back(as_strings(cases[c], cw));
          }
        }
      }
      if (body.contains("replicates")) {
        spec.replicates = as_count(body.at("replicates"), where + ".replicates");
        if (*spec.replicates < 2) fail(where + ".replicates", "must be at least 2");
      }
    }
    if (cfg.suite(spec.name)) {
      fail(where, fmt::format("suite '{}' listed twice", spec.name));
    }
    for (const auto& id : spec.functionals) {
      cfg.functional(id);
    }
    for (const auto& id : spec.kernels) {
      cfg.kernel(id);
    }
    cfg.suites.push_back(std::move(spec));
  }
}

}  // namespace

const MeasureSpace& SuiteConfig::space(std::string_view id) const {
  for (const auto& s : spaces) {
    if (s.id == id) return s.space;
  }
  throw ConfigError(fmt::format("unknown space '{}'", id));
}

const NamedFunctional& SuiteConfig::functional(std::string_view id) const {
  for (const auto& f : functionals) {
    if (f.id == id) return f;
  }
  throw ConfigError(fmt::format("unknown functional '{}'", id));
}

const NamedKernel& SuiteConfig::kernel(std::string_view id) const {
  for (const auto& k : kernels) {
    if (k.id == id) return k;
  }
  throw ConfigError(fmt::format("unknown kernel '{}'", id));
}

const SuiteSpec* SuiteConfig::suite(std::string_view name) const {
  for (const auto& s : suites) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

std::size_t SuiteConfig::replicates_for(const SuiteSpec& spec) const {
  if (replicates_override) return *replicates_override;
  return spec.replicates.value_or(mc.replicates);
}

OracleBudget SuiteConfig::budget(const MeasureSpace& s, unsigned degree) const {
  return budget_for_mass(s.total_mass(), degree);
}

OracleBudget SuiteConfig::budget_for_mass(double mass, unsigned degree) const {
  return OracleBudget::for_mass(mass, degree, tail_tolerance, max_states);
}

SuiteConfig parse_config(std::string_view json_text) {
  Json root;
  try {
    root = Json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(fmt::format("config is not valid JSON: {}", e.what()));
  }
  if (!root.is_object()) {
    throw ConfigError("config must be a JSON object");
  }
  check_keys(root, {"space", "functionals", "kernels", "mc", "oracle", "tolerances", "suites"},
             "config");
  SuiteConfig cfg;
  parse_spaces(require(root, "space", "config"), cfg);
  if (root.contains("kernels")) parse_kernels(root.at("kernels"), cfg);
  if (root.contains("functionals")) parse_functionals(root.at("functionals"), cfg);
  if (root.contains("mc")) parse_mc(root.at("mc"), cfg);
  if (root.contains("oracle")) parse_oracle(root.at("oracle"), cfg);
  if (root.contains("tolerances")) parse_tolerances(root.at("tolerances"), cfg);
  parse_suites(require(root, "suites", "config"), cfg);
  return cfg;
}

SuiteConfig load_config(const std::string& path) {
  if (path == "default") {
    return parse_config(default_config_text());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError(fmt::format("cannot read config file '{}'", path));
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace poisson_chaos::verify
