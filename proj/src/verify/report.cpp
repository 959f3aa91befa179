#include "poisson_chaos/verify/report.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include <fmt/format.h>
#include <json.hpp>

namespace poisson_chaos::verify {

namespace {

std::string number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", x);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) {
    return s;
  }
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  return fields;
}

double parse_number(const std::string& s) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return HUGE_VAL;
  if (s == "-inf") return -HUGE_VAL;
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0') {
    throw std::runtime_error(fmt::format("report: '{}' is not a number", s));
  }
  return x;
}

// end of the record starting at `pos`: the first newline outside quotes
std::size_t record_end(std::string_view text, std::size_t pos, bool csv) {
  bool quoted = false;
  for (std::size_t i = pos; i < text.size(); ++i) {
    if (csv && text[i] == '"') {
      quoted = !quoted;
    } else if (text[i] == '\n' && !quoted) {
      return i;
    }
  }
  return text.size();
}

std::uint64_t parse_unsigned(const std::string& s) {
  char* end = nullptr;
  const unsigned long long x = std::strtoull(s.c_str(), &end, 10);
  if (s.empty() || *end != '\0' || s.front() == '-') {
    throw std::runtime_error(fmt::format("report: '{}' is not a count", s));
  }
  return x;
}

std::int64_t parse_signed(const std::string& s) {
  char* end = nullptr;
  const long long x = std::strtoll(s.c_str(), &end, 10);
  if (s.empty() || *end != '\0') {
    throw std::runtime_error(fmt::format("report: '{}' is not an integer", s));
  }
  return x;
}

bool parse_verdict(const std::string& s) {
  if (s == "PASS") return true;
  if (s == "FAIL") return false;
  throw std::runtime_error(fmt::format("report: bad verdict '{}'", s));
}

std::string json_number(double x) {
  return std::isfinite(x) ? number(x) : fmt::format("\"{}\"", number(x));
}

}  // namespace

std::string format_report(const std::vector<ReportRow>& rows, ReportFormat format) {
  std::string out;
  if (format == ReportFormat::csv) {
    for (std::size_t i = 0; i < std::size(kReportColumns); ++i) {
      out += (i ? "," : "");
      out += kReportColumns[i];
    }
    out += '\n';
    for (const auto& r : rows) {
      out += fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", csv_field(r.suite),
                         csv_field(r.case_id), number(r.lhs), number(r.rhs), number(r.se_combined),
                         number(r.abs_diff), number(r.tolerance), r.pass ? "PASS" : "FAIL",
                         r.replicates, r.seed, r.wall_time_ms);
    }
    return out;
  }
  for (const auto& r : rows) {
    out += fmt::format(
        "{{\"suite\":{},\"case_id\":{},\"lhs\":{},\"rhs\":{},\"se_combined\":{},\"abs_diff\":{},"
        "\"tolerance\":{},\"verdict\":\"{}\",\"replicates\":{},\"seed\":{},\"wall_time_ms\":{}}}\n",
        nlohmann::json(r.suite).dump(), nlohmann::json(r.case_id).dump(), json_number(r.lhs),
        json_number(r.rhs), json_number(r.se_combined), json_number(r.abs_diff),
        json_number(r.tolerance), r.pass ? "PASS" : "FAIL", r.replicates, r.seed, r.wall_time_ms);
  }
  return out;
}

std::vector<ReportRow> parse_report(std::string_view text, ReportFormat format) {
  std::vector<ReportRow> rows;
  std::size_t pos = 0;
  bool header = format == ReportFormat::csv;
  while (pos < text.size()) {
    const std::size_t end = record_end(text, pos, format == ReportFormat::csv);
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    ReportRow r;
    if (format == ReportFormat::csv) {
      const auto f = split_csv_line(line);
      if (f.size() != std::size(kReportColumns)) {
        throw std::runtime_error(fmt::format("report: expected {} columns, got {}",
                                             std::size(kReportColumns), f.size()));
      }
      r.suite = f[0];
      r.case_id = f[1];
      r.lhs = parse_number(f[2]);
      r.rhs = parse_number(f[3]);
      r.se_combined = parse_number(f[4]);
      r.abs_diff = parse_number(f[5]);
      r.tolerance = parse_number(f[6]);
      r.pass = parse_verdict(f[7]);
      r.replicates = parse_unsigned(f[8]);
      r.seed = parse_unsigned(f[9]);
      r.wall_time_ms = parse_signed(f[10]);
    } else {
      const auto j = nlohmann::json::parse(line, nullptr, false);
      if (j.is_discarded() || !j.is_object()) {
        throw std::runtime_error("report: malformed JSON line");
      }
      try {
        auto num = [&](const char* key) {
          const auto& v = j.at(key);
          return v.is_string() ? parse_number(v.get<std::string>()) : v.get<double>();
        };
        r.suite = j.at("suite").get<std::string>();
        r.case_id = j.at("case_id").get<std::string>();
        r.lhs = num("lhs");
        r.rhs = num("rhs");
        r.se_combined = num("se_combined");
        r.abs_diff = num("abs_diff");
        r.tolerance = num("tolerance");
        r.pass = parse_verdict(j.at("verdict").get<std::string>());
        r.replicates = j.at("replicates").get<std::size_t>();
        r.seed = j.at("seed").get<std::uint64_t>();
        r.wall_time_ms = j.at("wall_time_ms").get<std::int64_t>();
      } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(fmt::format("report: {}", e.what()));
      }
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace poisson_chaos::verify
