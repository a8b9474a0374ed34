#include <fmt/chrono.h>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "sonin/verify.hpp"

namespace sonin {

using nlohmann::json;

namespace {

constexpr std::string_view kCsvHeader = "check_id,k,alpha,beta,lhs,rhs,margin,pass,status";

std::string real(double v) { return fmt::format("{:.17g}", v); }

json real_json(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

double parse_real(std::string_view s, int line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw std::runtime_error(fmt::format("csv line {}: bad number '{}'", line, s));
  }
  return v;
}

}  // namespace

std::map<std::string, CheckCounts> Report::counts() const {
  std::map<std::string, CheckCounts> out;
  for (const auto& r : rows) {
    auto& c = out[r.check_id];
    switch (r.status) {
      case RowStatus::checked:
        ++c.checked;
        ++(r.pass ? c.passed : c.failed);
        break;
      case RowStatus::skipped_hypothesis:
        ++c.skipped;
        break;
      case RowStatus::numeric_failure:
        ++c.numeric_failures;
        break;
    }
  }
  return out;
}

void Report::sort() {
  std::stable_sort(rows.begin(), rows.end(), [](const VerificationResult& a, const VerificationResult& b) {
    return std::tie(a.check_id, a.k, a.alpha, a.beta) < std::tie(b.check_id, b.k, b.alpha, b.beta);
  });
}

void write_csv(const Report& r, std::ostream& os, bool timestamp) {
  if (timestamp) {
    fmt::print(os, "# generated by sonin {} at {:%Y-%m-%dT%H:%M:%SZ}\n", kToolVersion,
               fmt::gmtime(std::chrono::system_clock::to_time_t(std::chrono::system_clock::now())));
  }
  fmt::print(os, "{}\n", kCsvHeader);
  for (const auto& row : r.rows) {
    fmt::print(os, "{},{},{},{},{},{},{},{},{}\n", row.check_id, row.k, real(row.alpha),
               real(row.beta), real(row.lhs), real(row.rhs), real(row.margin),
               row.pass ? "true" : "false", to_string(row.status));
  }
}

void write_json(const Report& r, std::ostream& os) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    json j = {{"check_id", row.check_id},
              {"k", row.k},
              {"alpha", row.alpha},
              {"beta", row.beta},
              {"lhs", real_json(row.lhs)},
              {"rhs", real_json(row.rhs)},
              {"margin", real_json(row.margin)},
              {"pass", row.pass},
              {"status", std::string(to_string(row.status))}};
    if (!row.detail.empty()) j["detail"] = row.detail;
    rows.push_back(std::move(j));
  }
  json counts = json::object();
  for (const auto& [id, c] : r.counts()) {
    counts[id] = {{"checked", c.checked},
                  {"passed", c.passed},
                  {"failed", c.failed},
                  {"skipped", c.skipped},
                  {"numeric_failures", c.numeric_failures}};
  }
  json config = nullptr;
  if (!r.config_json.empty()) config = json::parse(r.config_json);
  const json doc = {
      {"metadata", {{"tool_version", std::string(kToolVersion)}, {"config_echo", config}, {"counts", counts}}},
      {"rows", rows}};
  os << doc.dump(2) << '\n';
}

void write_report(const Report& r, const std::string& path, std::string_view format) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(fmt::format("cannot open '{}' for writing", path));
  if (format == "json") {
    write_json(r, out);
  } else if (format == "csv") {
    write_csv(r, out);
  } else {
    throw std::invalid_argument(fmt::format("unknown report format '{}'", format));
  }
  out.flush();
  if (!out) throw std::runtime_error(fmt::format("error while writing '{}'", path));
}

Report read_csv(std::istream& is) {
  Report rep;
  std::string line;
  int lineno = 0;
  bool header = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!header) {
      if (line != kCsvHeader) throw std::runtime_error(fmt::format("csv line {}: unexpected header", lineno));
      header = true;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 9) throw std::runtime_error(fmt::format("csv line {}: expected 9 fields", lineno));
    VerificationResult r;
    r.check_id = std::string(f[0]);
    r.k = static_cast<int>(parse_real(f[1], lineno));
    r.alpha = parse_real(f[2], lineno);
    r.beta = parse_real(f[3], lineno);
    r.lhs = parse_real(f[4], lineno);
    r.rhs = parse_real(f[5], lineno);
    r.margin = parse_real(f[6], lineno);
    r.pass = f[7] == "true";
    const auto st = row_status_from_string(f[8]);
    if (!st) throw std::runtime_error(fmt::format("csv line {}: bad status '{}'", lineno, f[8]));
    r.status = *st;
    rep.rows.push_back(std::move(r));
  }
  if (!header) throw std::runtime_error("csv: missing header");
  return rep;
}

Report read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open '{}'", path));
  try {
    return read_csv(in);
  } catch (const std::exception& e) {
    throw std::runtime_error(fmt::format("{}: {}", path, e.what()));
  }
}

int exit_code(const Report& r) {
  bool numeric = false;
  for (const auto& row : r.rows) {
    if (row.status == RowStatus::checked && !row.pass) return 1;
    if (row.status == RowStatus::numeric_failure) numeric = true;
  }
  return numeric ? 3 : 0;
}

FitResult fit_exponent(std::span<const VerificationResult> rows, Predictor predictor) {
  std::vector<double> xs, ys;
  for (const auto& r : rows) {
    if (r.status != RowStatus::checked || !(r.lhs > 0.0) || !(r.alpha > 0.0)) continue;
    double pred = r.alpha;
    if (predictor == Predictor::composite) {
      if (r.k <= 0) continue;
      pred = std::cbrt(r.alpha) * std::pow(1.0 + r.alpha / r.k, 1.0 / 6.0);
    }
    xs.push_back(std::log(pred));
    ys.push_back(std::log(r.lhs));
  }
  const std::size_t n = xs.size();
  if (n < 5) {
    throw std::invalid_argument(fmt::format("fit_exponent: insufficient data ({} usable rows, need 5)", n));
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fit_exponent: predictor has no spread");
  FitResult f;
  f.n = n;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = ys[i] - (f.intercept + f.slope * xs[i]);
    sse += e * e;
  }
  f.stderr_slope = std::sqrt(sse / static_cast<double>(n - 2) / sxx);
  return f;
}

}  // namespace sonin
