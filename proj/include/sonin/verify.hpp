#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sonin/jacobi.hpp"
#include "sonin/kernels.hpp"

namespace sonin {

inline constexpr std::string_view kToolVersion = "0.3.0";

enum class RowStatus { checked, skipped_hypothesis, numeric_failure };

std::string_view to_string(RowStatus s);
std::optional<RowStatus> row_status_from_string(std::string_view s);

/// One row of a verification report. margin is rhs - lhs for every check, so
/// pass <=> status == checked && margin > 0.
struct VerificationResult {
  std::string check_id;
  int k = 0;
  double alpha = 0.0;
  double beta = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool pass = false;
  RowStatus status = RowStatus::checked;
  std::string detail;  // reason for a skip or failure; not part of the CSV
};

struct Tolerances {
  double identity_rel = 1e-9;
  double extremum_abs = 1e-13;
};

/// Every check id understood by run_check, in report order.
const std::vector<std::string>& check_ids();
bool is_check_id(std::string_view id);

/// Runs every requested check at one parameter point, sharing the extremum
/// scans between checks. Never throws for in-domain parameters: hypothesis
/// misses and numerical trouble end up in the row status.
class PointEvaluator {
 public:
  PointEvaluator(const Params& p, const Tolerances& tol = {}, Execution exec = Execution::serial);
  ~PointEvaluator();
  PointEvaluator(const PointEvaluator&) = delete;
  PointEvaluator& operator=(const PointEvaluator&) = delete;

  /// Throws std::invalid_argument for an unknown id.
  VerificationResult run(std::string_view check_id);

  /// Announces the checks about to run so that one full-window scan can
  /// serve all of them.
  void plan(std::span<const std::string> check_ids);

 private:
  struct Cache;
  std::unique_ptr<Cache> cache_;
};

VerificationResult run_check(std::string_view check_id, const Params& p, const Tolerances& tol = {});

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Parity { any, even, odd };

struct KSpec {
  int min = 0;
  int max = 0;
  int step = 1;
  Parity parity = Parity::any;
  /// When set, `count` degrees are drawn uniformly from [min, max] instead.
  std::optional<int> count;
  std::uint64_t seed = 0;

  std::vector<int> values() const;
};

struct AlphaSpec {
  std::vector<double> list;
  double lo = 0.0;
  double hi = 0.0;
  int count = 0;
  enum class Scale { log, linear, random } scale = Scale::log;
  std::uint64_t seed = 0;

  std::vector<double> values() const;
};

struct BetaMode {
  bool equal_alpha = true;
  std::vector<double> grid;
};

struct OutputSpec {
  std::string path;
  std::string format = "csv";
};

/// JSON sweep description. Field names follow the config file:
///   {"checks": [...],
///    "k_spec": {"min", "max", "step", "parity": "any|even|odd", ["count", "seed"]},
///    "alpha_spec": [...] | {"lo", "hi", "count", "scale": "log|linear|random", "seed"},
///    "beta_mode": "equal_alpha" | {"grid": [...]},
///    "tolerances": {"identity_rel", "extremum_abs"},
///    "output": {"path", "format": "csv|json"},
///    "parallel": true, "threads": 0}
/// With a random k draw and a random alpha draw of the same count the two
/// are paired element-wise instead of crossed.
struct SweepConfig {
  std::vector<std::string> checks;
  KSpec k_spec;
  AlphaSpec alpha_spec;
  BetaMode beta_mode;
  Tolerances tolerances;
  OutputSpec output;
  bool parallel = true;
  int threads = 0;  // 0: OpenMP default
  std::string source_json;

  static SweepConfig parse(std::string_view json_text);
  static SweepConfig load(const std::string& path);
  /// Throws ConfigError on empty ranges, unknown checks or invalid parameters.
  void validate() const;
  std::vector<Params> points() const;
};

struct CheckCounts {
  int checked = 0;
  int passed = 0;
  int failed = 0;
  int skipped = 0;
  int numeric_failures = 0;
};

struct Report {
  std::vector<VerificationResult> rows;
  std::string config_json;  // echoed into the JSON metadata

  std::map<std::string, CheckCounts> counts() const;
  void sort();
};

/// Runs cfg.checks at every point of the grid. Rows come back sorted by
/// (check_id, k, alpha, beta) whatever the execution order.
Report sweep(const SweepConfig& cfg, Execution exec);
Report sweep(const SweepConfig& cfg);

/// CSV: a "# generated ..." comment line, the fixed header, one row per
/// result, reals with 17 significant digits.
void write_csv(const Report& r, std::ostream& os, bool timestamp = true);
void write_json(const Report& r, std::ostream& os);
/// Writes to `path` in `format` ("csv" or "json"); I/O errors name the file.
void write_report(const Report& r, const std::string& path, std::string_view format);
Report read_csv(std::istream& is);
Report read_csv_file(const std::string& path);

/// 0 if no checked row fails, 1 on any failure, 3 if numeric failures are the
/// only problem. (2 is reserved for usage and config errors.)
int exit_code(const Report& r);

enum class Predictor { alpha, composite };

struct FitResult {
  double slope = 0.0;
  double stderr_slope = 0.0;
  double intercept = 0.0;
  std::size_t n = 0;
};

/// Least-squares slope of ln lhs against ln alpha, or against
/// ln(alpha^{1/3} (1 + alpha/k)^{1/6}) for Predictor::composite. Rows with
/// nonpositive lhs or predictor are ignored; fewer than five usable rows is
/// an error (std::invalid_argument).
FitResult fit_exponent(std::span<const VerificationResult> rows, Predictor predictor);

}  // namespace sonin
