#include "sonin/verify.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "sonin/bounds.hpp"
#include "sonin/envelope.hpp"
#include "sonin/extrema.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sonin {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Identity rows are named after the entries of identity_checks().
constexpr std::string_view kIdentityPrefix = "identity_";
constexpr std::string_view kSignPrefix = "sign_";

constexpr int kPointwiseSamples = 64;
constexpr int kOdeSamples = 100;
constexpr double kOdeTolerance = 1e-8;
constexpr double kReductionSlack = 1e-12;

// Angle-uniform interior nodes of (-1, 1).
std::vector<double> angle_nodes(int n) {
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i) xs[i] = std::cos(std::numbers::pi * (n - i - 0.5) / n);
  return xs;
}

}  // namespace

std::string_view to_string(RowStatus s) {
  switch (s) {
    case RowStatus::checked:
      return "checked";
    case RowStatus::skipped_hypothesis:
      return "skipped_hypothesis";
    case RowStatus::numeric_failure:
      return "numeric_failure";
  }
  return "unknown";
}

std::optional<RowStatus> row_status_from_string(std::string_view s) {
  for (auto st : {RowStatus::checked, RowStatus::skipped_hypothesis, RowStatus::numeric_failure}) {
    if (to_string(st) == s) return st;
  }
  return std::nullopt;
}

const std::vector<std::string>& check_ids() {
  static const std::vector<std::string> ids = {
      "chow_eq1",
      "emn_eq2",
      "krasikov_eq3",
      "thm1",
      "lemma_glav",
      "thm1_ratio",
      "thm4_even_value",
      "thm4_even_argmax",
      "thm4_odd_value",
      "odd_29",
      "thm4_containment",
      "thm3_containment",
      "thm5_unimodal",
      "lmonult_decreasing",
      "identity_B1_delta",
      "identity_B1_one",
      "identity_B1_numerator",
      "identity_D_delta",
      "identity_scaledD_quadratic_0",
      "identity_scaledD_quadratic_half",
      "identity_A0_delta",
      "sign_B1_delta_positive",
      "sign_B1_one_negative",
      "sign_D_delta_negative",
      "sign_D_zero_negative",
      "sign_A0_delta_negative",
      "pointwise_eq",
      "gamma_ratio",
      "ode_residual",
  };
  return ids;
}

bool is_check_id(std::string_view id) {
  const auto& ids = check_ids();
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

struct PointEvaluator::Cache {
  Params p;
  Tolerances tol;
  Execution exec;
  std::optional<Geometry> geom;
  std::optional<std::vector<ExtremumRecord>> full_all;
  std::optional<std::vector<ExtremumRecord>> full_max;
  std::optional<std::vector<ExtremumRecord>> delta_max;
  std::optional<std::vector<IdentityCheck>> identities;
  bool want_minima = false;

  const Geometry& geometry() {
    if (!geom) geom = sonin::geometry(p);
    return *geom;
  }

  ScanOptions options(bool minima) const {
    ScanOptions o;
    o.minima = minima;
    o.exec = exec;
    return o;
  }

  const std::vector<ExtremumRecord>& full_scan(bool minima) {
    if (full_all) return *full_all;
    if (minima || want_minima) {
      full_all = scan_extrema(p, Window::full(), options(true));
      return *full_all;
    }
    if (!full_max) full_max = scan_extrema(p, Window::full(), options(false));
    return *full_max;
  }

  Window delta_window() {
    const auto& g = geometry();
    if (!g.delta) throw std::logic_error("delta window undefined");
    return Window::symmetric(*g.delta);
  }

  const std::vector<ExtremumRecord>& delta_scan() {
    if (!delta_max) delta_max = scan_extrema(p, delta_window(), options(false));
    return *delta_max;
  }

  const IdentityCheck& identity(std::string_view name) {
    if (!identities) identities = identity_checks(p.k, p.alpha, tol.identity_rel);
    for (const auto& c : *identities) {
      if (c.name == name) return c;
    }
    throw std::logic_error(fmt::format("no identity named {}", name));
  }
};

PointEvaluator::PointEvaluator(const Params& p, const Tolerances& tol, Execution exec)
    : cache_(std::make_unique<Cache>()) {
  p.validate();
  cache_->p = p;
  cache_->tol = tol;
  cache_->exec = exec;
}

PointEvaluator::~PointEvaluator() = default;

void PointEvaluator::plan(std::span<const std::string> ids) {
  cache_->want_minima = std::find(ids.begin(), ids.end(), "thm3_containment") != ids.end();
}

namespace {

struct Skip {
  std::string why;
};

void require(bool ok, std::string_view why) {
  if (!ok) throw Skip{std::string(why)};
}

void require_bound(BoundId id, const Params& p) {
  if (auto why = hypothesis_failure(id, p)) throw Skip{*why};
}

void set_checked(VerificationResult& r, double lhs, double rhs, std::optional<double> margin = {}) {
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = margin.value_or(rhs - lhs);
  if (!std::isfinite(lhs) || !std::isfinite(rhs) || !std::isfinite(r.margin)) {
    r.status = RowStatus::numeric_failure;
    r.pass = false;
    r.detail = "non-finite value";
    return;
  }
  r.status = RowStatus::checked;
  r.pass = r.margin > 0.0;
}

void set_structure(VerificationResult& r, const StructureVerdict& v) {
  set_checked(r, 0.0, v.margin);
  if (v.status == CheckStatus::unresolved) {
    r.status = RowStatus::numeric_failure;
    r.pass = false;
    r.detail = v.detail;
  }
}

double max_abs_maximum(std::span<const ExtremumRecord> records) {
  double worst = 0.0;
  for (const auto& r : records) {
    if (r.kind == ExtremumKind::max) worst = std::max(worst, std::fabs(r.x));
  }
  return worst;
}

}  // namespace

VerificationResult PointEvaluator::run(std::string_view id) {
  if (!is_check_id(id)) throw std::invalid_argument(fmt::format("unknown check id '{}'", id));
  Cache& c = *cache_;
  const Params& p = c.p;

  VerificationResult row;
  row.check_id = std::string(id);
  row.k = p.k;
  row.alpha = p.alpha;
  row.beta = p.beta;
  row.lhs = row.rhs = row.margin = kNaN;

  try {
    const bool even = p.k % 2 == 0;
    auto full_max_value = [&] {
      return global_max_from(p, Window::full(), c.full_scan(false)).M;
    };

    if (id == "chow_eq1" || id == "emn_eq2" || id == "krasikov_eq3" || id == "thm1" ||
        id == "lemma_glav") {
      const auto bid = *bound_from_string(id);
      require_bound(bid, p);
      const double rhs = rhs_bound(bid, p);
      set_checked(row, full_max_value(), rhs);
    } else if (id == "thm1_ratio") {
      require_bound(BoundId::thm1, p);
      const auto red = theorem1_reduction(p.k, p.alpha);
      set_checked(row, red.ratio, red.limit * (1.0 + kReductionSlack));
    } else if (id == "thm4_even_value" || id == "thm4_even_argmax") {
      require(even, "requires even k");
      require_bound(BoundId::thm4, p);
      const Window w = c.delta_window();
      if (id == "thm4_even_value") {
        set_checked(row, weighted_M(p, 0.0, w).value, rhs_bound(BoundId::thm4, p));
      } else {
        const auto g = global_max_from(p, w, c.delta_scan());
        set_checked(row, std::fabs(g.x), c.tol.extremum_abs);
      }
    } else if (id == "thm4_odd_value" || id == "odd_29") {
      const auto bid = id == "odd_29" ? BoundId::odd_29 : BoundId::odd_230;
      require_bound(bid, p);
      const auto g = global_max_from(p, c.delta_window(), c.delta_scan());
      set_checked(row, g.M, rhs_bound(bid, p));
    } else if (id == "thm4_containment") {
      require(p.thm4_applicable(), "requires alpha = beta > 1/2");
      set_checked(row, max_abs_maximum(c.full_scan(false)), *c.geometry().delta);
    } else if (id == "thm3_containment") {
      require(p.thm3_applicable(), "requires k >= 6, alpha >= beta >= (1+sqrt2)/4");
      const auto& g = c.geometry();
      const auto& recs = c.full_scan(true);
      // Signed slack of the extremum closest to either end of (eta_-1, eta_1).
      double lhs = -1.0, rhs = g.eta_plus;
      double worst = std::numeric_limits<double>::infinity();
      for (const auto& r : recs) {
        if (r.x - g.eta_minus < worst) {
          worst = r.x - g.eta_minus;
          lhs = -r.x;
          rhs = -g.eta_minus;
        }
        if (g.eta_plus - r.x < worst) {
          worst = g.eta_plus - r.x;
          lhs = r.x;
          rhs = g.eta_plus;
        }
      }
      set_checked(row, lhs, rhs);
    } else if (id == "thm5_unimodal") {
      require(p.alpha >= p.beta && p.beta > 0.5, "requires alpha >= beta > 1/2");
      require(p.k >= 1, "requires k >= 1");
      const auto rep = structure_checks(p, Window::full(), c.full_scan(false), c.geometry());
      set_structure(row, rep.unimodal);
    } else if (id == "lmonult_decreasing") {
      require(p.thm4_applicable(), "requires alpha = beta > 1/2");
      require(p.k >= 1, "requires k >= 1");
      const auto rep = structure_checks(p, c.delta_window(), c.delta_scan(), c.geometry());
      set_structure(row, rep.delta_window_decreasing);
    } else if (id.starts_with(kIdentityPrefix) || id.starts_with(kSignPrefix)) {
      require(p.thm4_applicable(), "requires alpha = beta > 1/2");
      require(p.k >= 1, "requires k >= 1");
      if (id.starts_with(kIdentityPrefix)) {
        const auto& ic = c.identity(id.substr(kIdentityPrefix.size()));
        set_checked(row, ic.rel_err, c.tol.identity_rel);
      } else {
        const auto name = id.substr(kSignPrefix.size());
        const auto& ic = c.identity(name);
        const double oriented = name.ends_with("_negative") ? -ic.computed : ic.computed;
        set_checked(row, 0.0, oriented);
      }
    } else if (id == "pointwise_eq") {
      require_bound(BoundId::emn_eq2, p);
      double best_rel = std::numeric_limits<double>::infinity();
      double lhs = kNaN, rhs = kNaN;
      for (const double x : angle_nodes(kPointwiseSamples)) {
        double bound;
        try {
          bound = pointwise_bound(p, x);
        } catch (const std::domain_error&) {
          continue;
        }
        const double m = weighted_M(p, x).value;
        const double rel = (bound - m) / bound;
        if (rel < best_rel) {
          best_rel = rel;
          lhs = m;
          rhs = bound;
        }
      }
      require(std::isfinite(best_rel), "denominator nonpositive at every sample");
      set_checked(row, lhs, rhs);
    } else if (id == "gamma_ratio") {
      const double x = p.k + 2.0 * p.alpha;
      require(x >= 0.0, "requires k + 2 alpha >= 0");
      const auto g = gamma_ratio_check(x);
      set_checked(row, g.ln_lhs, g.ln_rhs, g.ln_margin);
    } else if (id == "ode_residual") {
      double worst = 0.0;
      for (const double x : angle_nodes(kOdeSamples)) worst = std::max(worst, ode_residual(p, x));
      set_checked(row, worst, kOdeTolerance);
    }
  } catch (const Skip& s) {
    row.status = RowStatus::skipped_hypothesis;
    row.pass = false;
    row.detail = s.why;
  } catch (const std::exception& e) {
    row.status = RowStatus::numeric_failure;
    row.pass = false;
    row.lhs = row.rhs = row.margin = kNaN;
    row.detail = e.what();
  }
  return row;
}

VerificationResult run_check(std::string_view check_id, const Params& p, const Tolerances& tol) {
  PointEvaluator ev(p, tol, Execution::parallel);
  return ev.run(check_id);
}

Report sweep(const SweepConfig& cfg, Execution exec) {
  cfg.validate();
  const auto points = cfg.points();
  std::vector<std::vector<VerificationResult>> per_point(points.size());
  const auto n = static_cast<std::ptrdiff_t>(points.size());

  auto work = [&](std::ptrdiff_t i) {
    PointEvaluator ev(points[i], cfg.tolerances, exec);
    ev.plan(cfg.checks);
    for (const auto& id : cfg.checks) per_point[i].push_back(ev.run(id));
  };

#ifdef _OPENMP
  if (exec == Execution::parallel) {
    const int threads = cfg.threads > 0 ? cfg.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (std::ptrdiff_t i = 0; i < n; ++i) work(i);
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) work(i);
  }
#else
  (void)exec;
  for (std::ptrdiff_t i = 0; i < n; ++i) work(i);
#endif

  Report rep;
  rep.config_json = cfg.source_json;
  for (auto& rows : per_point) {
    for (auto& r : rows) rep.rows.push_back(std::move(r));
  }
  rep.sort();
  return rep;
}

Report sweep(const SweepConfig& cfg) {
  return sweep(cfg, cfg.parallel ? Execution::parallel : Execution::serial);
}

}  // namespace sonin
