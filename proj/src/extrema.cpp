#include "sonin/extrema.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

namespace sonin {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// n nodes strictly inside (x_lo, x_hi), uniform in theta = arccos x, ascending in x.
void append_angle_grid(double x_lo, double x_hi, int n, std::vector<double>& out) {
  const double th_hi = std::acos(x_lo);
  const double th_lo = std::acos(x_hi);
  const double step = (th_hi - th_lo) / (n + 1);
  for (int i = 1; i <= n; ++i) out.push_back(std::cos(th_hi - step * i));
}

// Interval where the numerator of B for the full-window transform is
// positive; P_k oscillates there and every local maximum of M lies inside.
std::optional<std::pair<double, double>> oscillatory_interval(const Params& p) {
  const double a2 = p.alpha * p.alpha;
  const double b2 = p.beta * p.beta;
  const double big = 2.0 * p.k + p.alpha + p.beta + 1.0;
  const double R2 = big * big;
  const double lin = b2 - a2;
  const double c0 = R2 - 2.0 * a2 - 2.0 * b2 + 1.0;
  const double disc = lin * lin + R2 * c0;
  if (!(disc > 0.0)) return std::nullopt;
  const double root = std::sqrt(disc);
  return std::pair{std::max(-1.0, (lin - root) / R2), std::min(1.0, (lin + root) / R2)};
}

std::vector<double> scan_nodes(const Params& p, const Window& w, int nodes_per_degree) {
  const int n = std::max(64, nodes_per_degree * (p.k + 2));
  std::vector<double> xs;
  xs.reserve(2 * static_cast<std::size_t>(n));
  append_angle_grid(w.d_m, w.d_M, n, xs);

  if (const auto osc = oscillatory_interval(p)) {
    const double win_lo = std::acos(w.d_M);
    const double win_hi = std::acos(w.d_m);
    const double th_lo = std::acos(osc->second);
    const double th_hi = std::acos(osc->first);
    const double pad = 0.25 * (th_hi - th_lo);
    const double lo = std::max(win_lo, th_lo - pad);
    const double hi = std::min(win_hi, th_hi + pad);
    if (hi > lo && hi - lo < 0.5 * (win_hi - win_lo)) {
      append_angle_grid(std::cos(hi), std::cos(lo), n, xs);
    }
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  // Nodes must be strictly interior.
  std::erase_if(xs, [&](double x) { return !(x > w.d_m && x < w.d_M); });
  return xs;
}

struct Bracket {
  double lo;
  double hi;
  double cls_lo;  // points used to classify the root
  double cls_hi;
};

// Sign changes of s over the nodes; exact zeros become degenerate brackets.
std::vector<Bracket> find_brackets(std::span<const double> xs, std::span<const signed char> s) {
  std::vector<Bracket> out;
  const std::size_t n = xs.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (s[i] == 0) {
      const double left = i > 0 ? xs[i - 1] : xs[i];
      const double right = i + 1 < n ? xs[i + 1] : xs[i];
      out.push_back({xs[i], xs[i], left, right});
      continue;
    }
    if (i + 1 < n && s[i + 1] != 0 && s[i + 1] != s[i]) {
      out.push_back({xs[i], xs[i + 1], xs[i], xs[i + 1]});
    }
  }
  return out;
}

template <typename SignAt>
void bisect(std::vector<Bracket>& brackets, double tol, SignAt&& sign_at) {
  std::vector<signed char> lo_sign;
  {
    std::vector<double> los;
    for (const auto& b : brackets) los.push_back(b.lo);
    lo_sign.resize(los.size());
    sign_at(std::span<const double>(los), std::span<signed char>(lo_sign));
  }
  std::vector<std::size_t> active;
  std::vector<double> mids;
  std::vector<signed char> mid_sign;
  for (int iter = 0; iter < 200; ++iter) {
    active.clear();
    mids.clear();
    for (std::size_t i = 0; i < brackets.size(); ++i) {
      const auto& b = brackets[i];
      const double mid = 0.5 * (b.lo + b.hi);
      if (b.hi - b.lo > tol && mid > b.lo && mid < b.hi) {
        active.push_back(i);
        mids.push_back(mid);
      }
    }
    if (active.empty()) break;
    mid_sign.resize(mids.size());
    sign_at(std::span<const double>(mids), std::span<signed char>(mid_sign));
    for (std::size_t j = 0; j < active.size(); ++j) {
      auto& b = brackets[active[j]];
      if (mid_sign[j] == 0) {
        b.lo = b.hi = mids[j];
      } else if (mid_sign[j] == lo_sign[active[j]]) {
        b.lo = mids[j];
      } else {
        b.hi = mids[j];
      }
    }
  }
  for (auto& b : brackets) {
    if (b.hi - b.lo < std::fabs(b.cls_hi - b.cls_lo)) {
      b.cls_lo = b.lo;
      b.cls_hi = b.hi;
    }
  }
}

std::size_t count_roots(std::span<const signed char> s) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == 0) {
      ++count;
    } else if (i + 1 < s.size() && s[i + 1] != 0 && s[i + 1] != s[i]) {
      ++count;
    }
  }
  return count;
}

}  // namespace

std::vector<ExtremumRecord> scan_extrema(const Params& p, const Window& w, const ScanOptions& opt) {
  p.validate();
  w.validate();
  if (opt.nodes_per_degree < 4) {
    throw std::invalid_argument("scan_extrema: nodes_per_degree must be at least 4");
  }
  const CriticalEvaluator eval(p, w);
  const auto xs = scan_nodes(p, w, opt.nodes_per_degree);
  CriticalSamples samples;
  eval.evaluate(xs, samples, opt.exec);

  auto q_brackets = find_brackets(xs, samples.q_sign);
  auto y_brackets = opt.minima ? find_brackets(xs, samples.y_sign) : std::vector<Bracket>{};

  if (opt.density_check) {
    const auto fine = scan_nodes(p, w, 4 * opt.nodes_per_degree);
    CriticalSamples fs;
    eval.evaluate(fine, fs, opt.exec);
    const auto fine_q = count_roots(fs.q_sign);
    const auto fine_y = count_roots(fs.y_sign);
    const auto coarse_y = opt.minima ? y_brackets.size() : count_roots(samples.y_sign);
    if (fine_q != q_brackets.size() || fine_y != coarse_y) {
      throw GridTooCoarse(fmt::format(
          "scan_extrema: grid too coarse for k={}, alpha={}, beta={}: {} / {} critical points "
          "and {} / {} zeros at 1x / 4x density",
          p.k, p.alpha, p.beta, q_brackets.size(), fine_q, coarse_y, fine_y));
    }
  }

  CriticalSamples tmp;
  bisect(q_brackets, opt.x_tol, [&](std::span<const double> at, std::span<signed char> out) {
    eval.evaluate(at, tmp, opt.exec);
    std::copy(tmp.q_sign.begin(), tmp.q_sign.end(), out.begin());
  });
  if (opt.minima) {
    bisect(y_brackets, opt.x_tol, [&](std::span<const double> at, std::span<signed char> out) {
      eval.evaluate_y_sign(at, out, opt.exec);
    });
  }

  // Classify critical points by the sign of M' ~ y Q on either side, and
  // evaluate M at every root in one batch.
  std::vector<double> probe;
  for (const auto& b : q_brackets) {
    probe.push_back(b.cls_lo);
    probe.push_back(b.cls_hi);
  }
  const std::size_t n_probe = probe.size();
  for (const auto& b : q_brackets) probe.push_back(0.5 * (b.lo + b.hi));
  for (const auto& b : y_brackets) probe.push_back(0.5 * (b.lo + b.hi));
  CriticalSamples ps;
  eval.evaluate(probe, ps, opt.exec);

  std::vector<ExtremumRecord> records;
  records.reserve(q_brackets.size() + y_brackets.size());
  for (std::size_t i = 0; i < q_brackets.size(); ++i) {
    const int g_lo = ps.y_sign[2 * i] * ps.q_sign[2 * i];
    const int g_hi = ps.y_sign[2 * i + 1] * ps.q_sign[2 * i + 1];
    const std::size_t at = n_probe + i;
    ExtremumKind kind;
    if (g_lo > 0 && g_hi < 0) {
      kind = ExtremumKind::max;
    } else if (g_lo < 0 && g_hi > 0) {
      kind = ExtremumKind::min;
    } else {
      kind = ps.ln_M[at] >= std::max(ps.ln_M[2 * i], ps.ln_M[2 * i + 1]) ? ExtremumKind::max
                                                                        : ExtremumKind::min;
    }
    records.push_back({probe[at], std::exp(ps.ln_M[at]), ps.ln_M[at], kind, 0});
  }
  for (std::size_t i = 0; i < y_brackets.size(); ++i) {
    const std::size_t at = n_probe + q_brackets.size() + i;
    records.push_back({probe[at], std::exp(ps.ln_M[at]), ps.ln_M[at], ExtremumKind::min, 0});
  }
  std::sort(records.begin(), records.end(),
            [](const ExtremumRecord& a, const ExtremumRecord& b) { return a.x < b.x; });
  for (std::size_t i = 0; i < records.size(); ++i) records[i].index = static_cast<int>(i);
  return records;
}

ExtremumRecord global_max_from(const Params& p, const Window& w,
                               std::span<const ExtremumRecord> records) {
  std::optional<ExtremumRecord> best;
  auto consider = [&](const ExtremumRecord& c) {
    if (!best) {
      best = c;
      return;
    }
    const double gap = c.ln_M - best->ln_M;
    if (gap > 1e-12) {
      best = c;
    } else if (gap >= -1e-12 && std::fabs(c.x) < std::fabs(best->x)) {
      best = c;
    }
  };
  for (const auto& r : records) {
    if (r.kind == ExtremumKind::max) consider(r);
  }
  for (const double x : {w.d_m, w.d_M}) {
    const auto m = weighted_M(p, x, w);
    if (m.ln_value > kNegInf) consider({x, m.value, m.ln_value, ExtremumKind::max, -1});
  }
  if (!best) {
    throw std::runtime_error(
        fmt::format("global_max: no maximum found for k={}, alpha={}, beta={}", p.k, p.alpha, p.beta));
  }
  return *best;
}

ExtremumRecord global_max(const Params& p, const Window& w, const ScanOptions& opt) {
  ScanOptions o = opt;
  o.minima = false;
  const auto records = scan_extrema(p, w, o);
  return global_max_from(p, w, records);
}

namespace {

constexpr double kTurningTol = 1e-9;
// Relative accuracy of consecutive maxima; steps below it are not resolved.
constexpr double kStepResolution = 1e-13;

// Smallest relative step of a sequence of maxima that must strictly decrease
// (direction -1) or increase (+1) left to right. +inf when fewer than two.
double min_relative_step(const std::vector<const ExtremumRecord*>& seq, int direction) {
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    const double from = direction < 0 ? seq[i]->ln_M : seq[i + 1]->ln_M;
    const double to = direction < 0 ? seq[i + 1]->ln_M : seq[i]->ln_M;
    worst = std::min(worst, -std::expm1(to - from));
  }
  return worst;
}

void finish(StructureVerdict& v, double margin, std::string detail, bool monotone = false) {
  if (std::isinf(margin) && margin > 0) {
    v.status = CheckStatus::pass;
    v.margin = 1.0;
    v.detail = "vacuous: fewer than two maxima on each side";
    return;
  }
  v.margin = margin;
  v.status = margin > 0.0 ? CheckStatus::pass : CheckStatus::fail;
  v.detail = std::move(detail);
  if (monotone && std::fabs(margin) <= kStepResolution) {
    v.status = CheckStatus::unresolved;
    v.detail += fmt::format("; smallest step {:.3g} is below the resolution {:.0e}", margin, kStepResolution);
  }
}

}  // namespace

StructureReport structure_checks(const Params& p, const Window& w,
                                 std::span<const ExtremumRecord> records, const Geometry& geom) {
  StructureReport rep;
  rep.unimodal.name = "unimodal_about_x0";
  rep.eta_containment.name = "extrema_in_eta_interval";
  rep.delta_containment.name = "maxima_in_delta_interval";
  rep.delta_window_decreasing.name = "delta_window_maxima_decreasing";

  std::vector<const ExtremumRecord*> maxima;
  for (const auto& r : records) {
    if (r.kind == ExtremumKind::max) maxima.push_back(&r);
  }

  if (!w.is_full()) {
    rep.unimodal.detail = rep.eta_containment.detail = rep.delta_containment.detail =
        "requires the full window";
  } else {
    if (geom.x0) {
      const double x0 = *geom.x0;
      std::vector<const ExtremumRecord*> left, right;
      for (const auto* m : maxima) {
        if (m->x <= x0 + kTurningTol) left.push_back(m);
        if (m->x >= x0 - kTurningTol) right.push_back(m);
      }
      const double margin = std::min(min_relative_step(left, -1), min_relative_step(right, +1));
      finish(rep.unimodal, margin, fmt::format("x0 = {:.17g}", x0), true);
    } else {
      rep.unimodal.detail = "requires alpha >= beta > 1/2";
    }

    if (p.thm3_applicable()) {
      double margin = std::numeric_limits<double>::infinity();
      for (const auto& r : records) {
        margin = std::min({margin, r.x - geom.eta_minus, geom.eta_plus - r.x});
      }
      finish(rep.eta_containment, margin,
             fmt::format("eta = ({:.17g}, {:.17g})", geom.eta_minus, geom.eta_plus));
    } else {
      rep.eta_containment.detail = "requires k >= 6, alpha >= beta >= (1+sqrt2)/4";
    }

    if (p.thm4_applicable() && geom.delta) {
      double margin = std::numeric_limits<double>::infinity();
      for (const auto* m : maxima) margin = std::min(margin, *geom.delta - std::fabs(m->x));
      finish(rep.delta_containment, margin, fmt::format("delta = {:.17g}", *geom.delta));
    } else {
      rep.delta_containment.detail = "requires alpha = beta > 1/2";
    }
  }

  const bool delta_window = geom.delta && w.is_symmetric() && w.d_M == *geom.delta;
  if (p.thm4_applicable() && delta_window) {
    std::vector<const ExtremumRecord*> right;
    for (const auto* m : maxima) {
      if (m->x >= -kTurningTol) right.push_back(m);
    }
    finish(rep.delta_window_decreasing, min_relative_step(right, -1),
           fmt::format("delta = {:.17g}", *geom.delta), true);
  } else {
    rep.delta_window_decreasing.detail = "requires alpha = beta > 1/2 on the delta window";
  }
  return rep;
}

}  // namespace sonin
