#include "sonin/bounds.hpp"

#include <fmt/format.h>

#include <array>
#include <cmath>
#include <numbers>

#include "sonin/envelope.hpp"
#include "sonin/log_gamma.hpp"

namespace sonin {

namespace {

constexpr std::array<std::pair<BoundId, std::string_view>, 8> kNames{{
    {BoundId::chow_eq1, "chow_eq1"},
    {BoundId::emn_eq2, "emn_eq2"},
    {BoundId::krasikov_eq3, "krasikov_eq3"},
    {BoundId::thm1, "thm1"},
    {BoundId::thm4, "thm4"},
    {BoundId::lemma_glav, "lemma_glav"},
    {BoundId::odd_230, "odd_230"},
    {BoundId::odd_29, "odd_29"},
}};

constexpr double kPi = std::numbers::pi;
constexpr double kE = std::numbers::e;

double tan_tau(const Params& p) {
  const double s = (p.alpha + p.beta + 1.0) / (2.0 * p.k + p.alpha + p.beta + 1.0);
  return s / std::sqrt((1.0 - s) * (1.0 + s));
}

}  // namespace

std::string_view to_string(BoundId id) {
  for (const auto& [key, name] : kNames) {
    if (key == id) return name;
  }
  return "unknown";
}

std::optional<BoundId> bound_from_string(std::string_view name) {
  for (const auto& [key, n] : kNames) {
    if (n == name) return key;
  }
  return std::nullopt;
}

std::optional<std::string> hypothesis_failure(BoundId id, const Params& p) {
  const double a = p.alpha;
  const double b = p.beta;
  const bool even = p.k % 2 == 0;
  switch (id) {
    case BoundId::chow_eq1:
      if (!(-0.5 < b && b <= a && a < 0.5)) return "requires -1/2 < beta <= alpha < 1/2";
      return std::nullopt;
    case BoundId::emn_eq2:
      if (!(a >= -0.5 && b >= -0.5)) return "requires alpha, beta >= -1/2";
      return std::nullopt;
    case BoundId::krasikov_eq3:
      if (p.k < 6) return "requires k >= 6";
      if (!(a >= b && b >= kAlphaThreshold)) return "requires alpha >= beta >= (1+sqrt2)/4";
      return std::nullopt;
    case BoundId::thm1:
    case BoundId::lemma_glav:
      if (p.k < 6) return "requires k >= 6";
      if (a != b) return "requires alpha = beta";
      if (!(a >= kAlphaThreshold)) return "requires alpha >= (1+sqrt2)/4";
      return std::nullopt;
    case BoundId::thm4:
      if (a != b) return "requires alpha = beta";
      if (!(a > 0.5)) return "requires alpha > 1/2";
      if (even && p.k < 2) return "requires k >= 2 for even k";
      if (!even && p.k < 3) return "requires k >= 3 for odd k";
      return std::nullopt;
    case BoundId::odd_230:
      if (even || p.k < 3) return "requires odd k >= 3";
      if (a != b) return "requires alpha = beta";
      if (!(a > 0.5)) return "requires alpha > 1/2";
      return std::nullopt;
    case BoundId::odd_29:
      if (even || p.k < 7) return "requires odd k >= 7";
      if (a != b) return "requires alpha = beta";
      if (!(a >= kAlphaThreshold)) return "requires alpha >= (1+sqrt2)/4";
      return std::nullopt;
  }
  return "unknown bound";
}

double rhs_bound(BoundId id, const Params& p) {
  p.validate();
  if (auto why = hypothesis_failure(id, p)) {
    throw HypothesisViolation(fmt::format("{}: {} (k={}, alpha={}, beta={})", to_string(id), *why,
                                          p.k, p.alpha, p.beta));
  }
  const double a = p.alpha;
  const double b = p.beta;
  const double s = a + b;
  const double k = p.k;
  const bool even = p.k % 2 == 0;
  switch (id) {
    case BoundId::chow_eq1: {
      const double ln = (2.0 * a + 1.0) * std::numbers::ln2 + log_gamma(k + s + 1.0) +
                        log_gamma(k + a + 1.0) - std::log(kPi) - log_gamma(k + 1.0) -
                        2.0 * a * std::log(2.0 * k + s + 1.0) - log_gamma(k + b + 1.0);
      return std::exp(ln);
    }
    case BoundId::emn_eq2:
      return 2.0 * kE * (2.0 + std::hypot(a, b)) / kPi;
    case BoundId::krasikov_eq3: {
      const double t = (s + 1.0) * (2.0 * k + s + 1.0);
      return 11.0 * std::cbrt(t * t / (4.0 * k * (k + s + 1.0)));
    }
    case BoundId::thm1: {
      const double mu = even ? 10.0 / 7.0 : 22.0;
      return mu * std::cbrt(a) * std::pow(1.0 + a / k, 1.0 / 6.0);
    }
    case BoundId::thm4:
      if (even) return 2.0 / kPi * (1.0 + 1.0 / (8.0 * (k + a) * (k + a)));
      return 230.0 / kPi;
    case BoundId::lemma_glav: {
      const double c = even ? 12.0 / 13.0 : 14.0;
      return c * std::cbrt(p.r() * tan_tau(p));
    }
    case BoundId::odd_230:
      return 230.0 / kPi;
    case BoundId::odd_29:
      return 29.0 / kPi;
  }
  throw std::logic_error("rhs_bound: unknown id");
}

double pointwise_bound(const Params& p, double x) {
  p.validate();
  if (!(x > -1.0 && x < 1.0)) {
    throw std::domain_error(fmt::format("pointwise_bound: x = {} outside (-1, 1)", x));
  }
  const double a = p.alpha;
  const double b = p.beta;
  const double n1 = 2.0 * p.k + 2.0 * a + 2.0 * b + 1.0;
  const double n2 = n1 + 1.0;
  const double den = n2 * n2 - 2.0 * a * a / (1.0 - x) - 2.0 * b * b / (1.0 + x);
  if (!(den > 0.0)) {
    throw std::domain_error(fmt::format("pointwise_bound: denominator nonpositive at x = {}", x));
  }
  return 2.0 * kE / kPi * n1 * n2 / den;
}

GammaRatio gamma_ratio_check(double x) {
  if (!(x >= 0.0)) throw std::domain_error(fmt::format("gamma_ratio_check: x = {} < 0", x));
  GammaRatio g;
  g.ln_lhs = log_gamma(x + 1.0) - 2.0 * log_gamma(0.5 * x + 1.0);
  g.ln_rhs = (x + 0.5) * std::numbers::ln2 - 0.5 * std::log(kPi * (x + 0.5));
  // With y = (x+1)/2 the duplication formula turns rhs/lhs into
  // G(y+1/2) / (G(y) sqrt(y - 1/4)).
  g.ln_margin = log_gamma_half_ratio_excess(0.5 * (x + 1.0));
  g.lhs = std::exp(g.ln_lhs);
  g.rhs = std::exp(g.ln_rhs);
  return g;
}

VFactors v_factors(int k, double alpha) {
  if (k < 3 || k % 2 == 0) {
    throw std::invalid_argument(fmt::format("v_factors: requires odd k >= 3, got {}", k));
  }
  if (!(alpha >= 0.5)) {
    throw std::invalid_argument(fmt::format("v_factors: requires alpha >= 1/2, got {}", alpha));
  }
  const double r = 2.0 * k + 2.0 * alpha + 1.0;
  const double xi2 = 21.0 / (2.0 * k * k + 4.0 * alpha * k + 2.0 * alpha + 1.0);
  const double d_here = *delta_window(k, alpha);
  const double d_down = *delta_window(k - 1, alpha + 1.0);
  const double gap_here = d_here * d_here - xi2;
  const double gap_down = d_down * d_down - xi2;
  if (!(gap_down > 0.0) || !(gap_here > 0.0)) {
    throw std::domain_error(
        fmt::format("v_factors: window degenerate at k={}, alpha={} (xi0^2 = {})", k, alpha, xi2));
  }
  VFactors f;
  f.v = (r - k) * k * xi2 * std::sqrt(gap_here) / ((1.0 - xi2) * std::sqrt(gap_down));
  f.v1 = (1.0 + 1.0 / (8.0 * (k + alpha) * (k + alpha))) * f.v;
  return f;
}

Theorem1Reduction theorem1_reduction(int k, double alpha) {
  if (k < 6 || !(alpha >= kAlphaThreshold)) {
    throw std::invalid_argument(fmt::format(
        "theorem1_reduction: requires k >= 6, alpha >= (1+sqrt2)/4, got k={}, alpha={}", k, alpha));
  }
  const auto p = Params::ultraspherical(k, alpha);
  const double t = tan_tau(p);
  const double r = p.r();

  const double eps = std::cbrt(0.5) / 3.0 * std::pow(r, -2.0 / 3.0) * std::pow(t, 4.0 / 3.0);
  if (!(eps < 1.0 / 31.0)) {
    throw std::logic_error(
        fmt::format("theorem1_reduction: auxiliary constant {} >= 1/31 at k={}, alpha={}", eps, k, alpha));
  }

  Theorem1Reduction red;
  red.ratio = std::cbrt(r * t / alpha) / std::pow(1.0 + alpha / k, 1.0 / 6.0);
  red.limit = std::cbrt(4.0 * std::numbers::sqrt2 - 2.0);
  return red;
}

}  // namespace sonin
