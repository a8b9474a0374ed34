#include "sonin/envelope.hpp"

#include <fmt/format.h>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>

namespace sonin {

std::optional<double> delta_window(int k, double alpha) {
  if (!(alpha >= 0.5) || k < 0) return std::nullopt;
  if (alpha == 0.5) return 1.0;
  const double r = 2.0 * k + 2.0 * alpha + 1.0;
  // (r^2 - 4 alpha^2 - 3) / (r^2 - 4), both factors positive for alpha > 1/2
  const double num = (r - 2.0 * alpha) * (r + 2.0 * alpha) - 3.0;
  const double den = (r - 2.0) * (r + 2.0);
  return std::sqrt(num / den);
}

Geometry geometry(const Params& p) {
  p.validate();
  Geometry g;
  const double a = p.alpha;
  const double b = p.beta;
  const double scale = 2.0 * p.k + a + b + 1.0;
  g.r = p.r();
  const double sin_tau = (a + b + 1.0) / scale;
  const double sin_omega = (a - b) / scale;
  g.tau = std::asin(sin_tau);
  g.omega = std::asin(sin_omega);

  const double scale_23 = std::pow(scale, -2.0 / 3.0);
  const double cos_prod = 2.0 * std::cos(g.tau) * std::cos(g.omega);
  auto eta = [&](int j, double theta) {
    const double phase = g.tau + j * g.omega;
    const double s = std::sin(phase);
    return j * (std::cos(phase) - theta * std::cbrt(s * s * s * s / cos_prod) * scale_23);
  };
  g.eta_minus = eta(-1, 1.0 / 3.0);
  g.eta_plus = eta(1, 3.0 / 10.0);

  if (p.is_ultraspherical()) {
    const double cos_tau = std::sqrt((1.0 - sin_tau) * (1.0 + sin_tau));
    const double tan_tau = sin_tau / cos_tau;
    g.eta_sym = cos_tau * (1.0 - std::cbrt(0.5) / 3.0 * scale_23 * std::pow(tan_tau, 4.0 / 3.0));
    g.delta = delta_window(p.k, a);
    g.xi0 = std::sqrt(21.0 / (2.0 * p.k * p.k + 4.0 * a * p.k + 2.0 * a + 1.0));
  }
  if (a >= b && b > 0.5) {
    const double sa = std::sqrt(4.0 * a * a - 1.0);
    const double sb = std::sqrt(4.0 * b * b - 1.0);
    g.x0 = (sb - sa) / (sb + sa);
  }
  return g;
}

namespace {

void require_open_interval(double x, const char* what) {
  if (!(x > -1.0 && x < 1.0)) {
    throw std::domain_error(fmt::format("{}: x = {} outside (-1, 1)", what, x));
  }
}

}  // namespace

SoninPoint coeffs_full(const Params& p, double x) {
  p.validate();
  require_open_interval(x, "coeffs_full");
  const double a2 = p.alpha * p.alpha;
  const double b2 = p.beta * p.beta;
  const double big = 2.0 * p.k + p.alpha + p.beta + 1.0;
  const double R2 = big * big;
  const double u = (1.0 - x) * (1.0 + x);

  const double B1 = R2 * u - 2.0 * (1.0 + x) * a2 - 2.0 * (1.0 - x) * b2 + 1.0;
  const double dB1 = -2.0 * R2 * x - 2.0 * a2 + 2.0 * b2;

  SoninPoint s;
  s.x = x;
  s.A = x / (2.0 * u);
  s.B = B1 / (4.0 * u * u);
  s.dB = (dB1 * u + 4.0 * x * B1) / (4.0 * u * u * u);
  s.D = (a2 - b2) * (x * x + 1.0) + (2.0 * a2 + 2.0 * b2 - 1.0) * x;
  return s;
}

SoninPoint coeffs_window(int k, double alpha, double d, double x) {
  Params::ultraspherical(k, alpha);
  if (!(d > 0.0 && d <= 1.0)) throw std::domain_error(fmt::format("coeffs_window: bad d = {}", d));
  if (!(std::fabs(x) < d) || !(x > -1.0 && x < 1.0)) {
    throw std::domain_error(fmt::format("coeffs_window: |x| = {} not inside (0, d = {})", x, d));
  }
  using L = long double;
  const L r = 2.0L * k + 2.0L * alpha + 1.0L;
  const L r2 = r * r;
  const L a2 = static_cast<L>(alpha) * alpha;
  const L dd = static_cast<L>(d) * d;
  const L X = static_cast<L>(x);
  const L x2 = X * X;
  const L u = (1.0L - X) * (1.0L + X);
  const L v = (d - X) * (d + X);

  const L n1 = u * r2 - 4.0L * a2;
  const L n2 = 2.0L * dd - dd * dd + (3.0L - 4.0L * dd) * x2;
  const L dn2 = 2.0L * (3.0L - 4.0L * dd) * X;
  const L t1 = n1 / (4.0L * u * u);
  const L dt1 = (-2.0L * r2 * X * u + 4.0L * X * n1) / (4.0L * u * u * u);
  const L uv2 = u * v * v;
  const L duv2 = -2.0L * X * v * v - 4.0L * X * u * v;
  const L t2 = n2 / (4.0L * uv2);
  const L dt2 = dn2 / (4.0L * uv2) - n2 * duv2 / (4.0L * uv2 * uv2);

  const L D = (4.0L * a2 - (1.0L - dd) * r2) * v * v + (3.0L - 4.0L * dd) * x2 * x2 -
              2.0L * (5.0L * dd * dd - 9.0L * dd + 3.0L) * x2 - dd * dd * dd + 9.0L * dd * dd -
              9.0L * dd;

  SoninPoint s;
  s.x = x;
  s.A = static_cast<double>(X * (2.0L * dd - 1.0L - x2) / (2.0L * v * u));
  s.B = static_cast<double>(t1 + t2);
  s.dB = static_cast<double>(dt1 + dt2);
  s.D = static_cast<double>(D);
  return s;
}

double window_B_numerator(int k, double alpha, double d, double x) {
  using L = long double;
  const L r = 2.0L * k + 2.0L * alpha + 1.0L;
  const L dd = static_cast<L>(d) * d;
  const L X = x;
  const L u = (1.0L - X) * (1.0L + X);
  const L v = dd - X * X;
  const L n2 = 2.0L * dd - dd * dd + (3.0L - 4.0L * dd) * X * X;
  return static_cast<double>((u * r * r - 4.0L * alpha * alpha) * v * v + n2 * u);
}

namespace {

struct WindowWeight {
  double ln_w;   // ln W
  double dlog;   // W'/W
  double d2log;  // (W'/W)'
};

WindowWeight window_weight(const Params& p, const Window& w, double x) {
  const double wm = x - w.d_m;
  const double wM = w.d_M - x;
  const double om = 1.0 - x;
  const double op = 1.0 + x;
  WindowWeight ww;
  ww.ln_w = 0.25 * (std::log(wm) + std::log(wM)) + 0.5 * p.alpha * std::log1p(-x) +
            0.5 * p.beta * std::log1p(x);
  ww.dlog = 0.25 / wm - 0.25 / wM - 0.5 * p.alpha / om + 0.5 * p.beta / op;
  ww.d2log = -0.25 / (wm * wm) - 0.25 / (wM * wM) - 0.5 * p.alpha / (om * om) -
             0.5 * p.beta / (op * op);
  return ww;
}

void require_window_interior(const Window& w, double x, const char* what) {
  w.validate();
  if (!(x > w.d_m && x < w.d_M && x > -1.0 && x < 1.0)) {
    throw std::domain_error(
        fmt::format("{}: x = {} not strictly inside ({}, {})", what, x, w.d_m, w.d_M));
  }
}

}  // namespace

SoninPoint coeffs_general(const Params& p, const Window& w, double x) {
  p.validate();
  require_window_interior(w, x, "coeffs_general");
  const auto ww = window_weight(p, w, x);
  const double u = (1.0 - x) * (1.0 + x);
  const double drift = ((p.alpha + p.beta + 2.0) * x + p.alpha - p.beta) / u;
  const double lambda = p.k * (p.k + p.alpha + p.beta + 1.0) / u;

  SoninPoint s;
  s.x = x;
  s.A = ww.dlog + 0.5 * drift;
  s.B = ww.dlog * ww.dlog - ww.d2log + drift * ww.dlog + lambda;
  return s;
}

LogValue sonin_S(const Params& p, double x, const Window& w) {
  p.validate();
  require_window_interior(w, x, "sonin_S");
  double B;
  if (w.is_full()) {
    B = coeffs_full(p, x).B;
  } else if (w.is_symmetric() && p.is_ultraspherical()) {
    B = coeffs_window(p.k, p.alpha, w.d_M, x).B;
  } else {
    B = coeffs_general(p, w, x).B;
  }
  if (!(B > 0.0)) {
    throw OutsideOscillationRegion(
        fmt::format("sonin_S: B = {:.6g} <= 0 at x = {}, outside the oscillation region", B, x));
  }
  const auto ww = window_weight(p, w, x);
  const auto y = eval_orthonormal(p, x);
  const auto dy = eval_orthonormal_deriv(p, x);
  // f' / W = y' + (W'/W) y
  const auto fprime = dy + ScaledReal::from_double(ww.dlog) * y;
  const auto inner = y * y + fprime * fprime / ScaledReal::from_double(B);
  const auto S = ScaledReal::from_log(1, 2.0 * ww.ln_w) * inner;
  if (S.is_zero()) return {};
  return LogValue::from_log(S.ln_mag());
}

std::vector<IdentityCheck> identity_checks(int k, double alpha, double rel_tol) {
  if (!(alpha > 0.5) || k < 1) {
    throw std::invalid_argument(
        fmt::format("identity_checks: requires alpha > 1/2 and k >= 1, got k={}, alpha={}", k, alpha));
  }
  using F = boost::multiprecision::cpp_bin_float_50;
  const F a = alpha;
  const F a2 = a * a;
  const F r = F(2 * k) + 2 * a + 1;
  const F r2 = r * r;
  const F d2 = (r2 - 4 * a2 - 3) / (r2 - 4);  // delta^2
  const F one_m_d2 = (4 * a2 - 1) / (r2 - 4);

  // Numerator B1 of B at d = delta as the displayed sextic, in X = x^2.
  auto sextic = [&](const F& X) {
    return -r2 * X * X * X + ((1 + 2 * d2) * r2 + 4 * d2 - 4 * a2 - 3) * X * X -
           ((d2 * d2 + 2 * d2) * r2 - d2 * d2 - 8 * a2 * d2 + 6 * d2 - 3) * X +
           (d2 * r2 - 4 * a2 * d2 - d2 + 2) * d2;
  };
  // The same numerator assembled from the definition of B.
  auto numerator = [&](const F& X) {
    const F u = 1 - X;
    const F v = d2 - X;
    return (u * r2 - 4 * a2) * v * v + (2 * d2 - d2 * d2 + (3 - 4 * d2) * X) * u;
  };
  auto quartic_D = [&](const F& X) {
    return (4 * a2 - one_m_d2 * r2) * (d2 - X) * (d2 - X) + (3 - 4 * d2) * X * X -
           2 * (5 * d2 * d2 - 9 * d2 + 3) * X - d2 * d2 * d2 + 9 * d2 * d2 - 9 * d2;
  };
  const F d_scale = (r2 - 4) * (r2 - 4) * (r2 - 4) / (3 * (4 * a2 - 1));
  auto quadratic_r2 = [&](const F& X) {
    return 2 * (r2 - 4) * (2 * r2 - 12 * a2 - 5) * X - (r2 - 4 * a2 - 3) * (4 * r2 - 4 * a2 - 15);
  };
  auto quadratic_r4 = [&](const F& X) {
    return 2 * (r2 - 4) * (2 * r2 - 12 * a2 - 5) * X -
           (r2 - 4 * a2 - 3) * (4 * r2 * r2 - 4 * a2 - 15);
  };
  const F A0_delta = F(4 * k) * (k + 2 * a + 1) - (r2 + 4 * a + 2) * d2;

  std::vector<IdentityCheck> out;
  auto identity = [&](std::string name, const F& computed, const F& closed, IdentityKind kind) {
    IdentityCheck c;
    c.name = std::move(name);
    c.computed = static_cast<double>(computed);
    c.closed_form = static_cast<double>(closed);
    c.rel_err = static_cast<double>(abs(computed - closed) / abs(closed));
    c.kind = kind;
    c.pass = c.rel_err <= rel_tol;
    out.push_back(std::move(c));
  };
  auto sign = [&](std::string name, const F& value, bool holds) {
    IdentityCheck c;
    c.name = std::move(name);
    c.computed = static_cast<double>(value);
    c.kind = IdentityKind::sign;
    c.pass = holds;
    out.push_back(std::move(c));
  };

  const F quarter = d2 / 4;
  const F B1_delta = sextic(d2);
  const F B1_one = sextic(F(1));
  const F D_delta = d_scale * quartic_D(d2);
  const F D_zero = d_scale * quartic_D(F(0));

  identity("B1_delta", B1_delta, 5 * one_m_d2 * one_m_d2 * d2, IdentityKind::identity);
  identity("B1_one", B1_one, -4 * a2 * one_m_d2 * one_m_d2, IdentityKind::identity);
  identity("B1_numerator", sextic(quarter), numerator(quarter), IdentityKind::identity);
  identity("D_delta", D_delta, -5 * (4 * a2 - 1) * (r2 - 4 * a2 - 3), IdentityKind::identity);
  identity("scaledD_quadratic_0", D_zero, quadratic_r2(F(0)), IdentityKind::identity);
  identity("scaledD_quadratic_half", d_scale * quartic_D(quarter), quadratic_r2(quarter),
           IdentityKind::identity);
  identity("scaledD_quadratic_0_r4_reading", D_zero, quadratic_r4(F(0)),
           IdentityKind::informational);

  sign("B1_delta_positive", B1_delta, B1_delta > 0);
  sign("B1_one_negative", B1_one, B1_one < 0);
  sign("D_delta_negative", D_delta, D_delta < 0);
  sign("D_zero_negative", D_zero, D_zero < 0);
  identity("A0_delta", A0_delta * (r2 - 4), 2 * (2 * a + 1) * (4 * a2 + 4 * a + 5 - 2 * r2),
           IdentityKind::identity);
  // The zeros of A0 bound the maxima, so containment in (-delta, delta) needs A0(delta) < 0.
  sign("A0_delta_negative", A0_delta, A0_delta < 0);
  return out;
}

}  // namespace sonin
