#include "sonin/jacobi.hpp"

#include <fmt/format.h>

#include <stdexcept>

#include "sonin/detail/recurrence.hpp"
#include "sonin/log_gamma.hpp"

namespace sonin {

Params Params::make(int k, double alpha, double beta) {
  Params p{k, alpha, beta};
  p.validate();
  return p;
}

void Params::validate() const {
  if (k < 0) throw std::invalid_argument(fmt::format("degree must be nonnegative, got {}", k));
  if (!(alpha > -1.0) || !(beta > -1.0) || !std::isfinite(alpha) || !std::isfinite(beta)) {
    throw std::invalid_argument(
        fmt::format("weight exponents must exceed -1, got alpha={}, beta={}", alpha, beta));
  }
}

Window Window::symmetric(double d) {
  Window w{-d, d};
  w.validate();
  return w;
}

void Window::validate() const {
  if (!(d_m >= -1.0 && d_m < d_M && d_M <= 1.0)) {
    throw std::invalid_argument(
        fmt::format("window must satisfy -1 <= d_m < d_M <= 1, got ({}, {})", d_m, d_M));
  }
}

RecurrenceTable RecurrenceTable::build(const Params& p) {
  p.validate();
  const double a = p.alpha;
  const double b = p.beta;
  const double s = a + b;
  const int k = p.k;

  RecurrenceTable t;
  t.degree = k;
  t.ln_p0 = -0.5 * log_norm(Params{0, a, b});
  t.diag.resize(k);
  t.offdiag.assign(k + 1, 0.0);
  t.inv_next.resize(k);

  for (int n = 0; n < k; ++n) {
    if (n == 0) {
      t.diag[n] = (b - a) / (s + 2.0);
    } else {
      const double m = 2.0 * n + s;
      t.diag[n] = (b * b - a * a) / (m * (m + 2.0));
    }
  }
  for (int n = 1; n <= k; ++n) {
    if (n == 1) {
      // The generic form is 0/0 at a + b = -1; this is its reduced version.
      t.offdiag[n] = 2.0 / (s + 2.0) * std::sqrt((1.0 + a) * (1.0 + b) / (s + 3.0));
    } else {
      const double m = 2.0 * n + s;
      t.offdiag[n] = 2.0 / m * std::sqrt(n * (n + a) * (n + b) * (n + s) / ((m - 1.0) * (m + 1.0)));
    }
  }
  for (int n = 0; n < k; ++n) t.inv_next[n] = 1.0 / t.offdiag[n + 1];
  return t;
}

double log_norm(const Params& p) {
  p.validate();
  const double a = p.alpha;
  const double b = p.beta;
  const double ln2 = std::numbers::ln2;
  if (p.k == 0) {
    // h_0 = 2^{a+b+1} Gamma(a+1) Gamma(b+1) / Gamma(a+b+2)
    return (a + b + 1.0) * ln2 + log_gamma(a + 1.0) + log_gamma(b + 1.0) - log_gamma(a + b + 2.0);
  }
  const double k = p.k;
  return (a + b + 1.0) * ln2 - std::log(2.0 * k + a + b + 1.0) + log_gamma(k + a + 1.0) +
         log_gamma(k + b + 1.0) - log_gamma(k + a + b + 1.0) - log_gamma(k + 1.0);
}

namespace {

void require_closed_interval(double x, const char* what) {
  if (!(x >= -1.0 && x <= 1.0)) {
    throw std::domain_error(fmt::format("{}: x = {} outside [-1, 1]", what, x));
  }
}

}  // namespace

ScaledReal eval_orthonormal(const Params& p, double x) {
  require_closed_interval(x, "eval_orthonormal");
  const auto table = RecurrenceTable::build(p);
  return detail::to_scaled(detail::recurrence_point(table, x));
}

double log_derivative_prefactor(const Params& p) {
  return 0.5 * std::log(p.k * (p.k + p.alpha + p.beta + 1.0));
}

ScaledReal eval_orthonormal_deriv(const Params& p, double x) {
  require_closed_interval(x, "eval_orthonormal_deriv");
  p.validate();
  if (p.k == 0) return ScaledReal::zero();
  const Params lowered{p.k - 1, p.alpha + 1.0, p.beta + 1.0};
  return ScaledReal::from_log(1, log_derivative_prefactor(p)) * eval_orthonormal(lowered, x);
}

ScaledReal value_at_zero_even(int k, double alpha) {
  if (k < 0 || k % 2 != 0) {
    throw std::domain_error(fmt::format("value_at_zero_even: degree {} is not even", k));
  }
  const Params p = Params::ultraspherical(k, alpha);
  const double half = k / 2;
  const double ln_standard = log_gamma(k + alpha + 1.0) - k * std::numbers::ln2 -
                             log_gamma(half + 1.0) - log_gamma(half + alpha + 1.0);
  const int sign = (k / 2) % 2 == 0 ? 1 : -1;
  return ScaledReal::from_log(sign, ln_standard - 0.5 * log_norm(p));
}

LogValue weighted_M(const Params& p, double x, const Window& w) {
  p.validate();
  w.validate();
  if (!(w.contains(x) && x >= -1.0 && x <= 1.0)) {
    throw std::domain_error(
        fmt::format("weighted_M: x = {} outside the window ({}, {})", x, w.d_m, w.d_M));
  }
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();

  // At x = +-1 the window factor and the weight vanish together.
  if (x == 1.0 || x == -1.0) {
    const bool right = x == 1.0;
    const double exponent = (right ? p.alpha : p.beta) + 0.5;
    if (exponent > 0.0) return {0.0, kNegInf};
    if (exponent < 0.0) {
      throw std::domain_error("weighted_M: weighted square is unbounded at the endpoint");
    }
    const double other_gap = right ? 1.0 - w.d_m : w.d_M + 1.0;
    const double other_exp = right ? p.beta : p.alpha;
    const auto y = eval_orthonormal(p, x);
    if (y.is_zero()) return {0.0, kNegInf};
    return LogValue::from_log(0.5 * std::log(other_gap) + other_exp * std::numbers::ln2 +
                              2.0 * y.ln_mag());
  }
  if (x == w.d_m || x == w.d_M) return {0.0, kNegInf};

  const auto y = eval_orthonormal(p, x);
  if (y.is_zero()) return {0.0, kNegInf};
  const double ln = 0.5 * (std::log(x - w.d_m) + std::log(w.d_M - x)) +
                    p.alpha * std::log1p(-x) + p.beta * std::log1p(x) + 2.0 * y.ln_mag();
  return LogValue::from_log(ln);
}

double ode_residual(const Params& p, double x) {
  p.validate();
  if (!(x > -1.0 && x < 1.0)) {
    throw std::domain_error(fmt::format("ode_residual: x = {} outside (-1, 1)", x));
  }
  const double a = p.alpha;
  const double b = p.beta;
  const double lambda = p.k * (p.k + a + b + 1.0);

  const auto y = eval_orthonormal(p, x);
  const auto dy = eval_orthonormal_deriv(p, x);
  ScaledReal d2y;
  if (p.k >= 2) {
    const Params once{p.k - 1, a + 1.0, b + 1.0};
    const Params twice{p.k - 2, a + 2.0, b + 2.0};
    d2y = ScaledReal::from_log(1, log_derivative_prefactor(p) + log_derivative_prefactor(once)) *
          eval_orthonormal(twice, x);
  }

  const auto lambda_y = ScaledReal::from_double(lambda) * y;
  const auto lhs = ScaledReal::from_double((1.0 - x) * (1.0 + x)) * d2y;
  const auto drift = ScaledReal::from_double((a + b + 2.0) * x + a - b) * dy;
  const auto residual = lhs - drift + lambda_y;
  const auto scale = lambda_y.abs() + dy.abs() + ScaledReal::one();
  return (residual.abs() / scale).to_double();
}

}  // namespace sonin
