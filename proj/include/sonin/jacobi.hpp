#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "sonin/scaled_real.hpp"

namespace sonin {

/// (1 + sqrt 2) / 4, the lower end of the parameter range of the main bounds.
inline const double kAlphaThreshold = (1.0 + std::numbers::sqrt2) / 4.0;

/// Degree and weight exponents of a Jacobi polynomial P_k^{(alpha, beta)}.
struct Params {
  int k = 0;
  double alpha = 0.0;
  double beta = 0.0;

  /// Validated constructor; throws std::invalid_argument unless k >= 0 and
  /// alpha, beta > -1.
  static Params make(int k, double alpha, double beta);
  static Params ultraspherical(int k, double alpha) { return make(k, alpha, alpha); }

  void validate() const;

  bool is_ultraspherical() const { return alpha == beta; }
  /// 2k + 2 alpha + 1, the natural scale of the ultraspherical case.
  double r() const { return 2.0 * k + 2.0 * alpha + 1.0; }

  bool thm1_applicable() const { return k >= 6 && alpha == beta && alpha >= kAlphaThreshold; }
  bool thm3_applicable() const {
    return k >= 6 && alpha >= beta && beta >= kAlphaThreshold;
  }
  bool thm4_applicable() const { return alpha == beta && alpha > 0.5; }

  friend bool operator==(const Params&, const Params&) = default;
};

/// Interval (d_m, d_M) of the window factor sqrt((x - d_m)(d_M - x)).
struct Window {
  double d_m = -1.0;
  double d_M = 1.0;

  static Window full() { return {}; }
  static Window symmetric(double d);
  /// Throws std::invalid_argument unless -1 <= d_m < d_M <= 1.
  void validate() const;

  bool is_full() const { return d_m == -1.0 && d_M == 1.0; }
  bool is_symmetric() const { return d_m == -d_M; }
  bool contains(double x) const { return x >= d_m && x <= d_M; }

  friend bool operator==(const Window&, const Window&) = default;
};

/// A nonnegative quantity together with its natural log. `value` saturates
/// to 0 or +inf when ln_value leaves the double range.
struct LogValue {
  double value = 0.0;
  double ln_value = -std::numeric_limits<double>::infinity();

  static LogValue from_log(double ln) { return {std::exp(ln), ln}; }
};

/// Jacobi-matrix coefficients of the orthonormal recurrence
///   x p_n = a_{n+1} p_{n+1} + b_n p_n + a_n p_{n-1},
/// tabulated up to degree k.
struct RecurrenceTable {
  int degree = 0;
  double ln_p0 = 0.0;            // ln of the constant p_0 = 1 / sqrt(h_0)
  std::vector<double> diag;      // b_n, n = 0..degree-1
  std::vector<double> offdiag;   // a_n, n = 0..degree (a_0 = 0)
  std::vector<double> inv_next;  // 1 / a_{n+1}, n = 0..degree-1

  static RecurrenceTable build(const Params& p);
};

/// ln h_k, the squared L2 norm of the standard P_k^{(alpha, beta)} under
/// the weight (1-x)^alpha (1+x)^beta.
double log_norm(const Params& p);

/// Orthonormal P_k(x) for x in [-1, 1].
ScaledReal eval_orthonormal(const Params& p, double x);

/// d/dx of the orthonormal P_k, via
///   d/dx P_k^{(a,b)} = sqrt(k (k + a + b + 1)) P_{k-1}^{(a+1,b+1)}   (orthonormal form).
ScaledReal eval_orthonormal_deriv(const Params& p, double x);

/// ln sqrt(k (k + alpha + beta + 1)), the orthonormal derivative prefactor.
double log_derivative_prefactor(const Params& p);

/// Orthonormal P_k^{(alpha, alpha)}(0) for even k, from the Gamma closed form.
/// Throws std::domain_error for odd k (the value is then exactly zero).
ScaledReal value_at_zero_even(int k, double alpha);

/// M_k(x; d_m, d_M) = sqrt((x - d_m)(d_M - x)) (1-x)^alpha (1+x)^beta P_k(x)^2.
///
/// At x = +-1 on a window reaching that endpoint the combined exponent of the
/// vanishing factor decides: positive gives 0, zero gives the finite limit,
/// negative is a domain error.
LogValue weighted_M(const Params& p, double x, const Window& w = Window::full());

/// |(1-x^2) y'' - ((a+b+2) x + a - b) y' + k (k+a+b+1) y| divided by
/// |k (k+a+b+1) y| + |y'| + 1, for y = orthonormal P_k and x in (-1, 1).
/// Both derivatives come from the derivative relation, so this is an
/// independent consistency check at any parameter scale.
double ode_residual(const Params& p, double x);

}  // namespace sonin
