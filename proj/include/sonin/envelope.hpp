#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sonin/jacobi.hpp"

namespace sonin {

/// Thrown by sonin_S where B <= 0: the Sonin function is undefined there.
class OutsideOscillationRegion : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Coefficients of f'' - 2 A f' + B f = 0 for the transformed solution f at x,
/// with the analytic derivative dB and the monotonicity indicator D.
struct SoninPoint {
  double x = 0.0;
  double A = 0.0;
  double B = 0.0;
  double dB = 0.0;
  double D = 0.0;
  std::optional<double> S;
};

struct Geometry {
  double r = 0.0;      // 2k + 2 alpha + 1
  double tau = 0.0;    // sin tau = (alpha + beta + 1) / (2k + alpha + beta + 1)
  double omega = 0.0;  // sin omega = (alpha - beta) / (2k + alpha + beta + 1)
  std::optional<double> delta;
  double eta_minus = 0.0;
  double eta_plus = 0.0;
  std::optional<double> eta_sym;  // ultraspherical bound |x| < eta
  std::optional<double> x0;
  std::optional<double> xi0;
};

/// sqrt(1 - (4 alpha^2 - 1) / ((2k + 2 alpha + 1)^2 - 4)), defined for alpha >= 1/2.
std::optional<double> delta_window(int k, double alpha);

Geometry geometry(const Params& p);

/// A, B, D for z = (1-x)^{alpha/2+1/4} (1+x)^{beta/2+1/4} P_k, x in (-1, 1).
/// D = 2 (1-x^2)^3 (4AB - B').
SoninPoint coeffs_full(const Params& p, double x);

/// A, B, D for g = (d^2-x^2)^{1/4} (1-x^2)^{alpha/2} P_k^{(alpha,alpha)}, |x| < d <= 1.
/// D = (2 (d^2-x^2)^3 (1-x^2)^2 / x) (4AB - B'), given by its closed quartic.
SoninPoint coeffs_window(int k, double alpha, double d, double x);

/// Numerator 4 (1-x^2)^2 (d^2-x^2)^2 B of the windowed B; defined for every x.
double window_B_numerator(int k, double alpha, double d, double x);

/// A and B for an arbitrary window and (alpha, beta), from the general
/// transformation f = W y of the Jacobi equation. D is left at zero.
SoninPoint coeffs_general(const Params& p, const Window& w, double x);

/// Sonin function S = f^2 + f'^2 / B at x for the transformed solution on
/// window w. Full windows use coeffs_full, symmetric windows with alpha = beta
/// use coeffs_window, anything else coeffs_general. Throws
/// OutsideOscillationRegion when B <= 0.
LogValue sonin_S(const Params& p, double x, const Window& w = Window::full());

enum class IdentityKind { identity, sign, informational };

struct IdentityCheck {
  std::string name;
  double computed = 0.0;
  double closed_form = 0.0;
  double rel_err = 0.0;  // identities only
  IdentityKind kind = IdentityKind::identity;
  bool pass = false;
};

/// Exact algebraic facts about the delta-window coefficients at (k, alpha):
/// the sextic numerator B1 at delta and 1, the scaled quartic D at delta and its
/// reduction to a quadratic, and the sign conditions used for the window
/// lemmas. Polynomials are expanded in 50-digit arithmetic. Requires
/// alpha > 1/2 and k >= 1.
std::vector<IdentityCheck> identity_checks(int k, double alpha, double rel_tol = 1e-9);

}  // namespace sonin
