#pragma once

// Batched evaluation of orthonormal Jacobi polynomials and of the critical
// functions used by the extremum scan. The batched kernels are blocked so the
// inner recurrence loop vectorizes, and split across OpenMP threads when
// Execution::parallel is requested. The serial path runs the same recurrence
// one point at a time and is kept as the reference for testing.

#include <span>
#include <vector>

#include "sonin/jacobi.hpp"

namespace sonin {

enum class Execution { serial, parallel };

/// Number of OpenMP threads available (1 without OpenMP).
int max_threads();

/// Orthonormal P_k at every x: value = mant * exp(ln_scale).
void eval_orthonormal_batch(const RecurrenceTable& table, std::span<const double> xs,
                            std::span<double> mant, std::span<double> ln_scale,
                            Execution exec = Execution::parallel);

/// As eval_orthonormal_batch, also returning p_{k-1} on the same scale:
/// p_k = mant * exp(ln_scale), p_{k-1} = prev_mant * exp(ln_scale).
void eval_orthonormal_pair_batch(const RecurrenceTable& table, std::span<const double> xs,
                                 std::span<double> mant, std::span<double> prev_mant,
                                 std::span<double> ln_scale, Execution exec = Execution::parallel);

namespace reference {

/// The orthonormal recurrence carried out entirely in ScaledReal arithmetic.
/// Slow; used only to cross-check the rescaled-double kernels.
ScaledReal eval_orthonormal(const Params& p, double x);

}  // namespace reference

/// Signs of y = P_k and of the critical function
///   Q(x) = (x - d_m)(d_M - x)(1 - x^2) y'(x) + c(x) y(x),
/// whose zeros inside the window are exactly the zeros of f' for
///   f = ((x - d_m)(d_M - x))^{1/4} (1-x)^{alpha/2} (1+x)^{beta/2} y,
/// together with ln M(x) = 2 ln|f| (the weighted square).
struct CriticalSamples {
  std::vector<signed char> y_sign;
  std::vector<signed char> q_sign;
  std::vector<double> ln_M;

  void resize(std::size_t n) {
    y_sign.resize(n);
    q_sign.resize(n);
    ln_M.resize(n);
  }
};

class CriticalEvaluator {
 public:
  CriticalEvaluator(const Params& p, const Window& w);

  const Params& params() const { return params_; }
  const Window& window() const { return window_; }

  /// All points must lie strictly inside the window.
  void evaluate(std::span<const double> xs, CriticalSamples& out,
                Execution exec = Execution::parallel) const;
  /// Only the sign of y; cheaper (one recurrence).
  void evaluate_y_sign(std::span<const double> xs, std::span<signed char> out,
                       Execution exec = Execution::parallel) const;

 private:
  Params params_;
  Window window_;
  RecurrenceTable table_;
  // (1 - x^2) p_k' = (drift_const - k x) p_k + lower_coeff p_{k-1}
  double drift_const_ = 0.0;
  double lower_coeff_ = 0.0;
};

}  // namespace sonin
