#pragma once

// Inner loop of the orthonormal three-term recurrence, shared by the scalar
// entry points and the batched kernels. Values are carried as a double
// mantissa with a separate natural-log scale; the mantissas are renormalized
// by exact powers of two whenever they leave [2^-400, 2^400].

#include <algorithm>
#include <cmath>

#include "sonin/jacobi.hpp"

namespace sonin::detail {

inline constexpr double kRescaleUp = 0x1p+400;
inline constexpr double kRescaleDown = 0x1p-400;
inline constexpr double kRescaleLn = 277.25887222397812377;  // 400 ln 2

struct Scaled {
  double mant;
  double ln_scale;
  double prev_mant = 0.0;  // p_{k-1} on the same scale
};

inline Scaled recurrence_point(const RecurrenceTable& t, double x) {
  double prev = 0.0;
  double cur = 1.0;
  double ln_scale = t.ln_p0;
  for (int n = 0; n < t.degree; ++n) {
    const double next = ((x - t.diag[n]) * cur - t.offdiag[n] * prev) * t.inv_next[n];
    prev = cur;
    cur = next;
    const double m = std::max(std::fabs(prev), std::fabs(cur));
    const double f = m > kRescaleUp ? kRescaleDown : (m < kRescaleDown ? kRescaleUp : 1.0);
    const double ln_f = m > kRescaleUp ? kRescaleLn : (m < kRescaleDown ? -kRescaleLn : 0.0);
    prev *= f;
    cur *= f;
    ln_scale += ln_f;
  }
  return {cur, ln_scale, prev};
}

inline ScaledReal to_scaled(const Scaled& s) {
  if (s.mant == 0.0) return ScaledReal::zero();
  return ScaledReal::from_log(s.mant > 0 ? 1 : -1, std::log(std::fabs(s.mant)) + s.ln_scale);
}

}  // namespace sonin::detail
