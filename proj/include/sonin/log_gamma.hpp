#pragma once

namespace sonin {

/// ln Gamma(x) for x > 0.
///
/// Stirling series with eight Bernoulli terms for x >= 10; smaller
/// arguments are shifted upward and the shift product divided out.
/// Relative accuracy is about 1e-15 on [0.5, 1e8] (absolute near the zeros
/// at x = 1, 2). Throws std::domain_error for x <= 0.
double log_gamma(double x);

/// Remainder of the Stirling series: ln Gamma(x) - [(x - 1/2) ln x - x + ln(2 pi)/2].
/// Requires x >= 10.
double stirling_remainder(double x);

/// ln(Gamma(y + 1/2) / Gamma(y)) - ln(sqrt(y - 1/4)) for y >= 1/2, computed
/// without cancellation for large y (asymptotic series in 1/y).
double log_gamma_half_ratio_excess(double y);

}  // namespace sonin
