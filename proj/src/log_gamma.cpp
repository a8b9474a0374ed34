#include "sonin/log_gamma.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sonin {

namespace {

constexpr double kShiftTarget = 10.0;

// B_{2n} / (2n (2n - 1)), n = 1..8
constexpr std::array<double, 8> kStirling = {
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
};

// Coefficients of y^{-n}, n = 1..14, for
// ln Gamma(y + 1/2) - ln Gamma(y) - ln(y - 1/4) / 2.
constexpr std::array<double, 14> kHalfRatio = {
    0.0,
    1.0 / 64.0,
    1.0 / 128.0,
    1.0 / 2048.0,
    -3.0 / 2048.0,
    1.0 / 49152.0,
    39.0 / 32768.0,
    1.0 / 1048576.0,
    -2645.0 / 1572864.0,
    1.0 / 20971520.0,
    32163.0 / 8388608.0,
    1.0 / 402653184.0,
    -1720635.0 / 134217728.0,
    1.0 / 7516192768.0,
};

}  // namespace

double stirling_remainder(double x) {
  if (!(x >= kShiftTarget)) throw std::domain_error("stirling_remainder: requires x >= 10");
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double sum = 0.0;
  for (auto it = kStirling.rbegin(); it != kStirling.rend(); ++it) sum = sum * inv2 + *it;
  return sum * inv;
}

double log_gamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("log_gamma: argument must be positive");
  double shift = 1.0;
  double z = x;
  while (z < kShiftTarget) {
    shift *= z;
    z += 1.0;
  }
  constexpr double half_ln_2pi = 0.91893853320467274178;
  const double base = (z - 0.5) * std::log(z) - z + half_ln_2pi + stirling_remainder(z);
  return shift == 1.0 ? base : base - std::log(shift);
}

double log_gamma_half_ratio_excess(double y) {
  if (!(y >= 0.5)) throw std::domain_error("log_gamma_half_ratio_excess: requires y >= 1/2");
  if (y < 20.0) return log_gamma(y + 0.5) - log_gamma(y) - 0.5 * std::log(y - 0.25);
  const double inv = 1.0 / y;
  double sum = 0.0;
  for (auto it = kHalfRatio.rbegin(); it != kHalfRatio.rend(); ++it) sum = sum * inv + *it;
  return sum * inv;
}

}  // namespace sonin
