#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

namespace sonin {

/// Signed real stored as (sign, ln|value|).
///
/// Products and quotients are exact additions of logarithms; sums factor
/// out the larger magnitude so no intermediate leaves the native range.
/// Used to carry weights such as (1-x)^alpha with alpha ~ 1e6 together with
/// polynomial values of reciprocal size.
class ScaledReal {
 public:
  constexpr ScaledReal() = default;

  static ScaledReal from_double(double v);
  /// `sign` is reduced to {-1, 0, +1}; `ln_mag` is ignored for sign 0.
  static ScaledReal from_log(int sign, double ln_mag);
  static constexpr ScaledReal zero() { return {}; }
  static constexpr ScaledReal one() { return ScaledReal(1, 0.0); }

  constexpr int sign() const { return sign_; }
  /// Natural log of |value|; -inf for zero.
  constexpr double ln_mag() const {
    return sign_ == 0 ? -std::numeric_limits<double>::infinity() : ln_mag_;
  }
  constexpr bool is_zero() const { return sign_ == 0; }

  /// sign * exp(ln_mag). Throws std::overflow_error when the magnitude
  /// exceeds the double range; underflow returns a signed zero.
  double to_double() const;
  std::optional<double> try_to_double() const;

  ScaledReal abs() const { return sign_ == 0 ? *this : ScaledReal(1, ln_mag_); }
  ScaledReal sqrt() const;  // requires sign >= 0
  ScaledReal pow(double e) const;  // requires sign > 0, or sign 0 with e > 0

  ScaledReal operator-() const { return ScaledReal(-sign_, ln_mag_); }
  ScaledReal& operator*=(const ScaledReal& o);
  ScaledReal& operator/=(const ScaledReal& o);
  ScaledReal& operator+=(const ScaledReal& o);
  ScaledReal& operator-=(const ScaledReal& o) { return *this += -o; }

  friend ScaledReal operator*(ScaledReal a, const ScaledReal& b) { return a *= b; }
  friend ScaledReal operator/(ScaledReal a, const ScaledReal& b) { return a /= b; }
  friend ScaledReal operator+(ScaledReal a, const ScaledReal& b) { return a += b; }
  friend ScaledReal operator-(ScaledReal a, const ScaledReal& b) { return a -= b; }

  friend bool operator==(const ScaledReal& a, const ScaledReal& b) {
    return a.sign_ == b.sign_ && (a.sign_ == 0 || a.ln_mag_ == b.ln_mag_);
  }

  /// Total order on the represented real values.
  friend bool operator<(const ScaledReal& a, const ScaledReal& b);

  /// Residual below which a difference of opposite-signed magnitudes is
  /// rounded to exact zero.
  static constexpr double kCancellationFloor = 1e-15;

 private:
  constexpr ScaledReal(int s, double l) : sign_(s), ln_mag_(l) {}

  int sign_ = 0;
  double ln_mag_ = 0.0;
};

}  // namespace sonin
