#include "sonin/scaled_real.hpp"

#include <fmt/format.h>

namespace sonin {

namespace {
// ln(DBL_MAX)
const double kMaxLn = std::log(std::numeric_limits<double>::max());
}  // namespace

ScaledReal ScaledReal::from_double(double v) {
  if (std::isnan(v)) throw std::domain_error("ScaledReal: NaN input");
  if (v == 0.0) return {};
  return ScaledReal(v > 0 ? 1 : -1, std::log(std::fabs(v)));
}

ScaledReal ScaledReal::from_log(int sign, double ln_mag) {
  if (sign == 0 || ln_mag == -std::numeric_limits<double>::infinity()) return {};
  if (std::isnan(ln_mag)) throw std::domain_error("ScaledReal: NaN log-magnitude");
  return ScaledReal(sign > 0 ? 1 : -1, ln_mag);
}

double ScaledReal::to_double() const {
  if (sign_ == 0) return 0.0;
  if (ln_mag_ > kMaxLn) {
    throw std::overflow_error(
        fmt::format("ScaledReal: ln|value| = {:.6g} exceeds the double range", ln_mag_));
  }
  return sign_ * std::exp(ln_mag_);
}

std::optional<double> ScaledReal::try_to_double() const {
  if (sign_ != 0 && ln_mag_ > kMaxLn) return std::nullopt;
  return sign_ == 0 ? 0.0 : sign_ * std::exp(ln_mag_);
}

ScaledReal ScaledReal::sqrt() const {
  if (sign_ < 0) throw std::domain_error("ScaledReal: sqrt of a negative value");
  if (sign_ == 0) return {};
  return ScaledReal(1, 0.5 * ln_mag_);
}

ScaledReal ScaledReal::pow(double e) const {
  if (sign_ < 0) throw std::domain_error("ScaledReal: pow of a negative value");
  if (sign_ == 0) {
    if (e > 0) return {};
    throw std::domain_error("ScaledReal: zero to a non-positive power");
  }
  return ScaledReal(1, e * ln_mag_);
}

ScaledReal& ScaledReal::operator*=(const ScaledReal& o) {
  sign_ *= o.sign_;
  if (sign_ != 0) ln_mag_ += o.ln_mag_;
  return *this;
}

ScaledReal& ScaledReal::operator/=(const ScaledReal& o) {
  if (o.sign_ == 0) throw std::domain_error("ScaledReal: division by zero");
  sign_ *= o.sign_;
  if (sign_ != 0) ln_mag_ -= o.ln_mag_;
  return *this;
}

ScaledReal& ScaledReal::operator+=(const ScaledReal& o) {
  if (o.sign_ == 0) return *this;
  if (sign_ == 0) return *this = o;

  const bool this_larger = ln_mag_ >= o.ln_mag_;
  const double big = this_larger ? ln_mag_ : o.ln_mag_;
  const double gap = this_larger ? ln_mag_ - o.ln_mag_ : o.ln_mag_ - ln_mag_;
  const int big_sign = this_larger ? sign_ : o.sign_;

  if (sign_ == o.sign_) {
    ln_mag_ = big + std::log1p(std::exp(-gap));
    return *this;
  }
  // 1 - e^{-gap}, computed without cancellation.
  const double residual = -std::expm1(-gap);
  if (residual < kCancellationFloor) return *this = ScaledReal{};
  sign_ = big_sign;
  ln_mag_ = big + std::log(residual);
  return *this;
}

bool operator<(const ScaledReal& a, const ScaledReal& b) {
  if (a.sign_ != b.sign_) return a.sign_ < b.sign_;
  if (a.sign_ == 0) return false;
  return a.sign_ > 0 ? a.ln_mag_ < b.ln_mag_ : a.ln_mag_ > b.ln_mag_;
}

}  // namespace sonin
