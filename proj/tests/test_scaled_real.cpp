#include <doctest.h>

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <random>

#include "sonin/log_gamma.hpp"
#include "sonin/scaled_real.hpp"

using sonin::ScaledReal;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("scaled_real: products are sums of logs") {
  const auto p = ScaledReal::from_log(1, std::log(2.0)) * ScaledReal::from_log(1, std::log(3.0));
  CHECK(p.sign() == 1);
  CHECK(p.ln_mag() == doctest::Approx(std::log(6.0)).epsilon(1e-15));

  const auto q = ScaledReal::from_log(-1, 0.0) * ScaledReal::from_log(1, 0.0);
  CHECK(q.sign() == -1);
  CHECK(q.to_double() == -1.0);

  CHECK((ScaledReal::zero() * ScaledReal::from_log(1, 800.0)).is_zero());
  CHECK((ScaledReal::from_log(-1, -800.0) * ScaledReal::zero()).is_zero());
}

TEST_CASE("scaled_real: sums") {
  const auto s = ScaledReal::from_log(1, std::log(3.0)) + ScaledReal::from_log(1, 0.0);
  CHECK(s.ln_mag() == doctest::Approx(std::log(4.0)).epsilon(1e-15));

  const auto c = ScaledReal::from_log(1, 500.0) + ScaledReal::from_log(-1, 500.0);
  CHECK(c.is_zero());

  const auto big = ScaledReal::from_log(1, 1000.0) + ScaledReal::from_log(1, 1000.0);
  CHECK(big.ln_mag() == doctest::Approx(1000.0 + std::log(2.0)).epsilon(1e-15));

  const auto d = ScaledReal::from_double(5.0) - ScaledReal::from_double(3.0);
  CHECK(d.to_double() == doctest::Approx(2.0).epsilon(1e-15));
  const auto n = ScaledReal::from_double(3.0) - ScaledReal::from_double(5.0);
  CHECK(n.to_double() == doctest::Approx(-2.0).epsilon(1e-15));
}

TEST_CASE("scaled_real: conversion") {
  CHECK_THROWS_AS(ScaledReal::from_log(1, 10000.0).to_double(), std::overflow_error);
  CHECK_FALSE(ScaledReal::from_log(1, 10000.0).try_to_double().has_value());
  CHECK(ScaledReal::from_log(-1, -10000.0).to_double() == 0.0);
  CHECK(ScaledReal::from_double(0.0).is_zero());
  CHECK(ScaledReal::from_double(-0.0).is_zero());
  CHECK(ScaledReal::from_log(0, 3.0).is_zero());
  CHECK(ScaledReal::from_log(7, 0.0).sign() == 1);
  CHECK(ScaledReal::from_double(-2.5).to_double() == doctest::Approx(-2.5).epsilon(1e-15));
  CHECK(std::isinf(ScaledReal::zero().ln_mag()));
}

TEST_CASE("scaled_real: sqrt, pow, abs, order") {
  CHECK(ScaledReal::from_double(9.0).sqrt().to_double() == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(ScaledReal::from_double(2.0).pow(10.0).to_double() == doctest::Approx(1024.0).epsilon(1e-14));
  CHECK(ScaledReal::zero().pow(2.0).is_zero());
  CHECK_THROWS(ScaledReal::from_double(-4.0).sqrt());
  CHECK_THROWS(ScaledReal::from_double(-4.0).pow(0.5));
  CHECK(ScaledReal::from_double(-3.0).abs().to_double() == doctest::Approx(3.0));
  CHECK(ScaledReal::from_double(-3.0) < ScaledReal::from_double(-2.0));
  CHECK(ScaledReal::from_double(-3.0) < ScaledReal::zero());
  CHECK(ScaledReal::zero() < ScaledReal::from_log(1, -900.0));
  CHECK(ScaledReal::from_log(1, 700.0) < ScaledReal::from_log(1, 701.0));
  CHECK_FALSE(ScaledReal::from_double(2.0) < ScaledReal::from_double(2.0));
  CHECK_THROWS((ScaledReal::one() / ScaledReal::zero()));
}

TEST_CASE("scaled_real: algebraic laws over the full exponent range") {
  std::mt19937_64 rng(20261016);
  std::uniform_real_distribution<double> ln(-700.0, 700.0);
  std::uniform_int_distribution<int> sg(0, 1);
  auto draw = [&] { return ScaledReal::from_log(sg(rng) ? 1 : -1, ln(rng)); };
  for (int i = 0; i < 2000; ++i) {
    const auto a = draw(), b = draw(), c = draw();
    const auto l = (a * b) * c, r = a * (b * c);
    CHECK(l.sign() == r.sign());
    CHECK(std::abs(l.ln_mag() - r.ln_mag()) <= 1e-12 * std::max(1.0, std::abs(r.ln_mag())));

    // Distributivity with same-signed summands (no cancellation).
    const auto bb = b.abs(), cc = c.abs();
    const auto d1 = a * (bb + cc), d2 = a * bb + a * cc;
    CHECK(d1.sign() == d2.sign());
    CHECK(std::abs(d1.ln_mag() - d2.ln_mag()) <= 1e-12 * std::max(1.0, std::abs(d2.ln_mag())));
  }
}

TEST_CASE("scaled_real: agrees with native arithmetic") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int i = 0; i < 2000; ++i) {
    const double x = u(rng), y = u(rng);
    const auto X = ScaledReal::from_double(x), Y = ScaledReal::from_double(y);
    CHECK(rel((X * Y).to_double(), x * y) < 1e-14);
    CHECK(rel((X / Y).to_double(), x / y) < 1e-14);
    if (x * y > 0) CHECK(rel((X + Y).to_double(), x + y) < 1e-14);
  }
}

TEST_CASE("log_gamma: matches boost lgamma") {
  for (double x : {0.5, 0.75, 1.5, 2.5, 3.0, 7.25, 9.999, 10.0, 10.5, 55.5, 1e3, 1e5 + 0.25, 1e8}) {
    const double ref = boost::math::lgamma(x);
    CHECK(std::abs(sonin::log_gamma(x) - ref) <= 1e-14 * std::max(1.0, std::abs(ref)));
  }
  CHECK(std::abs(sonin::log_gamma(1.0)) < 1e-14);
  CHECK(std::abs(sonin::log_gamma(2.0)) < 1e-14);
  CHECK(sonin::log_gamma(0.5) == doctest::Approx(0.5 * std::log(M_PI)).epsilon(1e-15));
  CHECK_THROWS_AS(sonin::log_gamma(0.0), std::domain_error);
  CHECK_THROWS_AS(sonin::log_gamma(-1.5), std::domain_error);
}

TEST_CASE("log_gamma: Stirling remainder") {
  for (double x : {10.0, 12.5, 100.0, 1e4}) {
    const double base = (x - 0.5) * std::log(x) - x + 0.5 * std::log(2.0 * M_PI);
    CHECK(sonin::stirling_remainder(x) == doctest::Approx(boost::math::lgamma(x) - base).epsilon(1e-9));
    CHECK(sonin::stirling_remainder(x) == doctest::Approx(1.0 / (12.0 * x)).epsilon(1.0 / (25.0 * x * x)));
  }
}

TEST_CASE("log_gamma: half ratio excess") {
  // 40-digit mpmath values of lnG(y+1/2) - lnG(y) - ln(y - 1/4)/2.
  CHECK(sonin::log_gamma_half_ratio_excess(0.5) == doctest::Approx(0.1207822376352452223).epsilon(1e-14));
  CHECK(sonin::log_gamma_half_ratio_excess(1.0) == doctest::Approx(0.0230587985906452414).epsilon(1e-13));
  CHECK(sonin::log_gamma_half_ratio_excess(20.0) == doctest::Approx(4.004165773863588219e-5).epsilon(1e-12));
  CHECK(sonin::log_gamma_half_ratio_excess(1000.0) == doctest::Approx(1.563281298681642779e-8).epsilon(1e-12));
  CHECK(sonin::log_gamma_half_ratio_excess(5e7) == doctest::Approx(6.250000062500000700e-18).epsilon(1e-12));
}
