#include <doctest.h>

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "sonin/bounds.hpp"
#include "sonin/envelope.hpp"

using sonin::BoundId;
using sonin::Params;

namespace {

const double kThr = (1.0 + std::sqrt(2.0)) / 4.0;

// v1 written out from the defining formula, with delta and xi0 recomputed here.
double v1_oracle(int k, double a) {
  auto d2 = [](int kk, double aa) {
    const double r = 2.0 * kk + 2.0 * aa + 1.0;
    return 1.0 - (4 * aa * aa - 1) / (r * r - 4);
  };
  const double r = 2.0 * k + 2.0 * a + 1.0;
  const double xi2 = 21.0 / (2.0 * k * k + 4.0 * a * k + 2.0 * a + 1.0);
  const double v = (r - k) * k * xi2 * std::sqrt(d2(k, a) - xi2) / ((1 - xi2) * std::sqrt(d2(k - 1, a + 1) - xi2));
  return v * (1 + 1 / (8 * (k + a) * (k + a)));
}

}  // namespace

TEST_CASE("rhs_bound: examples") {
  for (int k : {0, 1, 5, 100}) {
    CHECK(sonin::rhs_bound(BoundId::chow_eq1, Params::make(k, 0, 0)) == doctest::Approx(2 / M_PI).epsilon(1e-12));
  }
  CHECK(sonin::rhs_bound(BoundId::emn_eq2, Params::make(3, 0, 0)) == doctest::Approx(4 * M_E / M_PI).epsilon(1e-15));
  const auto p61 = Params::ultraspherical(6, 1.0);
  CHECK(sonin::rhs_bound(BoundId::krasikov_eq3, p61) == doctest::Approx(11 * std::cbrt(2025.0 / 216.0)).epsilon(1e-14));
  CHECK(sonin::rhs_bound(BoundId::krasikov_eq3, p61) == doctest::Approx(23.194398295798104).epsilon(1e-14));
  CHECK(sonin::rhs_bound(BoundId::thm1, p61) == doctest::Approx(10.0 / 7.0 * std::pow(7.0 / 6.0, 1.0 / 6.0)).epsilon(1e-14));
  CHECK(sonin::rhs_bound(BoundId::thm1, p61) == doctest::Approx(1.465750).epsilon(1e-6));
  CHECK(sonin::rhs_bound(BoundId::thm4, Params::ultraspherical(2, 1.0)) ==
        doctest::Approx(2 / M_PI * (1 + 1.0 / 72)).epsilon(1e-15));
  CHECK(sonin::rhs_bound(BoundId::thm4, Params::ultraspherical(3, 1.0)) == doctest::Approx(230 / M_PI).epsilon(1e-15));
  CHECK(sonin::rhs_bound(BoundId::lemma_glav, p61) == doctest::Approx(1.3403959485419342).epsilon(1e-14));
  CHECK(sonin::rhs_bound(BoundId::lemma_glav, p61) ==
        doctest::Approx(12.0 / 13.0 * std::cbrt(15.0 * 0.2 / std::sqrt(0.96))).epsilon(1e-14));
  CHECK(sonin::rhs_bound(BoundId::thm1, Params::ultraspherical(7, 1.0)) ==
        doctest::Approx(22.0 * std::pow(8.0 / 7.0, 1.0 / 6.0)).epsilon(1e-14));
  CHECK(sonin::rhs_bound(BoundId::odd_29, Params::ultraspherical(7, kThr)) == doctest::Approx(29 / M_PI).epsilon(1e-15));
}

TEST_CASE("rhs_bound: chow_eq1 against tgamma") {
  for (auto [k, a, b] : {std::tuple{3, 0.3, 0.1}, {10, 0.45, -0.45}, {40, 0.0, -0.2}}) {
    const double s = a + b;
    using boost::math::tgamma;
    const double ref = std::pow(2.0, 2 * a + 1) * tgamma(k + s + 1) * tgamma(k + a + 1) /
                       (M_PI * tgamma(k + 1.0) * std::pow(2.0 * k + s + 1, 2 * a) * tgamma(k + b + 1));
    CHECK(sonin::rhs_bound(BoundId::chow_eq1, Params::make(k, a, b)) == doctest::Approx(ref).epsilon(1e-12));
  }
  CHECK(std::isfinite(sonin::rhs_bound(BoundId::chow_eq1, Params::make(5000, 0.4, 0.2))));
}

TEST_CASE("hypotheses are hard preconditions") {
  CHECK_THROWS_AS(sonin::rhs_bound(BoundId::chow_eq1, Params::make(3, 0.5, 0)), sonin::HypothesisViolation);
  CHECK_THROWS_AS(sonin::rhs_bound(BoundId::chow_eq1, Params::make(3, 0.1, 0.2)), sonin::HypothesisViolation);
  CHECK_THROWS_AS(sonin::rhs_bound(BoundId::emn_eq2, Params::make(3, -0.6, 0)), sonin::HypothesisViolation);
  CHECK_THROWS_AS(sonin::rhs_bound(BoundId::krasikov_eq3, Params::make(5, 1, 1)), sonin::HypothesisViolation);
  CHECK_THROWS_AS(sonin::rhs_bound(BoundId::thm1, Params::make(8, 1, 0.9)), sonin::HypothesisViolation);
  CHECK_THROWS_AS(sonin::rhs_bound(BoundId::thm1, Params::ultraspherical(8, 0.6)), sonin::HypothesisViolation);
  CHECK_NOTHROW(sonin::rhs_bound(BoundId::thm1, Params::ultraspherical(6, kThr)));
  CHECK_THROWS_AS(sonin::rhs_bound(BoundId::thm4, Params::ultraspherical(1, 1)), sonin::HypothesisViolation);
  CHECK_THROWS_AS(sonin::rhs_bound(BoundId::thm4, Params::ultraspherical(2, 0.5)), sonin::HypothesisViolation);
  CHECK_THROWS_AS(sonin::rhs_bound(BoundId::odd_29, Params::ultraspherical(5, 1)), sonin::HypothesisViolation);
  CHECK_THROWS_AS(sonin::rhs_bound(BoundId::odd_230, Params::ultraspherical(4, 1)), sonin::HypothesisViolation);
  CHECK(sonin::hypothesis_failure(BoundId::thm1, Params::ultraspherical(2, 1)).has_value());
  CHECK(sonin::hypothesis_holds(BoundId::emn_eq2, Params::make(0, -0.5, -0.5)));

  for (auto id : {BoundId::chow_eq1, BoundId::emn_eq2, BoundId::krasikov_eq3, BoundId::thm1, BoundId::thm4,
                  BoundId::lemma_glav, BoundId::odd_230, BoundId::odd_29}) {
    CHECK(sonin::bound_from_string(sonin::to_string(id)) == id);
  }
  CHECK_FALSE(sonin::bound_from_string("eq4"));
}

TEST_CASE("rhs_bound: positive on the hypothesis set") {
  for (int k = 0; k <= 41; ++k) {
    for (double a : {-0.49, -0.2, 0.0, 0.3, 0.5, kThr, 0.7, 1.0, 3.0, 1e2, 1e5}) {
      for (double b : {a, 0.0, -0.3}) {
        if (b <= -1) continue;
        const auto p = Params::make(k, a, b);
        for (auto id : {BoundId::chow_eq1, BoundId::emn_eq2, BoundId::krasikov_eq3, BoundId::thm1, BoundId::thm4,
                        BoundId::lemma_glav, BoundId::odd_230, BoundId::odd_29}) {
          if (sonin::hypothesis_holds(id, p)) CHECK(sonin::rhs_bound(id, p) > 0);
        }
      }
    }
  }
}

TEST_CASE("rhs_bound: ordering at large alpha") {
  // thm1 < krasikov_eq3 everywhere sampled; krasikov_eq3 < emn_eq2 needs
  // k above about 514 (the ratio tends to 11 (2/k)^{1/3} pi / (2 sqrt2 e)).
  for (int k : {6, 100, 600, 1000, 10000}) {
    for (double a : {1e3, 1e4}) {
      const auto p = Params::ultraspherical(k, a);
      const double t = sonin::rhs_bound(BoundId::thm1, p);
      const double kr = sonin::rhs_bound(BoundId::krasikov_eq3, p);
      const double em = sonin::rhs_bound(BoundId::emn_eq2, p);
      CHECK(t < kr);
      CHECK((kr < em) == (k >= 600));
    }
  }
}

TEST_CASE("pointwise_bound") {
  CHECK(sonin::pointwise_bound(Params::make(1, 0, 0), 0.0) == doctest::Approx(2 * M_E / M_PI * 0.75).epsilon(1e-15));
  CHECK(sonin::pointwise_bound(Params::make(1, 0, 0), 0.0) == doctest::Approx(1.297884).epsilon(1e-6));
  CHECK(sonin::pointwise_bound(Params::make(2, 1, 1), 0.0) == doctest::Approx(2 * M_E / M_PI * 90.0 / 96.0).epsilon(1e-15));
  CHECK(sonin::pointwise_bound(Params::make(2, 1, 1), 0.0) == doctest::Approx(1.622355).epsilon(1e-6));
  CHECK_THROWS_AS(sonin::pointwise_bound(Params::make(2, 1, 1), 0.99), std::domain_error);
  CHECK_THROWS_AS(sonin::pointwise_bound(Params::make(2, 1, 1), 1.0), std::domain_error);
}

TEST_CASE("gamma_ratio_check") {
  // Left sides are exact; right sides 2^{x+1/2}/sqrt(pi (x+1/2)) from mpmath.
  const auto g0 = sonin::gamma_ratio_check(0.0);
  CHECK(g0.lhs == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(g0.rhs == doctest::Approx(1.1283791670955126).epsilon(1e-15));
  const auto g1 = sonin::gamma_ratio_check(1.0);
  CHECK(g1.lhs == doctest::Approx(4 / M_PI).epsilon(1e-14));
  CHECK(g1.rhs == doctest::Approx(1.3029400317411198).epsilon(1e-15));
  const auto g2 = sonin::gamma_ratio_check(2.0);
  CHECK(g2.lhs == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(g2.rhs == doctest::Approx(2.0185060176161280).epsilon(1e-15));
  const auto g10 = sonin::gamma_ratio_check(10.0);
  CHECK(g10.lhs == doctest::Approx(252.0).epsilon(1e-14));
  CHECK(g10.rhs == doctest::Approx(252.14210173934497).epsilon(1e-14));

  double prev = INFINITY;
  for (double lx = -2.0; lx <= 8.0; lx += 0.05) {
    const double x = std::pow(10.0, lx);
    const auto g = sonin::gamma_ratio_check(x);
    CHECK(g.ln_margin > 0);
    CHECK(g.ln_margin < prev);
    // The difference of the two logs only carries the margin to rounding.
    CHECK(std::abs(g.ln_margin - (g.ln_rhs - g.ln_lhs)) <= 4e-14 * std::max(1.0, g.ln_rhs));
    prev = g.ln_margin;
  }
  CHECK(sonin::gamma_ratio_check(1e6).ln_margin < std::log1p(1e-5));
  CHECK(std::isinf(sonin::gamma_ratio_check(1e8).rhs));
}

TEST_CASE("v_factors") {
  const auto v3 = sonin::v_factors(3, 0.5);
  CHECK(v3.v1 < 115);
  CHECK(v3.v1 == doctest::Approx(114.92549474937895).epsilon(1e-12));
  const auto v7 = sonin::v_factors(7, kThr);
  CHECK(v7.v1 < 14.5);
  CHECK(v7.v1 == doctest::Approx(14.416817975804020).epsilon(1e-12));
  CHECK(sonin::v_factors(9, 1.0).v1 < sonin::v_factors(7, 1.0).v1);
  CHECK_THROWS(sonin::v_factors(4, 1.0));
  CHECK_THROWS(sonin::v_factors(3, 0.4));

  for (int k = 3; k <= 41; k += 2) {
    double prev_a = INFINITY;
    for (int i = 0; i <= 40; ++i) {
      const double a = 0.5 * std::pow(100.0, i / 40.0);
      double v1 = 0;
      try {
        v1 = sonin::v_factors(k, a).v1;
      } catch (const std::domain_error&) {
        continue;
      }
      CHECK(v1 == doctest::Approx(v1_oracle(k, a)).epsilon(1e-12));
      CHECK(v1 < prev_a);
      prev_a = v1;
      if (k > 3) {
        try {
          CHECK(v1 < sonin::v_factors(k - 2, a).v1);
        } catch (const std::domain_error&) {
        }
      }
    }
  }
}

TEST_CASE("theorem1_reduction") {
  const double limit = std::cbrt(4 * std::sqrt(2.0) - 2);
  for (int k = 6; k <= 400; k += 13) {
    for (double a : {kThr, 0.7, 1.0, 10.0, 1e3, 1e5}) {
      const auto t = sonin::theorem1_reduction(k, a);
      CHECK(t.limit == doctest::Approx(limit).epsilon(1e-15));
      CHECK(t.ratio <= t.limit * (1 + 1e-12));
      const auto g = sonin::geometry(Params::ultraspherical(k, a));
      const double direct = std::cbrt(g.r * std::tan(g.tau)) / (std::cbrt(a) * std::pow(1 + a / k, 1.0 / 6.0));
      CHECK(t.ratio == doctest::Approx(direct).epsilon(1e-13));
    }
  }
  CHECK_THROWS(sonin::theorem1_reduction(5, 1.0));
  CHECK_THROWS(sonin::theorem1_reduction(6, 0.6));
}
