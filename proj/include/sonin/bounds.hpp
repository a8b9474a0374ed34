#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "sonin/jacobi.hpp"

namespace sonin {

enum class BoundId { chow_eq1, emn_eq2, krasikov_eq3, thm1, thm4, lemma_glav, odd_230, odd_29 };

std::string_view to_string(BoundId id);
std::optional<BoundId> bound_from_string(std::string_view name);

/// Raised when a bound is requested outside the parameter range it is proven on.
class HypothesisViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Description of the failed predicate, or nullopt when p is in range.
std::optional<std::string> hypothesis_failure(BoundId id, const Params& p);
inline bool hypothesis_holds(BoundId id, const Params& p) { return !hypothesis_failure(id, p); }

/// Right-hand side of the bound on max_x M_k(x) over [-1, 1] (for thm4,
/// odd_230 and odd_29: the max over the delta window).
///
///   chow_eq1      2^{2a+1} G(k+s+1) G(k+a+1) / (pi k! (2k+s+1)^{2a} G(k+b+1)),  s = a + b
///   emn_eq2       2e (2 + sqrt(a^2 + b^2)) / pi
///   krasikov_eq3  11 ((s+1)^2 (2k+s+1)^2 / (4k (k+s+1)))^{1/3}
///   thm1          mu a^{1/3} (1 + a/k)^{1/6},  mu = 10/7 (k even), 22 (k odd)
///   thm4          (2/pi)(1 + 1/(8 (k+a)^2)) (k even), 230/pi (k odd)
///   lemma_glav    (12/13 or 14) r^{1/3} tan^{1/3} tau
///   odd_230       230/pi
///   odd_29        29/pi
///
/// Throws HypothesisViolation outside the id's range.
double rhs_bound(BoundId id, const Params& p);

/// (2e/pi) (2k+2a+2b+1)(2k+2a+2b+2) / ((2k+2a+2b+2)^2 - 2a^2/(1-x) - 2b^2/(1+x)).
/// Throws std::domain_error outside (-1, 1) or where the denominator is
/// nonpositive (the bound is vacuous there).
double pointwise_bound(const Params& p, double x);

/// Both sides of G(x+1) / G(x/2+1)^2 < 2^{x+1/2} / sqrt(pi (x + 1/2)).
/// The sides overflow a double long before x = 1e8, so the comparison is
/// done in logs; ln_margin = ln rhs - ln lhs is computed directly from a
/// series and keeps full relative accuracy as it tends to zero.
struct GammaRatio {
  double ln_lhs = 0.0;
  double ln_rhs = 0.0;
  double ln_margin = 0.0;
  double lhs = 0.0;  // +inf once out of range
  double rhs = 0.0;
};
GammaRatio gamma_ratio_check(double x);

struct VFactors {
  double v = 0.0;
  double v1 = 0.0;
};

/// v(k, a) = (r-k) k xi0^2 sqrt(delta^2(k,a) - xi0^2) / ((1 - xi0^2) sqrt(delta^2(k-1,a+1) - xi0^2))
/// and v1 = (1 + 1/(8 (k+a)^2)) v, for odd k >= 3 and a >= 1/2.
/// Throws std::domain_error("window degenerate") when xi0^2 >= delta^2(k-1, a+1).
VFactors v_factors(int k, double alpha);

/// r^{1/3} tan^{1/3} tau / (a^{1/3} (1 + a/k)^{1/6}) and its limit (4 sqrt2 - 2)^{1/3}.
struct Theorem1Reduction {
  double ratio = 0.0;
  double limit = 0.0;
};
/// Requires k >= 6 and alpha >= (1+sqrt2)/4. Also confirms that the
/// auxiliary constant 2^{-1/3}/3 r^{-2/3} tan^{4/3} tau stays below 1/31 and
/// throws std::logic_error if not.
Theorem1Reduction theorem1_reduction(int k, double alpha);

}  // namespace sonin
