#include "sonin/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "sonin/detail/recurrence.hpp"

#ifdef _OPENMP
#include <omp.h>
#define SONIN_PRAGMA(x) _Pragma(#x)
#else
#define SONIN_PRAGMA(x)
#endif

namespace sonin {

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace {

constexpr std::size_t kBlock = 32;

// One block of points through the recurrence, degree-outer so the point loop
// vectorizes. Per point the arithmetic is identical to recurrence_point().
// AVX2 clone picked at load time where available; no FMA, so the rounding
// matches the scalar path exactly.
__attribute__((target_clones("avx2", "default")))
void recurrence_block(const RecurrenceTable& t, const double* xs, std::size_t n, double* mant,
                      double* ln_scale, double* prev_mant) {
  std::array<double, kBlock> prev{};
  std::array<double, kBlock> cur;
  std::array<double, kBlock> sc;
  cur.fill(1.0);
  sc.fill(t.ln_p0);
  for (int d = 0; d < t.degree; ++d) {
    const double b = t.diag[d];
    const double a = t.offdiag[d];
    const double inv = t.inv_next[d];
    SONIN_PRAGMA(omp simd)
    for (std::size_t j = 0; j < n; ++j) {
      const double next = ((xs[j] - b) * cur[j] - a * prev[j]) * inv;
      const double p = cur[j];
      const double m = std::max(std::fabs(p), std::fabs(next));
      // Same factors as recurrence_point(), written as selects so the loop vectorizes.
      const double hi = static_cast<double>(m > detail::kRescaleUp);
      const double lo = static_cast<double>(m < detail::kRescaleDown);
      const double f = hi * detail::kRescaleDown + lo * detail::kRescaleUp + (1.0 - hi - lo);
      const double lf = (hi - lo) * detail::kRescaleLn;
      prev[j] = p * f;
      cur[j] = next * f;
      sc[j] += lf;
    }
  }
  std::copy_n(cur.begin(), n, mant);
  std::copy_n(sc.begin(), n, ln_scale);
  if (prev_mant) std::copy_n(prev.begin(), n, prev_mant);
}

void run_batch(const RecurrenceTable& table, std::span<const double> xs, double* mant,
               double* ln_scale, double* prev_mant, Execution exec) {
  const std::size_t n = xs.size();
  if (exec == Execution::serial) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto s = detail::recurrence_point(table, xs[i]);
      mant[i] = s.mant;
      ln_scale[i] = s.ln_scale;
      if (prev_mant) prev_mant[i] = s.prev_mant;
    }
    return;
  }
  const auto blocks = static_cast<std::ptrdiff_t>((n + kBlock - 1) / kBlock);
  [[maybe_unused]] const bool threaded = blocks > 1;
  SONIN_PRAGMA(omp parallel for schedule(static) if (threaded))
  for (std::ptrdiff_t b = 0; b < blocks; ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
    const std::size_t len = std::min(kBlock, n - lo);
    recurrence_block(table, xs.data() + lo, len, mant + lo, ln_scale + lo,
                     prev_mant ? prev_mant + lo : nullptr);
  }
}

}  // namespace

void eval_orthonormal_batch(const RecurrenceTable& table, std::span<const double> xs,
                            std::span<double> mant, std::span<double> ln_scale, Execution exec) {
  if (mant.size() < xs.size() || ln_scale.size() < xs.size()) {
    throw std::invalid_argument("eval_orthonormal_batch: output spans too small");
  }
  run_batch(table, xs, mant.data(), ln_scale.data(), nullptr, exec);
}

void eval_orthonormal_pair_batch(const RecurrenceTable& table, std::span<const double> xs,
                                 std::span<double> mant, std::span<double> prev_mant,
                                 std::span<double> ln_scale, Execution exec) {
  if (mant.size() < xs.size() || prev_mant.size() < xs.size() || ln_scale.size() < xs.size()) {
    throw std::invalid_argument("eval_orthonormal_pair_batch: output spans too small");
  }
  run_batch(table, xs, mant.data(), ln_scale.data(), prev_mant.data(), exec);
}

namespace reference {

ScaledReal eval_orthonormal(const Params& p, double x) {
  if (!(x >= -1.0 && x <= 1.0)) throw std::domain_error("reference::eval_orthonormal: x outside [-1, 1]");
  const auto t = RecurrenceTable::build(p);
  ScaledReal prev;
  ScaledReal cur = ScaledReal::from_log(1, t.ln_p0);
  for (int n = 0; n < t.degree; ++n) {
    const auto next = (ScaledReal::from_double(x - t.diag[n]) * cur -
                       ScaledReal::from_double(t.offdiag[n]) * prev) *
                      ScaledReal::from_double(t.inv_next[n]);
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace reference

CriticalEvaluator::CriticalEvaluator(const Params& p, const Window& w)
    : params_(p), window_(w), table_(RecurrenceTable::build(p)) {
  w.validate();
  if (p.k > 0) {
    const double k = p.k;
    const double m = 2.0 * k + p.alpha + p.beta;
    drift_const_ = k * (p.alpha - p.beta) / m;
    lower_coeff_ = (m + 1.0) * table_.offdiag[p.k];
  }
}

void CriticalEvaluator::evaluate_y_sign(std::span<const double> xs, std::span<signed char> out,
                                        Execution exec) const {
  std::vector<double> mant(xs.size());
  std::vector<double> scale(xs.size());
  eval_orthonormal_batch(table_, xs, mant, scale, exec);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    out[i] = static_cast<signed char>((mant[i] > 0) - (mant[i] < 0));
  }
}

void CriticalEvaluator::evaluate(std::span<const double> xs, CriticalSamples& out,
                                 Execution exec) const {
  const std::size_t n = xs.size();
  out.resize(n);
  std::vector<double> m0(n), m1(n), s0(n);
  eval_orthonormal_pair_batch(table_, xs, m0, m1, s0, exec);

  const double a = params_.alpha;
  const double b = params_.beta;
  const double dm = window_.d_m;
  const double dM = window_.d_M;
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();

  for (std::size_t i = 0; i < n; ++i) {
    const double x = xs[i];
    const double u = (1.0 - x) * (1.0 + x);
    const double wm = x - dm;
    const double wM = dM - x;
    const double c2 = 0.25 * (wM - wm) * u - 0.5 * a * (1.0 + x) * wm * wM +
                      0.5 * b * (1.0 - x) * wm * wM;

    // (1 - x^2) y' on the scale of y, from p_k and p_{k-1}.
    const double dy = (drift_const_ - params_.k * x) * m0[i] + lower_coeff_ * m1[i];
    const double q = wm * wM * dy + c2 * m0[i];
    out.q_sign[i] = static_cast<signed char>((q > 0) - (q < 0));
    out.y_sign[i] = static_cast<signed char>((m0[i] > 0) - (m0[i] < 0));
    out.ln_M[i] = m0[i] == 0.0 ? kNegInf
                               : 0.5 * (std::log(wm) + std::log(wM)) + a * std::log1p(-x) +
                                     b * std::log1p(x) + 2.0 * (std::log(std::fabs(m0[i])) + s0[i]);
  }
}

}  // namespace sonin
