#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sonin/envelope.hpp"
#include "sonin/jacobi.hpp"
#include "sonin/kernels.hpp"

namespace sonin {

class GridTooCoarse : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ExtremumKind { max, min };

struct ExtremumRecord {
  double x = 0.0;
  double M = 0.0;
  double ln_M = 0.0;
  ExtremumKind kind = ExtremumKind::max;
  int index = 0;  // left-to-right position among the returned records; -1 for window endpoints
};

struct ScanOptions {
  int nodes_per_degree = 12;
  /// Bisection stops once the bracket is at most this wide.
  double x_tol = 1e-13;
  /// Also locate the zeros of P_k (the minima M = 0).
  bool minima = true;
  /// Re-sample at 4x density and fail if the sign-change counts differ.
  bool density_check = true;
  Execution exec = Execution::parallel;
};

/// Every interior critical point of M_k(x; d_m, d_M), sorted by x.
///
/// Maxima are the zeros of f' for the transformed solution f (sqrt(M) up to
/// sign), minima the zeros of P_k. Both are bracketed on an angle-uniform grid
/// (theta = arccos x) and refined by bisection. When the oscillatory interval
/// of P_k is much narrower than the window a second grid of the same size is
/// laid over it.
std::vector<ExtremumRecord> scan_extrema(const Params& p, const Window& w,
                                         const ScanOptions& opt = {});

/// Largest of the interior maxima and the endpoint limits; near-ties
/// (1e-12 relative) go to the smaller |x|.
ExtremumRecord global_max(const Params& p, const Window& w, const ScanOptions& opt = {});
ExtremumRecord global_max_from(const Params& p, const Window& w,
                               std::span<const ExtremumRecord> records);

/// unresolved: a monotonicity step is smaller than the accuracy of ln M, so
/// neither direction can be certified.
enum class CheckStatus { pass, fail, skipped, unresolved };

struct StructureVerdict {
  std::string name;
  CheckStatus status = CheckStatus::skipped;
  double margin = 0.0;
  std::string detail;
};

struct StructureReport {
  StructureVerdict unimodal;        // maxima decrease left of x0, increase right of it
  StructureVerdict eta_containment; // every extremum in (eta_-1, eta_1)
  StructureVerdict delta_containment;  // full-window maxima in (-delta, delta)
  StructureVerdict delta_window_decreasing;  // delta window: maxima decrease in |x| for x >= 0

  std::vector<const StructureVerdict*> all() const {
    return {&unimodal, &eta_containment, &delta_containment, &delta_window_decreasing};
  }
};

/// Structural claims about a scan of window w. The delta-window check only
/// applies when w is the symmetric window (-delta, delta).
StructureReport structure_checks(const Params& p, const Window& w,
                                 std::span<const ExtremumRecord> records, const Geometry& geom);

}  // namespace sonin
