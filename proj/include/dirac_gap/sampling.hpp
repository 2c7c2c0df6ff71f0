#ifndef DIRAC_GAP_SAMPLING_HPP
#define DIRAC_GAP_SAMPLING_HPP

#include <functional>
#include <span>

#include "dirac_gap/scalar_field.hpp"

namespace dirac_gap {

struct SamplingOptions {
  /// Stop refining once the extremum moves by less than rel_tol * max(1, |value|).
  double rel_tol = 1e-10;
  int coarse_points = 2048;
};

/// Conservative range of a bounded function on the finite interval [a, b].
///
/// Coarse uniform sampling (breakpoints are sampled from both sides), then a
/// zoom refinement around the best candidates. The returned inf is lowered and
/// the sup raised by the last refinement change.
Range sample_range(const std::function<double(double)>& f, double a, double b,
                   std::span<const double> breakpoints, const SamplingOptions& options = {});

}  // namespace dirac_gap

#endif  // DIRAC_GAP_SAMPLING_HPP
