#include "dirac_gap/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dirac_gap/error.hpp"

namespace dirac_gap {

double SymTridiagonal::quadratic_form(std::span<const double> v) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < diag.size(); ++i) {
    acc += diag[i] * v[i] * v[i];
    if (i + 1 < diag.size()) acc += 2.0 * off[i] * v[i] * v[i + 1];
  }
  return acc;
}

std::vector<double> SymTridiagonal::multiply(std::span<const double> v) const {
  const std::size_t n = diag.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = diag[i] * v[i];
    if (i > 0) out[i] += off[i - 1] * v[i - 1];
    if (i + 1 < n) out[i] += off[i] * v[i + 1];
  }
  return out;
}

double SymTridiagonal::max_abs() const {
  double m = 0.0;
  for (double d : diag) m = std::max(m, std::abs(d));
  for (double e : off) m = std::max(m, std::abs(e));
  return m;
}

namespace {

std::size_t pivot_count(std::size_t n, auto&& diag_at, auto&& off_at, double scale) {
  // A zero pivot is nudged to a tiny negative value, i.e. sigma is treated as
  // infinitesimally larger.
  const double pivmin = std::numeric_limits<double>::min() * std::max(1.0, scale);
  std::size_t negatives = 0;
  double prev = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double d = diag_at(i);
    if (i > 0) {
      const double e = off_at(i - 1);
      d -= e * e / prev;
    }
    if (std::abs(d) < pivmin) d = -pivmin;
    if (d < 0.0) ++negatives;
    prev = d;
  }
  return negatives;
}

}  // namespace

std::size_t count_below(const SymTridiagonal& a, const SymTridiagonal& b, double sigma) {
  const double scale = a.max_abs() + std::abs(sigma) * b.max_abs();
  return pivot_count(
      a.size(), [&](std::size_t i) { return a.diag[i] - sigma * b.diag[i]; },
      [&](std::size_t i) { return a.off[i] - sigma * b.off[i]; }, scale);
}

std::size_t negative_count(const SymTridiagonal& a) {
  return pivot_count(
      a.size(), [&](std::size_t i) { return a.diag[i]; }, [&](std::size_t i) { return a.off[i]; },
      a.max_abs());
}

std::vector<double> smallest_generalized_eigenvalues(const SymTridiagonal& a,
                                                     const SymTridiagonal& b, std::size_t k,
                                                     const EigenBisectionOptions& options) {
  k = std::min(k, a.size());
  std::vector<double> out;
  if (k == 0) return out;

  double lo = -1.0;
  double hi = 1.0;
  int guard = 0;
  while (count_below(a, b, lo) > 0) {
    lo *= 2.0;
    if (++guard > 2100) throw Error(ErrorCode::ConvergenceFailure, "no lower eigenvalue bracket");
  }
  guard = 0;
  while (count_below(a, b, hi) < k) {
    hi *= 2.0;
    if (++guard > 2100) throw Error(ErrorCode::ConvergenceFailure, "no upper eigenvalue bracket");
  }

  out.reserve(k);
  double left = lo;
  for (std::size_t n = 1; n <= k; ++n) {
    double l = left;
    double r = hi;
    for (int it = 0; it < options.max_iterations; ++it) {
      const double mid = 0.5 * (l + r);
      if (mid <= l || mid >= r) break;
      if (r - l <= options.abs_tol + options.rel_tol * std::max(std::abs(l), std::abs(r))) break;
      if (count_below(a, b, mid) >= n) {
        r = mid;
      } else {
        l = mid;
      }
    }
    const double value = 0.5 * (l + r);
    out.push_back(value);
    left = l;
  }
  return out;
}

}  // namespace dirac_gap
