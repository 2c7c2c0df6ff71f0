#include "dirac_gap/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "dirac_gap/error.hpp"

namespace dirac_gap {

namespace {

struct Candidate {
  double x;
  double value;
};

// Refines around `x0` inside [lo, hi] for the extremum selected by `sign`
// (+1 sup, -1 inf). Returns the refined value and the last change in it.
std::pair<double, double> zoom(const std::function<double(double)>& f, double lo, double hi,
                               Candidate start, double half_width, int sign, double rel_tol,
                               double min_width) {
  double best_x = start.x;
  double best = start.value;
  double last_change = 0.0;
  for (int iter = 0; iter < 40; ++iter) {
    const double a = std::max(lo, best_x - half_width);
    const double b = std::min(hi, best_x + half_width);
    constexpr int kPoints = 17;
    double level_best = best;
    double level_x = best_x;
    for (int i = 0; i < kPoints; ++i) {
      const double x = a + (b - a) * i / (kPoints - 1);
      const double v = f(x);
      if (sign * v > sign * level_best) {
        level_best = v;
        level_x = x;
      }
    }
    last_change = std::abs(level_best - best);
    best = level_best;
    best_x = level_x;
    half_width /= 8.0;
    // An unchanged best sample says nothing until the window is small.
    if (half_width <= min_width && last_change <= rel_tol * std::max(1.0, std::abs(best))) break;
  }
  return {best, last_change};
}

}  // namespace

Range sample_range(const std::function<double(double)>& f, double a, double b,
                   std::span<const double> breakpoints, const SamplingOptions& options) {
  if (!(a <= b) || !std::isfinite(a) || !std::isfinite(b)) {
    throw Error(ErrorCode::DomainError, "sample_range needs a finite interval");
  }
  if (a == b) {
    Range single;
    single.include(f(a));
    return single;
  }
  std::vector<double> cuts{a, b};
  for (double bp : breakpoints) {
    if (bp > a && bp < b) cuts.push_back(bp);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const double length = b - a;
  Range out;
  double delta_inf = 0.0;
  double delta_sup = 0.0;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double lo = cuts[s];
    const double hi = cuts[s + 1];
    const double seg = hi - lo;
    const int n = std::max(64, static_cast<int>(std::ceil(options.coarse_points * seg /
                                                          std::max(length, 1e-300))));
    const double nudge =
        std::min(64.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(lo) + std::abs(hi)), seg / 4);
    std::vector<Candidate> samples;
    samples.reserve(n + 1);
    for (int i = 0; i <= n; ++i) {
      double x = lo + seg * i / n;
      if (i == 0) x = lo + nudge;
      if (i == n) x = hi - nudge;
      samples.push_back({x, f(x)});
    }
    const double spacing = seg / n;
    for (int sign : {+1, -1}) {
      // Zoom around the three best local extrema of the coarse samples.
      std::vector<Candidate> locals;
      for (std::size_t i = 0; i < samples.size(); ++i) {
        const double v = sign * samples[i].value;
        const bool left_ok = i == 0 || v >= sign * samples[i - 1].value;
        const bool right_ok = i + 1 == samples.size() || v >= sign * samples[i + 1].value;
        if (left_ok && right_ok) locals.push_back(samples[i]);
      }
      std::sort(locals.begin(), locals.end(), [sign](const Candidate& l, const Candidate& r) {
        return sign * l.value > sign * r.value;
      });
      if (locals.size() > 3) locals.resize(3);
      for (const Candidate& c : locals) {
        const auto [value, change] =
            zoom(f, lo + nudge, hi - nudge, c, spacing, sign, options.rel_tol, 1e-9 * seg);
        out.include(value);
        if (sign > 0 && value >= out.sup) delta_sup = change;
        if (sign < 0 && value <= out.inf) delta_inf = change;
      }
    }
  }
  out.inf -= delta_inf;
  out.sup += delta_sup;
  return out;
}

}  // namespace dirac_gap
