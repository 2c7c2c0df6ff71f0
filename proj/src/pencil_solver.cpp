#include "dirac_gap/pencil_solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ostream>
#include <thread>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "dirac_gap/error.hpp"

namespace dirac_gap {

std::string to_string(GapSide side) { return side == GapSide::Above ? "above" : "below"; }

std::string format_double(double v) { return fmt::format("{:.17g}", v); }

PencilEvaluation theta_curve(const AssembledPencil& pencil, double lambda, std::size_t k) {
  const SpectralConstants& c = pencil.constants();
  if (!(lambda < c.lambda_e_plus)) {
    throw Error(ErrorCode::LambdaOutOfDomain,
                fmt::format("lambda = {} must lie below lambda_e+ = {}", lambda, c.lambda_e_plus));
  }
  const SymTridiagonal s = pencil.assemble(lambda);
  return {lambda, smallest_generalized_eigenvalues(s, pencil.mass(), k)};
}

std::size_t negative_theta_count(const AssembledPencil& pencil, double lambda) {
  return negative_count(pencil.assemble(lambda));
}

double rayleigh_zero(const AssembledPencil& pencil, const std::vector<double>& phi, double tol) {
  if (phi.size() != pencil.dof_count()) {
    throw Error(ErrorCode::InvalidParams, "coefficient vector does not match the mesh");
  }
  if (std::all_of(phi.begin(), phi.end(), [](double v) { return v == 0.0; })) {
    throw Error(ErrorCode::InvalidParams, "rayleigh_zero needs a nonzero vector");
  }
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidParams, "tolerance must be positive");
  const double m1 = pencil.constants().m1;
  double lo = m1;
  double step = std::max(1.0, std::abs(m1));
  double hi = m1 + step;
  int guard = 0;
  while (pencil.form(hi, phi) > 0.0) {
    lo = hi;
    step *= 2.0;
    hi = m1 + step;
    if (++guard > 200) throw Error(ErrorCode::ConvergenceFailure, "no sign change of s(.)[phi]");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (pencil.form(mid, phi) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::size_t GapEigenvalues::mode_of(std::size_t i) const {
  return side == GapSide::Above ? i + 1 : values.size() - i;
}

std::optional<double> GapEigenvalues::mode(std::size_t n) const {
  if (n == 0 || n > values.size()) return std::nullopt;
  return side == GapSide::Above ? values[n - 1] : values[values.size() - n];
}

GapEigenvalues solve_gap_above(const AssembledPencil& pencil, const SolverParams& params) {
  const SpectralConstants& c = pencil.constants();
  GapEigenvalues out;
  out.side = GapSide::Above;
  const double span = c.lambda_e_plus - c.m1;
  out.bisect_tol = params.bisect_tol.value_or(1e-8 * c.gap_width());
  if (!(out.bisect_tol > 0.0)) throw Error(ErrorCode::InvalidParams, "bisect_tol must be positive");
  if (params.max_modes == 0) throw Error(ErrorCode::InvalidParams, "max_modes must be positive");
  if (!(span > 0.0)) {
    // m1 = lambda_e+: the interval [m1, lambda_e+) is empty.
    out.edge_guard = params.edge_guard.value_or(0.0);
    return out;
  }
  out.edge_guard = params.edge_guard.value_or(1e-6 * span);
  if (!(out.edge_guard > 0.0) || !(out.edge_guard < span)) {
    throw Error(ErrorCode::InvalidParams,
                fmt::format("edge guard must lie in (0, {}), got {}", span, out.edge_guard));
  }

  const double left = c.m1;
  const double right = c.lambda_e_plus - out.edge_guard;
  const std::size_t at_left = negative_theta_count(pencil, left);
  if (at_left > 0) {
    throw Error(ErrorCode::NonPositiveAtLeftEnd,
                fmt::format("{} negative pencil values at m1 = {}", at_left, left));
  }
  const std::size_t at_right = negative_theta_count(pencil, right);
  const std::size_t resolved = std::min(at_right, params.max_modes);

  // Every mode restarts from the same dyadic interval, so the reported
  // midpoint depends monotonically on the inertia counts.
  for (std::size_t n = 1; n <= resolved; ++n) {
    double lo = left;
    double hi = right;
    while (hi - lo > out.bisect_tol) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (negative_theta_count(pencil, mid) >= n) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    out.values.push_back(0.5 * (lo + hi));
    out.brackets.emplace_back(lo, hi);
  }
  out.count_resolved = resolved;
  const std::size_t at_edge = negative_theta_count(pencil, c.lambda_e_plus);
  out.edge_truncated = at_right > params.max_modes || at_edge > resolved;
  if (at_right > params.max_modes) {
    out.warnings.push_back(fmt::format("mode budget {} exhausted; {} zeros below the edge guard",
                                       params.max_modes, at_right));
  }

  const double L = pencil.mesh().x_hi - pencil.mesh().x_lo;
  const double half_width = pencil.mesh().x_lo < 0.0 ? 0.5 * L : L;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    if (c.lambda_e_plus - out.values[i] < 5.0 / half_width) {
      out.warnings.push_back(fmt::format(
          "mode {} lies within 5/L of lambda_e+; truncation error may dominate", i + 1));
    }
    if (i > 0 && out.values[i] - out.values[i - 1] <= 10.0 * out.bisect_tol) {
      out.warnings.push_back(
          fmt::format("modes {} and {} are not separated by 10 * bisect_tol", i, i + 1));
    }
  }
  for (const auto& w : out.warnings) spdlog::debug("solve_gap_above: {}", w);
  return out;
}

GapEigenvalues solve_gap_above(const PotentialSpec& spec, const SolverParams& params) {
  const AssembledPencil pencil(build_mesh(spec, params.mesh), spec);
  spdlog::debug("solve_gap_above: {} dofs on [{}, {}]", pencil.dof_count(), pencil.mesh().x_lo,
                pencil.mesh().x_hi);
  return solve_gap_above(pencil, params);
}

GapEigenvalues solve_gap_below(const PotentialSpec& spec, const SolverParams& params) {
  SolverParams flipped = params;
  if (!flipped.bisect_tol) {
    const SpectralConstants c = validate(spec);
    flipped.bisect_tol = 1e-8 * c.gap_width();
  }
  const GapEigenvalues above = solve_gap_above(flip(spec), flipped);
  GapEigenvalues out = above;
  out.side = GapSide::Below;
  out.values.clear();
  out.brackets.clear();
  for (std::size_t i = above.values.size(); i-- > 0;) {
    out.values.push_back(-above.values[i]);
    out.brackets.emplace_back(-above.brackets[i].second, -above.brackets[i].first);
  }
  return out;
}

SpectrumResult solve_spectrum(const PotentialSpec& spec, const SolverParams& params) {
  return {validate(spec), solve_gap_above(spec, params), solve_gap_below(spec, params)};
}

std::vector<SweepPoint> sweep(const SpecFamily& family, const std::vector<double>& t_grid,
                              const SolverParams& params, unsigned jobs) {
  std::vector<SweepPoint> points(t_grid.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&]() {
    for (std::size_t i = next++; i < t_grid.size(); i = next++) {
      SweepPoint& p = points[i];
      p.t = t_grid[i];
      try {
        p.result = solve_spectrum(family.make(p.t), params);
      } catch (const std::exception& e) {
        p.error = e.what();
        spdlog::warn("sweep {} at t = {}: {}", family.name, p.t, p.error);
      }
    }
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(1, t_grid.size()))));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(jobs);
    for (unsigned j = 0; j < jobs; ++j) threads.emplace_back(worker);
    for (auto& th : threads) th.join();
  }
  return points;
}

void write_sweep_csv(std::ostream& out, const SpecFamily& family,
                     const std::vector<SweepPoint>& points, const std::vector<SweepColumn>& extra) {
  out << "t,side,n,lambda,bracket_lo,bracket_hi,edge_truncated";
  if (family.monotone_in_t) out << ",monotone_audit";
  for (const auto& col : extra) out << ',' << col.header;
  out << '\n';

  // Previous value per (side, n), for the audit.
  std::vector<std::optional<double>> prev_above;
  std::vector<std::optional<double>> prev_below;
  double prev_t = -std::numeric_limits<double>::infinity();
  for (const SweepPoint& p : points) {
    if (!p.result) {
      out << format_double(p.t) << ",error,0,,,,";
      if (family.monotone_in_t) out << ',';
      for (std::size_t c = 0; c < extra.size(); ++c) out << ',';
      out << '\n';
      continue;
    }
    if (p.t < prev_t) {
      prev_above.clear();
      prev_below.clear();
    }
    prev_t = p.t;
    for (const GapEigenvalues* g : {&p.result->above, &p.result->below}) {
      auto& prev = g->side == GapSide::Above ? prev_above : prev_below;
      std::vector<std::optional<double>> current(g->values.size());
      // Emit modes in index order.
      for (std::size_t n = 1; n <= g->values.size(); ++n) {
        const std::size_t i = g->side == GapSide::Above ? n - 1 : g->values.size() - n;
        const double v = g->values[i];
        out << format_double(p.t) << ',' << to_string(g->side) << ',' << n << ','
            << format_double(v) << ',' << format_double(g->brackets[i].first) << ','
            << format_double(g->brackets[i].second) << ',' << (g->edge_truncated ? 1 : 0);
        if (family.monotone_in_t) {
          out << ',';
          if (n <= prev.size() && prev[n - 1]) {
            out << (*prev[n - 1] >= v - 2.0 * g->bisect_tol ? "ok" : "violation");
          }
        }
        for (const auto& col : extra) out << ',' << col.cell(p.t, g->side, n, v);
        out << '\n';
        current[n - 1] = v;
      }
      prev = std::move(current);
    }
  }
}

}  // namespace dirac_gap
