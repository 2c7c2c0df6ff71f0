#ifndef DIRAC_GAP_PENCIL_SOLVER_HPP
#define DIRAC_GAP_PENCIL_SOLVER_HPP

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dirac_gap/discretization.hpp"
#include "dirac_gap/potential.hpp"

namespace dirac_gap {

struct PencilEvaluation {
  double lambda = 0.0;
  /// k smallest generalized eigenvalues of (S(lambda), mass), ascending.
  std::vector<double> theta;
};

/// Throws LambdaOutOfDomain unless -m2 < lambda < lambda_e+.
PencilEvaluation theta_curve(const AssembledPencil& pencil, double lambda, std::size_t k);

/// Number of negative eigenvalues of S(lambda), i.e. #{n : theta_n(lambda) < 0}.
std::size_t negative_theta_count(const AssembledPencil& pencil, double lambda);

/// Zero of l -> s(l)[phi] on (-m2, inf). Throws InvalidParams for phi = 0.
double rayleigh_zero(const AssembledPencil& pencil, const std::vector<double>& phi, double tol);

enum class GapSide { Above, Below };
std::string to_string(GapSide side);

struct SolverParams {
  MeshParams mesh;
  /// Defaults to 1e-8 * (lambda_e+ - lambda_e-).
  std::optional<double> bisect_tol;
  /// Defaults to 1e-6 * (lambda_e+ - m1).
  std::optional<double> edge_guard;
  std::size_t max_modes = 16;
};

struct GapEigenvalues {
  GapSide side = GapSide::Above;
  /// Ascending. Above the gap mode n is values[n-1]; below it mode n is the
  /// n-th value counted downward from -m2.
  std::vector<double> values;
  std::vector<std::pair<double, double>> brackets;
  std::size_t count_resolved = 0;
  bool edge_truncated = false;
  std::vector<std::string> warnings;
  double bisect_tol = 0.0;
  double edge_guard = 0.0;

  /// Mode index (1-based) of values[i].
  std::size_t mode_of(std::size_t i) const;
  /// Value of mode n, if resolved.
  std::optional<double> mode(std::size_t n) const;
};

/// Eigenvalues in [m1, lambda_e+) on an existing pencil.
GapEigenvalues solve_gap_above(const AssembledPencil& pencil, const SolverParams& params);
GapEigenvalues solve_gap_above(const PotentialSpec& spec, const SolverParams& params);
/// Eigenvalues in (lambda_e-, -m2], via the flipped operator.
GapEigenvalues solve_gap_below(const PotentialSpec& spec, const SolverParams& params);

struct SpectrumResult {
  SpectralConstants constants;
  GapEigenvalues above;
  GapEigenvalues below;
};

SpectrumResult solve_spectrum(const PotentialSpec& spec, const SolverParams& params);

/// One-parameter family of potentials used by sweeps.
struct SpecFamily {
  std::string name;
  std::function<PotentialSpec(double)> make;
  /// M1 non-increasing and M2 non-decreasing in t, so every eigenvalue is
  /// non-increasing in t.
  bool monotone_in_t = false;
};

struct SweepPoint {
  double t = 0.0;
  std::optional<SpectrumResult> result;
  std::string error;
};

/// Runs every grid point; failures are recorded per point. `jobs` worker
/// threads, output in grid order.
std::vector<SweepPoint> sweep(const SpecFamily& family, const std::vector<double>& t_grid,
                              const SolverParams& params, unsigned jobs = 1);

/// Extra CSV column: header plus cell text for (t, side, n, lambda).
struct SweepColumn {
  std::string header;
  std::function<std::string(double, GapSide, std::size_t, double)> cell;
};

/// CSV with header t,side,n,lambda,bracket_lo,bracket_hi,edge_truncated then
/// `monotone_audit` when the family qualifies, then the extra columns.
/// Points that failed emit one row with side "error".
void write_sweep_csv(std::ostream& out, const SpecFamily& family,
                     const std::vector<SweepPoint>& points,
                     const std::vector<SweepColumn>& extra = {});

/// 17 significant digits, round-trip exact.
std::string format_double(double v);

}  // namespace dirac_gap

#endif  // DIRAC_GAP_PENCIL_SOLVER_HPP
