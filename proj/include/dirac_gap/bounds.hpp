#ifndef DIRAC_GAP_BOUNDS_HPP
#define DIRAC_GAP_BOUNDS_HPP

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dirac_gap/discretization.hpp"
#include "dirac_gap/potential.hpp"

namespace dirac_gap {

using Interval = std::pair<double, double>;

enum class SLMethod {
  /// Closed form when W is constant on the interval, finite elements otherwise.
  Auto,
  FiniteElement,
  ClosedForm,
};

/// Dirichlet eigenvalues of B B* = -(d/dx)^2 + W' + W^2 on an interval, or of
/// the global problem on a truncated line.
struct SLEigenvalues {
  bool global = false;
  Interval interval{0.0, 0.0};
  /// Ascending; finite-element values are upper bounds of the exact ones.
  std::vector<double> beta;
  /// min(W_-^2, W_+^2), global problem only.
  double beta_e = 0.0;
};

SLEigenvalues sl_eigenvalues(const ScalarField& w, Interval I, std::size_t k, double h,
                             SLMethod method = SLMethod::Auto);

/// Finite-element values on a given mesh.
SLEigenvalues sl_eigenvalues_on_mesh(const Mesh& mesh, const ScalarField& w, std::size_t k);

/// Global problem on the truncated solver mesh, keeping beta < beta_e.
SLEigenvalues sl_eigenvalues_global(const PotentialSpec& spec, std::size_t k,
                                    const MeshParams& mesh);

struct Existence41 {
  bool applies = false;
  double lhs = 0.0;
  bool conclusion = false;
  std::string note;
};

/// Integral test at lambda_e+. Throws NotIntegrable when the integrand has a
/// non-zero limit at an end.
Existence41 existence_thm41(const PotentialSpec& spec);

enum class TailSide {
  /// Integral over (-inf, a), suprema over [a, inf).
  Left,
  /// Integral over (a, inf), suprema over (-inf, a].
  Right,
};
std::string to_string(TailSide side);

struct Existence42 {
  double a = 0.0;
  TailSide side = TailSide::Left;
  /// Integral, limit term, W supremum term, derivative term.
  std::array<double, 4> terms{};
  double total = 0.0;
  bool conclusion = false;
};

/// One-sided test anchored at a with det(V(a) - lambda_e+) = 0. Throws
/// AnchorMismatch, NonDifferentiable or NotIntegrable.
Existence42 existence_thm42(const PotentialSpec& spec, double a, TailSide side);

/// Zeros of x -> det(V(x) - lambda_e+) on [lo, hi] located by a sign scan.
/// An empty result does not prove that no anchor exists.
std::vector<double> find_anchors(const PotentialSpec& spec, double lo, double hi,
                                 std::size_t samples = 4096);

struct GlobalBracket {
  std::size_t n = 0;
  /// g^-1 of the extrapolated beta_n; heuristic since beta_n is not certified.
  double lower = 0.0;
  std::optional<double> upper;
  double beta = 0.0;
  double beta_extrapolated = 0.0;
};

struct GlobalBrackets {
  std::vector<GlobalBracket> brackets;
  double beta_e = 0.0;
  /// [m1, g^-1(beta_1)) lies in the resolvent set; beta_1 = beta_e when no
  /// discrete beta exists.
  Interval resolvent{0.0, 0.0};
  bool lower_is_heuristic = true;
};

GlobalBrackets global_brackets(const PotentialSpec& spec, std::size_t k, const MeshParams& mesh);

struct IntervalBound {
  Interval interval;
  std::size_t n = 0;
  double beta = 0.0;
  double upper = 0.0;
};

struct IntervalBounds {
  std::vector<IntervalBound> per_interval;
  /// Every bound merged ascending; the n-th entry bounds lambda_n.
  std::vector<double> merged;
};

/// Throws OverlappingIntervals, IntervalFailsCondition, DegenerateInterval.
IntervalBounds interval_upper_bounds(const PotentialSpec& spec, const std::vector<Interval>& intervals,
                                     std::size_t k, double h, SLMethod method = SLMethod::Auto);

struct IntervalCount {
  Interval interval;
  double f_value = 0.0;
  double sup_q = 0.0;
  std::size_t formula = 0;
  std::size_t sl_dimension = 0;
};

struct CountLowerBound {
  double lambda = 0.0;
  /// Sum of ceil((|I|/pi) sqrt(f_I(lambda) - sup_I q)) - 1.
  std::size_t formula = 0;
  /// Sum of #{n : beta_{n,I} < f_I(lambda)}.
  std::size_t sl_dimension = 0;
  std::vector<IntervalCount> parts;
};

/// Lower bound for the number of eigenvalues in [m1, lambda). Throws
/// NonDifferentiableW, OverlappingIntervals, DegenerateInterval.
CountLowerBound count_lower_bound(const PotentialSpec& spec, const std::vector<Interval>& intervals,
                                  double lambda, double h, SLMethod method = SLMethod::Auto);

/// The pieces of the step members of M1, a natural choice of wells.
std::vector<Interval> default_intervals(const PotentialSpec& spec);

struct BoundOptions {
  std::size_t k = 8;
  MeshParams mesh;
  /// Element size for interval problems.
  double interval_h = 1e-3;
  std::optional<std::vector<Interval>> intervals;
  std::optional<double> anchor;
  /// Count evaluated at lambda_e+ - edge_guard; defaults to 1e-6 (lambda_e+ - m1).
  std::optional<double> edge_guard;
};

struct BoundReport {
  SpectralConstants constants;
  std::optional<Existence41> existence_41;
  std::string existence_41_error;
  std::vector<Existence42> existence_42;
  std::vector<std::string> existence_42_errors;
  std::optional<GlobalBrackets> global;
  std::string global_error;
  std::vector<Interval> intervals;
  std::optional<IntervalBounds> interval_bounds;
  std::string interval_error;
  std::optional<CountLowerBound> count_lower;
  std::string count_error;
};

/// Runs every analysis; a failing part records its error and the rest continue.
BoundReport bound_report(const PotentialSpec& spec, const BoundOptions& options);

nlohmann::json to_json(const BoundReport& report);

}  // namespace dirac_gap

#endif  // DIRAC_GAP_BOUNDS_HPP
