#ifndef DIRAC_GAP_ANALYTIC_ORACLES_HPP
#define DIRAC_GAP_ANALYTIC_ORACLES_HPP

#include <optional>
#include <string>
#include <vector>

#include "dirac_gap/potential.hpp"

namespace dirac_gap {

/// Square-well family M1 = M - t on the well, M2 = M + gamma t on the well,
/// W = 0. The well is [-1, 1] on the line and [0, 1] on the half-line.
struct ToyParams {
  double M = 4.0;
  int gamma = 0;
  double t = 1.0;
  /// Boundary angle in [0, pi), half-line only.
  double alpha = 0.0;
};

/// Throws InvalidParams unless M > 0, gamma in {-1, 0, 1} and
/// t in (0, 2M) (gamma >= 0) or (0, M) (gamma = -1). `allow_zero_t` admits t = 0.
void check_toy_params(const ToyParams& p, bool allow_zero_t = false);

/// Transmission condition at the well edges.
enum class ToyMatching {
  /// psi1 and psi2 = -psi1' / (M2 + lambda) continuous: exact for every gamma.
  Flux,
  /// psi1 and psi1' continuous; agrees with Flux only for gamma = 0.
  Derivative,
};

enum class Parity { Even, Odd };
std::string to_string(Parity p);

struct ToyEigenvalue {
  double lambda = 0.0;
  Parity parity = Parity::Even;
  /// True for the mirrored roots in (-M, -M + t) when gamma = -1.
  bool below = false;
};

/// Every gap eigenvalue of the full-line toy operator, ascending.
std::vector<ToyEigenvalue> toy_fullline_spectrum(const ToyParams& p,
                                                 ToyMatching matching = ToyMatching::Flux);

/// Normalized residual of the even (p = +1) or odd (p = -1) condition at lambda.
double toy_fullline_residual(const ToyParams& p, double lambda, Parity parity,
                             ToyMatching matching = ToyMatching::Flux);

/// Gap eigenvalues of the half-line toy operator with boundary angle p.alpha,
/// ascending; t = 0 is allowed.
std::vector<double> toy_halfline_spectrum(const ToyParams& p);

/// Normalized residual of the half-line condition at lambda.
double toy_halfline_residual(const ToyParams& p, double lambda);

/// n-th coupling (n >= 1) at which a new eigenvalue enters from lambda = M.
/// Without alpha: the full-line thresholds. With alpha: the n-th positive
/// threshold of the half-line operator. Throws NoThreshold if none exists.
double toy_threshold(double M, int gamma, int n, std::optional<double> alpha = std::nullopt);

/// Number of full-line eigenvalues at coupling t: #{n >= 0 : t_n < t}, t_0 = 0.
std::size_t toy_expected_count(double M, int gamma, double t);

/// Lambda_{gamma,n}(t) = (-t(1+gamma) + sqrt((2M - t(1-gamma))^2 + (n pi)^2)) / 2.
double toy_upper_bound(double M, int gamma, int n, double t);

PotentialSpec toy_spec(const ToyParams& p, Domain domain = Domain::full_line());

/// M1 = M - (t/2) e^{-|x|}, M2 = M + (t/2) e^{-|x|}, W = 0 with t in (0, 4M).
PotentialSpec hydrogenic_spec(double M, double t);

/// sqrt(M^2 + beta_n) for each beta_n.
std::vector<double> constant_mass_reference(double M, const std::vector<double>& beta);

}  // namespace dirac_gap

#endif  // DIRAC_GAP_ANALYTIC_ORACLES_HPP
