#ifndef DIRAC_GAP_POTENTIAL_HPP
#define DIRAC_GAP_POTENTIAL_HPP

#include <optional>
#include <string>

#include "dirac_gap/scalar_field.hpp"

namespace dirac_gap {

/// Boundary angle of the half-line operator. Only the two block-diagonal
/// choices are supported by the variational solver.
enum class HalfLineAlpha { Zero, HalfPi };

struct Domain {
  enum class Kind { FullLine, HalfLine };
  Kind kind = Kind::FullLine;
  HalfLineAlpha alpha = HalfLineAlpha::Zero;

  static Domain full_line() { return {}; }
  static Domain half_line(HalfLineAlpha a) { return {Kind::HalfLine, a}; }
  bool is_half_line() const { return kind == Kind::HalfLine; }
  bool operator==(const Domain&) const = default;
};

std::string to_string(const Domain& d);

/// V(x) = [[M1, W], [W, -M2]] on the full line or on [0, inf).
struct PotentialSpec {
  ScalarField m1;
  ScalarField m2;
  ScalarField w;
  Domain domain;
  bool operator==(const PotentialSpec&) const = default;
};

/// Eigenvalues of a limit matrix V(+inf) or V(-inf), lo <= hi.
struct LimitEigenvalues {
  double lo = 0.0;
  double hi = 0.0;
};

struct SpectralConstants {
  double m1 = 0.0;
  double m2 = 0.0;
  double mhat1 = 0.0;
  double mhat2 = 0.0;
  double W_plus = 0.0;
  double W_minus = 0.0;
  double M1_plus = 0.0;
  double M1_minus = 0.0;
  double M2_plus = 0.0;
  double M2_minus = 0.0;
  LimitEigenvalues lambda_plus;
  LimitEigenvalues lambda_minus;
  double lambda_e_minus = 0.0;
  double lambda_e_plus = 0.0;

  double gap_width() const { return lambda_e_plus - lambda_e_minus; }
};

/// Infima and suprema of the potential entries over an interval. The same
/// struct carries the global quantities when a or b is infinite.
struct IntervalStats {
  double a = 0.0;
  double b = 0.0;
  double m1_I = 0.0;
  double m2_I = 0.0;
  double mhat1_I = 0.0;
  double mhat2_I = 0.0;
  /// sup of q = W' + W^2 over the interval, when W is differentiable there.
  std::optional<double> sup_q_I;

  double length() const { return b - a; }
};

/// Checks boundedness, finite limits and m1 > -m2, and derives every constant. Throws GapViolation or
/// UnboundedDescriptor.
SpectralConstants validate(const PotentialSpec& spec);

struct EssentialSpectrum {
  /// (-inf, lower] and [upper, inf)
  double lower = 0.0;
  double upper = 0.0;
};

EssentialSpectrum essential_spectrum(const PotentialSpec& spec);

/// Statistics over the open interval (a, b), which must be bounded and
/// nonempty. sup_q_I is filled only if `with_sup_q`.
IntervalStats interval_stats(const PotentialSpec& spec, double a, double b, bool with_sup_q = false);

/// Global statistics over the operator domain (the line or [0, inf)).
IntervalStats global_stats(const PotentialSpec& spec);

/// sup over (a, b) of W' + W^2. Throws NonDifferentiableW for step-type or
/// non-constant sampled W unless W is constant on the interval.
double sup_q(const ScalarField& w, double a, double b);

/// eta(x, y, z) = (x - y)/2 + sqrt(((x + y)/2)^2 + z), the positive root of
/// (l - x)(l + y) = z.
double eta(double x, double y, double z);

/// f_I(l) = (l - mhat1_I)(m2_I + l), defined for l >= mhat1_I.
double f_map(const IntervalStats& s, double lambda);
/// g_I(l) = (l - m1_I)(mhat2_I + l), defined for l >= m1_I.
double g_map(const IntervalStats& s, double lambda);
double f_inv(const IntervalStats& s, double beta);
double g_inv(const IntervalStats& s, double beta);

/// Spec of the unitarily equivalent operator whose spectrum is the negative
/// of the original: M1 and M2 swap, W changes sign, and on the half-line the
/// boundary angle switches between 0 and pi/2.
PotentialSpec flip(const PotentialSpec& spec);

}  // namespace dirac_gap

#endif  // DIRAC_GAP_POTENTIAL_HPP
