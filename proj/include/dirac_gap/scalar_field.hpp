#ifndef DIRAC_GAP_SCALAR_FIELD_HPP
#define DIRAC_GAP_SCALAR_FIELD_HPP

#include <limits>
#include <variant>
#include <vector>

namespace dirac_gap {

class ScalarField;

namespace field {

struct Constant {
  double value = 0.0;
  bool operator==(const Constant&) const = default;
};

/// Value on the half-open piece [a, b).
struct StepPiece {
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;
  bool operator==(const StepPiece&) const = default;
};

/// Piecewise constant on [window_lo, window_hi]; `tail` everywhere not covered
/// by a piece (including outside the window).
struct Step {
  double window_lo = 0.0;
  double window_hi = 0.0;
  std::vector<StepPiece> pieces;
  double tail = 0.0;
  bool operator==(const Step&) const = default;
};

/// amplitude * exp(-rate * |x|)
struct ExpWell {
  double amplitude = 0.0;
  double rate = 1.0;
  bool operator==(const ExpWell&) const = default;
};

/// Linear interpolation through (x[i], y[i]); constant extrapolation beyond
/// the first/last node. The declared limits must agree with the end values.
struct Sampled {
  std::vector<double> x;
  std::vector<double> y;
  double limit_left = 0.0;
  double limit_right = 0.0;
  bool operator==(const Sampled&) const = default;
};

struct Sum {
  std::vector<ScalarField> terms;
  bool operator==(const Sum&) const;
};

}  // namespace field

/// Closed range [inf, sup] of a function over a set.
struct Range {
  double inf = std::numeric_limits<double>::infinity();
  double sup = -std::numeric_limits<double>::infinity();

  void include(double v) {
    if (v < inf) inf = v;
    if (v > sup) sup = v;
  }
  void include(const Range& r) {
    include(r.inf);
    include(r.sup);
  }
};

/// Symbolic descriptor of a bounded real function on the line whose limits at
/// -inf and +inf exist. Immutable.
class ScalarField {
 public:
  using Node = std::variant<field::Constant, field::Step, field::ExpWell, field::Sampled, field::Sum>;

  ScalarField() : node_(field::Constant{}) {}

  static ScalarField constant(double c);
  static ScalarField step(double window_lo, double window_hi, std::vector<field::StepPiece> pieces,
                          double tail);
  static ScalarField exp_well(double amplitude, double rate);
  static ScalarField sampled(std::vector<double> x, std::vector<double> y, double limit_left,
                             double limit_right);
  static ScalarField sum(std::vector<ScalarField> terms);

  const Node& node() const { return node_; }

  double value(double x) const;
  double limit_left() const;
  double limit_right() const;
  double sup_norm() const;

  /// Range over the open interval (a, b); either end may be infinite.
  Range range(double a, double b) const;

  /// Points where the field or its derivative may jump.
  std::vector<double> breakpoints() const;

  /// Half-width X such that outside [-X, X] the field equals its limits up to
  /// `eps` (relative to its sup-norm).
  double feature_extent(double eps = 1e-17) const;

  bool is_piecewise_constant() const;
  /// Lipschitz with a piecewise-continuous derivative (no Step members).
  bool is_lipschitz() const;
  /// Continuously differentiable except at ExpWell kinks (no Step or Sampled).
  bool is_smooth() const;
  /// Constant on the open interval (a, b).
  bool is_constant_on(double a, double b) const;

  /// One-sided derivative (from the right if `from_right`); throws
  /// NonDifferentiable for Step members.
  double derivative(double x, bool from_right = true) const;

  ScalarField negated() const;

  bool operator==(const ScalarField& other) const { return node_ == other.node_; }

 private:
  explicit ScalarField(Node node) : node_(std::move(node)) {}

  Node node_;
};

}  // namespace dirac_gap

#endif  // DIRAC_GAP_SCALAR_FIELD_HPP
