#include "dirac_gap/scalar_field.hpp"

#include <algorithm>
#include <cmath>

#include "dirac_gap/error.hpp"
#include "dirac_gap/sampling.hpp"

namespace dirac_gap {

namespace field {
bool Sum::operator==(const Sum& other) const { return terms == other.terms; }
}  // namespace field

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kInf = std::numeric_limits<double>::infinity();

bool finite(double v) { return std::isfinite(v); }

double step_value(const field::Step& s, double x) {
  for (const auto& p : s.pieces) {
    if (x >= p.a && x < p.b) return p.value;
  }
  return s.tail;
}

Range step_range(const field::Step& s, double a, double b) {
  Range r;
  // Uncovered parts of (a, b) carry the tail value.
  std::vector<std::pair<double, double>> covered;
  for (const auto& p : s.pieces) {
    const double lo = std::max(p.a, a);
    const double hi = std::min(p.b, b);
    if (lo < hi) {
      r.include(p.value);
      covered.emplace_back(lo, hi);
    }
  }
  std::sort(covered.begin(), covered.end());
  double cursor = a;
  bool gap = false;
  for (const auto& [lo, hi] : covered) {
    if (lo > cursor) gap = true;
    cursor = std::max(cursor, hi);
  }
  if (cursor < b) gap = true;
  if (gap) r.include(s.tail);
  return r;
}

Range exp_range(const field::ExpWell& e, double a, double b) {
  Range r;
  auto at = [&](double x) {
    return std::isinf(x) ? 0.0 : e.amplitude * std::exp(-e.rate * std::abs(x));
  };
  r.include(at(a));
  r.include(at(b));
  if (a < 0.0 && b > 0.0) r.include(e.amplitude);
  return r;
}

double sampled_value(const field::Sampled& s, double x) {
  if (x <= s.x.front()) return s.y.front();
  if (x >= s.x.back()) return s.y.back();
  const auto it = std::upper_bound(s.x.begin(), s.x.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - s.x.begin());
  const double x0 = s.x[i - 1], x1 = s.x[i];
  const double w = (x - x0) / (x1 - x0);
  return (1.0 - w) * s.y[i - 1] + w * s.y[i];
}

Range sampled_range(const field::Sampled& s, double a, double b) {
  Range r;
  auto clamp_eval = [&](double x) {
    if (x == -kInf) return s.y.front();
    if (x == kInf) return s.y.back();
    return sampled_value(s, x);
  };
  r.include(clamp_eval(a));
  r.include(clamp_eval(b));
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    if (s.x[i] > a && s.x[i] < b) r.include(s.y[i]);
  }
  return r;
}

void validate_node(const ScalarField::Node& node);

void validate_node(const ScalarField::Node& node) {
  std::visit(Overloaded{
                 [](const field::Constant& c) {
                   if (!finite(c.value))
                     throw Error(ErrorCode::UnboundedDescriptor, "constant is not finite");
                 },
                 [](const field::Step& s) {
                   if (!finite(s.window_lo) || !finite(s.window_hi) || !(s.window_lo < s.window_hi))
                     throw Error(ErrorCode::InvalidSpec, "step window must be finite with lo < hi");
                   if (!finite(s.tail))
                     throw Error(ErrorCode::UnboundedDescriptor, "step tail is not finite");
                   auto pieces = s.pieces;
                   std::sort(pieces.begin(), pieces.end(),
                             [](const auto& l, const auto& r) { return l.a < r.a; });
                   for (std::size_t i = 0; i < pieces.size(); ++i) {
                     const auto& p = pieces[i];
                     if (!finite(p.value))
                       throw Error(ErrorCode::UnboundedDescriptor, "step value is not finite");
                     if (!(p.a < p.b) || p.a < s.window_lo || p.b > s.window_hi)
                       throw Error(ErrorCode::InvalidSpec,
                                   "step piece must satisfy window_lo <= a < b <= window_hi");
                     if (i > 0 && p.a < pieces[i - 1].b)
                       throw Error(ErrorCode::InvalidSpec, "step pieces overlap");
                   }
                 },
                 [](const field::ExpWell& e) {
                   if (!finite(e.amplitude))
                     throw Error(ErrorCode::UnboundedDescriptor, "expwell amplitude is not finite");
                   if (!finite(e.rate) || !(e.rate > 0.0))
                     throw Error(ErrorCode::InvalidSpec, "expwell rate must be positive");
                 },
                 [](const field::Sampled& s) {
                   if (s.x.size() < 2 || s.x.size() != s.y.size())
                     throw Error(ErrorCode::InvalidSpec,
                                 "sampled field needs >= 2 nodes and matching x/y sizes");
                   for (std::size_t i = 0; i < s.x.size(); ++i) {
                     if (!finite(s.x[i]) || !finite(s.y[i]))
                       throw Error(ErrorCode::UnboundedDescriptor, "sampled data is not finite");
                     if (i > 0 && !(s.x[i] > s.x[i - 1]))
                       throw Error(ErrorCode::InvalidSpec, "sampled nodes must increase strictly");
                   }
                   const double scale = 1.0 + std::abs(s.y.front()) + std::abs(s.y.back());
                   if (!finite(s.limit_left) || !finite(s.limit_right))
                     throw Error(ErrorCode::UnboundedDescriptor, "sampled limits are not finite");
                   if (std::abs(s.limit_left - s.y.front()) > 1e-12 * scale ||
                       std::abs(s.limit_right - s.y.back()) > 1e-12 * scale)
                     throw Error(ErrorCode::InvalidSpec,
                                 "declared sampled limits disagree with the constant extrapolation");
                 },
                 [](const field::Sum& s) {
                   if (s.terms.empty()) throw Error(ErrorCode::InvalidSpec, "empty sum");
                 },
             },
             node);
}

}  // namespace

ScalarField ScalarField::constant(double c) {
  Node n = field::Constant{c};
  validate_node(n);
  return ScalarField(std::move(n));
}

ScalarField ScalarField::step(double window_lo, double window_hi,
                              std::vector<field::StepPiece> pieces, double tail) {
  std::sort(pieces.begin(), pieces.end(), [](const auto& l, const auto& r) { return l.a < r.a; });
  Node n = field::Step{window_lo, window_hi, std::move(pieces), tail};
  validate_node(n);
  return ScalarField(std::move(n));
}

ScalarField ScalarField::exp_well(double amplitude, double rate) {
  Node n = field::ExpWell{amplitude, rate};
  validate_node(n);
  return ScalarField(std::move(n));
}

ScalarField ScalarField::sampled(std::vector<double> x, std::vector<double> y, double limit_left,
                                 double limit_right) {
  Node n = field::Sampled{std::move(x), std::move(y), limit_left, limit_right};
  validate_node(n);
  return ScalarField(std::move(n));
}

ScalarField ScalarField::sum(std::vector<ScalarField> terms) {
  Node n = field::Sum{std::move(terms)};
  validate_node(n);
  return ScalarField(std::move(n));
}

double ScalarField::value(double x) const {
  return std::visit(
      Overloaded{
          [](const field::Constant& c) { return c.value; },
          [x](const field::Step& s) { return step_value(s, x); },
          [x](const field::ExpWell& e) { return e.amplitude * std::exp(-e.rate * std::abs(x)); },
          [x](const field::Sampled& s) { return sampled_value(s, x); },
          [x](const field::Sum& s) {
            double acc = 0.0;
            for (const auto& t : s.terms) acc += t.value(x);
            return acc;
          },
      },
      node_);
}

double ScalarField::limit_left() const {
  return std::visit(Overloaded{
                        [](const field::Constant& c) { return c.value; },
                        [](const field::Step& s) { return s.tail; },
                        [](const field::ExpWell&) { return 0.0; },
                        [](const field::Sampled& s) { return s.limit_left; },
                        [](const field::Sum& s) {
                          double acc = 0.0;
                          for (const auto& t : s.terms) acc += t.limit_left();
                          return acc;
                        },
                    },
                    node_);
}

double ScalarField::limit_right() const {
  return std::visit(Overloaded{
                        [](const field::Constant& c) { return c.value; },
                        [](const field::Step& s) { return s.tail; },
                        [](const field::ExpWell&) { return 0.0; },
                        [](const field::Sampled& s) { return s.limit_right; },
                        [](const field::Sum& s) {
                          double acc = 0.0;
                          for (const auto& t : s.terms) acc += t.limit_right();
                          return acc;
                        },
                    },
                    node_);
}

double ScalarField::sup_norm() const {
  const Range r = range(-kInf, kInf);
  const double n = std::max(std::abs(r.inf), std::abs(r.sup));
  if (!finite(n)) throw Error(ErrorCode::UnboundedDescriptor, "sup-norm is not finite");
  return n;
}

Range ScalarField::range(double a, double b) const {
  if (!(a < b)) throw Error(ErrorCode::DegenerateInterval, "range needs a < b");
  return std::visit(
      Overloaded{
          [](const field::Constant& c) {
            Range r;
            r.include(c.value);
            return r;
          },
          [a, b](const field::Step& s) { return step_range(s, a, b); },
          [a, b](const field::ExpWell& e) { return exp_range(e, a, b); },
          [a, b](const field::Sampled& s) { return sampled_range(s, a, b); },
          [this, a, b](const field::Sum& s) {
            // Constants only shift; a single non-constant member is exact.
            double shift = 0.0;
            std::vector<const ScalarField*> varying;
            for (const auto& t : s.terms) {
              if (const auto* c = std::get_if<field::Constant>(&t.node())) {
                shift += c->value;
              } else {
                varying.push_back(&t);
              }
            }
            Range r;
            if (varying.empty()) {
              r.include(shift);
              return r;
            }
            if (varying.size() == 1) {
              const Range inner = varying.front()->range(a, b);
              r.include(inner.inf + shift);
              r.include(inner.sup + shift);
              return r;
            }
            const auto bps = breakpoints();
            if (is_piecewise_constant()) {
              // Exact: evaluate once per segment between merged breakpoints.
              std::vector<double> cuts;
              for (double bp : bps)
                if (bp > a && bp < b) cuts.push_back(bp);
              std::sort(cuts.begin(), cuts.end());
              cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
              if (std::isinf(a)) r.include(limit_left());
              if (std::isinf(b)) r.include(limit_right());
              std::vector<double> pts;
              const double lo = std::isinf(a) ? (cuts.empty() ? 0.0 : cuts.front() - 1.0) : a;
              const double hi = std::isinf(b) ? (cuts.empty() ? lo + 1.0 : cuts.back() + 1.0) : b;
              pts.push_back(lo);
              for (double cut : cuts) pts.push_back(cut);
              pts.push_back(hi);
              for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
                if (pts[i] < pts[i + 1]) r.include(value(0.5 * (pts[i] + pts[i + 1])));
              }
              return r;
            }
            const double extent = feature_extent();
            double lo = std::isinf(a) ? -extent : a;
            double hi = std::isinf(b) ? extent : b;
            if (std::isinf(a)) r.include(limit_left());
            if (std::isinf(b)) r.include(limit_right());
            if (lo < hi) {
              r.include(sample_range([this](double x) { return value(x); }, lo, hi, bps));
            }
            return r;
          },
      },
      node_);
}

std::vector<double> ScalarField::breakpoints() const {
  std::vector<double> out;
  std::visit(Overloaded{
                 [](const field::Constant&) {},
                 [&out](const field::Step& s) {
                   for (const auto& p : s.pieces) {
                     out.push_back(p.a);
                     out.push_back(p.b);
                   }
                 },
                 [&out](const field::ExpWell&) { out.push_back(0.0); },
                 [&out](const field::Sampled& s) { out.insert(out.end(), s.x.begin(), s.x.end()); },
                 [&out](const field::Sum& s) {
                   for (const auto& t : s.terms) {
                     auto inner = t.breakpoints();
                     out.insert(out.end(), inner.begin(), inner.end());
                   }
                 },
             },
             node_);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double ScalarField::feature_extent(double eps) const {
  return std::visit(Overloaded{
                        [](const field::Constant&) { return 0.0; },
                        [](const field::Step& s) {
                          return std::max(std::abs(s.window_lo), std::abs(s.window_hi));
                        },
                        [eps](const field::ExpWell& e) {
                          // |A| e^{-r X} <= eps * max(|A|, 1)
                          const double a = std::abs(e.amplitude);
                          if (a == 0.0) return 0.0;
                          return std::max(0.0, std::log(a / (eps * std::max(a, 1.0))) / e.rate);
                        },
                        [](const field::Sampled& s) {
                          return std::max(std::abs(s.x.front()), std::abs(s.x.back()));
                        },
                        [eps](const field::Sum& s) {
                          double x = 0.0;
                          for (const auto& t : s.terms) x = std::max(x, t.feature_extent(eps));
                          return x;
                        },
                    },
                    node_);
}

bool ScalarField::is_piecewise_constant() const {
  return std::visit(Overloaded{
                        [](const field::Constant&) { return true; },
                        [](const field::Step&) { return true; },
                        [](const field::ExpWell& e) { return e.amplitude == 0.0; },
                        [](const field::Sampled& s) {
                          return std::all_of(s.y.begin(), s.y.end(),
                                             [&](double v) { return v == s.y.front(); });
                        },
                        [](const field::Sum& s) {
                          return std::all_of(s.terms.begin(), s.terms.end(), [](const auto& t) {
                            return t.is_piecewise_constant();
                          });
                        },
                    },
                    node_);
}

bool ScalarField::is_lipschitz() const {
  return std::visit(Overloaded{
                        [](const field::Constant&) { return true; },
                        [](const field::Step& s) { return s.pieces.empty(); },
                        [](const field::ExpWell&) { return true; },
                        [](const field::Sampled&) { return true; },
                        [](const field::Sum& s) {
                          return std::all_of(s.terms.begin(), s.terms.end(),
                                             [](const auto& t) { return t.is_lipschitz(); });
                        },
                    },
                    node_);
}

bool ScalarField::is_smooth() const {
  return std::visit(Overloaded{
                        [](const field::Constant&) { return true; },
                        [](const field::Step& s) { return s.pieces.empty(); },
                        [](const field::ExpWell&) { return true; },
                        [](const field::Sampled& s) {
                          return std::all_of(s.y.begin(), s.y.end(),
                                             [&](double v) { return v == s.y.front(); });
                        },
                        [](const field::Sum& s) {
                          return std::all_of(s.terms.begin(), s.terms.end(),
                                             [](const auto& t) { return t.is_smooth(); });
                        },
                    },
                    node_);
}

bool ScalarField::is_constant_on(double a, double b) const {
  const Range r = range(a, b);
  return r.inf == r.sup;
}

double ScalarField::derivative(double x, bool from_right) const {
  return std::visit(
      Overloaded{
          [](const field::Constant&) { return 0.0; },
          [](const field::Step& s) -> double {
            if (!s.pieces.empty())
              throw Error(ErrorCode::NonDifferentiable, "step descriptors have no derivative");
            return 0.0;
          },
          [x, from_right](const field::ExpWell& e) {
            const double sgn = x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : (from_right ? 1.0 : -1.0));
            return -e.rate * sgn * e.amplitude * std::exp(-e.rate * std::abs(x));
          },
          [x, from_right](const field::Sampled& s) {
            if (x < s.x.front() || x > s.x.back()) return 0.0;
            if (x == s.x.front() && !from_right) return 0.0;
            if (x == s.x.back() && from_right) return 0.0;
            auto it = from_right ? std::upper_bound(s.x.begin(), s.x.end(), x)
                                 : std::lower_bound(s.x.begin(), s.x.end(), x);
            std::size_t i = static_cast<std::size_t>(it - s.x.begin());
            i = std::clamp<std::size_t>(i, 1, s.x.size() - 1);
            return (s.y[i] - s.y[i - 1]) / (s.x[i] - s.x[i - 1]);
          },
          [x, from_right](const field::Sum& s) {
            double acc = 0.0;
            for (const auto& t : s.terms) acc += t.derivative(x, from_right);
            return acc;
          },
      },
      node_);
}

ScalarField ScalarField::negated() const {
  return std::visit(Overloaded{
                        [](const field::Constant& c) { return ScalarField(field::Constant{-c.value}); },
                        [](const field::Step& s) {
                          field::Step out = s;
                          out.tail = -s.tail;
                          for (auto& p : out.pieces) p.value = -p.value;
                          return ScalarField(std::move(out));
                        },
                        [](const field::ExpWell& e) {
                          return ScalarField(field::ExpWell{-e.amplitude, e.rate});
                        },
                        [](const field::Sampled& s) {
                          field::Sampled out = s;
                          for (auto& v : out.y) v = -v;
                          out.limit_left = -s.limit_left;
                          out.limit_right = -s.limit_right;
                          return ScalarField(std::move(out));
                        },
                        [](const field::Sum& s) {
                          field::Sum out;
                          for (const auto& t : s.terms) out.terms.push_back(t.negated());
                          return ScalarField(std::move(out));
                        },
                    },
                    node_);
}

}  // namespace dirac_gap
