#include "dirac_gap/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>

#include "dirac_gap/error.hpp"
#include "dirac_gap/sampling.hpp"

namespace dirac_gap {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_interval(Interval I) {
  if (!std::isfinite(I.first) || !std::isfinite(I.second)) {
    throw Error(ErrorCode::DomainError, "intervals must be bounded");
  }
  if (!(I.first < I.second)) {
    throw Error(ErrorCode::DegenerateInterval, fmt::format("empty interval ({}, {})", I.first, I.second));
  }
}

std::vector<double> all_breakpoints(const PotentialSpec& spec) {
  std::vector<double> out;
  for (const ScalarField* f : {&spec.m1, &spec.m2, &spec.w}) {
    auto b = f->breakpoints();
    out.insert(out.end(), b.begin(), b.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double feature_extent(const PotentialSpec& spec) {
  double x = 0.0;
  for (const ScalarField* f : {&spec.m1, &spec.m2, &spec.w}) x = std::max(x, f->feature_extent());
  return x + 1.0;
}

// Adaptive Gauss-Kronrod over [a, b], split at the breakpoints.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const std::vector<double>& breakpoints) {
  if (!(a < b)) return 0.0;
  std::vector<double> cuts{a, b};
  for (double bp : breakpoints) {
    if (bp > a && bp < b) cuts.push_back(bp);
  }
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, cuts[i], cuts[i + 1],
                                                                           20, 1e-15);
  }
  return total;
}

// F = -det(V - l) / (M2 + l) = (M1 - l) + W^2 / (M2 + l)
double integrand(const PotentialSpec& spec, double lambda, double x) {
  const double w = spec.w.value(x);
  return spec.m1.value(x) - lambda + w * w / (spec.m2.value(x) + lambda);
}

double integrand_derivative(const PotentialSpec& spec, double lambda, double x) {
  const double w = spec.w.value(x);
  const double d = spec.m2.value(x) + lambda;
  return spec.m1.derivative(x) + 2.0 * w * spec.w.derivative(x) / d -
         w * w * spec.m2.derivative(x) / (d * d);
}

double det_shifted(const PotentialSpec& spec, double lambda, double x) {
  const double w = spec.w.value(x);
  return -(spec.m1.value(x) - lambda) * (spec.m2.value(x) + lambda) - w * w;
}

bool same_edge(double a, double b) { return std::abs(a - b) <= 1e-12 * (1.0 + std::abs(a) + std::abs(b)); }

std::vector<double> fe_beta(const Mesh& mesh, const ScalarField& w, std::size_t k) {
  const SturmMatrices m = assemble_sturm(mesh, w);
  return smallest_generalized_eigenvalues(m.stiff_w, m.mass, k);
}

void check_disjoint(std::vector<Interval> intervals) {
  std::sort(intervals.begin(), intervals.end());
  for (std::size_t i = 0; i + 1 < intervals.size(); ++i) {
    if (intervals[i].second > intervals[i + 1].first) {
      throw Error(ErrorCode::OverlappingIntervals,
                  fmt::format("({}, {}) and ({}, {}) overlap", intervals[i].first, intervals[i].second,
                              intervals[i + 1].first, intervals[i + 1].second));
    }
  }
}

void check_in_domain(const PotentialSpec& spec, Interval I) {
  if (spec.domain.is_half_line() && I.first < 0.0) {
    throw Error(ErrorCode::DomainError, fmt::format("interval ({}, {}) leaves [0, inf)", I.first, I.second));
  }
}

}  // namespace

std::string to_string(TailSide side) { return side == TailSide::Left ? "left_tail" : "right_tail"; }

SLEigenvalues sl_eigenvalues(const ScalarField& w, Interval I, std::size_t k, double h, SLMethod method) {
  check_interval(I);
  SLEigenvalues out;
  out.interval = I;
  const bool constant = w.is_constant_on(I.first, I.second);
  if (method == SLMethod::ClosedForm && !constant) {
    throw Error(ErrorCode::InvalidParams, "closed-form SL eigenvalues need W constant on the interval");
  }
  if (constant && method != SLMethod::FiniteElement) {
    const double c = w.range(I.first, I.second).sup;
    const double len = I.second - I.first;
    for (std::size_t n = 1; n <= k; ++n) {
      const double q = static_cast<double>(n) * kPi / len;
      out.beta.push_back(c * c + q * q);
    }
    return out;
  }
  const auto bps = w.breakpoints();
  out.beta = fe_beta(interval_mesh(I.first, I.second, h, bps), w, k);
  return out;
}

SLEigenvalues sl_eigenvalues_on_mesh(const Mesh& mesh, const ScalarField& w, std::size_t k) {
  SLEigenvalues out;
  out.interval = {mesh.x_lo, mesh.x_hi};
  out.beta = fe_beta(mesh, w, k);
  return out;
}

SLEigenvalues sl_eigenvalues_global(const PotentialSpec& spec, std::size_t k, const MeshParams& params) {
  const SpectralConstants c = validate(spec);
  const Mesh mesh = build_mesh(spec, params);
  SLEigenvalues out = sl_eigenvalues_on_mesh(mesh, spec.w, k);
  out.global = true;
  out.beta_e = spec.domain.is_half_line() ? c.W_plus * c.W_plus
                                           : std::min(c.W_minus * c.W_minus, c.W_plus * c.W_plus);
  std::erase_if(out.beta, [&](double b) { return !(b < out.beta_e); });
  return out;
}

Existence41 existence_thm41(const PotentialSpec& spec) {
  const SpectralConstants c = validate(spec);
  const double lam = c.lambda_e_plus;
  Existence41 out;
  if (spec.domain.is_half_line() && spec.domain.alpha == HalfLineAlpha::HalfPi) {
    out.note = "the plateau test functions do not vanish at 0; no test for alpha = pi/2";
    return out;
  }
  if (!spec.domain.is_half_line() && !same_edge(c.lambda_minus.hi, c.lambda_plus.hi)) {
    const bool right = c.lambda_minus.hi < c.lambda_plus.hi;
    const double limit = right ? -(-(c.M1_plus - lam) * (c.M2_plus + lam) - c.W_plus * c.W_plus) /
                                     (c.M2_plus + lam)
                               : -(-(c.M1_minus - lam) * (c.M2_minus + lam) - c.W_minus * c.W_minus) /
                                     (c.M2_minus + lam);
    throw Error(ErrorCode::NotIntegrable,
                fmt::format("lambda_-^+ = {} differs from lambda_+^+ = {}; the integrand tends to {} > 0 "
                            "at {}inf",
                            c.lambda_minus.hi, c.lambda_plus.hi, limit, right ? "+" : "-"));
  }
  const double X = feature_extent(spec);
  const auto f = [&](double x) { return integrand(spec, lam, x); };
  const double lo = spec.domain.is_half_line() ? 0.0 : -X;
  const double integral = integrate(f, lo, X, all_breakpoints(spec));
  const double right_term = c.W_plus / (c.M2_plus + lam);
  if (spec.domain.is_half_line()) {
    out.lhs = integral + right_term;
  } else {
    out.lhs = integral - (c.W_minus / (c.M2_minus + lam) - right_term);
  }
  out.applies = true;
  out.conclusion = out.lhs < 0.0;
  return out;
}

Existence42 existence_thm42(const PotentialSpec& spec, double a, TailSide side) {
  for (const ScalarField* f : {&spec.m1, &spec.m2, &spec.w}) {
    if (!f->is_lipschitz()) {
      throw Error(ErrorCode::NonDifferentiable, "the one-sided test needs differentiable M1, M2, W");
    }
  }
  if (spec.domain.is_half_line()) {
    throw Error(ErrorCode::DomainError, "the one-sided test is stated on the full line");
  }
  const SpectralConstants c = validate(spec);
  const double lam = c.lambda_e_plus;
  const double det = det_shifted(spec, lam, a);
  const double scale = 1.0 + (std::abs(spec.m1.value(a)) + std::abs(lam)) *
                                 (std::abs(spec.m2.value(a)) + std::abs(lam));
  if (std::abs(det) > 1e-10 * scale) {
    throw Error(ErrorCode::AnchorMismatch, fmt::format("det(V(a) - lambda_e+) = {} at a = {}", det, a));
  }
  // Integrability of the positive part on the integration side.
  const LimitEigenvalues& tail = side == TailSide::Left ? c.lambda_minus : c.lambda_plus;
  if (!same_edge(tail.hi, lam)) {
    throw Error(ErrorCode::NotIntegrable,
                fmt::format("the integrand does not vanish at {}inf (lambda^+ = {} > lambda_e+ = {})",
                            side == TailSide::Left ? "-" : "+", tail.hi, lam));
  }

  const double X = std::max(feature_extent(spec), std::abs(a) + 1.0);
  const auto bps = all_breakpoints(spec);
  const auto F = [&](double x) { return integrand(spec, lam, x); };
  const auto dF = [&](double x) { return integrand_derivative(spec, lam, x); };
  const auto w_ratio = [&](double x) { return spec.w.value(x) / (spec.m2.value(x) + lam); };

  Existence42 out;
  out.a = a;
  out.side = side;
  double sup_w;
  double sup_d;
  double inf_m2;
  if (side == TailSide::Left) {
    out.terms[0] = integrate(F, -X, a, bps);
    out.terms[1] = -c.W_minus / (c.M2_minus + lam);
    Range rw = sample_range(w_ratio, a, X, bps);
    rw.include(c.W_plus / (c.M2_plus + lam));
    sup_w = rw.sup;
    Range rd = sample_range(dF, a, X, bps);
    rd.include(0.0);
    sup_d = rd.sup;
    inf_m2 = spec.m2.range(a, kInf).inf;
    inf_m2 = std::min(inf_m2, spec.m2.value(a));
  } else {
    out.terms[0] = integrate(F, a, X, bps);
    out.terms[1] = c.W_plus / (c.M2_plus + lam);
    Range rw = sample_range(w_ratio, -X, a, bps);
    rw.include(c.W_minus / (c.M2_minus + lam));
    sup_w = -rw.inf;
    Range rd = sample_range(dF, -X, a, bps);
    rd.include(0.0);
    sup_d = -rd.inf;
    inf_m2 = spec.m2.range(-kInf, a).inf;
    inf_m2 = std::min(inf_m2, spec.m2.value(a));
  }
  out.terms[2] = sup_w;
  const double sup_inv = 1.0 / (inf_m2 + lam);
  out.terms[3] = 0.5 * std::cbrt(4.5) * std::cbrt(std::max(0.0, sup_d)) * std::pow(sup_inv, 2.0 / 3.0);
  out.total = out.terms[0] + out.terms[1] + out.terms[2] + out.terms[3];
  out.conclusion = out.total < 0.0;
  return out;
}

std::vector<double> find_anchors(const PotentialSpec& spec, double lo, double hi, std::size_t samples) {
  if (!(lo < hi)) throw Error(ErrorCode::DegenerateInterval, "anchor scan needs lo < hi");
  const double lam = validate(spec).lambda_e_plus;
  const auto d = [&](double x) { return det_shifted(spec, lam, x); };
  std::vector<double> out;
  samples = std::max<std::size_t>(samples, 2);
  double x_prev = lo;
  double d_prev = d(lo);
  if (d_prev == 0.0) out.push_back(lo);
  for (std::size_t i = 1; i <= samples; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(samples);
    const double dx = d(x);
    if (dx == 0.0) {
      out.push_back(x);
    } else if (d_prev != 0.0 && (dx < 0.0) != (d_prev < 0.0)) {
      double a = x_prev;
      double b = x;
      double fa = d_prev;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break;
        const double fm = d(mid);
        if ((fm < 0.0) == (fa < 0.0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      out.push_back(0.5 * (a + b));
    }
    x_prev = x;
    d_prev = dx;
  }
  return out;
}

GlobalBrackets global_brackets(const PotentialSpec& spec, std::size_t k, const MeshParams& mesh) {
  const SpectralConstants c = validate(spec);
  const IntervalStats g = global_stats(spec);
  const SLEigenvalues fine = sl_eigenvalues_global(spec, k, mesh);
  MeshParams coarse_params = mesh;
  coarse_params.h *= 2.0;
  const SLEigenvalues coarse = sl_eigenvalues_global(spec, k, coarse_params);

  GlobalBrackets out;
  out.beta_e = fine.beta_e;
  const bool upper_ok = g.mhat1_I <= c.lambda_e_plus;
  const double f_edge = upper_ok ? f_map(g, c.lambda_e_plus) : 0.0;
  for (std::size_t i = 0; i < fine.beta.size(); ++i) {
    GlobalBracket b;
    b.n = i + 1;
    b.beta = fine.beta[i];
    // P1 eigenvalue errors scale like h^2.
    b.beta_extrapolated = i < coarse.beta.size() ? b.beta - (coarse.beta[i] - b.beta) / 3.0 : b.beta;
    b.lower = g_inv(g, std::max(0.0, b.beta_extrapolated));
    if (upper_ok && b.beta < f_edge) b.upper = f_inv(g, b.beta);
    out.brackets.push_back(b);
  }
  const double beta1 = fine.beta.empty() ? out.beta_e : std::max(0.0, out.brackets.front().beta_extrapolated);
  out.resolvent = {c.m1, g_inv(g, beta1)};
  return out;
}

IntervalBounds interval_upper_bounds(const PotentialSpec& spec, const std::vector<Interval>& intervals,
                                     std::size_t k, double h, SLMethod method) {
  for (const Interval& I : intervals) {
    check_interval(I);
    check_in_domain(spec, I);
  }
  check_disjoint(intervals);
  const SpectralConstants c = validate(spec);
  IntervalBounds out;
  for (const Interval& I : intervals) {
    const IntervalStats s = interval_stats(spec, I.first, I.second);
    if (s.mhat1_I > c.lambda_e_plus) {
      throw Error(ErrorCode::IntervalFailsCondition,
                  fmt::format("sup M1 = {} on ({}, {}) exceeds lambda_e+ = {}", s.mhat1_I, I.first,
                              I.second, c.lambda_e_plus));
    }
    const double f_edge = f_map(s, c.lambda_e_plus);
    const SLEigenvalues sl = sl_eigenvalues(spec.w, I, k, h, method);
    for (std::size_t n = 0; n < sl.beta.size(); ++n) {
      if (!(sl.beta[n] < f_edge)) break;
      out.per_interval.push_back({I, n + 1, sl.beta[n], f_inv(s, sl.beta[n])});
      out.merged.push_back(out.per_interval.back().upper);
    }
  }
  std::sort(out.merged.begin(), out.merged.end());
  if (out.merged.size() > k) out.merged.resize(k);
  return out;
}

CountLowerBound count_lower_bound(const PotentialSpec& spec, const std::vector<Interval>& intervals,
                                  double lambda, double h, SLMethod method) {
  for (const Interval& I : intervals) {
    check_interval(I);
    check_in_domain(spec, I);
  }
  check_disjoint(intervals);
  CountLowerBound out;
  out.lambda = lambda;
  for (const Interval& I : intervals) {
    const IntervalStats s = interval_stats(spec, I.first, I.second, true);
    IntervalCount part;
    part.interval = I;
    part.sup_q = *s.sup_q_I;
    part.f_value = lambda <= s.mhat1_I ? 0.0 : f_map(s, lambda);
    if (part.f_value > part.sup_q) {
      const double r = (s.length() / kPi) * std::sqrt(part.f_value - part.sup_q);
      part.formula = static_cast<std::size_t>(std::ceil(r)) - 1;
    }
    if (part.f_value > 0.0) {
      std::size_t k = 8;
      for (;;) {
        const SLEigenvalues sl = sl_eigenvalues(spec.w, I, k, h, method);
        const auto below = static_cast<std::size_t>(
            std::count_if(sl.beta.begin(), sl.beta.end(), [&](double b) { return b < part.f_value; }));
        if (below < sl.beta.size() || sl.beta.size() < k) {
          part.sl_dimension = below;
          break;
        }
        k *= 2;
      }
    }
    out.formula += part.formula;
    out.sl_dimension += part.sl_dimension;
    out.parts.push_back(part);
  }
  return out;
}

std::vector<Interval> default_intervals(const PotentialSpec& spec) {
  std::vector<Interval> out;
  const std::function<void(const ScalarField&)> visit = [&](const ScalarField& f) {
    if (const auto* s = std::get_if<field::Step>(&f.node())) {
      for (const auto& p : s->pieces) out.emplace_back(p.a, p.b);
    } else if (const auto* sum = std::get_if<field::Sum>(&f.node())) {
      for (const auto& t : sum->terms) visit(t);
    }
  };
  visit(spec.m1);
  std::sort(out.begin(), out.end());
  // Keep a disjoint family.
  std::vector<Interval> disjoint;
  for (const Interval& I : out) {
    if (disjoint.empty() || I.first >= disjoint.back().second) disjoint.push_back(I);
  }
  if (spec.domain.is_half_line()) {
    std::erase_if(disjoint, [](const Interval& I) { return I.second <= 0.0; });
    for (Interval& I : disjoint) I.first = std::max(I.first, 0.0);
  }
  return disjoint;
}

BoundReport bound_report(const PotentialSpec& spec, const BoundOptions& options) {
  BoundReport r;
  r.constants = validate(spec);
  try {
    r.existence_41 = existence_thm41(spec);
  } catch (const Error& e) {
    r.existence_41_error = e.what();
  }
  if (options.anchor) {
    for (TailSide side : {TailSide::Left, TailSide::Right}) {
      try {
        r.existence_42.push_back(existence_thm42(spec, *options.anchor, side));
      } catch (const Error& e) {
        r.existence_42_errors.push_back(to_string(side) + ": " + e.what());
      }
    }
  }
  try {
    r.global = global_brackets(spec, options.k, options.mesh);
  } catch (const Error& e) {
    r.global_error = e.what();
  }
  r.intervals = options.intervals.value_or(default_intervals(spec));
  if (!r.intervals.empty()) {
    try {
      r.interval_bounds = interval_upper_bounds(spec, r.intervals, options.k, options.interval_h);
    } catch (const Error& e) {
      r.interval_error = e.what();
    }
    const double span = r.constants.lambda_e_plus - r.constants.m1;
    const double delta = options.edge_guard.value_or(1e-6 * span);
    try {
      r.count_lower =
          count_lower_bound(spec, r.intervals, r.constants.lambda_e_plus - delta, options.interval_h);
    } catch (const Error& e) {
      r.count_error = e.what();
    }
  }
  return r;
}

nlohmann::json to_json(const BoundReport& r) {
  using nlohmann::json;
  const SpectralConstants& c = r.constants;
  json j;
  j["constants"] = {{"m1", c.m1}, {"m2", c.m2}, {"mhat1", c.mhat1}, {"mhat2", c.mhat2},
                    {"lambda_e_minus", c.lambda_e_minus}, {"lambda_e_plus", c.lambda_e_plus}};
  if (r.existence_41) {
    j["existence_41"] = {{"applies", r.existence_41->applies}, {"lhs", r.existence_41->lhs},
                         {"conclusion", r.existence_41->conclusion}, {"note", r.existence_41->note}};
  } else {
    j["existence_41"] = {{"error", r.existence_41_error}};
  }
  json e42 = json::array();
  for (const auto& e : r.existence_42) {
    e42.push_back({{"a", e.a}, {"side", to_string(e.side)}, {"terms", e.terms}, {"total", e.total},
                   {"conclusion", e.conclusion}});
  }
  for (const auto& msg : r.existence_42_errors) e42.push_back({{"error", msg}});
  j["existence_42"] = e42;
  if (r.global) {
    json br = json::array();
    for (const auto& b : r.global->brackets) {
      json row{{"n", b.n}, {"lower", b.lower}, {"beta", b.beta}, {"beta_extrapolated", b.beta_extrapolated}};
      row["upper"] = b.upper ? json(*b.upper) : json(nullptr);
      br.push_back(row);
    }
    j["global_brackets"] = {{"brackets", br},
                            {"beta_e", r.global->beta_e},
                            {"resolvent", {r.global->resolvent.first, r.global->resolvent.second}},
                            {"lower_is_heuristic", r.global->lower_is_heuristic}};
  } else {
    j["global_brackets"] = {{"error", r.global_error}};
  }
  json intervals = json::array();
  for (const auto& I : r.intervals) intervals.push_back({I.first, I.second});
  j["intervals"] = intervals;
  if (r.interval_bounds) {
    json rows = json::array();
    for (const auto& b : r.interval_bounds->per_interval) {
      rows.push_back({{"interval", {b.interval.first, b.interval.second}}, {"n", b.n}, {"beta", b.beta},
                      {"upper", b.upper}});
    }
    j["interval_bounds"] = {{"per_interval", rows}, {"merged", r.interval_bounds->merged}};
  } else if (!r.interval_error.empty()) {
    j["interval_bounds"] = {{"error", r.interval_error}};
  }
  if (r.count_lower) {
    json parts = json::array();
    for (const auto& p : r.count_lower->parts) {
      parts.push_back({{"interval", {p.interval.first, p.interval.second}}, {"f", p.f_value},
                       {"sup_q", p.sup_q}, {"formula", p.formula}, {"sl_dimension", p.sl_dimension}});
    }
    j["count_lower"] = {{"lambda", r.count_lower->lambda}, {"formula", r.count_lower->formula},
                        {"sl_dimension", r.count_lower->sl_dimension}, {"parts", parts}};
  } else if (!r.count_error.empty()) {
    j["count_lower"] = {{"error", r.count_error}};
  }
  return j;
}

}  // namespace dirac_gap
