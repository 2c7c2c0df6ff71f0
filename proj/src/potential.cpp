#include "dirac_gap/potential.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "dirac_gap/error.hpp"
#include "dirac_gap/sampling.hpp"

namespace dirac_gap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double domain_lo(const Domain& d) { return d.is_half_line() ? 0.0 : -kInf; }

LimitEigenvalues limit_eigenvalues(double m1, double m2, double w) {
  const double mid = 0.5 * (m1 - m2);
  const double rad = std::hypot(0.5 * (m1 + m2), w);
  return {mid - rad, mid + rad};
}

}  // namespace

std::string to_string(const Domain& d) {
  if (!d.is_half_line()) return "full";
  return d.alpha == HalfLineAlpha::Zero ? "half(alpha=0)" : "half(alpha=pi/2)";
}

SpectralConstants validate(const PotentialSpec& spec) {
  for (const ScalarField* f : {&spec.m1, &spec.m2, &spec.w}) (void)f->sup_norm();

  SpectralConstants c;
  const double lo = domain_lo(spec.domain);
  const Range r1 = spec.m1.range(lo, kInf);
  const Range r2 = spec.m2.range(lo, kInf);
  c.m1 = r1.inf;
  c.mhat1 = r1.sup;
  c.m2 = r2.inf;
  c.mhat2 = r2.sup;
  if (!(c.m1 > -c.m2)) {
    throw Error(ErrorCode::GapViolation,
                fmt::format("need m1 > -m2, got m1 = {}, m2 = {}", c.m1, c.m2));
  }

  c.M1_plus = spec.m1.limit_right();
  c.M2_plus = spec.m2.limit_right();
  c.W_plus = spec.w.limit_right();
  c.M1_minus = spec.m1.limit_left();
  c.M2_minus = spec.m2.limit_left();
  c.W_minus = spec.w.limit_left();
  c.lambda_plus = limit_eigenvalues(c.M1_plus, c.M2_plus, c.W_plus);
  c.lambda_minus = limit_eigenvalues(c.M1_minus, c.M2_minus, c.W_minus);
  if (spec.domain.is_half_line()) {
    c.lambda_e_minus = c.lambda_plus.lo;
    c.lambda_e_plus = c.lambda_plus.hi;
  } else {
    c.lambda_e_minus = std::max(c.lambda_plus.lo, c.lambda_minus.lo);
    c.lambda_e_plus = std::min(c.lambda_plus.hi, c.lambda_minus.hi);
  }
  return c;
}

EssentialSpectrum essential_spectrum(const PotentialSpec& spec) {
  const SpectralConstants c = validate(spec);
  return {c.lambda_e_minus, c.lambda_e_plus};
}

IntervalStats interval_stats(const PotentialSpec& spec, double a, double b, bool with_sup_q) {
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw Error(ErrorCode::DomainError, "interval must be bounded");
  }
  if (!(a < b)) throw Error(ErrorCode::DegenerateInterval, fmt::format("empty interval ({}, {})", a, b));
  IntervalStats s;
  s.a = a;
  s.b = b;
  const Range r1 = spec.m1.range(a, b);
  const Range r2 = spec.m2.range(a, b);
  s.m1_I = r1.inf;
  s.mhat1_I = r1.sup;
  s.m2_I = r2.inf;
  s.mhat2_I = r2.sup;
  if (with_sup_q) s.sup_q_I = sup_q(spec.w, a, b);
  return s;
}

IntervalStats global_stats(const PotentialSpec& spec) {
  const SpectralConstants c = validate(spec);
  IntervalStats s;
  s.a = domain_lo(spec.domain);
  s.b = kInf;
  s.m1_I = c.m1;
  s.mhat1_I = c.mhat1;
  s.m2_I = c.m2;
  s.mhat2_I = c.mhat2;
  return s;
}

double sup_q(const ScalarField& w, double a, double b) {
  if (!(a < b)) throw Error(ErrorCode::DegenerateInterval, "empty interval");
  const Range rw = w.range(a, b);
  if (rw.inf == rw.sup) return rw.sup * rw.sup;
  if (!w.is_smooth()) {
    throw Error(ErrorCode::NonDifferentiableW,
                "W must be differentiable on the interval (step or sampled member present)");
  }
  const auto q = [&w](double x) {
    const double v = w.value(x);
    return w.derivative(x) + v * v;
  };
  return sample_range(q, a, b, w.breakpoints()).sup;
}

double eta(double x, double y, double z) {
  return 0.5 * (x - y) + std::sqrt(0.25 * (x + y) * (x + y) + z);
}

double f_map(const IntervalStats& s, double lambda) {
  if (lambda < s.mhat1_I) {
    throw Error(ErrorCode::DomainError, fmt::format("f is defined for lambda >= {}", s.mhat1_I));
  }
  return (lambda - s.mhat1_I) * (s.m2_I + lambda);
}

double g_map(const IntervalStats& s, double lambda) {
  if (lambda < s.m1_I) {
    throw Error(ErrorCode::DomainError, fmt::format("g is defined for lambda >= {}", s.m1_I));
  }
  return (lambda - s.m1_I) * (s.mhat2_I + lambda);
}

double f_inv(const IntervalStats& s, double beta) {
  if (beta < 0.0) throw Error(ErrorCode::DomainError, "f^-1 needs beta >= 0");
  return eta(s.mhat1_I, s.m2_I, beta);
}

double g_inv(const IntervalStats& s, double beta) {
  if (beta < 0.0) throw Error(ErrorCode::DomainError, "g^-1 needs beta >= 0");
  return eta(s.m1_I, s.mhat2_I, beta);
}

PotentialSpec flip(const PotentialSpec& spec) {
  PotentialSpec out{spec.m2, spec.m1, spec.w.negated(), spec.domain};
  if (spec.domain.is_half_line()) {
    out.domain.alpha =
        spec.domain.alpha == HalfLineAlpha::Zero ? HalfLineAlpha::HalfPi : HalfLineAlpha::Zero;
  }
  return out;
}

}  // namespace dirac_gap
