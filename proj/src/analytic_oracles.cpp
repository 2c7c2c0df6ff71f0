#include "dirac_gap/analytic_oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include <fmt/format.h>

#include "dirac_gap/error.hpp"

namespace dirac_gap {

namespace {

constexpr double kPi = std::numbers::pi;

// sin(v)/v and cos(v) as functions of v^2, continued to v^2 < 0.
double sinc_sq(double v2) {
  if (v2 > 0.0) {
    const double v = std::sqrt(v2);
    return std::sin(v) / v;
  }
  if (v2 < 0.0) {
    const double v = std::sqrt(-v2);
    return std::sinh(v) / v;
  }
  return 1.0;
}

double cos_sq(double v2) {
  if (v2 >= 0.0) return std::cos(std::sqrt(v2));
  return std::cosh(std::sqrt(-v2));
}

double rho(const ToyParams& p, double lambda, ToyMatching m) {
  if (m == ToyMatching::Derivative) return 1.0;
  return (p.M + p.gamma * p.t + lambda) / (p.M + lambda);
}

// Bisection on a sign change of f over [a, b]; f(a) and f(b) have opposite signs.
double bisect(const std::function<double(double)>& f, double a, double b, double fa) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (fa < 0.0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

// Roots of f at sign changes along the sorted grid. Grid nodes where f is
// exactly zero are skipped (they only occur at excluded endpoints).
std::vector<double> scan_roots(const std::function<double(double)>& f,
                               const std::vector<double>& grid) {
  std::vector<double> roots;
  double x_prev = grid.front();
  double f_prev = f(x_prev);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double x = grid[i];
    const double fx = f(x);
    if (fx == 0.0) continue;
    if (f_prev != 0.0 && (fx < 0.0) != (f_prev < 0.0)) roots.push_back(bisect(f, x_prev, x, f_prev));
    x_prev = x;
    f_prev = fx;
  }
  return roots;
}

struct WellData {
  double c1;
  double c2;
  double nu_max;
  double lambda_of(double nu) const {
    return 0.5 * ((c1 - c2) + std::sqrt((c1 + c2) * (c1 + c2) + 4.0 * nu * nu));
  }
};

WellData well(const ToyParams& p) {
  const double c1 = p.M - p.t;
  const double c2 = p.M + p.gamma * p.t;
  return {c1, c2, std::sqrt(p.t * (2.0 * p.M + p.gamma * p.t))};
}

// Cleared conditions in nu = nu_int > 0:
//   even: nu sin nu - r nu_ext cos nu
//   odd:  cos nu + r nu_ext sin(nu)/nu
double even_form(const ToyParams& p, double nu, double lambda, ToyMatching m) {
  const double ne = std::sqrt(std::max(0.0, p.M * p.M - lambda * lambda));
  return nu * std::sin(nu) - rho(p, lambda, m) * ne * std::cos(nu);
}

double odd_form(const ToyParams& p, double nu, double lambda, ToyMatching m) {
  const double ne = std::sqrt(std::max(0.0, p.M * p.M - lambda * lambda));
  return std::cos(nu) + rho(p, lambda, m) * ne * sinc_sq(nu * nu);
}

double nu_ext(double M, double lambda) { return std::sqrt(std::max(0.0, M * M - lambda * lambda)); }

}  // namespace

std::string to_string(Parity p) { return p == Parity::Even ? "even" : "odd"; }

void check_toy_params(const ToyParams& p, bool allow_zero_t) {
  if (!(p.M > 0.0) || !std::isfinite(p.M)) throw Error(ErrorCode::InvalidParams, "toy needs M > 0");
  if (p.gamma < -1 || p.gamma > 1) throw Error(ErrorCode::InvalidParams, "gamma must be -1, 0 or 1");
  const double t_max = p.gamma == -1 ? p.M : 2.0 * p.M;
  const bool low_ok = allow_zero_t ? p.t >= 0.0 : p.t > 0.0;
  if (!low_ok || !(p.t < t_max)) {
    throw Error(ErrorCode::InvalidParams,
                fmt::format("t = {} outside ({}, {}) for gamma = {}", p.t, allow_zero_t ? "[0" : "(0",
                            t_max, p.gamma));
  }
  if (!(p.alpha >= 0.0 && p.alpha < kPi)) throw Error(ErrorCode::InvalidParams, "alpha must lie in [0, pi)");
}

std::vector<ToyEigenvalue> toy_fullline_spectrum(const ToyParams& p, ToyMatching matching) {
  check_toy_params(p);
  const WellData w = well(p);

  // Partition (0, nu_max) at the multiples of pi/2 (poles and zeros of tan)
  // and subdivide each branch.
  std::vector<double> grid{0.0};
  constexpr int kPerBranch = 256;
  double start = 0.0;
  while (start < w.nu_max) {
    const double end = std::min(w.nu_max, start + 0.5 * kPi);
    for (int i = 1; i <= kPerBranch; ++i) grid.push_back(start + (end - start) * i / kPerBranch);
    start = end;
  }

  std::vector<ToyEigenvalue> out;
  for (Parity parity : {Parity::Even, Parity::Odd}) {
    const auto f = [&](double nu) {
      const double lambda = w.lambda_of(nu);
      return parity == Parity::Even ? even_form(p, nu, lambda, matching)
                                    : odd_form(p, nu, lambda, matching);
    };
    for (double nu : scan_roots(f, grid)) {
      if (!(nu > 0.0) || !(nu < w.nu_max)) continue;
      const double lambda = w.lambda_of(nu);
      if (!(lambda > p.M - p.t) || !(lambda < p.M)) continue;
      out.push_back({lambda, parity, false});
      if (p.gamma == -1) {
        out.push_back({-lambda, parity == Parity::Even ? Parity::Odd : Parity::Even, true});
      }
    }
  }
  std::sort(out.begin(), out.end(),
            [](const ToyEigenvalue& a, const ToyEigenvalue& b) { return a.lambda < b.lambda; });
  return out;
}

double toy_fullline_residual(const ToyParams& p, double lambda, Parity parity, ToyMatching matching) {
  double lam = lambda;
  // Mirrored roots: the spectrum is symmetric for gamma = -1 with parity swapped.
  if (p.gamma == -1 && lambda < 0.0) {
    lam = -lambda;
    parity = parity == Parity::Even ? Parity::Odd : Parity::Even;
  }
  const WellData w = well(p);
  const double nu2 = (lam - w.c1) * (lam + w.c2);
  const double nu = std::sqrt(std::max(0.0, nu2));
  const double ne = nu_ext(p.M, lam);
  const double r = rho(p, lam, matching);
  if (parity == Parity::Even) {
    const double scale = std::abs(nu * std::sin(nu)) + std::abs(r * ne * std::cos(nu)) + 1e-300;
    return std::abs(even_form(p, nu, lam, matching)) / scale;
  }
  const double scale = std::abs(std::cos(nu)) + std::abs(r * ne * sinc_sq(nu2)) + 1e-300;
  return std::abs(odd_form(p, nu, lam, matching)) / scale;
}

namespace {

struct HalfLineTerms {
  double a;  // -c sin(alpha) cos(nu)
  double b;  // -nu^2 S(nu) cos(alpha)
  double c;  // r nu_ext (cos(alpha) cos(nu) - c sin(alpha) S(nu))
};

HalfLineTerms halfline_terms(const ToyParams& p, double lambda) {
  const double nu2 = (lambda - p.M + p.t) * (lambda + p.M + p.gamma * p.t);
  const double c_in = p.M + p.gamma * p.t + lambda;
  const double ca = std::cos(p.alpha);
  const double sa = std::sin(p.alpha);
  const double s = sinc_sq(nu2);
  const double co = cos_sq(nu2);
  const double r = rho(p, lambda, ToyMatching::Flux);
  return {-c_in * sa * co, -nu2 * s * ca, r * nu_ext(p.M, lambda) * (ca * co - c_in * sa * s)};
}

}  // namespace

double toy_halfline_residual(const ToyParams& p, double lambda) {
  const HalfLineTerms h = halfline_terms(p, lambda);
  const double scale = std::abs(h.a) + std::abs(h.b) + std::abs(h.c) + 1e-300;
  return std::abs(h.a + h.b + h.c) / scale;
}

std::vector<double> toy_halfline_spectrum(const ToyParams& p) {
  check_toy_params(p, true);
  if (p.t == 0.0) {
    if (p.alpha > 0.0 && p.alpha < 0.5 * kPi) return {p.M * std::cos(2.0 * p.alpha)};
    return {};
  }
  const auto f = [&p](double lambda) {
    const HalfLineTerms h = halfline_terms(p, lambda);
    return h.a + h.b + h.c;
  };
  constexpr int kPoints = 40000;
  std::vector<double> grid;
  grid.reserve(kPoints + 1);
  const double lo = -p.M * (1.0 - 1e-9);
  for (int i = 0; i < kPoints; ++i) grid.push_back(lo + (p.M - lo) * i / kPoints);
  grid.push_back(p.M);
  std::vector<double> roots;
  for (double r : scan_roots(f, grid)) {
    if (r > -p.M && r < p.M) roots.push_back(r);
  }
  return roots;
}

double toy_threshold(double M, int gamma, int n, std::optional<double> alpha) {
  if (!(M > 0.0)) throw Error(ErrorCode::InvalidParams, "threshold needs M > 0");
  if (gamma < -1 || gamma > 1) throw Error(ErrorCode::InvalidParams, "gamma must be -1, 0 or 1");
  if (n < 1) throw Error(ErrorCode::InvalidParams, "threshold index starts at 1");

  // t from s = sqrt(t (2M + gamma t)).
  const auto t_of_s = [&](double s) -> double {
    if (gamma == 0) return s * s / (2.0 * M);
    const double rad = M * M + gamma * s * s;
    if (rad < 0.0) {
      throw Error(ErrorCode::NoThreshold,
                  fmt::format("radicand {} < 0 for gamma = {}, s = {}", rad, gamma, s));
    }
    return (-M + std::sqrt(rad)) / gamma;
  };

  if (!alpha) return t_of_s(0.5 * n * kPi);

  const double a = *alpha;
  if (!(a >= 0.0 && a < kPi)) throw Error(ErrorCode::InvalidParams, "alpha must lie in [0, pi)");
  if (a == 0.0) return t_of_s(n * kPi);
  if (std::abs(a - 0.5 * kPi) < 1e-15) return t_of_s((n - 0.5) * kPi);

  // General angle: n-th positive root of t(s) sin(s) cos(a) / s + cos(s) sin(a).
  const double s_cap = gamma == -1 ? M : std::numeric_limits<double>::infinity();
  const auto h = [&](double s) {
    const double t = t_of_s(s);
    return (t / s) * std::sin(s) * std::cos(a) + std::cos(s) * std::sin(a);
  };
  int found = 0;
  double s_prev = 1e-12;
  double h_prev = h(s_prev);
  constexpr int kPerBranch = 256;
  for (int branch = 0; branch < 4 * n + 8; ++branch) {
    for (int i = 1; i <= kPerBranch; ++i) {
      const double s = 0.5 * kPi * (branch + static_cast<double>(i) / kPerBranch);
      if (s > s_cap) {
        throw Error(ErrorCode::NoThreshold, fmt::format("only {} thresholds below t = M", found));
      }
      const double hs = h(s);
      if ((hs < 0.0) != (h_prev < 0.0)) {
        if (++found == n) return t_of_s(bisect(h, s_prev, s, h_prev));
      }
      s_prev = s;
      h_prev = hs;
    }
  }
  throw Error(ErrorCode::NoThreshold, "threshold search exhausted");
}

std::size_t toy_expected_count(double M, int gamma, double t) {
  std::size_t count = 1;
  for (int n = 1;; ++n) {
    double tn;
    try {
      tn = toy_threshold(M, gamma, n);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::NoThreshold) break;
      throw;
    }
    if (tn < t) {
      ++count;
    } else {
      break;
    }
  }
  return count;
}

double toy_upper_bound(double M, int gamma, int n, double t) {
  const double a = 2.0 * M - t * (1.0 - gamma);
  const double b = n * kPi;
  return 0.5 * (-t * (1.0 + gamma) + std::sqrt(a * a + b * b));
}

PotentialSpec toy_spec(const ToyParams& p, Domain domain) {
  check_toy_params(p, domain.is_half_line());
  const double a = domain.is_half_line() ? 0.0 : -1.0;
  const auto well_field = [&](double inside) {
    if (inside == p.M) return ScalarField::constant(p.M);
    return ScalarField::step(a, 1.0, {{a, 1.0, inside}}, p.M);
  };
  return {well_field(p.M - p.t), well_field(p.M + p.gamma * p.t), ScalarField::constant(0.0), domain};
}

PotentialSpec hydrogenic_spec(double M, double t) {
  if (!(M > 0.0)) throw Error(ErrorCode::InvalidParams, "hydrogenic spec needs M > 0");
  if (!(t > 0.0 && t < 4.0 * M)) {
    throw Error(ErrorCode::InvalidParams, fmt::format("t = {} outside (0, {})", t, 4.0 * M));
  }
  return {ScalarField::sum({ScalarField::constant(M), ScalarField::exp_well(-0.5 * t, 1.0)}),
          ScalarField::sum({ScalarField::constant(M), ScalarField::exp_well(0.5 * t, 1.0)}),
          ScalarField::constant(0.0), Domain::full_line()};
}

std::vector<double> constant_mass_reference(double M, const std::vector<double>& beta) {
  std::vector<double> out;
  out.reserve(beta.size());
  for (double b : beta) {
    if (b < 0.0) throw Error(ErrorCode::DomainError, "beta must be non-negative");
    out.push_back(std::sqrt(M * M + b));
  }
  return out;
}

}  // namespace dirac_gap
