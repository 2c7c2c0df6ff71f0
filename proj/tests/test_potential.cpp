#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "dirac_gap/analytic_oracles.hpp"
#include "dirac_gap/potential.hpp"
#include "test_support.hpp"

using namespace dirac_gap;

namespace {

PotentialSpec free_dirac(double M) {
  return {ScalarField::constant(M), ScalarField::constant(M), ScalarField::constant(0.0), Domain::full_line()};
}

// Random valid spec built from every descriptor kind.
PotentialSpec random_spec(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double M = 2.0 + u(rng);
  auto well = [&] {
    return ScalarField::sum({ScalarField::exp_well(0.8 * u(rng), 1.0 + std::abs(u(rng))),
                             ScalarField::step(-2.0, 2.0, {{-0.5, 0.5 + std::abs(u(rng)), 0.5 * u(rng)}}, 0.0)});
  };
  ScalarField m1 = ScalarField::sum({ScalarField::constant(M), well()});
  ScalarField m2 = ScalarField::sum({ScalarField::constant(M + 0.3 * u(rng)), well()});
  const double wl = 0.5 * u(rng);
  const double wr = 0.5 * u(rng);
  ScalarField w = ScalarField::sampled({-1.0, 0.0, 1.5}, {wl, 0.4 * u(rng), wr}, wl, wr);
  return {m1, m2, w, Domain::full_line()};
}

}  // namespace

TEST(Validate, FreeDirac) {
  const SpectralConstants c = validate(free_dirac(1.5));
  EXPECT_EQ(c.lambda_e_minus, -1.5);
  EXPECT_EQ(c.lambda_e_plus, 1.5);
  EXPECT_EQ(c.m1, 1.5);
  EXPECT_EQ(c.m2, 1.5);
}

TEST(Validate, ToySpec) {
  const SpectralConstants c = validate(toy_spec({4.0, 0, 2.0, 0.0}));
  EXPECT_DOUBLE_EQ(c.lambda_e_minus, -4.0);
  EXPECT_DOUBLE_EQ(c.lambda_e_plus, 4.0);
  EXPECT_DOUBLE_EQ(c.m1, 2.0);
  EXPECT_DOUBLE_EQ(c.mhat1, 4.0);
}

TEST(Validate, HydrogenicSpec) {
  const SpectralConstants c = validate(hydrogenic_spec(1.0, 2.0));
  EXPECT_DOUBLE_EQ(c.lambda_e_plus, 1.0);
  EXPECT_DOUBLE_EQ(c.m2, 1.0);
  EXPECT_DOUBLE_EQ(c.m1, 0.0);
  const EssentialSpectrum e = essential_spectrum(hydrogenic_spec(1.0, 3.5));
  EXPECT_DOUBLE_EQ(e.lower, -1.0);
  EXPECT_DOUBLE_EQ(e.upper, 1.0);
}

TEST(Validate, GapViolation) {
  // Toy gamma = -1 at t = 3 > M would need m1 = 1 > -m2 = 3: fails.
  PotentialSpec s{ScalarField::step(-1.0, 1.0, {{-1.0, 1.0, 1.0}}, 4.0),
                  ScalarField::step(-1.0, 1.0, {{-1.0, 1.0, -5.0}}, 4.0), ScalarField::constant(0.0),
                  Domain::full_line()};
  EXPECT_ERROR_CODE(validate(s), ErrorCode::GapViolation);
  EXPECT_ERROR_CODE(toy_spec({4.0, -1, 4.5, 0.0}), ErrorCode::InvalidParams);
}

TEST(Validate, LimitEigenvaluesClosedForm) {
  PotentialSpec s{ScalarField::constant(2.0), ScalarField::constant(1.0), ScalarField::constant(0.5),
                  Domain::full_line()};
  const SpectralConstants c = validate(s);
  // Eigenvalues of [[2, 0.5], [0.5, -1]].
  const double mid = 0.5;
  const double rad = std::sqrt(1.5 * 1.5 + 0.25);
  EXPECT_DOUBLE_EQ(c.lambda_plus.lo, mid - rad);
  EXPECT_DOUBLE_EQ(c.lambda_plus.hi, mid + rad);
  EXPECT_DOUBLE_EQ(c.lambda_e_plus, mid + rad);
}

TEST(Validate, HalfLineUsesPositiveAxis) {
  // Left part of M1 dips but is invisible on the half-line.
  PotentialSpec s{ScalarField::step(-3.0, 3.0, {{-3.0, -1.0, 0.5}, {0.0, 1.0, 1.5}}, 2.0), ScalarField::constant(2.0),
                  ScalarField::constant(0.0), Domain::half_line(HalfLineAlpha::Zero)};
  const SpectralConstants c = validate(s);
  EXPECT_EQ(c.m1, 1.5);
  s.domain = Domain::full_line();
  EXPECT_EQ(validate(s).m1, 0.5);
}

TEST(Validate, InequalityChainOnRandomSpecs) {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const PotentialSpec s = random_spec(rng);
    SpectralConstants c;
    try {
      c = validate(s);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::GapViolation);
      continue;
    }
    for (const LimitEigenvalues& l : {c.lambda_plus, c.lambda_minus}) {
      EXPECT_LE(l.lo, c.lambda_e_minus);
      EXPECT_GE(l.hi, c.lambda_e_plus);
    }
    EXPECT_LE(c.lambda_e_minus, -c.m2 + 1e-12);
    EXPECT_LT(-c.m2, c.m1);
    EXPECT_LE(c.m1, c.lambda_e_plus + 1e-12);
  }
}

TEST(Validate, EqualMassesGiveSymmetricEdges) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    PotentialSpec s = random_spec(rng);
    s.m2 = s.m1;
    try {
      const SpectralConstants c = validate(s);
      EXPECT_NEAR(c.lambda_e_plus, -c.lambda_e_minus, 1e-14);
    } catch (const Error&) {
    }
  }
}

TEST(Flip, IsInvolution) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const PotentialSpec s = random_spec(rng);
    EXPECT_EQ(flip(flip(s)), s);
  }
  PotentialSpec h = toy_spec({4.0, 0, 1.0, 0.0}, Domain::half_line(HalfLineAlpha::Zero));
  EXPECT_EQ(flip(h).domain.alpha, HalfLineAlpha::HalfPi);
  EXPECT_EQ(flip(flip(h)), h);
}

TEST(Flip, NegatesEssentialSpectrum) {
  std::mt19937 rng(8);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const PotentialSpec s = random_spec(rng);
    try {
      const EssentialSpectrum e = essential_spectrum(s);
      const EssentialSpectrum f = essential_spectrum(flip(s));
      EXPECT_NEAR(f.lower, -e.upper, 1e-14);
      EXPECT_NEAR(f.upper, -e.lower, 1e-14);
      ++checked;
    } catch (const Error&) {
    }
  }
  EXPECT_GT(checked, 50);
}

TEST(Flip, HydrogenicWellMovesIntoM2) {
  const PotentialSpec h = hydrogenic_spec(1.0, 2.0);
  const PotentialSpec f = flip(h);
  EXPECT_EQ(f.m1, h.m2);
  EXPECT_EQ(f.m2, h.m1);
  EXPECT_EQ(f.w.value(0.3), -h.w.value(0.3));
}

TEST(IntervalStats, ToyWell) {
  const PotentialSpec s = toy_spec({4.0, 0, 1.5, 0.0});
  const IntervalStats st = interval_stats(s, -1.0, 1.0, true);
  EXPECT_DOUBLE_EQ(st.mhat1_I, 4.0 - 1.5);
  EXPECT_DOUBLE_EQ(st.m1_I, 4.0 - 1.5);
  EXPECT_DOUBLE_EQ(st.m2_I, 4.0);
  ASSERT_TRUE(st.sup_q_I.has_value());
  EXPECT_EQ(*st.sup_q_I, 0.0);
  EXPECT_ERROR_CODE(interval_stats(s, 1.0, 1.0), ErrorCode::DegenerateInterval);
}

TEST(IntervalStats, HydrogenicInfimumAtOrigin) {
  const double M = 1.0;
  const double t = 2.6;
  const IntervalStats st = interval_stats(hydrogenic_spec(M, t), 0.0, 2.0);
  // Dense sampling as an independent oracle.
  double lo = INFINITY;
  for (int i = 1; i < 100000; ++i) lo = std::min(lo, M - 0.5 * t * std::exp(-2.0 * i / 100000.0));
  EXPECT_NEAR(st.m1_I, M - t / 2.0, 1e-12);
  EXPECT_LE(st.m1_I, lo);
}

TEST(IntervalStats, NestedIntervalsAreMonotone) {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    const PotentialSpec s = random_spec(rng);
    double a = u(rng);
    double b = a + 0.2 + std::abs(u(rng));
    const IntervalStats J = interval_stats(s, a - 0.5, b + 0.5);
    const IntervalStats I = interval_stats(s, a, b);
    EXPECT_LE(I.m1_I, I.mhat1_I);
    EXPECT_LE(I.m2_I, I.mhat2_I);
    EXPECT_LE(J.m1_I, I.m1_I + 1e-10);
    EXPECT_LE(J.m2_I, I.m2_I + 1e-10);
    EXPECT_GE(J.mhat1_I, I.mhat1_I - 1e-10);
    EXPECT_GE(J.mhat2_I, I.mhat2_I - 1e-10);
  }
}

TEST(SupQ, ConstantAndStepW) {
  EXPECT_DOUBLE_EQ(sup_q(ScalarField::constant(1.5), -1.0, 3.0), 2.25);
  const ScalarField step = ScalarField::step(-1.0, 1.0, {{-1.0, 1.0, 0.0}}, 2.0);
  EXPECT_EQ(sup_q(step, -1.0, 1.0), 0.0);
  EXPECT_ERROR_CODE(sup_q(step, -2.0, 1.0), ErrorCode::NonDifferentiableW);
  EXPECT_ERROR_CODE(sup_q(ScalarField::sampled({0.0, 1.0}, {0.0, 1.0}, 0.0, 1.0), -1.0, 2.0),
                    ErrorCode::NonDifferentiableW);
}

TEST(SupQ, ExpWellMatchesDenseSampling) {
  const ScalarField w = ScalarField::exp_well(0.7, 1.3);
  double hi = -INFINITY;
  for (int i = 0; i <= 200000; ++i) {
    const double x = 0.2 + 2.8 * i / 200000.0;
    const double v = 0.7 * std::exp(-1.3 * x);
    hi = std::max(hi, -1.3 * v + v * v);
  }
  const double s = sup_q(w, 0.2, 3.0);
  EXPECT_GE(s, hi - 1e-12);
  EXPECT_NEAR(s, hi, 1e-8);
}

TEST(Maps, FreeDiracInverse) {
  const IntervalStats st = global_stats(free_dirac(2.0));
  for (double beta : {0.0, 0.5, 3.0, 40.0}) {
    EXPECT_NEAR(f_inv(st, beta), std::sqrt(4.0 + beta), 1e-13);
    EXPECT_NEAR(g_inv(st, beta), std::sqrt(4.0 + beta), 1e-13);
  }
}

TEST(Maps, InverseAtZeroIsLeftEnd) {
  const IntervalStats st = interval_stats(hydrogenic_spec(1.0, 1.0), -1.0, 2.0);
  EXPECT_NEAR(f_inv(st, 0.0), st.mhat1_I, 1e-14);
  EXPECT_NEAR(g_inv(st, 0.0), st.m1_I, 1e-14);
}

TEST(Maps, RoundTripsAndMonotonicity) {
  std::mt19937 rng(10);
  for (int trial = 0; trial < 50; ++trial) {
    const PotentialSpec s = random_spec(rng);
    IntervalStats st;
    try {
      st = interval_stats(s, -1.0, 1.0);
      (void)validate(s);
    } catch (const Error&) {
      continue;
    }
    if (!(st.m2_I + st.mhat1_I > 0.0)) continue;
    for (double beta : {0.1, 1.0, 10.0}) {
      EXPECT_NEAR(f_map(st, f_inv(st, beta)), beta, 1e-12 * std::max(1.0, beta));
      EXPECT_NEAR(g_map(st, g_inv(st, beta)), beta, 1e-12 * std::max(1.0, beta));
    }
    double prev_f = -1.0;
    double prev_g = -1.0;
    for (int i = 0; i < 100; ++i) {
      const double lf = st.mhat1_I + 0.05 * i;
      const double lg = st.m1_I + 0.05 * i;
      const double vf = f_map(st, lf);
      const double vg = g_map(st, lg);
      EXPECT_GT(vf, prev_f);
      EXPECT_GT(vg, prev_g);
      prev_f = vf;
      prev_g = vg;
    }
  }
}

TEST(Maps, DomainErrors) {
  const IntervalStats st = global_stats(free_dirac(1.0));
  EXPECT_ERROR_CODE(f_map(st, 0.5), ErrorCode::DomainError);
  EXPECT_ERROR_CODE(g_map(st, 0.5), ErrorCode::DomainError);
  EXPECT_ERROR_CODE(f_inv(st, -1.0), ErrorCode::DomainError);
  EXPECT_ERROR_CODE(g_inv(st, -1.0), ErrorCode::DomainError);
}
