#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include "dirac_gap/analytic_oracles.hpp"
#include "dirac_gap/discretization.hpp"
#include "dirac_gap/pencil_solver.hpp"
#include "test_support.hpp"

using namespace dirac_gap;

namespace {

Eigen::MatrixXd dense(const SymTridiagonal& t) {
  const auto n = static_cast<Eigen::Index>(t.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    m(i, i) = t.diag[i];
    if (i + 1 < n) m(i, i + 1) = m(i + 1, i) = t.off[i];
  }
  return m;
}

PotentialSpec constant_spec(double M, double w) {
  return {ScalarField::constant(M), ScalarField::constant(M), ScalarField::constant(w), Domain::full_line()};
}

Mesh uniform_mesh(double a, double b, std::size_t elements) {
  Mesh m;
  m.x_lo = a;
  m.x_hi = b;
  for (std::size_t i = 0; i <= elements; ++i) m.nodes.push_back(a + (b - a) * static_cast<double>(i) / elements);
  return m;
}

// Hat function of mesh node `node` and its derivative.
double hat(const Mesh& m, std::size_t node, double x) {
  const auto& n = m.nodes;
  if (node > 0 && x >= n[node - 1] && x <= n[node]) return (x - n[node - 1]) / (n[node] - n[node - 1]);
  if (node + 1 < n.size() && x >= n[node] && x <= n[node + 1]) return (n[node + 1] - x) / (n[node + 1] - n[node]);
  return 0.0;
}

double hat_slope(const Mesh& m, std::size_t node, double, bool right_element) {
  const auto& n = m.nodes;
  return right_element ? -1.0 / (n[node + 1] - n[node]) : 1.0 / (n[node] - n[node - 1]);
}

// s(lambda)[hat] by adaptive quadrature over each half of the hat support.
double hat_form_oracle(const PotentialSpec& s, const Mesh& m, std::size_t node, double lambda) {
  using boost::math::quadrature::gauss_kronrod;
  double total = 0.0;
  for (bool right : {false, true}) {
    const double a = right ? m.nodes[node] : m.nodes[node - 1];
    const double b = right ? m.nodes[node + 1] : m.nodes[node];
    const auto f = [&](double x) {
      const double phi = hat(m, node, x);
      const double dphi = hat_slope(m, node, x, right);
      const double b_phi = -dphi + s.w.value(x) * phi;
      return (s.m1.value(x) - lambda) * phi * phi + b_phi * b_phi / (s.m2.value(x) + lambda);
    };
    total += gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-15);
  }
  return total;
}

}  // namespace

TEST(BuildMesh, ToyBreakpointsAreNodes) {
  const Mesh m = build_mesh(toy_spec({4.0, 0, 1.0, 0.0}), {30.0, 0.02, 1.0});
  EXPECT_EQ(m.nodes.front(), -30.0);
  EXPECT_EQ(m.nodes.back(), 30.0);
  EXPECT_TRUE(std::binary_search(m.nodes.begin(), m.nodes.end(), -1.0));
  EXPECT_TRUE(std::binary_search(m.nodes.begin(), m.nodes.end(), 1.0));
  EXPECT_TRUE(std::is_sorted(m.nodes.begin(), m.nodes.end()));
  for (std::size_t i = 0; i + 1 < m.nodes.size(); ++i) {
    EXPECT_GT(m.nodes[i + 1], m.nodes[i]);
    EXPECT_LE(m.nodes[i + 1] - m.nodes[i], 0.02 * (1 + 1e-9));
  }
  EXPECT_EQ(m.bc_lo, Boundary::Dirichlet);
  EXPECT_EQ(m.bc_hi, Boundary::Dirichlet);
  EXPECT_EQ(m.dof_count(), m.nodes.size() - 2);
}

TEST(BuildMesh, HalfLineBoundaryConditions) {
  const PotentialSpec s0 = toy_spec({4.0, 0, 1.0, 0.0}, Domain::half_line(HalfLineAlpha::Zero));
  const Mesh m0 = build_mesh(s0, {});
  EXPECT_EQ(m0.x_lo, 0.0);
  EXPECT_EQ(m0.bc_lo, Boundary::Free);
  EXPECT_EQ(m0.first_dof_node(), 0u);
  EXPECT_EQ(m0.dof_count(), m0.nodes.size() - 1);
  // The first basis function is the hat at x = 0, nonzero there.
  const AssembledPencil p(m0, s0);
  EXPECT_GT(p.mass().diag[0], 0.0);

  const Mesh m1 = build_mesh(flip(s0), {});
  EXPECT_EQ(m1.bc_lo, Boundary::Dirichlet);
  EXPECT_EQ(m1.first_dof_node(), 1u);
}

TEST(BuildMesh, DoublingLKeepsInteriorNodes) {
  const PotentialSpec s = hydrogenic_spec(1.0, 2.0);
  const Mesh a = build_mesh(s, {30.0, 0.02, 1.0});
  const Mesh b = build_mesh(s, {60.0, 0.02, 1.0});
  auto inside = [](const Mesh& m) {
    std::vector<double> v;
    for (double x : m.nodes) if (std::abs(x) <= 20.0) v.push_back(x);
    return v;
  };
  const auto ia = inside(a);
  const auto ib = inside(b);
  ASSERT_EQ(ia.size(), ib.size());
  for (std::size_t i = 0; i < ia.size(); ++i) EXPECT_NEAR(ia[i], ib[i], 1e-12);
}

TEST(BuildMesh, Errors) {
  const PotentialSpec wide{ScalarField::step(-40.0, 40.0, {{-1.0, 1.0, 1.0}}, 2.0), ScalarField::constant(2.0),
                           ScalarField::constant(0.0), Domain::full_line()};
  EXPECT_ERROR_CODE(build_mesh(wide, {30.0, 0.02, 1.0}), ErrorCode::WindowTooSmall);
  EXPECT_ERROR_CODE(build_mesh(wide, {-1.0, 0.02, 1.0}), ErrorCode::InvalidParams);
  EXPECT_ERROR_CODE(build_mesh(wide, {50.0, 0.0, 1.0}), ErrorCode::InvalidParams);
}

TEST(Assemble, HandComputedConstantMass) {
  // Three interior hats on a uniform mesh of [-1, 1] with h = 0.5.
  const double M = 2.0;
  const Mesh m = uniform_mesh(-1.0, 1.0, 4);
  const AssembledPencil p(m, constant_spec(M, 0.0));
  const SymTridiagonal S = p.assemble(0.0);
  const double h = 0.5;
  // mass: 2h/3 on the diagonal, h/6 off it; stiffness: 2/h and -1/h.
  ASSERT_EQ(S.size(), 3u);
  for (double d : S.diag) EXPECT_NEAR(d, M * 2.0 * h / 3.0 + (1.0 / M) * 2.0 / h, 1e-14);
  for (double e : S.off) EXPECT_NEAR(e, M * h / 6.0 - (1.0 / M) / h, 1e-14);
  for (double d : p.mass().diag) EXPECT_NEAR(d, 2.0 * h / 3.0, 1e-15);
  for (double e : p.mass().off) EXPECT_NEAR(e, h / 6.0, 1e-15);
}

TEST(Assemble, AtM1OnlyTheBStarPartRemains) {
  const double M = 1.5;
  const Mesh m = uniform_mesh(-2.0, 2.0, 16);
  const AssembledPencil p(m, constant_spec(M, 0.3));
  const SymTridiagonal S = p.assemble(M);
  const SturmMatrices st = assemble_sturm(m, ScalarField::constant(0.3));
  for (std::size_t i = 0; i < S.size(); ++i) EXPECT_NEAR(S.diag[i], st.stiff_w.diag[i] / (2.0 * M), 1e-13);
  for (std::size_t i = 0; i + 1 < S.size(); ++i) EXPECT_NEAR(S.off[i], st.stiff_w.off[i] / (2.0 * M), 1e-13);
}

TEST(Assemble, SingleHatFormMatchesAdaptiveQuadrature) {
  const PotentialSpec s = toy_spec({4.0, 1, 1.5, 0.0});
  const Mesh m = build_mesh(s, {6.0, 0.05, 1.0});
  const AssembledPencil p(m, s);
  for (double lambda : {-2.0, 2.5, 3.7}) {
    for (double x0 : {-1.0, 0.0, 0.52, 1.0, 2.2}) {
      const auto it = std::lower_bound(m.nodes.begin(), m.nodes.end(), x0 - 1e-12);
      const std::size_t node = static_cast<std::size_t>(it - m.nodes.begin());
      std::vector<double> phi(p.dof_count(), 0.0);
      phi[node - m.first_dof_node()] = 1.0;
      const double oracle = hat_form_oracle(s, m, node, lambda);
      EXPECT_NEAR(p.form(lambda, phi), oracle, 1e-12 * std::max(1.0, std::abs(oracle))) << lambda << " " << x0;
    }
  }
}

TEST(Assemble, SmoothPotentialFormConvergesToQuadrature) {
  // Two-point Gauss is not exact for exponentials; the error is O(h^4).
  const PotentialSpec s{ScalarField::sum({ScalarField::constant(1.0), ScalarField::exp_well(-0.7, 1.0)}),
                        ScalarField::sum({ScalarField::constant(1.0), ScalarField::exp_well(0.4, 2.0)}),
                        ScalarField::exp_well(0.5, 1.5), Domain::full_line()};
  const Mesh m = build_mesh(s, {4.0, 0.01, 0.0});
  const AssembledPencil p(m, s);
  const auto it = std::lower_bound(m.nodes.begin(), m.nodes.end(), 0.5);
  const std::size_t node = static_cast<std::size_t>(it - m.nodes.begin());
  std::vector<double> phi(p.dof_count(), 0.0);
  phi[node - 1] = 1.0;
  const double oracle = hat_form_oracle(s, m, node, 0.2);
  EXPECT_NEAR(p.form(0.2, phi), oracle, 1e-9 * std::abs(oracle));
}

TEST(Assemble, LambdaOutOfDomain) {
  const Mesh m = uniform_mesh(-1.0, 1.0, 8);
  const AssembledPencil p(m, constant_spec(1.0, 0.0));
  EXPECT_ERROR_CODE(p.assemble(-1.0), ErrorCode::LambdaOutOfDomain);
  EXPECT_ERROR_CODE(p.assemble(-2.0), ErrorCode::LambdaOutOfDomain);
}

TEST(Assemble, ExactlySymmetric) {
  const PotentialSpec s = hydrogenic_spec(1.0, 2.0);
  const AssembledPencil p(build_mesh(s, {10.0, 0.05, 1.0}), s);
  const Eigen::MatrixXd S = dense(p.assemble(0.3));
  EXPECT_EQ((S - S.transpose()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Assemble, FormMatchesMatrixQuadraticForm) {
  const PotentialSpec s = hydrogenic_spec(1.0, 2.0);
  const AssembledPencil p(build_mesh(s, {10.0, 0.05, 1.0}), s);
  std::mt19937 rng(4);
  std::normal_distribution<double> g;
  std::vector<double> phi(p.dof_count());
  for (auto& v : phi) v = g(rng);
  const double q = p.assemble(0.4).quadratic_form(phi);
  EXPECT_NEAR(p.form(0.4, phi), q, 1e-11 * std::abs(q));
}

TEST(Sturm, StiffWIsPositiveSemidefinite) {
  for (const ScalarField& w : {ScalarField::constant(0.0), ScalarField::exp_well(1.3, 0.7),
                               ScalarField::step(-1.0, 1.0, {{-1.0, 1.0, 0.0}}, 2.0)}) {
    std::vector<double> bps = w.breakpoints();
    const Mesh m = interval_mesh(-3.0, 3.0, 0.05, bps);
    const SturmMatrices st = assemble_sturm(m, w);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense(st.stiff_w));
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-10 * st.stiff_w.max_abs());
  }
}

TEST(Sturm, FreeIntervalConvergesToSineModes) {
  std::vector<double> prev_err(4, INFINITY);
  for (double h : {0.02, 0.01, 0.005}) {
    const Mesh m = interval_mesh(-1.0, 1.0, h, {});
    const SturmMatrices st = assemble_sturm(m, ScalarField::constant(0.0));
    const auto beta = smallest_generalized_eigenvalues(st.stiff_w, st.mass, 4);
    for (int n = 1; n <= 4; ++n) {
      const double exact = std::pow(n * std::numbers::pi / 2.0, 2);
      const double err = beta[n - 1] - exact;
      EXPECT_GT(err, 0.0);
      EXPECT_LT(err, prev_err[n - 1]);
      prev_err[n - 1] = err;
    }
  }
  EXPECT_LT(prev_err[0] / std::pow(std::numbers::pi / 2.0, 2), 1e-5);
}

TEST(Sturm, ConstantWShiftsEigenvalues) {
  const double c = 0.8;
  const Mesh m = interval_mesh(0.0, 3.0, 0.002, {});
  const SturmMatrices st = assemble_sturm(m, ScalarField::constant(c));
  const auto beta = smallest_generalized_eigenvalues(st.stiff_w, st.mass, 3);
  for (int n = 1; n <= 3; ++n) {
    const double exact = c * c + std::pow(n * std::numbers::pi / 3.0, 2);
    EXPECT_NEAR(beta[n - 1], exact, 1e-5 * exact);
  }
}

TEST(Properties, DiscreteCoercivity) {
  std::mt19937 rng(20);
  for (const PotentialSpec& s : {toy_spec({4.0, 1, 2.0, 0.0}), hydrogenic_spec(1.0, 2.5),
                                 toy_spec({4.0, -1, 2.0, 0.0})}) {
    const AssembledPencil p(build_mesh(s, {15.0, 0.05, 1.0}), s);
    const SpectralConstants& c = p.constants();
    const double gap = c.gap_width();
    std::uniform_real_distribution<double> u(-c.m2 + 0.01 * gap, c.m1);
    for (int i = 0; i < 20; ++i) {
      const double lambda = u(rng);
      const double theta1 = theta_curve(p, lambda, 1).theta[0];
      EXPECT_GE(theta1, (c.m1 - lambda) - 1e-10 * std::max(1.0, std::abs(theta1)));
    }
  }
}

TEST(Properties, NestedRefinementDoesNotRaiseTheta) {
  for (const PotentialSpec& s : {toy_spec({4.0, 0, 2.0, 0.0}), toy_spec({4.0, 1, 1.0, 0.0})}) {
    const Mesh coarse = build_mesh(s, {8.0, 0.1, 1.0});
    const AssembledPencil pc(coarse, s);
    const AssembledPencil pf(coarse.refined(), s);
    for (double lambda : {2.5, 3.0, 3.5, 3.9}) {
      const auto tc = theta_curve(pc, lambda, 4).theta;
      const auto tf = theta_curve(pf, lambda, 4).theta;
      for (std::size_t n = 0; n < 4; ++n) EXPECT_LE(tf[n], tc[n] + 1e-12 * std::max(1.0, std::abs(tc[n])));
    }
  }
}
