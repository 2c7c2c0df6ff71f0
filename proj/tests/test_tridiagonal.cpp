#include <algorithm>
#include <random>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "dirac_gap/tridiagonal.hpp"
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

SymTridiagonal random_symmetric(std::mt19937& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  SymTridiagonal a(n);
  for (auto& d : a.diag) d = u(rng);
  for (auto& e : a.off) e = u(rng);
  return a;
}

// Diagonally dominant, hence positive definite.
SymTridiagonal random_spd(std::mt19937& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.1, 1.0);
  SymTridiagonal b(n);
  for (auto& e : b.off) e = u(rng);
  for (std::size_t i = 0; i < n; ++i) {
    const double left = i > 0 ? b.off[i - 1] : 0.0;
    const double right = i + 1 < n ? b.off[i] : 0.0;
    b.diag[i] = left + right + u(rng);
  }
  return b;
}

}  // namespace

TEST(Tridiagonal, MultiplyAndQuadraticForm) {
  SymTridiagonal a(3);
  a.diag = {2.0, 3.0, 4.0};
  a.off = {1.0, -1.0};
  const std::vector<double> v{1.0, 2.0, 3.0};
  const std::vector<double> av = a.multiply(v);
  EXPECT_EQ(av, (std::vector<double>{4.0, 4.0, 10.0}));
  EXPECT_EQ(a.quadratic_form(v), 4.0 + 8.0 + 30.0);
  EXPECT_EQ(a.max_abs(), 4.0);
}

TEST(Tridiagonal, CountBelowMatchesDenseSolver) {
  std::mt19937 rng(1);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 5 + rng() % 60;
    const SymTridiagonal a = random_symmetric(rng, n);
    const SymTridiagonal b = random_spd(rng, n);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(dense(a), dense(b));
    const Eigen::VectorXd ev = es.eigenvalues();
    std::uniform_real_distribution<double> s(ev.minCoeff() - 1.0, ev.maxCoeff() + 1.0);
    for (int k = 0; k < 10; ++k) {
      const double sigma = s(rng);
      const auto expected = static_cast<std::size_t>(std::count_if(ev.data(), ev.data() + ev.size(),
                                                                   [sigma](double x) { return x < sigma; }));
      EXPECT_EQ(count_below(a, b, sigma), expected);
    }
  }
}

TEST(Tridiagonal, NegativeCountMatchesDenseSolver) {
  std::mt19937 rng(2);
  for (int trial = 0; trial < 30; ++trial) {
    const SymTridiagonal a = random_symmetric(rng, 40);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense(a));
    const Eigen::VectorXd ev = es.eigenvalues();
    EXPECT_EQ(negative_count(a),
              static_cast<std::size_t>(std::count_if(ev.data(), ev.data() + ev.size(), [](double x) { return x < 0; })));
  }
}

TEST(Tridiagonal, SmallestGeneralizedEigenvaluesMatchDenseSolver) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 10 + rng() % 100;
    const SymTridiagonal a = random_symmetric(rng, n);
    const SymTridiagonal b = random_spd(rng, n);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(dense(a), dense(b));
    const std::size_t k = std::min<std::size_t>(6, n);
    const std::vector<double> got = smallest_generalized_eigenvalues(a, b, k);
    ASSERT_EQ(got.size(), k);
    const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    for (std::size_t i = 0; i < k; ++i) EXPECT_NEAR(got[i], es.eigenvalues()[static_cast<Eigen::Index>(i)], 1e-11 * scale);
    EXPECT_TRUE(std::is_sorted(got.begin(), got.end()));
  }
}

TEST(Tridiagonal, OneByOne) {
  SymTridiagonal a(1);
  a.diag = {3.0};
  SymTridiagonal b(1);
  b.diag = {2.0};
  EXPECT_EQ(count_below(a, b, 1.4), 0u);
  EXPECT_EQ(count_below(a, b, 1.6), 1u);
  EXPECT_NEAR(smallest_generalized_eigenvalues(a, b, 1)[0], 1.5, 1e-15);
}
