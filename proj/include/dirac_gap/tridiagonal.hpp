#ifndef DIRAC_GAP_TRIDIAGONAL_HPP
#define DIRAC_GAP_TRIDIAGONAL_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace dirac_gap {

/// Symmetric tridiagonal matrix stored as its diagonal and first
/// off-diagonal (off.size() == diag.size() - 1).
struct SymTridiagonal {
  std::vector<double> diag;
  std::vector<double> off;

  SymTridiagonal() = default;
  explicit SymTridiagonal(std::size_t n) : diag(n, 0.0), off(n > 0 ? n - 1 : 0, 0.0) {}

  std::size_t size() const { return diag.size(); }
  double quadratic_form(std::span<const double> v) const;
  std::vector<double> multiply(std::span<const double> v) const;
  double max_abs() const;
};

/// Number of negative pivots in the LDL^T factorization of A - sigma * B.
/// For symmetric A and positive definite B this is the number of
/// generalized eigenvalues of (A, B) below sigma.
std::size_t count_below(const SymTridiagonal& a, const SymTridiagonal& b, double sigma);

/// Number of negative eigenvalues of A.
std::size_t negative_count(const SymTridiagonal& a);

struct EigenBisectionOptions {
  double rel_tol = 4e-16;
  double abs_tol = 1e-300;
  int max_iterations = 400;
};

/// The k smallest generalized eigenvalues of (A, B), ascending, by Sturm
/// bisection. Throws ConvergenceFailure if no bracket is found.
std::vector<double> smallest_generalized_eigenvalues(const SymTridiagonal& a,
                                                     const SymTridiagonal& b, std::size_t k,
                                                     const EigenBisectionOptions& options = {});

}  // namespace dirac_gap

#endif  // DIRAC_GAP_TRIDIAGONAL_HPP
