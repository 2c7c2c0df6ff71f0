#ifndef DIRAC_GAP_DISCRETIZATION_HPP
#define DIRAC_GAP_DISCRETIZATION_HPP

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "dirac_gap/potential.hpp"
#include "dirac_gap/tridiagonal.hpp"

namespace dirac_gap {

enum class Boundary { Dirichlet, Free };

struct MeshParams {
  /// Half-width of the truncated line; the half-line uses [0, L].
  double L = 30.0;
  /// Target element size where the solution does not oscillate or decay fast.
  double h = 0.02;
  /// Elements are shrunk to h / max(1, scale * kappa), kappa being an upper
  /// bound on the local wavenumber over the gap. Zero disables this.
  double oscillation_scale = 1.0;
};

/// P1 mesh; the degrees of freedom are the nodes that are not Dirichlet ends.
struct Mesh {
  double x_lo = 0.0;
  double x_hi = 0.0;
  std::vector<double> nodes;
  Boundary bc_lo = Boundary::Dirichlet;
  Boundary bc_hi = Boundary::Dirichlet;

  std::size_t element_count() const { return nodes.size() - 1; }
  std::size_t first_dof_node() const { return bc_lo == Boundary::Dirichlet ? 1 : 0; }
  std::size_t dof_count() const;
  /// Node index of degree of freedom `dof`.
  std::size_t node_of(std::size_t dof) const { return dof + first_dof_node(); }

  /// Bisects every element; the new space contains the old one.
  Mesh refined() const;
};

/// Mesh on [-L, L] (full line) or [0, L] (half-line) with every descriptor
/// breakpoint inside the window as a node. Throws WindowTooSmall when a step
/// window reaches beyond [-L, L] and InvalidParams for non-positive L or h.
Mesh build_mesh(const PotentialSpec& spec, const MeshParams& params);

/// Dirichlet mesh on [a, b] with the given breakpoints as nodes and elements
/// no longer than h.
Mesh interval_mesh(double a, double b, double h, std::span<const double> breakpoints);

/// Matrices of the Schur form on a fixed mesh. assemble() is safe to call
/// concurrently.
class AssembledPencil {
 public:
  AssembledPencil(Mesh mesh, const PotentialSpec& spec);

  const Mesh& mesh() const { return mesh_; }
  const SymTridiagonal& mass() const { return mass_; }
  const SpectralConstants& constants() const { return constants_; }
  std::size_t dof_count() const { return mass_.size(); }

  /// S(l)_ij = int (M1 - l) phi_i phi_j + (-phi_i' + W phi_i)(-phi_j' + W phi_j) / (M2 + l).
  /// Throws LambdaOutOfDomain when l <= -m2.
  SymTridiagonal assemble(double lambda) const;

  /// s(l)[phi] for a coefficient vector over the degrees of freedom.
  double form(double lambda, std::span<const double> phi) const;

 private:
  struct ElementData {
    double length;
    std::array<double, 2> m1;
    std::array<double, 2> m2;
    std::array<double, 2> w;
  };

  Mesh mesh_;
  SpectralConstants constants_;
  std::vector<ElementData> elements_;
  SymTridiagonal mass_;
};

struct SturmMatrices {
  /// int (-phi_i' + W phi_i)(-phi_j' + W phi_j)
  SymTridiagonal stiff_w;
  SymTridiagonal mass;
};

SturmMatrices assemble_sturm(const Mesh& mesh, const ScalarField& w);

/// Consistent P1 mass matrix over the degrees of freedom.
SymTridiagonal assemble_mass(const Mesh& mesh);

/// Gauss points of [x0, x1] for the two-point rule, each with weight (x1 - x0)/2.
std::array<double, 2> gauss_points(double x0, double x1);

}  // namespace dirac_gap

#endif  // DIRAC_GAP_DISCRETIZATION_HPP
