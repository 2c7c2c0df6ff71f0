#include "dirac_gap/discretization.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "dirac_gap/error.hpp"

namespace dirac_gap {

namespace {

void collect_step_windows(const ScalarField& f, std::vector<std::pair<double, double>>& out) {
  if (const auto* s = std::get_if<field::Step>(&f.node())) {
    out.emplace_back(s->window_lo, s->window_hi);
  } else if (const auto* sum = std::get_if<field::Sum>(&f.node())) {
    for (const auto& t : sum->terms) collect_step_windows(t, out);
  }
}

// Upper bound of the local wavenumber over all l in [m1, lambda_e+]: the
// oscillation rate where M1 < l and the decay rate where M1 > l.
double local_wavenumber(const PotentialSpec& spec, const SpectralConstants& c, double x) {
  const double m1 = spec.m1.value(x);
  const double m2 = spec.m2.value(x);
  const double osc = (c.lambda_e_plus - m1) * (m2 + c.lambda_e_plus);
  const double decay = (m1 - c.m1) * (m2 + c.m1);
  return std::sqrt(std::max({0.0, osc, decay}));
}

}  // namespace

std::size_t Mesh::dof_count() const {
  std::size_t n = nodes.size();
  if (bc_lo == Boundary::Dirichlet) --n;
  if (bc_hi == Boundary::Dirichlet) --n;
  return n;
}

Mesh Mesh::refined() const {
  Mesh out = *this;
  out.nodes.clear();
  out.nodes.reserve(2 * nodes.size() - 1);
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    out.nodes.push_back(nodes[i]);
    out.nodes.push_back(0.5 * (nodes[i] + nodes[i + 1]));
  }
  out.nodes.push_back(nodes.back());
  return out;
}

Mesh build_mesh(const PotentialSpec& spec, const MeshParams& params) {
  if (!(params.L > 0.0) || !(params.h > 0.0) || !std::isfinite(params.L) ||
      !(params.oscillation_scale >= 0.0)) {
    throw Error(ErrorCode::InvalidParams, "mesh needs L > 0, h > 0, oscillation_scale >= 0");
  }
  const double L = params.L;
  const double h = params.h;
  std::vector<std::pair<double, double>> windows;
  for (const ScalarField* f : {&spec.m1, &spec.m2, &spec.w}) collect_step_windows(*f, windows);
  for (const auto& [lo, hi] : windows) {
    if (lo < -L || hi > L) {
      throw Error(ErrorCode::WindowTooSmall,
                  fmt::format("step window [{}, {}] exceeds [-{}, {}]", lo, hi, L, L));
    }
  }
  const SpectralConstants c = validate(spec);

  Mesh mesh;
  mesh.x_lo = spec.domain.is_half_line() ? 0.0 : -L;
  mesh.x_hi = L;
  mesh.bc_hi = Boundary::Dirichlet;
  mesh.bc_lo = spec.domain.is_half_line() && spec.domain.alpha == HalfLineAlpha::Zero
                   ? Boundary::Free
                   : Boundary::Dirichlet;

  std::vector<double> fixed{mesh.x_lo, mesh.x_hi};
  for (const ScalarField* f : {&spec.m1, &spec.m2, &spec.w}) {
    for (double bp : f->breakpoints()) {
      if (bp > mesh.x_lo && bp < mesh.x_hi) fixed.push_back(bp);
    }
  }
  std::sort(fixed.begin(), fixed.end());
  fixed.erase(std::unique(fixed.begin(), fixed.end()), fixed.end());

  // Base grid on integer multiples of h, so that the interior does not move
  // when L changes; grid points crowding a fixed node are dropped.
  std::vector<double> base = fixed;
  const auto k_lo = static_cast<long long>(std::ceil(mesh.x_lo / h));
  const auto k_hi = static_cast<long long>(std::floor(mesh.x_hi / h));
  for (long long k = k_lo; k <= k_hi; ++k) {
    const double x = static_cast<double>(k) * h;
    const auto it = std::lower_bound(fixed.begin(), fixed.end(), x);
    double gap = std::numeric_limits<double>::infinity();
    if (it != fixed.end()) gap = std::min(gap, *it - x);
    if (it != fixed.begin()) gap = std::min(gap, x - *std::prev(it));
    if (gap > 0.25 * h) base.push_back(x);
  }
  std::sort(base.begin(), base.end());

  mesh.nodes.reserve(base.size());
  for (std::size_t i = 0; i + 1 < base.size(); ++i) {
    const double x0 = base[i];
    const double x1 = base[i + 1];
    const double len = x1 - x0;
    double kappa = 0.0;
    if (params.oscillation_scale > 0.0) {
      for (double frac : {1.0 / 6.0, 0.5, 5.0 / 6.0}) {
        kappa = std::max(kappa, local_wavenumber(spec, c, x0 + frac * len));
      }
    }
    const double h_loc = h / std::max(1.0, params.oscillation_scale * kappa);
    const auto pieces = static_cast<std::size_t>(std::max(1.0, std::ceil(len / h_loc - 1e-9)));
    for (std::size_t j = 0; j < pieces; ++j) {
      mesh.nodes.push_back(x0 + len * static_cast<double>(j) / static_cast<double>(pieces));
    }
  }
  mesh.nodes.push_back(base.back());
  if (mesh.nodes.size() < 3) mesh = mesh.refined();
  if (mesh.nodes.size() < 3) mesh = mesh.refined();
  return mesh;
}

Mesh interval_mesh(double a, double b, double h, std::span<const double> breakpoints) {
  if (!(a < b)) throw Error(ErrorCode::DegenerateInterval, "interval mesh needs a < b");
  if (!(h > 0.0)) throw Error(ErrorCode::InvalidParams, "interval mesh needs h > 0");
  std::vector<double> cuts{a, b};
  for (double bp : breakpoints) {
    if (bp > a && bp < b) cuts.push_back(bp);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  Mesh mesh;
  mesh.x_lo = a;
  mesh.x_hi = b;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double len = cuts[i + 1] - cuts[i];
    const auto pieces = static_cast<std::size_t>(std::max(1.0, std::ceil(len / h - 1e-9)));
    for (std::size_t j = 0; j < pieces; ++j) {
      mesh.nodes.push_back(cuts[i] + len * static_cast<double>(j) / static_cast<double>(pieces));
    }
  }
  mesh.nodes.push_back(b);
  while (mesh.nodes.size() < 3) mesh = mesh.refined();
  return mesh;
}

std::array<double, 2> gauss_points(double x0, double x1) {
  const double mid = 0.5 * (x0 + x1);
  const double half = 0.5 * (x1 - x0) / std::sqrt(3.0);
  return {mid - half, mid + half};
}

namespace {

// Scatters a 2x2 element matrix into the dof-indexed tridiagonal.
void scatter(const Mesh& mesh, std::size_t e, const std::array<double, 3>& local,
             SymTridiagonal& out) {
  const std::size_t first = mesh.first_dof_node();
  const std::size_t ndof = out.size();
  const auto dof = [&](std::size_t node) -> long long {
    const long long d = static_cast<long long>(node) - static_cast<long long>(first);
    return (d >= 0 && d < static_cast<long long>(ndof)) ? d : -1;
  };
  const long long i = dof(e);
  const long long j = dof(e + 1);
  if (i >= 0) out.diag[static_cast<std::size_t>(i)] += local[0];
  if (j >= 0) out.diag[static_cast<std::size_t>(j)] += local[2];
  if (i >= 0 && j >= 0) out.off[static_cast<std::size_t>(i)] += local[1];
}

// Element matrix of int c phi_a phi_b + (-phi_a' + w phi_a)(-phi_b' + w phi_b) * r with
// c, w, r given at the two Gauss points: (00, 01, 11).
std::array<double, 3> element_matrix(double len, const std::array<double, 2>& c,
                                     const std::array<double, 2>& w,
                                     const std::array<double, 2>& r) {
  static const double g = 0.5 / std::sqrt(3.0);
  const std::array<double, 2> phi0{0.5 + g, 0.5 - g};
  const std::array<double, 2> phi1{0.5 - g, 0.5 + g};
  const double d0 = -1.0 / len;
  const double d1 = 1.0 / len;
  std::array<double, 3> out{0.0, 0.0, 0.0};
  for (int q = 0; q < 2; ++q) {
    const double wt = 0.5 * len;
    const double b0 = -d0 + w[q] * phi0[q];
    const double b1 = -d1 + w[q] * phi1[q];
    out[0] += wt * (c[q] * phi0[q] * phi0[q] + r[q] * b0 * b0);
    out[1] += wt * (c[q] * phi0[q] * phi1[q] + r[q] * b0 * b1);
    out[2] += wt * (c[q] * phi1[q] * phi1[q] + r[q] * b1 * b1);
  }
  return out;
}

}  // namespace

SymTridiagonal assemble_mass(const Mesh& mesh) {
  SymTridiagonal m(mesh.dof_count());
  for (std::size_t e = 0; e < mesh.element_count(); ++e) {
    const double len = mesh.nodes[e + 1] - mesh.nodes[e];
    scatter(mesh, e, {len / 3.0, len / 6.0, len / 3.0}, m);
  }
  return m;
}

AssembledPencil::AssembledPencil(Mesh mesh, const PotentialSpec& spec)
    : mesh_(std::move(mesh)), constants_(validate(spec)) {
  if (mesh_.nodes.size() < 3 || mesh_.dof_count() == 0) {
    throw Error(ErrorCode::InvalidParams, "mesh needs at least one degree of freedom");
  }
  elements_.reserve(mesh_.element_count());
  for (std::size_t e = 0; e < mesh_.element_count(); ++e) {
    const double x0 = mesh_.nodes[e];
    const double x1 = mesh_.nodes[e + 1];
    if (!(x1 > x0)) throw Error(ErrorCode::InvalidParams, "mesh nodes must increase strictly");
    const auto xq = gauss_points(x0, x1);
    ElementData d{x1 - x0, {}, {}, {}};
    for (int q = 0; q < 2; ++q) {
      d.m1[q] = spec.m1.value(xq[q]);
      d.m2[q] = spec.m2.value(xq[q]);
      d.w[q] = spec.w.value(xq[q]);
    }
    elements_.push_back(d);
  }
  mass_ = assemble_mass(mesh_);
}

SymTridiagonal AssembledPencil::assemble(double lambda) const {
  if (!(lambda > -constants_.m2)) {
    throw Error(ErrorCode::LambdaOutOfDomain,
                fmt::format("lambda = {} must exceed -m2 = {}", lambda, -constants_.m2));
  }
  SymTridiagonal s(mass_.size());
  for (std::size_t e = 0; e < elements_.size(); ++e) {
    const ElementData& d = elements_[e];
    const std::array<double, 2> c{d.m1[0] - lambda, d.m1[1] - lambda};
    const std::array<double, 2> r{1.0 / (d.m2[0] + lambda), 1.0 / (d.m2[1] + lambda)};
    scatter(mesh_, e, element_matrix(d.length, c, d.w, r), s);
  }
  return s;
}

double AssembledPencil::form(double lambda, std::span<const double> phi) const {
  return assemble(lambda).quadratic_form(phi);
}

SturmMatrices assemble_sturm(const Mesh& mesh, const ScalarField& w) {
  SturmMatrices out{SymTridiagonal(mesh.dof_count()), assemble_mass(mesh)};
  for (std::size_t e = 0; e < mesh.element_count(); ++e) {
    const double x0 = mesh.nodes[e];
    const double x1 = mesh.nodes[e + 1];
    const auto xq = gauss_points(x0, x1);
    const std::array<double, 2> wq{w.value(xq[0]), w.value(xq[1])};
    scatter(mesh, e, element_matrix(x1 - x0, {0.0, 0.0}, wq, {1.0, 1.0}), out.stiff_w);
  }
  return out;
}

}  // namespace dirac_gap
