#include "flowopt/stokes.hpp"

#include <Eigen/SparseLU>
#include <array>
#include <cmath>
#include <stdexcept>

namespace flowopt {

namespace {

// 3-point Gauss-Legendre rule on [-1, 1], exact through degree 5.
constexpr double kGaussPoint = 0.7745966692414834;  // sqrt(3/5)
constexpr std::array<double, 3> kGp{-kGaussPoint, 0.0, kGaussPoint};
constexpr std::array<double, 3> kGw{5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};

// 1D quadratic Lagrange basis on {-1, 0, 1} and its derivative.
inline std::array<double, 3> lag2(double x) {
  return {0.5 * x * (x - 1.0), 1.0 - x * x, 0.5 * x * (x + 1.0)};
}
inline std::array<double, 3> lag2_d(double x) {
  return {x - 0.5, -2.0 * x, x + 0.5};
}
// 1D linear basis on {-1, 1}.
inline std::array<double, 2> lag1(double x) { return {0.5 * (1.0 - x), 0.5 * (1.0 + x)}; }
inline std::array<double, 2> lag1_d(double) { return {-0.5, 0.5}; }

// Per-element reference matrices for a hx-by-hy rectangle.  The mesh is
// uniform, so one evaluation serves every element.
struct ElementMatrices {
  // 18x18 viscous (2 mu eps:eps) and velocity mass blocks; dof = 2*a + comp.
  Eigen::Matrix<double, 18, 18> visc;
  Eigen::Matrix<double, 18, 18> mass;
  // 4x18 divergence coupling  G[p][dof] = -integral P_p d(N_a)/dx_c.
  Eigen::Matrix<double, 4, 18> div;
};

ElementMatrices reference_matrices(double hx, double hy, double mu) {
  ElementMatrices em;
  em.visc.setZero();
  em.mass.setZero();
  em.div.setZero();
  const double jx = 2.0 / hx;  // d(xi)/dx
  const double jy = 2.0 / hy;
  const double detj = hx * hy / 4.0;
  for (int qj = 0; qj < 3; ++qj) {
    for (int qi = 0; qi < 3; ++qi) {
      const double xi = kGp[qi], eta = kGp[qj];
      const double w = kGw[qi] * kGw[qj] * detj;
      const auto lx = lag2(xi), ly = lag2(eta);
      const auto dlx = lag2_d(xi), dly = lag2_d(eta);
      std::array<double, 9> N, Nx, Ny;
      for (int b = 0; b < 3; ++b)
        for (int a = 0; a < 3; ++a) {
          N[3 * b + a] = lx[a] * ly[b];
          Nx[3 * b + a] = dlx[a] * jx * ly[b];
          Ny[3 * b + a] = lx[a] * dly[b] * jy;
        }
      const auto px = lag1(xi), py = lag1(eta);
      std::array<double, 4> P{px[0] * py[0], px[1] * py[0], px[0] * py[1],
                              px[1] * py[1]};
      for (int a = 0; a < 9; ++a) {
        for (int b = 0; b < 9; ++b) {
          // 2 mu eps(u):eps(v) via the Voigt strain (ux,x; uy,y; ux,y+uy,x)
          // with weights mu*(2, 2, 1).
          const double xx = Nx[a] * Nx[b], yy = Ny[a] * Ny[b];
          em.visc(2 * a, 2 * b) += w * mu * (2.0 * xx + Ny[a] * Ny[b]);
          em.visc(2 * a, 2 * b + 1) += w * mu * (Ny[a] * Nx[b]);
          em.visc(2 * a + 1, 2 * b) += w * mu * (Nx[a] * Ny[b]);
          em.visc(2 * a + 1, 2 * b + 1) += w * mu * (2.0 * yy + Nx[a] * Nx[b]);
          const double m = w * N[a] * N[b];
          em.mass(2 * a, 2 * b) += m;
          em.mass(2 * a + 1, 2 * b + 1) += m;
        }
        for (int p = 0; p < 4; ++p) {
          em.div(p, 2 * a) -= w * P[p] * Nx[a];
          em.div(p, 2 * a + 1) -= w * P[p] * Ny[a];
        }
      }
    }
  }
  return em;
}

double profile_value(const BoundarySegment& s, double coord) {
  if (coord <= s.lo || coord >= s.hi) return 0.0;
  const double len = s.hi - s.lo;
  return s.peak * 4.0 * (coord - s.lo) * (s.hi - coord) / (len * len);
}

// Velocity vector prescribed by a segment at boundary coordinate `coord`.
// Inlets point along the inward normal, outlets along the outward normal.
std::pair<double, double> segment_velocity(const BoundarySegment& s, double coord) {
  const double v = profile_value(s, coord);
  const double sign = (s.kind == SegmentKind::Inlet) ? 1.0 : -1.0;
  switch (s.side) {
    case Side::Left: return {sign * v, 0.0};     // inward normal (+1, 0)
    case Side::Right: return {-sign * v, 0.0};   // inward normal (-1, 0)
    case Side::Bottom: return {0.0, sign * v};   // inward normal (0, +1)
    case Side::Top: return {0.0, -sign * v};     // inward normal (0, -1)
  }
  return {0.0, 0.0};
}

}  // namespace

ResistanceField ResistanceField::from_indicator(
    const std::vector<std::uint8_t>& chi, double alpha_max) {
  ResistanceField r;
  r.alpha.resize(chi.size());
  for (std::size_t k = 0; k < chi.size(); ++k)
    r.alpha[k] = alpha_max * (1.0 - static_cast<double>(chi[k]));
  return r;
}

SaddleSystem assemble(const StructuredMesh& mesh, const ResistanceField& resistance,
                      double viscosity) {
  if (static_cast<int>(resistance.alpha.size()) != mesh.num_elements())
    throw std::invalid_argument("assemble: resistance size != element count");
  const int nv = 2 * mesh.num_velocity_nodes();
  const int np = mesh.num_pressure_nodes();
  const ElementMatrices em = reference_matrices(mesh.hx(), mesh.hy(), viscosity);

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(mesh.num_elements()) * (324 + 324 + 144));
  for (int k = 0; k < mesh.num_elements(); ++k) {
    const auto vn = mesh.element_velocity_nodes(k);
    const auto pn = mesh.element_pressure_nodes(k);
    const double alpha = resistance.alpha[k];
    std::array<int, 18> dof;
    for (int a = 0; a < 9; ++a) {
      dof[2 * a] = 2 * vn[a];
      dof[2 * a + 1] = 2 * vn[a] + 1;
    }
    for (int a = 0; a < 18; ++a)
      for (int b = 0; b < 18; ++b) {
        const double val = em.visc(a, b) + alpha * em.mass(a, b);
        if (val != 0.0) trip.emplace_back(dof[a], dof[b], val);
      }
    for (int p = 0; p < 4; ++p)
      for (int a = 0; a < 18; ++a) {
        const double val = em.div(p, a);
        if (val != 0.0) {
          trip.emplace_back(nv + pn[p], dof[a], val);  // B
          trip.emplace_back(dof[a], nv + pn[p], val);  // B^T
        }
      }
  }

  SaddleSystem sys;
  sys.velocity_dofs = nv;
  sys.pressure_dofs = np;
  sys.matrix.resize(nv + np, nv + np);
  sys.matrix.setFromTriplets(trip.begin(), trip.end());
  sys.rhs = Eigen::VectorXd::Zero(nv + np);
  return sys;
}

VelocityBC build_velocity_bc(const StructuredMesh& mesh,
                             const std::vector<BoundarySegment>& segments,
                             OutletTreatment outlet) {
  const int nv = 2 * mesh.num_velocity_nodes();
  VelocityBC bc;
  bc.constrained.assign(nv, 0);
  bc.value.assign(nv, 0.0);
  const double W = mesh.width(), H = mesh.height();
  const double tol = 1e-12 * std::max(W, H);
  for (int node = 0; node < mesh.num_velocity_nodes(); ++node) {
    auto [x, y] = mesh.velocity_node_coords(node);
    const bool on_l = x < tol, on_r = x > W - tol;
    const bool on_b = y < tol, on_t = y > H - tol;
    if (!(on_l || on_r || on_b || on_t)) continue;
    double ux = 0.0, uy = 0.0;
    bool free_dof = false;
    for (const auto& s : segments) {
      const bool side_match = (s.side == Side::Left && on_l) ||
                              (s.side == Side::Right && on_r) ||
                              (s.side == Side::Bottom && on_b) ||
                              (s.side == Side::Top && on_t);
      if (!side_match) continue;
      const double coord =
          (s.side == Side::Left || s.side == Side::Right) ? y : x;
      if (coord <= s.lo + tol || coord >= s.hi - tol) continue;
      if (s.kind == SegmentKind::Outlet && outlet == OutletTreatment::TractionFree) {
        free_dof = true;
        continue;
      }
      auto [sx, sy] = segment_velocity(s, coord);
      ux += sx;
      uy += sy;
    }
    if (free_dof) continue;  // natural (do-nothing) boundary
    bc.constrained[2 * node] = 1;
    bc.constrained[2 * node + 1] = 1;
    bc.value[2 * node] = ux;
    bc.value[2 * node + 1] = uy;
  }
  return bc;
}

namespace {

struct ReducedSystem {
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd rhs;
  std::vector<std::uint8_t> constrained;  // full-dimension mask
  std::vector<double> value;
};

ReducedSystem apply_constraints(const SaddleSystem& sys, const VelocityBC& bc,
                                bool pin_pressure) {
  const int dim = sys.velocity_dofs + sys.pressure_dofs;
  ReducedSystem red;
  red.constrained.assign(dim, 0);
  red.value.assign(dim, 0.0);
  for (int i = 0; i < sys.velocity_dofs; ++i) {
    red.constrained[i] = bc.constrained[i];
    red.value[i] = bc.value[i];
  }
  if (pin_pressure) red.constrained[sys.velocity_dofs] = 1;  // p(node 0) = 0

  red.rhs = sys.rhs;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(sys.matrix.nonZeros()));
  for (int col = 0; col < sys.matrix.outerSize(); ++col) {
    const bool col_fixed = red.constrained[col];
    for (Eigen::SparseMatrix<double>::InnerIterator it(sys.matrix, col); it;
         ++it) {
      const int row = static_cast<int>(it.row());
      if (red.constrained[row]) continue;
      if (col_fixed) {
        if (red.value[col] != 0.0) red.rhs[row] -= it.value() * red.value[col];
      } else {
        trip.emplace_back(row, col, it.value());
      }
    }
  }
  for (int i = 0; i < dim; ++i) {
    if (red.constrained[i]) {
      trip.emplace_back(i, i, 1.0);
      red.rhs[i] = red.value[i];
    }
  }
  red.matrix.resize(dim, dim);
  red.matrix.setFromTriplets(trip.begin(), trip.end());
  return red;
}

}  // namespace

FlowField solve_flow(const StructuredMesh& mesh,
                     const std::vector<BoundarySegment>& segments,
                     const ResistanceField& resistance,
                     const StokesOptions& options) {
  const SaddleSystem sys = assemble(mesh, resistance, options.viscosity);
  const VelocityBC bc = build_velocity_bc(mesh, segments, options.outlet);

  bool has_free_boundary = false;
  if (options.outlet == OutletTreatment::TractionFree) {
    for (const auto& s : segments)
      if (s.kind == SegmentKind::Outlet) has_free_boundary = true;
  }
  const ReducedSystem red = apply_constraints(sys, bc, !has_free_boundary);

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.analyzePattern(red.matrix);
  lu.factorize(red.matrix);
  if (lu.info() != Eigen::Success)
    throw std::runtime_error("solve_flow: sparse LU factorization failed");
  const Eigen::VectorXd x = lu.solve(red.rhs);

  FlowField flow;
  flow.velocity = x.head(sys.velocity_dofs);
  flow.pressure = x.tail(sys.pressure_dofs);
  flow.element_kinetic = element_kinetic_integrals(mesh, flow);
  return flow;
}

namespace {

// Gathers the 18 local velocity dofs of element k.
Eigen::Matrix<double, 18, 1> gather_velocity(const StructuredMesh& mesh,
                                             const FlowField& flow, int k) {
  const auto vn = mesh.element_velocity_nodes(k);
  Eigen::Matrix<double, 18, 1> u;
  for (int a = 0; a < 9; ++a) {
    u[2 * a] = flow.velocity[2 * vn[a]];
    u[2 * a + 1] = flow.velocity[2 * vn[a] + 1];
  }
  return u;
}

}  // namespace

double dissipation_energy(const StructuredMesh& mesh, const FlowField& flow,
                          const ResistanceField& resistance, double viscosity) {
  if (static_cast<int>(resistance.alpha.size()) != mesh.num_elements())
    throw std::invalid_argument("dissipation_energy: resistance size mismatch");
  const ElementMatrices em = reference_matrices(mesh.hx(), mesh.hy(), viscosity);
  double J = 0.0;
  for (int k = 0; k < mesh.num_elements(); ++k) {
    const auto u = gather_velocity(mesh, flow, k);
    J += u.dot(em.visc * u) + resistance.alpha[k] * u.dot(em.mass * u);
  }
  return J;
}

std::vector<double> element_kinetic_integrals(const StructuredMesh& mesh,
                                              const FlowField& flow) {
  const ElementMatrices em = reference_matrices(mesh.hx(), mesh.hy(), 1.0);
  std::vector<double> d(static_cast<std::size_t>(mesh.num_elements()), 0.0);
  for (int k = 0; k < mesh.num_elements(); ++k) {
    const auto u = gather_velocity(mesh, flow, k);
    d[k] = u.dot(em.mass * u);
  }
  return d;
}

double divergence_residual(const StructuredMesh& mesh, const FlowField& flow,
                           const std::vector<BoundarySegment>& segments,
                           const ResistanceField& resistance,
                           const StokesOptions& options) {
  const SaddleSystem sys = assemble(mesh, resistance, options.viscosity);
  const VelocityBC bc = build_velocity_bc(mesh, segments, options.outlet);
  bool has_free_boundary = false;
  if (options.outlet == OutletTreatment::TractionFree) {
    for (const auto& s : segments)
      if (s.kind == SegmentKind::Outlet) has_free_boundary = true;
  }
  const ReducedSystem red = apply_constraints(sys, bc, !has_free_boundary);
  Eigen::VectorXd x(sys.velocity_dofs + sys.pressure_dofs);
  x.head(sys.velocity_dofs) = flow.velocity;
  x.tail(sys.pressure_dofs) = flow.pressure;
  const Eigen::VectorXd r = red.matrix * x - red.rhs;
  return r.tail(sys.pressure_dofs).lpNorm<Eigen::Infinity>();
}

}  // namespace flowopt
