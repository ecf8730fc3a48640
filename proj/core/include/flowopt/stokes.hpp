#pragma once

#include <Eigen/Sparse>
#include <vector>

#include "flowopt/mesh.hpp"

namespace flowopt {

/// Element-wise constant Brinkman resistance.
struct ResistanceField {
  std::vector<double> alpha;

  static ResistanceField uniform(const StructuredMesh& mesh, double value) {
    return ResistanceField{std::vector<double>(
        static_cast<std::size_t>(mesh.num_elements()), value)};
  }
  /// alpha_k = alpha_max * (1 - chi_k) for a binary fluid indicator.
  static ResistanceField from_indicator(const std::vector<std::uint8_t>& chi,
                                        double alpha_max);
};

/// How velocity is imposed on outlet segments: a drawn parabolic profile
/// (Dirichlet, the default) or a traction-free condition (homogeneous
/// Neumann, leaving the outflow profile to the solver).
enum class OutletTreatment { Prescribed, TractionFree };

struct StokesOptions {
  double viscosity{1.0};
  OutletTreatment outlet{OutletTreatment::Prescribed};
};

/// Velocity is stored node-interleaved: (ux_0, uy_0, ux_1, uy_1, ...) over
/// the biquadratic grid; pressure over the bilinear grid.
struct FlowField {
  Eigen::VectorXd velocity;
  Eigen::VectorXd pressure;
  std::vector<double> element_kinetic;  // d_k = integral over element k of u.u
};

/// Assembled saddle-point system [[K + M_alpha, B^T], [B, 0]] with zero rhs,
/// before any boundary treatment.  Velocity dofs come first.
struct SaddleSystem {
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd rhs;
  int velocity_dofs{0};
  int pressure_dofs{0};
};

/// Assembles viscous + Brinkman + divergence blocks with 3x3 Gauss
/// quadrature on biquadratic/bilinear (Taylor-Hood) rectangles.
SaddleSystem assemble(const StructuredMesh& mesh, const ResistanceField& resistance,
                      double viscosity);

/// Solves the generalized Stokes problem with the segment-defined velocity
/// boundary conditions by sparse direct factorization.  One pressure dof is
/// pinned to zero whenever velocity is prescribed on the entire boundary.
FlowField solve_flow(const StructuredMesh& mesh,
                     const std::vector<BoundarySegment>& segments,
                     const ResistanceField& resistance,
                     const StokesOptions& options = {});

/// J = integral of 2 mu eps(u):eps(u) + alpha u.u over the domain.
double dissipation_energy(const StructuredMesh& mesh, const FlowField& flow,
                          const ResistanceField& resistance, double viscosity);

/// Per-element kinetic integrals d_k = integral over element k of u.u.
std::vector<double> element_kinetic_integrals(const StructuredMesh& mesh,
                                              const FlowField& flow);

/// Dirichlet values implied by the segments for every boundary velocity
/// node (interior nodes keep value 0 and constrained=false).  Used by the
/// solver and exposed for testing.
struct VelocityBC {
  std::vector<std::uint8_t> constrained;  // per velocity dof
  std::vector<double> value;              // per velocity dof
};
VelocityBC build_velocity_bc(const StructuredMesh& mesh,
                             const std::vector<BoundarySegment>& segments,
                             OutletTreatment outlet);

/// Residual of the discrete continuity rows actually enforced in the solve
/// (max-norm), a cheap a posteriori check.
double divergence_residual(const StructuredMesh& mesh, const FlowField& flow,
                           const std::vector<BoundarySegment>& segments,
                           const ResistanceField& resistance,
                           const StokesOptions& options = {});

}  // namespace flowopt
