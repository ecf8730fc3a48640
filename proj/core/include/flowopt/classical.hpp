#pragma once

#include <vector>

#include "flowopt/encoding.hpp"
#include "flowopt/mesh.hpp"
#include "flowopt/stokes.hpp"

namespace flowopt {

/// Element-wise continuous design densities in [0, 1] (1 = fluid).
struct DensityField {
  std::vector<double> rho;
};

/// Convex resistance interpolation
///   alpha(rho) = alpha_max * q (1 - rho) / (q + rho),
/// with alpha(0) = alpha_max and alpha(1) = 0.
double interpolate_alpha(double rho, double q, double alpha_max);
/// d(alpha)/d(rho) = -alpha_max * q (1 + q) / (q + rho)^2.
double interpolate_alpha_derivative(double rho, double q, double alpha_max);

ResistanceField resistance_from_density(const DensityField& density, double q,
                                        double alpha_max);

/// Self-adjoint sensitivity of the dissipation objective:
/// dJ/drho_k = alpha'(rho_k) * d_k, always <= 0.
std::vector<double> sensitivity(const std::vector<double>& element_kinetic,
                                const DensityField& density, double q,
                                double alpha_max);

struct OcParams {
  double move_limit{0.2};
  double eta{0.5};          // update exponent
  double v_max{0.0};        // target fluid volume
  double v_elem{1.0};
  double volume_tol{1e-8};  // relative to total volume
};

/// Optimality-criteria update: rho' = clamp(rho * (-sens / Lambda)^eta)
/// within the move limit and [0, 1]; Lambda is bisected so the fluid volume
/// meets v_max.  When the move limit makes the target unreachable (early
/// steps from an all-fluid start) the update saturates at the nearest bound.
/// An all-zero sensitivity short-circuits to a uniform volume rescale.
DensityField oc_update(const DensityField& density,
                       const std::vector<double>& sens, const OcParams& params);

/// Binary design: fluid where rho exceeds the threshold.
DesignState filter_binary(const DensityField& density, double threshold = 0.95);

struct ClassicalParams {
  double viscosity{1.0};
  double alpha_max{12.5};
  double q_penalty{0.1};
  double vmax_fraction{0.5};
  double epsilon{1e-3};     // relative objective change for termination
  int max_steps{200};
  double move_limit{0.2};
  double eta{0.5};
  double filter_threshold{0.95};
  OutletTreatment outlet{OutletTreatment::Prescribed};
};

struct ClassicalStep {
  double objective{0.0};
  double volume_fraction{0.0};
  double wall_ms{0.0};
};

struct ClassicalResult {
  std::vector<ClassicalStep> history;   // one record per design update
  DensityField density;                 // final continuous design
  DesignState filtered;                 // thresholded binary design
  FlowField flow;                       // re-solved on the filtered design
  double objective_continuous{0.0};     // J of the final density design
  double objective_filtered{0.0};       // J of the re-solved binary design
  int steps{0};
};

/// Density-method optimization with optimality-criteria updates, starting
/// from all-fluid.  Each step solves the flow once; history entry t holds
/// the objective of the design produced by update t (freshly re-solved).
ClassicalResult run_classical(const StructuredMesh& mesh,
                              const std::vector<BoundarySegment>& segments,
                              const ClassicalParams& params);

}  // namespace flowopt
