#include "flowopt/classical.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace flowopt {

double interpolate_alpha(double rho, double q, double alpha_max) {
  return alpha_max * q * (1.0 - rho) / (q + rho);
}

double interpolate_alpha_derivative(double rho, double q, double alpha_max) {
  const double denom = q + rho;
  return -alpha_max * q * (1.0 + q) / (denom * denom);
}

ResistanceField resistance_from_density(const DensityField& density, double q,
                                        double alpha_max) {
  ResistanceField r;
  r.alpha.resize(density.rho.size());
  for (std::size_t k = 0; k < density.rho.size(); ++k)
    r.alpha[k] = interpolate_alpha(density.rho[k], q, alpha_max);
  return r;
}

std::vector<double> sensitivity(const std::vector<double>& element_kinetic,
                                const DensityField& density, double q,
                                double alpha_max) {
  if (element_kinetic.size() != density.rho.size())
    throw std::invalid_argument("sensitivity: field size mismatch");
  std::vector<double> s(density.rho.size());
  for (std::size_t k = 0; k < s.size(); ++k)
    s[k] = interpolate_alpha_derivative(density.rho[k], q, alpha_max) *
           element_kinetic[k];
  return s;
}

DensityField oc_update(const DensityField& density,
                       const std::vector<double>& sens, const OcParams& params) {
  const std::size_t n = density.rho.size();
  if (sens.size() != n)
    throw std::invalid_argument("oc_update: sensitivity size mismatch");
  const double total_volume = params.v_elem * static_cast<double>(n);
  const double tol = params.volume_tol * total_volume;

  double smax = 0.0;
  for (double s : sens) smax = std::max(smax, std::abs(s));
  if (smax == 0.0) {
    // Uniform rescale to the exact volume target.
    DensityField out = density;
    double vol = 0.0;
    for (double r : out.rho) vol += params.v_elem * r;
    if (vol > 0.0) {
      const double scale = params.v_max / vol;
      for (double& r : out.rho) r = std::clamp(r * scale, 0.0, 1.0);
    } else {
      const double fill = std::clamp(params.v_max / total_volume, 0.0, 1.0);
      for (double& r : out.rho) r = fill;
    }
    return out;
  }

  auto update_for = [&](double lambda) {
    DensityField out;
    out.rho.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double gain = std::max(0.0, -sens[k]) / lambda;
      const double candidate = density.rho[k] * std::pow(gain, params.eta);
      const double lo = std::max(0.0, density.rho[k] - params.move_limit);
      const double hi = std::min(1.0, density.rho[k] + params.move_limit);
      out.rho[k] = std::clamp(candidate, lo, hi);
    }
    return out;
  };
  auto volume_of = [&](const DensityField& f) {
    double v = 0.0;
    for (double r : f.rho) v += params.v_elem * r;
    return v;
  };

  // Fluid volume decreases monotonically in Lambda; bracket then bisect.
  double lo = 1e-12 * smax, hi = 1e12 * smax;
  DensityField at_lo = update_for(lo), at_hi = update_for(hi);
  if (volume_of(at_lo) <= params.v_max) return at_lo;  // target above reach
  if (volume_of(at_hi) >= params.v_max) return at_hi;  // target below reach
  DensityField mid_field;
  for (int it = 0; it < 200; ++it) {
    const double mid = std::sqrt(lo * hi);
    mid_field = update_for(mid);
    const double v = volume_of(mid_field);
    if (std::abs(v - params.v_max) <= tol) return mid_field;
    if (v > params.v_max)
      lo = mid;
    else
      hi = mid;
  }
  return mid_field;
}

DesignState filter_binary(const DensityField& density, double threshold) {
  DesignState ds;
  ds.chi.resize(density.rho.size());
  ds.phi.resize(density.rho.size());
  for (std::size_t k = 0; k < density.rho.size(); ++k) {
    ds.chi[k] = density.rho[k] > threshold ? 1 : 0;
    ds.phi[k] = ds.chi[k] ? 1.0 : -1.0;
  }
  return ds;
}

ClassicalResult run_classical(const StructuredMesh& mesh,
                              const std::vector<BoundarySegment>& segments,
                              const ClassicalParams& params) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto wall_ms = [&] {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - t0)
        .count();
  };
  const int n = mesh.num_elements();
  const double v_elem = mesh.element_volume();
  const double v_max = params.vmax_fraction * mesh.domain_volume();
  const StokesOptions sopt{params.viscosity, params.outlet};

  ClassicalResult res;
  DensityField rho;
  rho.rho.assign(static_cast<std::size_t>(n), 1.0);

  ResistanceField resistance =
      resistance_from_density(rho, params.q_penalty, params.alpha_max);
  FlowField flow = solve_flow(mesh, segments, resistance, sopt);
  double j_prev =
      dissipation_energy(mesh, flow, resistance, params.viscosity);

  OcParams oc;
  oc.move_limit = params.move_limit;
  oc.eta = params.eta;
  oc.v_max = v_max;
  oc.v_elem = v_elem;

  for (int step = 1; step <= params.max_steps; ++step) {
    const auto sens =
        sensitivity(flow.element_kinetic, rho, params.q_penalty, params.alpha_max);
    rho = oc_update(rho, sens, oc);
    resistance =
        resistance_from_density(rho, params.q_penalty, params.alpha_max);
    flow = solve_flow(mesh, segments, resistance, sopt);
    const double j =
        dissipation_energy(mesh, flow, resistance, params.viscosity);
    double vol = 0.0;
    for (double r : rho.rho) vol += v_elem * r;
    res.history.push_back({j, vol / mesh.domain_volume(), wall_ms()});
    res.steps = step;
    const bool converged = std::abs(j - j_prev) < params.epsilon * std::abs(j_prev);
    j_prev = j;
    if (converged) break;
  }

  res.density = rho;
  res.objective_continuous = j_prev;
  res.filtered = filter_binary(rho, params.filter_threshold);
  const ResistanceField filtered_resistance =
      ResistanceField::from_indicator(res.filtered.chi, params.alpha_max);
  res.flow = solve_flow(mesh, segments, filtered_resistance, sopt);
  res.objective_filtered =
      dissipation_energy(mesh, res.flow, filtered_resistance, params.viscosity);
  return res;
}

}  // namespace flowopt
