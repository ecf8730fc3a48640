#pragma once

// Straight-from-the-definition evaluators for every design-energy term.
// They read the assignment directly and share no expansion code with the
// library builders, so agreement between the two is a real cross-check.

#include <vector>

#include "flowopt/encoding.hpp"
#include "flowopt/mesh.hpp"
#include "flowopt/qubo.hpp"

namespace flowopt::testref {

inline double phi_of(const Assignment& q, const VariableLayout& layout, int k) {
  if (layout.mode() == Formulation::Condensed)
    return q[layout.chi_var(k)] ? 1.0 : -1.0;
  const int n = layout.levelset_bits();
  double s = 0.0;
  for (int b = 0; b < n; ++b) s += q[layout.levelset_var(k, b)];
  return 2.0 * s / n - 1.0;
}

inline double ref_H_dis(const Assignment& q, const VariableLayout& layout,
                        const std::vector<double>& d, double lambda_dis,
                        double alpha_max) {
  double e = 0.0;
  for (int k = 0; k < layout.num_elements(); ++k)
    e += lambda_dis * alpha_max * (1.0 - q[layout.chi_var(k)]) * d[k];
  return e;
}

inline double ref_H_reg(const Assignment& q, const VariableLayout& layout,
                        const StructuredMesh& mesh, double lambda_reg) {
  double e = 0.0;
  for (const auto& [k, l] : mesh.adjacent_element_pairs()) {
    const auto [kx, ky] = mesh.element_xy(k);
    const auto [lx, ly] = mesh.element_xy(l);
    // Shared edge length over center distance.
    const double w = (ky == ly) ? mesh.hy() / mesh.hx() : mesh.hx() / mesh.hy();
    const double dphi = phi_of(q, layout, k) - phi_of(q, layout, l);
    e += lambda_reg * w * dphi * dphi;
  }
  return e;
}

inline double ref_H_vol(const Assignment& q, const VariableLayout& layout,
                        const std::vector<double>& v, double lambda_vol,
                        double v_max) {
  double vol = 0.0;
  for (int k = 0; k < layout.num_elements(); ++k)
    vol += v[k] * q[layout.chi_var(k)];
  return lambda_vol * (vol - v_max) * (vol - v_max);
}

inline double ref_H_char(const Assignment& q, const VariableLayout& layout,
                         const std::vector<double>& v, double lambda_char) {
  double e = 0.0;
  for (int k = 0; k < layout.num_elements(); ++k) {
    const double chi = q[layout.chi_var(k)];
    const double r = chi - 0.5 * (1.0 + phi_of(q, layout, k));
    e += lambda_char * v[k] * r * r;
  }
  return e;
}

inline double ref_condensed(const Assignment& q, const VariableLayout& layout,
                            const std::vector<double>& d,
                            const std::vector<double>& v, double alpha_max,
                            double lambda_vol, double v_max) {
  double e = 0.0;
  double vol = 0.0;
  for (int k = 0; k < layout.num_elements(); ++k) {
    e += alpha_max * (1.0 - q[layout.chi_var(k)]) * d[k];
    vol += v[k] * q[layout.chi_var(k)];
  }
  return e + lambda_vol * (vol - v_max) * (vol - v_max);
}

}  // namespace flowopt::testref
