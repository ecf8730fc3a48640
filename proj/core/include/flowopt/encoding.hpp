#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "flowopt/mesh.hpp"
#include "flowopt/qubo.hpp"

namespace flowopt {

enum class Formulation { Full, Condensed };

/// Weights and sizes of the design-update objective.
struct QuboHyperparams {
  double lambda_dis{100.0};
  double lambda_reg{1.0};
  double lambda_vol{0.2};
  double lambda_char{1.0};
  int levelset_bits{8};   // N, bits per element encoding phi
  double alpha_max{12.5};
  double v_max{0.0};      // upper volume bound, same units as the v_k passed in
};

/// Maps (element, role) to flat QUBO variable indices.
/// Full: element k owns bits k*(N+1) .. k*(N+1)+N-1 for phi and
/// k*(N+1)+N for chi.  Condensed: one chi bit per element, index k.
class VariableLayout {
 public:
  VariableLayout(Formulation mode, int num_elements, int levelset_bits);

  Formulation mode() const { return mode_; }
  int num_elements() const { return elements_; }
  int levelset_bits() const { return bits_; }
  int num_variables() const;

  int chi_var(int k) const;
  int levelset_var(int k, int bit) const;  // full formulation only

 private:
  Formulation mode_;
  int elements_;
  int bits_;
};

/// phi = 2 * (sum of bits / N) - 1, in [-1, 1] with resolution 2/N.
double decode_levelset(std::span<const std::uint8_t> bits);

/// Binary indicator chi plus the discrete level-set field phi.  For the
/// condensed formulation phi mirrors chi as +/-1.
struct DesignState {
  std::vector<std::uint8_t> chi;
  std::vector<double> phi;

  double fluid_volume(double v_elem) const {
    double v = 0.0;
    for (auto c : chi) v += v_elem * static_cast<double>(c);
    return v;
  }
};

/// Dissipation term: lambda_dis * alpha_max * sum_k (1 - chi_k) d_k.
QuboProblem build_H_dis(const std::vector<double>& d, const VariableLayout& layout,
                        const QuboHyperparams& hp);

/// Regularization: lambda_reg * sum over edge-adjacent pairs of
/// w_kl (phi_k - phi_l)^2 with w_kl = shared edge length / center distance
/// (two-point flux discretization of the integral of |grad phi|^2).
QuboProblem build_H_reg(const StructuredMesh& mesh, const VariableLayout& layout,
                        const QuboHyperparams& hp);

/// Volume bound: lambda_vol * (sum_k v_k chi_k - V_max)^2.
QuboProblem build_H_vol(const std::vector<double>& v, const VariableLayout& layout,
                        const QuboHyperparams& hp);

/// Characteristic consistency: lambda_char * sum_k v_k (chi_k - (1+phi_k)/2)^2.
QuboProblem build_H_char(const std::vector<double>& v, const VariableLayout& layout,
                         const QuboHyperparams& hp);

/// Sum of the four terms (full formulation).
QuboProblem build_full(const std::vector<double>& d, const StructuredMesh& mesh,
                       const std::vector<double>& v, const VariableLayout& layout,
                       const QuboHyperparams& hp);

/// Condensed objective: alpha_max * sum_k (1 - chi_k) d_k
/// + lambda_vol * (sum v_k chi_k - V_max)^2, one bit per element.
QuboProblem build_condensed(const std::vector<double>& d,
                            const std::vector<double>& v,
                            const VariableLayout& layout,
                            const QuboHyperparams& hp);

/// Reads chi (and phi when present) back out of a solver assignment.
DesignState decode(const Assignment& q, const VariableLayout& layout);

/// Elements whose chi disagrees with the sign of phi (phi >= 0 counts as
/// fluid).  Zero for condensed designs by construction.
int count_inconsistencies(const DesignState& design);

}  // namespace flowopt
