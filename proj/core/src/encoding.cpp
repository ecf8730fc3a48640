#include "flowopt/encoding.hpp"

#include <stdexcept>
#include <string>

namespace flowopt {

VariableLayout::VariableLayout(Formulation mode, int num_elements,
                               int levelset_bits)
    : mode_(mode), elements_(num_elements), bits_(levelset_bits) {
  if (num_elements < 1)
    throw std::invalid_argument("VariableLayout: need at least one element");
  if (mode == Formulation::Full && levelset_bits < 1)
    throw std::invalid_argument("VariableLayout: levelset_bits must be >= 1");
}

int VariableLayout::num_variables() const {
  return mode_ == Formulation::Full ? elements_ * (bits_ + 1) : elements_;
}

int VariableLayout::chi_var(int k) const {
  if (k < 0 || k >= elements_)
    throw std::invalid_argument("chi_var: element out of range");
  return mode_ == Formulation::Full ? k * (bits_ + 1) + bits_ : k;
}

int VariableLayout::levelset_var(int k, int bit) const {
  if (mode_ != Formulation::Full)
    throw std::invalid_argument("levelset_var: condensed layout has no phi bits");
  if (k < 0 || k >= elements_ || bit < 0 || bit >= bits_)
    throw std::invalid_argument("levelset_var: index out of range");
  return k * (bits_ + 1) + bit;
}

double decode_levelset(std::span<const std::uint8_t> bits) {
  if (bits.empty())
    throw std::invalid_argument("decode_levelset: empty bit span");
  double s = 0.0;
  for (auto b : bits) s += static_cast<double>(b);
  return 2.0 * s / static_cast<double>(bits.size()) - 1.0;
}

namespace {
void check_sizes(const std::vector<double>& x, const VariableLayout& layout,
                 const char* who) {
  if (static_cast<int>(x.size()) != layout.num_elements())
    throw std::invalid_argument(std::string(who) +
                                ": per-element vector size mismatch");
}
}  // namespace

QuboProblem build_H_dis(const std::vector<double>& d, const VariableLayout& layout,
                        const QuboHyperparams& hp) {
  check_sizes(d, layout, "build_H_dis");
  QuboProblem p(layout.num_variables());
  const double c = hp.lambda_dis * hp.alpha_max;
  for (int k = 0; k < layout.num_elements(); ++k) {
    // c * (1 - chi_k) * d_k  =  c*d_k - c*d_k*chi_k
    p.add_offset(c * d[k]);
    p.add_linear(layout.chi_var(k), -c * d[k]);
  }
  return p;
}

QuboProblem build_H_reg(const StructuredMesh& mesh, const VariableLayout& layout,
                        const QuboHyperparams& hp) {
  if (mesh.num_elements() != layout.num_elements())
    throw std::invalid_argument("build_H_reg: mesh/layout element mismatch");
  if (layout.mode() != Formulation::Full)
    throw std::invalid_argument("build_H_reg: requires the full formulation");
  QuboProblem p(layout.num_variables());
  const int N = layout.levelset_bits();
  const double scale = 2.0 / static_cast<double>(N);  // phi = scale*sum(q) - 1
  for (const auto& [k, l] : mesh.adjacent_element_pairs()) {
    auto [kx, ky] = mesh.element_xy(k);
    auto [lx, ly] = mesh.element_xy(l);
    // Horizontal neighbors share an edge of length hy at distance hx.
    const double w = (ky == ly) ? mesh.hy() / mesh.hx() : mesh.hx() / mesh.hy();
    // phi_k - phi_l = scale * (sum_i q_k,i - sum_i q_l,i); constants cancel.
    std::vector<std::pair<int, double>> terms;
    terms.reserve(2 * N);
    for (int i = 0; i < N; ++i) terms.emplace_back(layout.levelset_var(k, i), scale);
    for (int i = 0; i < N; ++i) terms.emplace_back(layout.levelset_var(l, i), -scale);
    p.add_weighted_square(hp.lambda_reg * w, terms);
  }
  return p;
}

QuboProblem build_H_vol(const std::vector<double>& v, const VariableLayout& layout,
                        const QuboHyperparams& hp) {
  check_sizes(v, layout, "build_H_vol");
  QuboProblem p(layout.num_variables());
  std::vector<std::pair<int, double>> terms;
  terms.reserve(layout.num_elements());
  for (int k = 0; k < layout.num_elements(); ++k)
    terms.emplace_back(layout.chi_var(k), v[k]);
  p.add_weighted_square(hp.lambda_vol, terms, -hp.v_max);
  return p;
}

QuboProblem build_H_char(const std::vector<double>& v, const VariableLayout& layout,
                         const QuboHyperparams& hp) {
  check_sizes(v, layout, "build_H_char");
  if (layout.mode() != Formulation::Full)
    throw std::invalid_argument("build_H_char: requires the full formulation");
  QuboProblem p(layout.num_variables());
  const int N = layout.levelset_bits();
  const double inv_n = 1.0 / static_cast<double>(N);
  for (int k = 0; k < layout.num_elements(); ++k) {
    // chi_k - (1 + phi_k)/2 = chi_k - (sum_i q_k,i)/N
    std::vector<std::pair<int, double>> terms;
    terms.reserve(N + 1);
    terms.emplace_back(layout.chi_var(k), 1.0);
    for (int i = 0; i < N; ++i)
      terms.emplace_back(layout.levelset_var(k, i), -inv_n);
    p.add_weighted_square(hp.lambda_char * v[k], terms);
  }
  return p;
}

QuboProblem build_full(const std::vector<double>& d, const StructuredMesh& mesh,
                       const std::vector<double>& v, const VariableLayout& layout,
                       const QuboHyperparams& hp) {
  QuboProblem p = build_H_dis(d, layout, hp);
  p.add(build_H_reg(mesh, layout, hp));
  p.add(build_H_vol(v, layout, hp));
  p.add(build_H_char(v, layout, hp));
  return p;
}

QuboProblem build_condensed(const std::vector<double>& d,
                            const std::vector<double>& v,
                            const VariableLayout& layout,
                            const QuboHyperparams& hp) {
  check_sizes(d, layout, "build_condensed");
  check_sizes(v, layout, "build_condensed");
  if (layout.mode() != Formulation::Condensed)
    throw std::invalid_argument("build_condensed: layout must be condensed");
  QuboProblem p(layout.num_variables());
  // Dissipation with unit prefactor; the volume bound is the single
  // lambda_vol-weighted square.
  for (int k = 0; k < layout.num_elements(); ++k) {
    p.add_offset(hp.alpha_max * d[k]);
    p.add_linear(layout.chi_var(k), -hp.alpha_max * d[k]);
  }
  std::vector<std::pair<int, double>> terms;
  terms.reserve(layout.num_elements());
  for (int k = 0; k < layout.num_elements(); ++k)
    terms.emplace_back(layout.chi_var(k), v[k]);
  p.add_weighted_square(hp.lambda_vol, terms, -hp.v_max);
  return p;
}

DesignState decode(const Assignment& q, const VariableLayout& layout) {
  if (static_cast<int>(q.size()) != layout.num_variables())
    throw std::invalid_argument("decode: assignment length mismatch");
  DesignState ds;
  const int n = layout.num_elements();
  ds.chi.resize(n);
  ds.phi.resize(n);
  for (int k = 0; k < n; ++k) {
    ds.chi[k] = q[layout.chi_var(k)];
    if (layout.mode() == Formulation::Full) {
      const int N = layout.levelset_bits();
      std::vector<std::uint8_t> bits(N);
      for (int i = 0; i < N; ++i) bits[i] = q[layout.levelset_var(k, i)];
      ds.phi[k] = decode_levelset(bits);
    } else {
      ds.phi[k] = ds.chi[k] ? 1.0 : -1.0;
    }
  }
  return ds;
}

int count_inconsistencies(const DesignState& design) {
  if (design.chi.size() != design.phi.size())
    throw std::invalid_argument("count_inconsistencies: field size mismatch");
  int count = 0;
  for (std::size_t k = 0; k < design.chi.size(); ++k) {
    const bool fluid_phi = design.phi[k] >= 0.0;
    if (fluid_phi != (design.chi[k] != 0)) ++count;
  }
  return count;
}

}  // namespace flowopt
