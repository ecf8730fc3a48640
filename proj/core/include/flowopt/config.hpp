#pragma once

#include <cstdint>
#include <string>

#include "flowopt/encoding.hpp"
#include "flowopt/stokes.hpp"

namespace flowopt {

enum class CaseKind { Diffuser, DoublePipe };

/// Everything a run needs; parsed from a flat "key = value" config file.
/// Benchmark domains default to unit-square elements (width = nx, height =
/// ny length units) so the published hyperparameter values apply unchanged.
struct CaseConfig {
  CaseKind kind{CaseKind::Diffuser};
  int nx{32};
  int ny{32};
  double width{0.0};   // 0 = nx * 1.0
  double height{0.0};  // 0 = ny * 1.0
  double viscosity{1.0};
  double alpha_max{12.5};
  double inlet_peak{0.03125};  // benchmark profile peak velocity
  OutletTreatment outlet{OutletTreatment::Prescribed};

  Formulation formulation{Formulation::Condensed};
  double vmax_fraction{0.5};
  double lambda_dis{100.0};
  double lambda_reg{1.0};
  double lambda_vol{0.2};
  double lambda_char{1.0};
  int levelset_bits{8};

  double epsilon{1e-3};
  int max_steps{50};
  std::uint64_t seed{42};
  double timeout_ms{1000.0};  // per-update annealing budget analog
  int sweeps{300};
  int restarts{0};  // 0 = derive from timeout_ms (deterministic model)
  int threads{1};
  bool record_walltime{true};
  std::string backend{"local-sa"};

  double q_penalty{0.1};
  double move_limit{0.2};
  double oc_eta{0.5};
  int classical_max_steps{200};
  double filter_threshold{0.95};

  double resolved_width() const { return width > 0.0 ? width : nx * 1.0; }
  double resolved_height() const { return height > 0.0 ? height : ny * 1.0; }
};

/// Per-case defaults (mesh size, volume bound, lambda_vol, budget).
CaseConfig default_case_config(CaseKind kind);

/// Parses "key = value" lines ('#' comments).  The `case` key picks the
/// defaults; every other key overrides one field.  Unknown keys throw.
CaseConfig load_config(const std::string& path);
CaseConfig parse_config(const std::string& text);

/// Canonical round-trippable serialization (sorted keys).
std::string serialize_config(const CaseConfig& config);

std::string to_string(CaseKind kind);
std::string to_string(Formulation mode);
std::string to_string(OutletTreatment outlet);

}  // namespace flowopt
