#pragma once

#include <optional>
#include <string>
#include <vector>

#include "flowopt/anneal.hpp"
#include "flowopt/classical.hpp"
#include "flowopt/config.hpp"
#include "flowopt/export.hpp"

namespace flowopt {

StructuredMesh make_case_mesh(const CaseConfig& config);
std::vector<BoundarySegment> make_case_segments(const CaseConfig& config,
                                                const StructuredMesh& mesh);

/// Deterministic mapping from the per-update annealing-time budget to a
/// restart count.  Uses a fixed nominal work rate and a cost model that
/// charges each accepted flip for its neighbour-field updates; nothing is
/// measured, so identical configs give identical budgets on any machine.
int derive_restart_budget(double timeout_ms, int sweeps, int num_variables,
                          double avg_degree);

struct AnnealingRunResult {
  std::vector<HistoryRecord> history;
  DesignState design;
  FlowField flow;        // re-solved on the final design
  double objective{0.0};
  int steps{0};
  std::optional<QuboProblem> final_qubo;  // problem of the last update
};

/// Two-step loop: solve flow, build the design QUBO from the element
/// kinetic integrals, anneal, decode, repeat until the relative objective
/// change drops below epsilon or max_steps is hit.  Starts all-fluid.
/// Per-step annealer seed = config.seed XOR step index.
AnnealingRunResult run_annealing_optimization(const CaseConfig& config,
                                              QuboSolver& solver);

/// Classical baseline on the same case, with history in driver format.
struct ClassicalRunResult {
  std::vector<HistoryRecord> history;
  ClassicalResult detail;
};
ClassicalRunResult run_classical_case(const CaseConfig& config);

struct ComparisonResult {
  AnnealingRunResult annealing;
  ClassicalRunResult classical;
};
ComparisonResult compare_methods(const CaseConfig& config, QuboSolver& solver);

/// Hyperparameter sweep (annealing runs).  One or two parameter axes; the
/// grid is the cross product in row-major order; every run keeps the base
/// seed so points differ only through the swept parameters.
struct SweepSpec {
  std::string param1;
  std::vector<double> values1;
  std::string param2;  // empty = 1D sweep
  std::vector<double> values2;
};
struct SweepPoint {
  double value1{0.0};
  double value2{0.0};
  AnnealingRunResult result;
};
std::vector<SweepPoint> run_sweep(const CaseConfig& config, const SweepSpec& spec,
                                  QuboSolver& solver);

/// Applies a named hyperparameter ("lambda_dis", "lambda_reg", "lambda_vol",
/// "lambda_char", "timeout_ms", "inlet_peak") to a config copy.
CaseConfig with_parameter(const CaseConfig& config, const std::string& name,
                          double value);

/// Writes history CSVs, design VTKs, the resolved config echo, the final
/// QUBO, and (for compare) a summary table into `out_dir`.
void export_run(const CaseConfig& config, const AnnealingRunResult& run,
                const std::string& out_dir);
void export_compare(const CaseConfig& config, const ComparisonResult& cmp,
                    const std::string& out_dir);
void export_sweep(const CaseConfig& config, const SweepSpec& spec,
                  const std::vector<SweepPoint>& points,
                  const std::string& out_dir);

}  // namespace flowopt
