#include "flowopt/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace flowopt {

StructuredMesh make_case_mesh(const CaseConfig& config) {
  return StructuredMesh(config.nx, config.ny, config.resolved_width(),
                        config.resolved_height());
}

std::vector<BoundarySegment> make_case_segments(const CaseConfig& config,
                                                const StructuredMesh& mesh) {
  const BenchmarkCase bc = config.kind == CaseKind::Diffuser
                               ? BenchmarkCase::Diffuser
                               : BenchmarkCase::DoublePipe;
  return tag_benchmark_boundaries(mesh, bc, config.inlet_peak);
}

int derive_restart_budget(double timeout_ms, int sweeps, int num_variables,
                          double avg_degree) {
  // Cost model: each proposal is one unit and each accepted flip updates
  // every neighbour field, at a nominal 25% average acceptance.  The rate
  // constant is fixed, never measured, so identical configs give identical
  // budgets on any machine.
  const double units = timeout_ms * 2e6;
  const double per_restart = static_cast<double>(sweeps) *
                             std::max(1, num_variables) *
                             (1.0 + 0.25 * std::max(0.0, avg_degree));
  const double r = units / per_restart;
  return static_cast<int>(std::clamp(r, 2.0, 256.0));
}

namespace {

std::vector<std::uint8_t> all_fluid(int n) {
  return std::vector<std::uint8_t>(static_cast<std::size_t>(n), 1);
}

Assignment initial_assignment(const VariableLayout& layout) {
  // All-fluid start: chi = 1 everywhere and, in the full formulation, all
  // level-set bits set (phi = +1), which is self-consistent.
  return Assignment(static_cast<std::size_t>(layout.num_variables()), 1);
}

QuboHyperparams hyperparams_for(const CaseConfig& cfg, double v_max) {
  QuboHyperparams hp;
  hp.lambda_dis = cfg.lambda_dis;
  hp.lambda_reg = cfg.lambda_reg;
  hp.lambda_vol = cfg.lambda_vol;
  hp.lambda_char = cfg.lambda_char;
  hp.levelset_bits = cfg.levelset_bits;
  hp.alpha_max = cfg.alpha_max;
  hp.v_max = v_max;
  return hp;
}

}  // namespace

AnnealingRunResult run_annealing_optimization(const CaseConfig& config,
                                              QuboSolver& solver) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto wall_ms = [&] {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - t0)
        .count();
  };

  const StructuredMesh mesh = make_case_mesh(config);
  const auto segments = make_case_segments(config, mesh);
  const int n = mesh.num_elements();
  const double v_elem = mesh.element_volume();
  const std::vector<double> volumes(static_cast<std::size_t>(n), v_elem);
  const double v_max = config.vmax_fraction * mesh.domain_volume();
  const QuboHyperparams hp = hyperparams_for(config, v_max);
  const VariableLayout layout(config.formulation, n, config.levelset_bits);
  const StokesOptions sopt{config.viscosity, config.outlet};

  AnnealingRunResult res;
  Assignment q = initial_assignment(layout);
  DesignState design = decode(q, layout);
  ResistanceField resistance =
      ResistanceField::from_indicator(design.chi, config.alpha_max);
  FlowField flow = solve_flow(mesh, segments, resistance, sopt);
  double j_prev = dissipation_energy(mesh, flow, resistance, config.viscosity);

  for (int step = 1; step <= config.max_steps; ++step) {
    QuboProblem problem =
        config.formulation == Formulation::Full
            ? build_full(flow.element_kinetic, mesh, volumes, layout, hp)
            : build_condensed(flow.element_kinetic, volumes, layout, hp);

    AnnealConfig acfg;
    acfg.seed = config.seed ^ static_cast<std::uint64_t>(step);
    acfg.sweeps = config.sweeps;
    const double avg_degree = 2.0 * problem.num_quadratic_terms() /
                              std::max(1, layout.num_variables());
    acfg.restarts = config.restarts > 0
                        ? config.restarts
                        : derive_restart_budget(config.timeout_ms, config.sweeps,
                                                layout.num_variables(),
                                                avg_degree);
    acfg.timeout_ms = 0.0;  // budget is restart-count driven
    acfg.threads = config.threads;
    const SolveResult sr = solver.solve(problem, acfg, &q);

    q = sr.assignment;
    design = decode(q, layout);
    resistance = ResistanceField::from_indicator(design.chi, config.alpha_max);
    flow = solve_flow(mesh, segments, resistance, sopt);
    const double j = dissipation_energy(mesh, flow, resistance, config.viscosity);

    HistoryRecord rec;
    rec.step = step;
    rec.objective = j;
    rec.volume_fraction = design.fluid_volume(v_elem) / mesh.domain_volume();
    rec.inconsistencies =
        config.formulation == Formulation::Full ? count_inconsistencies(design) : 0;
    rec.qubo_energy = sr.energy;
    rec.wall_ms = config.record_walltime ? wall_ms() : 0.0;
    res.history.push_back(rec);
    res.steps = step;

    const bool converged = std::abs(j - j_prev) < config.epsilon * std::abs(j_prev);
    j_prev = j;
    if (converged || step == config.max_steps) {
      res.final_qubo = std::move(problem);
      break;
    }
  }

  res.design = std::move(design);
  res.flow = std::move(flow);
  res.objective = j_prev;
  return res;
}

ClassicalRunResult run_classical_case(const CaseConfig& config) {
  const StructuredMesh mesh = make_case_mesh(config);
  const auto segments = make_case_segments(config, mesh);
  ClassicalParams params;
  params.viscosity = config.viscosity;
  params.alpha_max = config.alpha_max;
  params.q_penalty = config.q_penalty;
  params.vmax_fraction = config.vmax_fraction;
  params.epsilon = config.epsilon;
  params.max_steps = config.classical_max_steps;
  params.move_limit = config.move_limit;
  params.eta = config.oc_eta;
  params.filter_threshold = config.filter_threshold;
  params.outlet = config.outlet;

  ClassicalRunResult out;
  out.detail = run_classical(mesh, segments, params);
  int step = 0;
  for (const auto& s : out.detail.history) {
    HistoryRecord rec;
    rec.step = ++step;
    rec.objective = s.objective;
    rec.volume_fraction = s.volume_fraction;
    rec.inconsistencies = 0;
    rec.qubo_energy = 0.0;
    rec.wall_ms = config.record_walltime ? s.wall_ms : 0.0;
    out.history.push_back(rec);
  }
  return out;
}

ComparisonResult compare_methods(const CaseConfig& config, QuboSolver& solver) {
  ComparisonResult cmp{run_annealing_optimization(config, solver),
                       run_classical_case(config)};
  return cmp;
}

CaseConfig with_parameter(const CaseConfig& config, const std::string& name,
                          double value) {
  CaseConfig c = config;
  if (name == "lambda_dis")
    c.lambda_dis = value;
  else if (name == "lambda_reg")
    c.lambda_reg = value;
  else if (name == "lambda_vol")
    c.lambda_vol = value;
  else if (name == "lambda_char")
    c.lambda_char = value;
  else if (name == "timeout_ms")
    c.timeout_ms = value;
  else if (name == "inlet_peak")
    c.inlet_peak = value;
  else
    throw std::invalid_argument("unknown sweep parameter: " + name);
  return c;
}

std::vector<SweepPoint> run_sweep(const CaseConfig& config, const SweepSpec& spec,
                                  QuboSolver& solver) {
  if (spec.values1.empty())
    throw std::invalid_argument("run_sweep: empty value list");
  const bool two_d = !spec.param2.empty();
  if (two_d && spec.values2.empty())
    throw std::invalid_argument("run_sweep: empty second value list");

  std::vector<SweepPoint> points;
  for (double v1 : spec.values1) {
    const std::vector<double> inner =
        two_d ? spec.values2 : std::vector<double>{0.0};
    for (double v2 : inner) {
      // Every point keeps the base seed so differences between points come
      // from the swept parameter alone, never from the random stream.
      CaseConfig c = with_parameter(config, spec.param1, v1);
      if (two_d) c = with_parameter(c, spec.param2, v2);
      SweepPoint pt;
      pt.value1 = v1;
      pt.value2 = v2;
      pt.result = run_annealing_optimization(c, solver);
      points.push_back(std::move(pt));
    }
  }
  return points;
}

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << text;
}

void export_final_qubo(const AnnealingRunResult& run, const std::string& path) {
  if (!run.final_qubo) return;
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  write_coordinate_format(*run.final_qubo, os);
}

}  // namespace

void export_run(const CaseConfig& config, const AnnealingRunResult& run,
                const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  write_text(out_dir + "/config.txt", serialize_config(config));
  write_history_csv(run.history, out_dir + "/history.csv");
  const ResistanceField resistance =
      ResistanceField::from_indicator(run.design.chi, config.alpha_max);
  const StructuredMesh mesh = make_case_mesh(config);
  write_design_vtk(mesh, run.design, resistance, run.flow,
                   out_dir + "/design.vtk");
  export_final_qubo(run, out_dir + "/qubo.txt");
}

void export_compare(const CaseConfig& config, const ComparisonResult& cmp,
                    const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  write_text(out_dir + "/config.txt", serialize_config(config));
  write_history_csv(cmp.annealing.history, out_dir + "/annealing_history.csv");
  write_history_csv(cmp.classical.history, out_dir + "/classical_history.csv");

  const StructuredMesh mesh = make_case_mesh(config);
  const ResistanceField ra =
      ResistanceField::from_indicator(cmp.annealing.design.chi, config.alpha_max);
  write_design_vtk(mesh, cmp.annealing.design, ra, cmp.annealing.flow,
                   out_dir + "/annealing_design.vtk");
  const ResistanceField rc = ResistanceField::from_indicator(
      cmp.classical.detail.filtered.chi, config.alpha_max);
  write_design_vtk(mesh, cmp.classical.detail.filtered, rc,
                   cmp.classical.detail.flow, out_dir + "/classical_design.vtk");
  export_final_qubo(cmp.annealing, out_dir + "/qubo.txt");

  const double jc = cmp.classical.detail.objective_filtered;
  const double ja = cmp.annealing.objective;
  std::ostringstream os;
  os << "quantity,classical,annealing,relative_difference\n";
  os << "steps," << cmp.classical.detail.steps << "," << cmp.annealing.steps
     << "," << fmt(cmp.classical.detail.steps > 0
                       ? (cmp.annealing.steps - cmp.classical.detail.steps) /
                             static_cast<double>(cmp.classical.detail.steps)
                       : 0.0)
     << "\n";
  os << "objective," << fmt(jc) << "," << fmt(ja) << ","
     << fmt(jc != 0.0 ? (ja - jc) / jc : 0.0) << "\n";
  double vfc = 0.0, vfa = 0.0;
  {
    const double v_elem = mesh.element_volume();
    vfc = cmp.classical.detail.filtered.fluid_volume(v_elem) / mesh.domain_volume();
    vfa = cmp.annealing.design.fluid_volume(v_elem) / mesh.domain_volume();
  }
  os << "volume_fraction," << fmt(vfc) << "," << fmt(vfa) << ","
     << fmt(vfc != 0.0 ? (vfa - vfc) / vfc : 0.0) << "\n";
  write_text(out_dir + "/comparison.csv", os.str());
}

void export_sweep(const CaseConfig& config, const SweepSpec& spec,
                  const std::vector<SweepPoint>& points,
                  const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  write_text(out_dir + "/config.txt", serialize_config(config));
  std::ostringstream os;
  os << spec.param1 << (spec.param2.empty() ? "" : "," + spec.param2)
     << ",steps,J,volume_fraction,inconsistencies\n";
  const StructuredMesh mesh = make_case_mesh(config);
  const double v_elem = mesh.element_volume();
  int idx = 0;
  for (const auto& pt : points) {
    os << fmt(pt.value1);
    if (!spec.param2.empty()) os << "," << fmt(pt.value2);
    os << "," << pt.result.steps << "," << fmt(pt.result.objective) << ","
       << fmt(pt.result.design.fluid_volume(v_elem) / mesh.domain_volume())
       << "," << count_inconsistencies(pt.result.design) << "\n";

    std::ostringstream sub;
    sub << out_dir << "/" << spec.param1 << "=" << fmt(pt.value1);
    if (!spec.param2.empty()) sub << "_" << spec.param2 << "=" << fmt(pt.value2);
    (void)idx;
    std::filesystem::create_directories(sub.str());
    write_history_csv(pt.result.history, sub.str() + "/history.csv");
    const ResistanceField r =
        ResistanceField::from_indicator(pt.result.design.chi, config.alpha_max);
    write_design_vtk(mesh, pt.result.design, r, pt.result.flow,
                     sub.str() + "/design.vtk");
    ++idx;
  }
  write_text(out_dir + "/sweep_summary.csv", os.str());
}

}  // namespace flowopt
