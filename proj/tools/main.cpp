// Command-line driver: run / sweep / compare / validate over the benchmark
// cases, with a flat key=value config file and per-flag overrides.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "flowopt/pipeline.hpp"

namespace {

std::vector<double> parse_value_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stod(tok));
  }
  if (out.empty()) throw std::invalid_argument("empty value list: " + csv);
  return out;
}

struct CommonArgs {
  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string backend;
};

flowopt::CaseConfig resolve_config(const CommonArgs& args) {
  flowopt::CaseConfig cfg =
      args.config_path.empty()
          ? flowopt::default_case_config(flowopt::CaseKind::Diffuser)
          : flowopt::load_config(args.config_path);
  if (args.seed_set) cfg.seed = args.seed;
  if (!args.backend.empty()) cfg.backend = args.backend;
  return cfg;
}

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "path to a key=value config file");
  cmd->add_option("--out", args.out_dir, "output directory");
  cmd->add_option("--seed", args.seed, "master RNG seed override");
  cmd->add_option("--backend", args.backend, "QUBO solver backend (local-sa)");
}

int do_validate() {
  using namespace flowopt;
  int failures = 0;
  auto report = [&](const char* what, bool ok, const std::string& detail) {
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << what;
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << "\n";
    if (!ok) ++failures;
  };

  {  // Open straight channel reproduces plane Poiseuille flow exactly.
    StructuredMesh mesh(16, 16, 1.0, 1.0);
    std::vector<BoundarySegment> segs{
        {Side::Left, 0.0, 1.0, SegmentKind::Inlet, 1.0},
        {Side::Right, 0.0, 1.0, SegmentKind::Outlet, 1.0}};
    auto resistance = ResistanceField::uniform(mesh, 0.0);
    FlowField flow = solve_flow(mesh, segs, resistance, {});
    double err2 = 0.0, ref2 = 0.0;
    for (int node = 0; node < mesh.num_velocity_nodes(); ++node) {
      auto [x, y] = mesh.velocity_node_coords(node);
      (void)x;
      const double ux = 4.0 * y * (1.0 - y);
      const double dx = flow.velocity[2 * node] - ux;
      const double dy = flow.velocity[2 * node + 1];
      err2 += dx * dx + dy * dy;
      ref2 += ux * ux;
    }
    const double rel = std::sqrt(err2 / ref2);
    const double J = dissipation_energy(mesh, flow, resistance, 1.0);
    const double j_err = std::abs(J - 16.0 / 3.0) / (16.0 / 3.0);
    report("poiseuille velocity", rel <= 1e-10,
           "rel L2 err " + std::to_string(rel));
    report("poiseuille dissipation", j_err <= 1e-9,
           "rel err " + std::to_string(j_err));
  }

  {  // Benchmark boundary sets carry zero net flux.
    StructuredMesh diff(32, 32, 32.0, 32.0);
    StructuredMesh dp(48, 32, 48.0, 32.0);
    const double f1 = net_prescribed_flux(
        tag_benchmark_boundaries(diff, BenchmarkCase::Diffuser, 1.0));
    const double f2 = net_prescribed_flux(
        tag_benchmark_boundaries(dp, BenchmarkCase::DoublePipe, 1.0));
    report("diffuser flux balance", std::abs(f1) <= 1e-12, "");
    report("double pipe flux balance", std::abs(f2) <= 1e-12, "");
  }

  {  // Annealer matches exhaustive enumeration on small random problems.
    SimulatedAnnealer sa;
    AnnealConfig acfg;
    acfg.sweeps = 200;
    acfg.restarts = 8;
    std::uint64_t state = 0xC0FFEE;
    auto next = [&] {
      state ^= state << 13;
      state ^= state >> 7;
      state ^= state << 17;
      return state;
    };
    int ok = 0;
    const int trials = 20;
    for (int t = 0; t < trials; ++t) {
      QuboProblem p(10);
      for (int i = 0; i < 10; ++i)
        for (int j = i; j < 10; ++j) {
          const double c = static_cast<double>(next() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
          if (i == j)
            p.add_linear(i, c);
          else
            p.add_quadratic(i, j, c);
        }
      acfg.seed = t;
      const auto exact = brute_force_min(p);
      const auto found = sa.solve(p, acfg);
      if (std::abs(found.energy - exact.energy) <= 1e-12) ++ok;
    }
    report("annealer optimality", ok == trials,
           std::to_string(ok) + "/" + std::to_string(trials));
  }

  std::cout << (failures == 0 ? "validation passed" : "validation FAILED")
            << "\n";
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"topology optimization of flow channels with an annealing design update"};
  app.require_subcommand(1);

  CommonArgs run_args, sweep_args, compare_args;
  std::string param1, param2, values1, values2;

  auto* cmd_run = app.add_subcommand("run", "single annealing optimization run");
  add_common(cmd_run, run_args);
  auto* cmd_sweep = app.add_subcommand("sweep", "hyperparameter sweep (1D or 2D grid)");
  add_common(cmd_sweep, sweep_args);
  cmd_sweep->add_option("--param", param1, "first parameter name")->required();
  cmd_sweep->add_option("--values", values1, "comma-separated values")->required();
  cmd_sweep->add_option("--param2", param2, "optional second parameter name");
  cmd_sweep->add_option("--values2", values2, "comma-separated second values");
  auto* cmd_compare =
      app.add_subcommand("compare", "annealing vs classical density baseline");
  add_common(cmd_compare, compare_args);
  auto* cmd_validate =
      app.add_subcommand("validate", "quick solver and oracle self-checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*cmd_validate) return do_validate();

    if (*cmd_run) {
      run_args.seed_set = cmd_run->count("--seed") > 0;
      const auto cfg = resolve_config(run_args);
      auto solver = flowopt::make_backend(cfg.backend);
      const auto result = flowopt::run_annealing_optimization(cfg, *solver);
      flowopt::export_run(cfg, result, run_args.out_dir);
      std::cout << "steps " << result.steps << "  J " << result.objective
                << "  outputs in " << run_args.out_dir << "\n";
      return 0;
    }
    if (*cmd_compare) {
      compare_args.seed_set = cmd_compare->count("--seed") > 0;
      const auto cfg = resolve_config(compare_args);
      auto solver = flowopt::make_backend(cfg.backend);
      const auto cmp = flowopt::compare_methods(cfg, *solver);
      flowopt::export_compare(cfg, cmp, compare_args.out_dir);
      std::cout << "classical steps " << cmp.classical.detail.steps << "  J "
                << cmp.classical.detail.objective_filtered << "\n"
                << "annealing steps " << cmp.annealing.steps << "  J "
                << cmp.annealing.objective << "\n"
                << "outputs in " << compare_args.out_dir << "\n";
      return 0;
    }
    if (*cmd_sweep) {
      sweep_args.seed_set = cmd_sweep->count("--seed") > 0;
      const auto cfg = resolve_config(sweep_args);
      auto solver = flowopt::make_backend(cfg.backend);
      flowopt::SweepSpec spec;
      spec.param1 = param1;
      spec.values1 = parse_value_list(values1);
      if (!param2.empty()) {
        spec.param2 = param2;
        spec.values2 = parse_value_list(values2);
      }
      const auto points = flowopt::run_sweep(cfg, spec, *solver);
      flowopt::export_sweep(cfg, spec, points, sweep_args.out_dir);
      std::cout << points.size() << " sweep runs, outputs in "
                << sweep_args.out_dir << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
