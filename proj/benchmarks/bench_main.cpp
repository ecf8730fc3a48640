// Microbenchmarks for the hot paths: flow solves, QUBO construction, and
// annealer throughput.

#include <benchmark/benchmark.h>

#include "flowopt/anneal.hpp"
#include "flowopt/encoding.hpp"
#include "flowopt/mesh.hpp"
#include "flowopt/stokes.hpp"

namespace {

using namespace flowopt;

void BM_FlowSolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const StructuredMesh mesh(n, n, static_cast<double>(n), static_cast<double>(n));
  const auto segs =
      tag_benchmark_boundaries(mesh, BenchmarkCase::Diffuser, 1.0 / n);
  const auto resistance = ResistanceField::uniform(mesh, 0.0);
  for (auto _ : state) {
    FlowField flow = solve_flow(mesh, segs, resistance);
    benchmark::DoNotOptimize(flow.velocity.data());
  }
  state.SetLabel(std::to_string(mesh.num_velocity_nodes() * 2 +
                                mesh.num_pressure_nodes()) +
                 " dofs");
}
BENCHMARK(BM_FlowSolve)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_BuildCondensed(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const StructuredMesh mesh(n, n, static_cast<double>(n), static_cast<double>(n));
  const int cells = mesh.num_elements();
  std::vector<double> d(cells, 0.01), v(cells, 1.0);
  QuboHyperparams hp;
  hp.v_max = 0.5 * cells;
  const VariableLayout layout(Formulation::Condensed, cells, hp.levelset_bits);
  for (auto _ : state) {
    QuboProblem p = build_condensed(d, v, layout, hp);
    benchmark::DoNotOptimize(p.num_variables());
  }
}
BENCHMARK(BM_BuildCondensed)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_BuildFull(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const StructuredMesh mesh(n, n, static_cast<double>(n), static_cast<double>(n));
  const int cells = mesh.num_elements();
  std::vector<double> d(cells, 0.01), v(cells, 1.0);
  QuboHyperparams hp;
  hp.v_max = 0.5 * cells;
  const VariableLayout layout(Formulation::Full, cells, hp.levelset_bits);
  for (auto _ : state) {
    QuboProblem p = build_full(d, mesh, v, layout, hp);
    benchmark::DoNotOptimize(p.num_variables());
  }
}
BENCHMARK(BM_BuildFull)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_AnnealRestart(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const StructuredMesh mesh(n, n, static_cast<double>(n), static_cast<double>(n));
  const int cells = mesh.num_elements();
  std::vector<double> d(cells), v(cells, 1.0);
  for (int k = 0; k < cells; ++k) d[k] = 1e-3 * (k % 17);
  QuboHyperparams hp;
  hp.v_max = 0.5 * cells;
  const VariableLayout layout(Formulation::Condensed, cells, hp.levelset_bits);
  const QuboProblem p = build_condensed(d, v, layout, hp);
  SimulatedAnnealer annealer;
  AnnealConfig cfg;
  cfg.sweeps = 100;
  cfg.restarts = 2;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    cfg.seed = seed++;
    const SolveResult r = annealer.solve(p, cfg);
    benchmark::DoNotOptimize(r.energy);
  }
  state.SetLabel(std::to_string(cells) + " vars");
}
BENCHMARK(BM_AnnealRestart)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
