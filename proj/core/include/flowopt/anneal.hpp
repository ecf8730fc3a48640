#pragma once

#include <cstdint>
#include <memory>
#include <string_view>
#include <utility>

#include "flowopt/qubo.hpp"

namespace flowopt {

struct AnnealConfig {
  std::uint64_t seed{0};
  int sweeps{300};        // sweeps per restart; one sweep proposes every variable once
  int restarts{32};       // restart budget; 0 = run until the timeout elapses
  double timeout_ms{0.0}; // 0 = no wall-clock limit; never interrupts a restart
  double t_initial{0.0};  // <= 0: derived via default_temperature_schedule
  double t_final{0.0};
  int threads{1};         // parallel restarts; 0 = hardware concurrency
};

struct SolveResult {
  Assignment assignment;
  double energy{0.0};           // exact re-evaluation of the best assignment
  int restarts_completed{0};
  double elapsed_ms{0.0};
};

/// Pluggable QUBO solver backend.  `hint` optionally seeds one
/// descent-polish restart from a known-good assignment.
class QuboSolver {
 public:
  virtual ~QuboSolver() = default;
  virtual std::string_view name() const = 0;
  virtual SolveResult solve(const QuboProblem& problem, const AnnealConfig& config,
                            const Assignment* hint = nullptr) = 0;
};

/// Geometric cooling schedule derived from the problem: the start
/// temperature is the largest single-flip energy magnitude seen over a fixed
/// set of random probe assignments, the end temperature is 1e-3 times the
/// median nonzero coefficient magnitude.  Degenerate (all-zero) problems get
/// (1, 1e-3).
std::pair<double, double> default_temperature_schedule(const QuboProblem& problem);

/// Single-bit-flip Metropolis annealer with restarts.  Deterministic for a
/// fixed (problem, seed, sweeps, restarts) tuple at any thread count;
/// per-restart RNG streams derive from the seed and the restart index, and
/// restart results merge in index order by (energy, lowest-integer
/// assignment).
class SimulatedAnnealer final : public QuboSolver {
 public:
  std::string_view name() const override { return "local-sa"; }
  SolveResult solve(const QuboProblem& problem, const AnnealConfig& config,
                    const Assignment* hint = nullptr) override;
};

/// Backend registry; the only built-in backend is "local-sa".
std::unique_ptr<QuboSolver> make_backend(std::string_view name);

}  // namespace flowopt
