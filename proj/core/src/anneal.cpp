#include "flowopt/anneal.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstring>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

namespace flowopt {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Small deterministic xorshift-style generator so results do not depend on
/// standard-library distribution internals.
struct Rng {
  std::uint64_t s;
  explicit Rng(std::uint64_t seed) : s(seed ? seed : 0x1234567887654321ULL) {}
  std::uint64_t next() {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    return s;
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

/// Flat symmetric adjacency of the quadratic terms.
struct Adjacency {
  std::vector<int> offset;   // size n+1
  std::vector<int> nbr;
  std::vector<double> coeff;
};

Adjacency build_adjacency(const QuboProblem& p) {
  const int n = p.num_variables();
  Adjacency adj;
  adj.offset.assign(n + 1, 0);
  for (const auto& [ij, c] : p.quadratic()) {
    (void)c;
    ++adj.offset[ij.first + 1];
    ++adj.offset[ij.second + 1];
  }
  for (int i = 0; i < n; ++i) adj.offset[i + 1] += adj.offset[i];
  adj.nbr.resize(adj.offset[n]);
  adj.coeff.resize(adj.offset[n]);
  std::vector<int> cursor(adj.offset.begin(), adj.offset.end() - 1);
  for (const auto& [ij, c] : p.quadratic()) {
    adj.nbr[cursor[ij.first]] = ij.second;
    adj.coeff[cursor[ij.first]++] = c;
    adj.nbr[cursor[ij.second]] = ij.first;
    adj.coeff[cursor[ij.second]++] = c;
  }
  return adj;
}

/// Local fields h_i = linear_i + sum_j c_ij q_j; flipping i changes the
/// energy by (1 - 2 q_i) h_i.
void compute_fields(const QuboProblem& p, const Adjacency& adj,
                    const Assignment& q, std::vector<double>& h) {
  const int n = p.num_variables();
  h.assign(p.linear().begin(), p.linear().end());
  for (int i = 0; i < n; ++i) {
    if (!q[i]) continue;
    for (int t = adj.offset[i]; t < adj.offset[i + 1]; ++t)
      h[adj.nbr[t]] += adj.coeff[t];
  }
}

struct RestartOutcome {
  Assignment best;
  double energy{0.0};
};

void apply_flip(const Adjacency& adj, Assignment& q, std::vector<double>& h,
                int i) {
  const double delta = q[i] ? -1.0 : 1.0;
  q[i] = static_cast<std::uint8_t>(1 - q[i]);
  for (int t = adj.offset[i]; t < adj.offset[i + 1]; ++t)
    h[adj.nbr[t]] += delta * adj.coeff[t];
}

/// Deterministic steepest descent: repeatedly flips the variable with the
/// most negative single-flip energy change until none is improving.  Taking
/// the best flip (not the first) matters: it peels off the least valuable
/// contributions first instead of following index order.
///
/// With pair_moves set, once no single flip improves, the best improving
/// coupled pair flip is applied as well.  Pair moves cross penalty shells a
/// single flip cannot, e.g. exchanging one element in and one out under a
/// quadratic volume constraint where any lone flip costs the penalty weight.
/// Lowest indices win exact ties, energy strictly decreases, and a move
/// budget guards against rounding cycles, so the walk terminates.
RestartOutcome polish(const QuboProblem& p, const Adjacency& adj, Assignment q,
                      bool pair_moves) {
  const int n = p.num_variables();
  std::vector<double> h;
  compute_fields(p, adj, q, h);
  long guard = 0;
  const long max_moves = 60L * n + 1000;
  const auto single_descent = [&] {
    while (guard++ < max_moves) {
      int best_i = -1;
      double best_de = 0.0;
      for (int i = 0; i < n; ++i) {
        const double de = (q[i] ? -1.0 : 1.0) * h[i];
        if (de < best_de) {
          best_de = de;
          best_i = i;
        }
      }
      if (best_i < 0) break;
      apply_flip(adj, q, h, best_i);
    }
  };
  single_descent();
  while (pair_moves && guard++ < max_moves) {
    int best_i = -1, best_j = -1;
    double best_de = 0.0;
    for (int i = 0; i < n; ++i) {
      const double si = q[i] ? -1.0 : 1.0;
      const double di = si * h[i];
      for (int t = adj.offset[i]; t < adj.offset[i + 1]; ++t) {
        const int j = adj.nbr[t];
        if (j <= i) continue;
        const double sj = q[j] ? -1.0 : 1.0;
        const double de = di + sj * h[j] + si * sj * adj.coeff[t];
        if (de < best_de) {
          best_de = de;
          best_i = i;
          best_j = j;
        }
      }
    }
    if (best_i < 0) break;
    apply_flip(adj, q, h, best_i);
    apply_flip(adj, q, h, best_j);
    single_descent();
  }
  const double e_exact = p.energy(q);
  return {std::move(q), e_exact};
}

RestartOutcome anneal_once(const QuboProblem& p, const Adjacency& adj,
                           std::uint64_t stream_seed, int sweeps, double t_init,
                           double t_final) {
  const int n = p.num_variables();
  Rng rng(stream_seed);
  Assignment q(n);
  for (int i = 0; i < n; ++i) q[i] = static_cast<std::uint8_t>(rng.next() & 1);
  std::vector<double> h;
  compute_fields(p, adj, q, h);
  double e_cur = p.energy(q);
  Assignment best = q;
  double e_best = e_cur;

  const double ratio =
      (sweeps > 1) ? std::pow(t_final / t_init, 1.0 / (sweeps - 1)) : 1.0;
  double temp = t_init;
  for (int s = 0; s < sweeps; ++s) {
    for (int i = 0; i < n; ++i) {
      const double de = (q[i] ? -1.0 : 1.0) * h[i];
      bool accept;
      if (de <= 0.0) {
        accept = true;
      } else if (de > 40.0 * temp) {
        accept = false;  // exp(-40) is below the RNG resolution
      } else {
        accept = rng.uniform() < std::exp(-de / temp);
      }
      if (accept) {
        apply_flip(adj, q, h, i);
        e_cur += de;
        if (e_cur < e_best) {
          e_best = e_cur;
          best = q;
        }
      }
    }
    temp *= ratio;
  }
  // Quench the best visited state to its single-flip local minimum; this
  // also replaces the rounding-prone incremental energy with an exact
  // recomputation.  Pair moves stay off here to keep restarts cheap.
  return polish(p, adj, std::move(best), /*pair_moves=*/false);
}

}  // namespace

std::pair<double, double> default_temperature_schedule(const QuboProblem& p) {
  const int n = p.num_variables();
  if (n == 0) return {1.0, 1e-3};

  std::vector<double> mags;
  mags.reserve(n + p.num_quadratic_terms());
  for (double c : p.linear())
    if (c != 0.0) mags.push_back(std::abs(c));
  for (const auto& [ij, c] : p.quadratic()) {
    (void)ij;
    if (c != 0.0) mags.push_back(std::abs(c));
  }
  if (mags.empty()) return {1.0, 1e-3};

  const Adjacency adj = build_adjacency(p);
  Rng rng(0xF1CA57A75EEDULL);
  double max_de = 0.0;
  std::vector<double> h;
  Assignment q(n);
  const int probes = 32;
  for (int r = 0; r < probes; ++r) {
    for (int i = 0; i < n; ++i) q[i] = static_cast<std::uint8_t>(rng.next() & 1);
    compute_fields(p, adj, q, h);
    for (int i = 0; i < n; ++i) max_de = std::max(max_de, std::abs(h[i]));
  }
  double t_init = max_de > 0.0 ? max_de : 1.0;

  const std::size_t mid = mags.size() / 2;
  std::nth_element(mags.begin(), mags.begin() + mid, mags.end());
  double t_final = 1e-3 * mags[mid];
  if (!(t_final > 0.0) || t_final >= t_init) t_final = 1e-3 * t_init;
  return {t_init, t_final};
}

SolveResult SimulatedAnnealer::solve(const QuboProblem& problem,
                                     const AnnealConfig& config,
                                     const Assignment* hint) {
  const auto start = std::chrono::steady_clock::now();
  const int n = problem.num_variables();
  if (n == 0) return {Assignment{}, problem.offset(), 0, 0.0};
  if (config.sweeps < 1)
    throw std::invalid_argument("SimulatedAnnealer: sweeps must be >= 1");
  if (config.restarts == 0 && !(config.timeout_ms > 0.0))
    throw std::invalid_argument(
        "SimulatedAnnealer: restarts == 0 requires a positive timeout");
  if (hint && static_cast<int>(hint->size()) != n)
    throw std::invalid_argument("SimulatedAnnealer: hint length mismatch");

  const Adjacency adj = build_adjacency(problem);
  double t_init = config.t_initial, t_final = config.t_final;
  if (!(t_init > 0.0) || !(t_final > 0.0)) {
    auto [ti, tf] = default_temperature_schedule(problem);
    if (!(t_init > 0.0)) t_init = ti;
    if (!(t_final > 0.0) || t_final >= t_init) t_final = tf;
  }

  const auto elapsed_ms = [&] {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start)
        .count();
  };
  const auto time_up = [&] {
    return config.timeout_ms > 0.0 && elapsed_ms() >= config.timeout_ms;
  };

  std::optional<RestartOutcome> polished;
  if (hint) polished = polish(problem, adj, *hint, /*pair_moves=*/true);

  std::vector<std::optional<RestartOutcome>> slots;
  int completed = 0;
  if (config.restarts == 0) {
    // Open-ended: sequential restarts until the clock runs out (at least one).
    int r = 0;
    do {
      slots.emplace_back(anneal_once(problem, adj,
                                     splitmix64(config.seed + 0x9E37uLL * r),
                                     config.sweeps, t_init, t_final));
      ++r;
    } while (!time_up());
    completed = r;
  } else {
    const int R = config.restarts;
    slots.assign(R, std::nullopt);
    int threads = config.threads;
    if (threads == 0)
      threads = static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min(threads, R));
    std::atomic<int> ticket{0};
    auto worker = [&] {
      for (;;) {
        const int r = ticket.fetch_add(1);
        if (r >= R || time_up()) break;
        slots[r] = anneal_once(problem, adj,
                               splitmix64(config.seed + 0x9E37uLL * r),
                               config.sweeps, t_init, t_final);
      }
    };
    if (threads == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      pool.reserve(threads);
      for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
    }
    for (const auto& s : slots)
      if (s) ++completed;
  }

  // Merge in slot order; ties go to the lowest-integer assignment.
  std::optional<RestartOutcome> best;
  if (polished) best = polished;
  for (auto& s : slots) {
    if (!s) continue;
    if (!best || s->energy < best->energy ||
        (s->energy == best->energy && assignment_less(s->best, best->best))) {
      best = std::move(s);
    }
  }
  SolveResult out;
  out.assignment = std::move(best->best);
  out.energy = best->energy;
  out.restarts_completed = completed + (polished ? 1 : 0);
  out.elapsed_ms = elapsed_ms();
  return out;
}

std::unique_ptr<QuboSolver> make_backend(std::string_view name) {
  if (name == "local-sa") return std::make_unique<SimulatedAnnealer>();
  throw std::invalid_argument("unknown QUBO backend: " + std::string(name));
}

}  // namespace flowopt
