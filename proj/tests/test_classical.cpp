#include <cmath>
#include <random>

#include "doctest.h"
#include "flowopt/classical.hpp"

using namespace flowopt;

namespace {

double objective_of_density(const StructuredMesh& mesh,
                            const std::vector<BoundarySegment>& segs,
                            const DensityField& density, double q,
                            double alpha_max) {
  const ResistanceField r = resistance_from_density(density, q, alpha_max);
  const FlowField flow = solve_flow(mesh, segs, r);
  return dissipation_energy(mesh, flow, r, 1.0);
}

}  // namespace

TEST_CASE("resistance interpolation endpoints and midpoint") {
  CHECK(interpolate_alpha(0.0, 0.1, 12.5) == doctest::Approx(12.5));
  CHECK(interpolate_alpha(1.0, 0.1, 12.5) == doctest::Approx(0.0));
  // alpha(1/2) = alpha_max * q/2 / (q + 1/2) = 12.5 * 0.05 / 0.6
  CHECK(interpolate_alpha(0.5, 0.1, 12.5) == doctest::Approx(12.5 / 12.0));
  // Convex and monotonically decreasing on [0, 1].
  double prev = interpolate_alpha(0.0, 0.1, 12.5);
  for (int i = 1; i <= 10; ++i) {
    const double cur = interpolate_alpha(0.1 * i, 0.1, 12.5);
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("interpolation derivative matches finite differences") {
  const double q = 0.1, am = 12.5, h = 1e-6;
  for (double rho : {0.05, 0.3, 0.5, 0.77, 0.95}) {
    const double fd =
        (interpolate_alpha(rho + h, q, am) - interpolate_alpha(rho - h, q, am)) /
        (2.0 * h);
    CHECK(interpolate_alpha_derivative(rho, q, am) ==
          doctest::Approx(fd).epsilon(1e-7));
  }
}

TEST_CASE("objective sensitivity matches central differences") {
  const StructuredMesh mesh(4, 4, 4.0, 4.0);
  const auto segs = tag_benchmark_boundaries(mesh, BenchmarkCase::Diffuser, 0.25);
  const double q = 0.1, am = 12.5;
  DensityField density;
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> mid(0.3, 0.9);
  density.rho.resize(mesh.num_elements());
  for (auto& r : density.rho) r = mid(rng);

  const ResistanceField res = resistance_from_density(density, q, am);
  const FlowField flow = solve_flow(mesh, segs, res);
  const auto sens = sensitivity(flow.element_kinetic, density, q, am);
  REQUIRE(static_cast<int>(sens.size()) == mesh.num_elements());

  const double h = 1e-5;
  for (int k = 0; k < mesh.num_elements(); ++k) {
    CHECK(sens[k] <= 0.0);  // opening an element never hurts
    DensityField up = density, down = density;
    up.rho[k] += h;
    down.rho[k] -= h;
    const double fd = (objective_of_density(mesh, segs, up, q, am) -
                       objective_of_density(mesh, segs, down, q, am)) /
                      (2.0 * h);
    CHECK(sens[k] == doctest::Approx(fd).epsilon(1e-4));
  }
}

TEST_CASE("optimality-criteria update hits the volume target") {
  OcParams params;
  params.v_max = 6.0;
  params.v_elem = 1.0;
  DensityField density;
  density.rho.assign(12, 0.7);
  std::vector<double> sens(12);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> neg(-2.0, -0.1);
  for (auto& s : sens) s = neg(rng);

  const DensityField next = oc_update(density, sens, params);
  double volume = 0.0;
  for (int k = 0; k < 12; ++k) {
    CHECK(next.rho[k] >= 0.0);
    CHECK(next.rho[k] <= 1.0);
    CHECK(std::abs(next.rho[k] - density.rho[k]) <= params.move_limit + 1e-12);
    volume += next.rho[k];
  }
  CHECK(volume == doctest::Approx(6.0).epsilon(1e-6));
}

TEST_CASE("stronger sensitivities keep more material") {
  OcParams params;
  params.v_max = 5.0;
  params.v_elem = 1.0;
  params.move_limit = 0.9;  // wide enough not to clip the contrast
  DensityField density;
  density.rho.assign(10, 0.5);
  std::vector<double> sens(10, -0.2);
  sens[3] = -5.0;  // much larger payoff for fluid here
  const DensityField next = oc_update(density, sens, params);
  for (int k = 0; k < 10; ++k)
    if (k != 3) CHECK(next.rho[3] > next.rho[k]);
}

TEST_CASE("oc update saturates when the target is out of reach") {
  OcParams params;
  params.v_max = 2.0;  // far below what the move limit allows from all-fluid
  params.v_elem = 1.0;
  DensityField density;
  density.rho.assign(10, 1.0);
  std::vector<double> sens(10, -1.0);
  const DensityField next = oc_update(density, sens, params);
  for (double r : next.rho) CHECK(r == doctest::Approx(0.8));  // one full step down
}

TEST_CASE("all-zero sensitivity rescales uniformly") {
  OcParams params;
  params.v_max = 3.0;
  params.v_elem = 1.0;
  params.move_limit = 1.0;
  DensityField density;
  density.rho.assign(6, 0.9);
  const std::vector<double> sens(6, 0.0);
  const DensityField next = oc_update(density, sens, params);
  for (double r : next.rho) CHECK(r == doctest::Approx(0.5));
}

TEST_CASE("binary filter thresholds the density") {
  DensityField density;
  density.rho = {0.2, 0.96, 0.95, 1.0};
  const DesignState ds = filter_binary(density, 0.95);
  CHECK(ds.chi == std::vector<std::uint8_t>{0, 1, 0, 1});
  CHECK(ds.phi[0] == doctest::Approx(-1.0));
  CHECK(ds.phi[1] == doctest::Approx(1.0));
}

TEST_CASE("classical optimization descends and honors the volume bound") {
  const StructuredMesh mesh(12, 12, 12.0, 12.0);
  const auto segs = tag_benchmark_boundaries(mesh, BenchmarkCase::Diffuser, 1.0 / 12.0);
  ClassicalParams params;
  params.vmax_fraction = 0.5;
  params.epsilon = 1e-3;
  const ClassicalResult r = run_classical(mesh, segs, params);
  REQUIRE(r.steps >= 2);
  REQUIRE(static_cast<int>(r.history.size()) == r.steps);
  // The shrinking volume bound pushes J up at first; once the target is
  // reached the objective descends.
  std::size_t feasible = 0;
  while (feasible < r.history.size() &&
         r.history[feasible].volume_fraction > 0.5 + 1e-6)
    ++feasible;
  for (std::size_t i = feasible + 1; i < r.history.size(); ++i)
    CHECK(r.history[i].objective <= r.history[i - 1].objective * 1.05);
  CHECK(r.history.back().volume_fraction == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(r.objective_filtered > 0.0);
  CHECK(r.filtered.chi.size() == r.density.rho.size());
}
