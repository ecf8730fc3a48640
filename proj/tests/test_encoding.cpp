#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "flowopt/encoding.hpp"
#include "flowopt/mesh.hpp"
#include "support/reference_energies.hpp"

using namespace flowopt;

namespace {

Assignment random_assignment(int n, std::mt19937_64& rng) {
  Assignment q(n);
  for (auto& b : q) b = static_cast<std::uint8_t>(rng() & 1u);
  return q;
}

std::vector<double> random_kinetic(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> mag(0.0, 0.02);
  std::vector<double> d(n);
  for (auto& v : d) v = mag(rng);
  return d;
}

}  // namespace

TEST_CASE("variable layout indices") {
  const VariableLayout full(Formulation::Full, 16, 8);
  CHECK(full.num_variables() == 16 * 9);
  CHECK(full.levelset_var(0, 0) == 0);
  CHECK(full.levelset_var(0, 7) == 7);
  CHECK(full.chi_var(0) == 8);
  CHECK(full.levelset_var(3, 2) == 3 * 9 + 2);
  CHECK(full.chi_var(15) == 15 * 9 + 8);
  CHECK_THROWS_AS(full.chi_var(16), std::invalid_argument);
  CHECK_THROWS_AS(full.levelset_var(0, 8), std::invalid_argument);

  const VariableLayout cond(Formulation::Condensed, 16, 8);
  CHECK(cond.num_variables() == 16);
  CHECK(cond.chi_var(5) == 5);
  CHECK_THROWS_AS(cond.levelset_var(0, 0), std::invalid_argument);
}

TEST_CASE("level-set decoding") {
  const std::vector<std::uint8_t> ones(8, 1), zeros(8, 0);
  CHECK(decode_levelset(ones) == doctest::Approx(1.0));
  CHECK(decode_levelset(zeros) == doctest::Approx(-1.0));
  const std::vector<std::uint8_t> half{1, 1, 1, 1, 0, 0, 0, 0};
  CHECK(decode_levelset(half) == doctest::Approx(0.0));
  const std::vector<std::uint8_t> quarter{1, 1, 0, 0, 0, 0, 0, 0};
  CHECK(decode_levelset(quarter) == doctest::Approx(-0.5));
}

TEST_CASE("dissipation term on a single blocked element") {
  const VariableLayout layout(Formulation::Condensed, 1, 8);
  QuboHyperparams hp;
  hp.lambda_dis = 100.0;
  hp.alpha_max = 12.5;
  const QuboProblem p = build_H_dis({2.0}, layout, hp);
  CHECK(p.energy({0}) == doctest::Approx(2500.0));  // 100 * 12.5 * 2
  CHECK(p.energy({1}) == doctest::Approx(0.0));
}

TEST_CASE("regularization on hand-checked patterns") {
  QuboHyperparams hp;
  hp.lambda_reg = 1.0;
  SUBCASE("two elements with opposite level sets") {
    const StructuredMesh mesh(2, 1, 2.0, 1.0);
    const VariableLayout layout(Formulation::Full, 2, 8);
    const QuboProblem p = build_H_reg(mesh, layout, hp);
    Assignment q(layout.num_variables(), 0);
    for (int b = 0; b < 8; ++b) q[layout.levelset_var(0, b)] = 1;  // phi = +1, -1
    CHECK(p.energy(q) == doctest::Approx(4.0));  // w=1, (1 - (-1))^2
  }
  SUBCASE("checkerboard on 2x2") {
    const StructuredMesh mesh(2, 2, 2.0, 2.0);
    const VariableLayout layout(Formulation::Full, 4, 8);
    const QuboProblem p = build_H_reg(mesh, layout, hp);
    Assignment q(layout.num_variables(), 0);
    for (int k : {0, 3})
      for (int b = 0; b < 8; ++b) q[layout.levelset_var(k, b)] = 1;
    CHECK(p.energy(q) == doctest::Approx(16.0));  // 4 edges, each (2)^2
  }
  SUBCASE("uniform level set costs nothing") {
    const StructuredMesh mesh(3, 3, 3.0, 3.0);
    const VariableLayout layout(Formulation::Full, 9, 8);
    const QuboProblem p = build_H_reg(mesh, layout, hp);
    Assignment q(layout.num_variables(), 1);
    CHECK(p.energy(q) == doctest::Approx(0.0));
  }
}

TEST_CASE("volume term on a hand-checked selection") {
  const VariableLayout layout(Formulation::Condensed, 4, 8);
  QuboHyperparams hp;
  hp.lambda_vol = 0.05;
  hp.v_max = 2.0;
  const QuboProblem p = build_H_vol({1.0, 1.0, 1.0, 1.0}, layout, hp);
  CHECK(p.energy({1, 1, 1, 0}) == doctest::Approx(0.05));  // (3-2)^2 * 0.05
  CHECK(p.energy({1, 1, 0, 0}) == doctest::Approx(0.0));
  CHECK(p.energy({0, 0, 0, 0}) == doctest::Approx(0.2));
}

TEST_CASE("characteristic term penalizes chi/level-set disagreement") {
  const VariableLayout layout(Formulation::Full, 1, 8);
  QuboHyperparams hp;
  hp.lambda_char = 2.0;
  const QuboProblem p = build_H_char({3.0}, layout, hp);
  Assignment agree(9, 1);  // all bits and chi set: chi=1, (1+phi)/2 = 1
  CHECK(p.energy(agree) == doctest::Approx(0.0));
  Assignment clash(9, 0);
  clash[layout.chi_var(0)] = 1;  // chi=1 against phi=-1
  CHECK(p.energy(clash) == doctest::Approx(6.0));  // 2 * 3 * (1-0)^2
}

TEST_CASE("qubo builders match the scalar definitions on random input") {
  std::mt19937_64 rng(12345);
  for (const auto& [nx, ny] : {std::pair{2, 2}, std::pair{4, 4}, std::pair{4, 2}}) {
    // A stretched variant exercises the anisotropic edge weights.
    const double w = nx * 1.0, h = (nx == 4 && ny == 2) ? 1.0 : ny * 1.0;
    const StructuredMesh mesh(nx, ny, w, h);
    const int ne = mesh.num_elements();
    QuboHyperparams hp;
    hp.lambda_dis = 100.0;
    hp.lambda_reg = 1.3;
    hp.lambda_vol = 0.7;
    hp.lambda_char = 2.1;
    hp.v_max = 0.5 * mesh.domain_volume();
    const std::vector<double> d = random_kinetic(ne, rng);
    const std::vector<double> v(ne, mesh.element_volume());

    const VariableLayout full(Formulation::Full, ne, hp.levelset_bits);
    const QuboProblem h_dis = build_H_dis(d, full, hp);
    const QuboProblem h_reg = build_H_reg(mesh, full, hp);
    const QuboProblem h_vol = build_H_vol(v, full, hp);
    const QuboProblem h_char = build_H_char(v, full, hp);
    const QuboProblem h_full = build_full(d, mesh, v, full, hp);

    const VariableLayout cond(Formulation::Condensed, ne, hp.levelset_bits);
    const QuboProblem h_cond = build_condensed(d, v, cond, hp);

    for (int trial = 0; trial < 60; ++trial) {
      const Assignment q = random_assignment(full.num_variables(), rng);
      using namespace testref;
      CHECK(h_dis.energy(q) ==
            doctest::Approx(ref_H_dis(q, full, d, hp.lambda_dis, hp.alpha_max))
                .epsilon(1e-11));
      CHECK(h_reg.energy(q) ==
            doctest::Approx(ref_H_reg(q, full, mesh, hp.lambda_reg)).epsilon(1e-11));
      CHECK(h_vol.energy(q) ==
            doctest::Approx(ref_H_vol(q, full, v, hp.lambda_vol, hp.v_max))
                .epsilon(1e-11));
      CHECK(h_char.energy(q) ==
            doctest::Approx(ref_H_char(q, full, v, hp.lambda_char)).epsilon(1e-11));
      const double sum = ref_H_dis(q, full, d, hp.lambda_dis, hp.alpha_max) +
                         ref_H_reg(q, full, mesh, hp.lambda_reg) +
                         ref_H_vol(q, full, v, hp.lambda_vol, hp.v_max) +
                         ref_H_char(q, full, v, hp.lambda_char);
      CHECK(h_full.energy(q) == doctest::Approx(sum).epsilon(1e-11));

      const Assignment qc = random_assignment(ne, rng);
      CHECK(h_cond.energy(qc) ==
            doctest::Approx(ref_condensed(qc, cond, d, v, hp.alpha_max,
                                          hp.lambda_vol, hp.v_max))
                .epsilon(1e-11));
    }
  }
}

TEST_CASE("decode splits an assignment into chi and phi") {
  const VariableLayout full(Formulation::Full, 2, 8);
  Assignment q(full.num_variables(), 0);
  for (int b = 0; b < 8; ++b) q[full.levelset_var(0, b)] = 1;
  q[full.chi_var(0)] = 1;
  q[full.chi_var(1)] = 1;  // inconsistent: chi fluid but phi = -1
  const DesignState ds = decode(q, full);
  CHECK(ds.chi == std::vector<std::uint8_t>{1, 1});
  CHECK(ds.phi[0] == doctest::Approx(1.0));
  CHECK(ds.phi[1] == doctest::Approx(-1.0));
  CHECK(count_inconsistencies(ds) == 1);
  CHECK(ds.fluid_volume(2.0) == doctest::Approx(4.0));

  const VariableLayout cond(Formulation::Condensed, 3, 8);
  const DesignState dc = decode({1, 0, 1}, cond);
  CHECK(dc.phi == std::vector<double>{1.0, -1.0, 1.0});
  CHECK(count_inconsistencies(dc) == 0);
}

TEST_CASE("builders validate their inputs") {
  const VariableLayout cond(Formulation::Condensed, 4, 8);
  QuboHyperparams hp;
  CHECK_THROWS_AS(build_H_dis({1.0}, cond, hp), std::invalid_argument);
  const StructuredMesh mesh(2, 2, 2.0, 2.0);
  CHECK_THROWS_AS(build_H_reg(mesh, cond, hp), std::invalid_argument);
  CHECK_THROWS_AS(build_H_char({1, 1, 1, 1}, cond, hp), std::invalid_argument);
  const VariableLayout full(Formulation::Full, 4, 8);
  CHECK_THROWS_AS(build_condensed({1, 1, 1, 1}, {1, 1, 1, 1}, full, hp),
                  std::invalid_argument);
  CHECK_THROWS_AS(decode({1, 0}, cond), std::invalid_argument);
}
