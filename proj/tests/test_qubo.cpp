#include <random>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "flowopt/qubo.hpp"

using namespace flowopt;

namespace {

Assignment bits_of(unsigned code, int n) {
  Assignment q(n);
  for (int i = 0; i < n; ++i) q[i] = (code >> i) & 1u;
  return q;
}

QuboProblem random_problem(int n, std::mt19937_64& rng, double density = 0.6) {
  QuboProblem p(n);
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  p.add_offset(coeff(rng));
  for (int i = 0; i < n; ++i) p.add_linear(i, coeff(rng));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (unit(rng) < density) p.add_quadratic(i, j, coeff(rng));
  return p;
}

}  // namespace

TEST_CASE("energy of a hand-computed problem") {
  QuboProblem p(2);
  p.add_offset(1.5);
  p.add_linear(0, 1.0);
  p.add_linear(1, -2.0);
  p.add_quadratic(0, 1, 3.0);
  CHECK(p.energy({0, 0}) == doctest::Approx(1.5));
  CHECK(p.energy({1, 0}) == doctest::Approx(2.5));
  CHECK(p.energy({0, 1}) == doctest::Approx(-0.5));
  CHECK(p.energy({1, 1}) == doctest::Approx(3.5));
  CHECK_THROWS_AS(p.energy({0, 0, 0}), std::invalid_argument);
}

TEST_CASE("diagonal and swapped insertions normalize") {
  QuboProblem p(3);
  p.add_quadratic(2, 2, 4.0);  // q^2 = q folds into the linear part
  CHECK(p.linear()[2] == doctest::Approx(4.0));
  CHECK(p.num_quadratic_terms() == 0);
  p.add_quadratic(2, 0, 1.25);
  REQUIRE(p.num_quadratic_terms() == 1);
  CHECK(p.quadratic().begin()->first == std::pair<int, int>{0, 2});
  p.add_quadratic(0, 2, 0.75);  // accumulates into the same key
  CHECK(p.quadratic().begin()->second == doctest::Approx(2.0));
  CHECK_THROWS_AS(p.add_linear(3, 1.0), std::invalid_argument);
}

TEST_CASE("weighted square expansion equals direct evaluation") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> coeff(-1.5, 1.5);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 5;
    QuboProblem p(n);
    std::vector<std::pair<int, double>> terms;
    for (int i = 0; i < n; ++i) terms.emplace_back(i, coeff(rng));
    terms.emplace_back(2, coeff(rng));  // repeated variable folds correctly
    const double c = coeff(rng);
    const double w = 0.5 + trial * 0.1;
    p.add_weighted_square(w, terms, c);
    for (unsigned code = 0; code < (1u << n); ++code) {
      const Assignment q = bits_of(code, n);
      double s = c;
      for (const auto& [i, a] : terms) s += a * q[i];
      CHECK(p.energy(q) == doctest::Approx(w * s * s).epsilon(1e-12));
    }
  }
}

TEST_CASE("adding problems adds energies") {
  std::mt19937_64 rng(7);
  QuboProblem a = random_problem(6, rng);
  const QuboProblem b = random_problem(6, rng);
  std::vector<double> ea, eb;
  for (unsigned code = 0; code < 64; ++code) {
    ea.push_back(a.energy(bits_of(code, 6)));
    eb.push_back(b.energy(bits_of(code, 6)));
  }
  a.add(b);
  for (unsigned code = 0; code < 64; ++code)
    CHECK(a.energy(bits_of(code, 6)) ==
          doctest::Approx(ea[code] + eb[code]).epsilon(1e-12));
}

TEST_CASE("brute force matches exhaustive scan") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 8;
    const QuboProblem p = random_problem(n, rng);
    double best = p.energy(bits_of(0, n));
    for (unsigned code = 1; code < (1u << n); ++code)
      best = std::min(best, p.energy(bits_of(code, n)));
    const auto r = brute_force_min(p);
    CHECK(r.energy == doctest::Approx(best).epsilon(1e-13));
    CHECK(p.energy(r.assignment) == doctest::Approx(r.energy));
  }
}

TEST_CASE("brute force ties resolve to the lowest integer assignment") {
  QuboProblem p(3);  // everything zero: all 8 assignments tie at 0
  const auto r = brute_force_min(p);
  CHECK(r.assignment == Assignment{0, 0, 0});

  QuboProblem p2(2);  // E = -q0 - q1 + q0 q1: 10 and 01 tie at -1
  p2.add_linear(0, -1.0);
  p2.add_linear(1, -1.0);
  p2.add_quadratic(0, 1, 1.0);
  const auto r2 = brute_force_min(p2);
  CHECK(r2.energy == doctest::Approx(-1.0));
  CHECK(r2.assignment == Assignment{1, 0});  // integer 1 beats integer 2
}

TEST_CASE("assignment comparison is little-endian integer order") {
  CHECK(assignment_less({1, 0}, {0, 1}));   // 1 < 2
  CHECK(!assignment_less({0, 1}, {1, 0}));
  CHECK(!assignment_less({1, 1}, {1, 1}));
  CHECK(assignment_less({0, 0, 1}, {1, 0, 1}));  // 4 < 5
}

TEST_CASE("coordinate format golden text") {
  QuboProblem p(3);
  p.add_offset(0.25);
  p.add_linear(0, 1.5);
  p.add_quadratic(0, 2, -2.0);
  std::ostringstream os;
  write_coordinate_format(p, os);
  CHECK(os.str() == "3\n0 0 1.5\n0 2 -2\n-1 -1 0.25\n");
}

TEST_CASE("coordinate format round-trips exactly") {
  std::mt19937_64 rng(314);
  const QuboProblem p = random_problem(9, rng);
  std::ostringstream os;
  write_coordinate_format(p, os);
  std::istringstream is(os.str());
  const QuboProblem r = read_coordinate_format(is);
  REQUIRE(r.num_variables() == p.num_variables());
  CHECK(r.offset() == p.offset());
  CHECK(r.linear() == p.linear());
  CHECK(r.quadratic() == p.quadratic());

  std::istringstream broken("2\n0 0 1.0\n");
  CHECK_THROWS_AS(read_coordinate_format(broken), std::runtime_error);
}
