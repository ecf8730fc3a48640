#include "flowopt/qubo.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace flowopt {

bool assignment_less(const Assignment& a, const Assignment& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("assignment_less: length mismatch");
  for (std::size_t i = a.size(); i-- > 0;) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

QuboProblem::QuboProblem(int num_variables) : n_(num_variables) {
  if (num_variables < 0)
    throw std::invalid_argument("QuboProblem: negative variable count");
  linear_.assign(static_cast<std::size_t>(n_), 0.0);
}

void QuboProblem::check_var(int i) const {
  if (i < 0 || i >= n_)
    throw std::invalid_argument("QuboProblem: variable index " +
                                std::to_string(i) + " out of range");
}

void QuboProblem::add_linear(int i, double c) {
  check_var(i);
  linear_[i] += c;
}

void QuboProblem::add_quadratic(int i, int j, double c) {
  check_var(i);
  check_var(j);
  if (i == j) {  // q^2 = q
    linear_[i] += c;
    return;
  }
  if (i > j) std::swap(i, j);
  quadratic_[{i, j}] += c;
}

void QuboProblem::add_weighted_square(
    double weight, const std::vector<std::pair<int, double>>& terms,
    double constant) {
  offset_ += weight * constant * constant;
  for (std::size_t a = 0; a < terms.size(); ++a) {
    const auto [i, ci] = terms[a];
    check_var(i);
    linear_[i] += weight * (ci * ci + 2.0 * constant * ci);
    for (std::size_t b = a + 1; b < terms.size(); ++b) {
      const auto [j, cj] = terms[b];
      add_quadratic(i, j, 2.0 * weight * ci * cj);
    }
  }
}

void QuboProblem::add(const QuboProblem& other) {
  if (other.n_ != n_)
    throw std::invalid_argument("QuboProblem::add: variable count mismatch");
  offset_ += other.offset_;
  for (int i = 0; i < n_; ++i) linear_[i] += other.linear_[i];
  for (const auto& [ij, c] : other.quadratic_) quadratic_[ij] += c;
}

double QuboProblem::energy(const Assignment& q) const {
  if (static_cast<int>(q.size()) != n_)
    throw std::invalid_argument("QuboProblem::energy: assignment length " +
                                std::to_string(q.size()) + " != " +
                                std::to_string(n_));
  double e = offset_;
  for (int i = 0; i < n_; ++i)
    if (q[i]) e += linear_[i];
  for (const auto& [ij, c] : quadratic_)
    if (q[ij.first] && q[ij.second]) e += c;
  return e;
}

BruteForceResult brute_force_min(const QuboProblem& problem) {
  const int n = problem.num_variables();
  if (n > 24)
    throw std::invalid_argument("brute_force_min: limited to 24 variables");
  Assignment q(static_cast<std::size_t>(n), 0);
  BruteForceResult best{q, problem.energy(q)};
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t code = 1; code < total; ++code) {
    for (int i = 0; i < n; ++i) q[i] = static_cast<std::uint8_t>((code >> i) & 1);
    const double e = problem.energy(q);
    // Strict improvement wins; exact ties keep the earlier (lower) code
    // because enumeration is in increasing integer order.
    if (e < best.energy) {
      best.energy = e;
      best.assignment = q;
    }
  }
  return best;
}

namespace {
std::string fmt_coeff(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace

void write_coordinate_format(const QuboProblem& problem, std::ostream& os) {
  os << problem.num_variables() << "\n";
  const auto& lin = problem.linear();
  for (int i = 0; i < problem.num_variables(); ++i) {
    if (lin[i] != 0.0) os << i << " " << i << " " << fmt_coeff(lin[i]) << "\n";
  }
  for (const auto& [ij, c] : problem.quadratic()) {
    if (c != 0.0)
      os << ij.first << " " << ij.second << " " << fmt_coeff(c) << "\n";
  }
  os << -1 << " " << -1 << " " << fmt_coeff(problem.offset()) << "\n";
}

QuboProblem read_coordinate_format(std::istream& is) {
  int n = 0;
  if (!(is >> n)) throw std::runtime_error("coordinate format: missing header");
  QuboProblem p(n);
  int i, j;
  double c;
  while (is >> i >> j >> c) {
    if (i == -1 && j == -1) {
      p.add_offset(c);
      return p;
    }
    if (i == j)
      p.add_linear(i, c);
    else
      p.add_quadratic(i, j, c);
  }
  throw std::runtime_error("coordinate format: missing offset terminator");
}

}  // namespace flowopt
