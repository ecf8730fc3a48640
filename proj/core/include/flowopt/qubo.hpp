#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <utility>
#include <vector>

namespace flowopt {

/// Binary assignment, one byte per variable (0 or 1), bit 0 least significant
/// when the vector is read as an integer for tie-breaking.
using Assignment = std::vector<std::uint8_t>;

/// Compares two assignments of equal length as little-endian integers.
/// Returns true if a < b.
bool assignment_less(const Assignment& a, const Assignment& b);

/// Minimization objective  E(q) = offset + sum_i c_i q_i + sum_{i<j} c_ij q_i q_j
/// over binary variables.  Diagonal insertions fold via q^2 = q into the
/// linear part; (i, j) and (j, i) accumulate into the same upper-triangular
/// coefficient.
class QuboProblem {
 public:
  explicit QuboProblem(int num_variables);

  int num_variables() const { return n_; }
  double offset() const { return offset_; }
  const std::vector<double>& linear() const { return linear_; }
  const std::map<std::pair<int, int>, double>& quadratic() const {
    return quadratic_;
  }

  void add_offset(double c) { offset_ += c; }
  void add_linear(int i, double c);
  void add_quadratic(int i, int j, double c);

  /// Adds  weight * (constant + sum_m coeff_m q_{var_m})^2, expanding the
  /// square and folding q^2 = q.  Variables may repeat.
  void add_weighted_square(double weight,
                           const std::vector<std::pair<int, double>>& terms,
                           double constant = 0.0);

  /// Accumulates another problem (same variable count) into this one.
  void add(const QuboProblem& other);

  double energy(const Assignment& q) const;

  /// Number of stored quadratic coefficients (upper triangle).
  std::size_t num_quadratic_terms() const { return quadratic_.size(); }

 private:
  void check_var(int i) const;

  int n_;
  double offset_{0.0};
  std::vector<double> linear_;
  std::map<std::pair<int, int>, double> quadratic_;
};

struct BruteForceResult {
  Assignment assignment;
  double energy{0.0};
};

/// Exact minimum by exhaustive enumeration; requires num_variables <= 24.
/// Ties resolve to the assignment with the lowest integer value (bit 0 LSB).
BruteForceResult brute_force_min(const QuboProblem& problem);

/// Plain-text coordinate export: first line the variable count, then one
/// line "i j coeff" per nonzero (i == j for linear terms), and a final
/// "-1 -1 offset" line.
void write_coordinate_format(const QuboProblem& problem, std::ostream& os);
QuboProblem read_coordinate_format(std::istream& is);

}  // namespace flowopt
