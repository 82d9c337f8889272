// Unit-norm frames, pair enumeration and coherence measurement.
#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace telet {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

enum class Field { real, complex };

std::string to_string(Field field);
Field parse_field(const std::string& text);

/// Raised when an input violates a documented precondition or invariant.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a quantity is requested for an input where it has no value
/// (e.g. coherence of a single vector).
class DegenerateInput : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline constexpr double kUnitNormTolerance = 1e-12;

/// A d x N synthesis matrix whose columns all have unit Euclidean norm.
///
/// Real frames are stored in the same complex container as complex frames;
/// the invariant is that every imaginary part is exactly zero. All solver
/// arithmetic preserves that (products of numbers with zero imaginary parts
/// have zero imaginary parts), so a single code path serves both fields.
class Frame {
 public:
  /// Validates unit norms, N >= d and the real-field invariant.
  Frame(Field field, CMatrix columns);

  /// Normalizes every column first. Zero columns are rejected.
  static Frame normalized(Field field, CMatrix columns);

  Field field() const { return field_; }
  Eigen::Index dim() const { return columns_.rows(); }
  Eigen::Index size() const { return columns_.cols(); }
  const CMatrix& matrix() const { return columns_; }
  auto column(Eigen::Index i) const { return columns_.col(i); }

  /// Number of unordered pairs N(N-1)/2.
  Eigen::Index pair_count() const { return size() * (size() - 1) / 2; }

 private:
  Field field_;
  CMatrix columns_;
};

/// Unordered column pair (i, j) with i < j, zero-based, plus its position in
/// the row-major enumeration (0,1), (0,2), ..., (0,N-1), (1,2), ...
struct PairIndex {
  Eigen::Index i = 0;
  Eigen::Index j = 0;
  Eigen::Index flat = 0;

  friend bool operator==(const PairIndex&, const PairIndex&) = default;
};

Eigen::Index pair_flat_index(Eigen::Index n, Eigen::Index i, Eigen::Index j);
PairIndex pair_from_flat(Eigen::Index n, Eigen::Index flat);

/// Visits every unordered pair in flat order: fn(i, j, flat).
template <typename Fn>
void for_each_pair(Eigen::Index n, Fn&& fn) {
  Eigen::Index p = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j, ++p) fn(i, j, p);
  }
}

struct CoherenceReport {
  double mu = 0.0;
  PairIndex argmax_pair;
  double welch = 0.0;
  double composite = 0.0;
  double gram_offdiag_max = 0.0;
  double gram_offdiag_min = 0.0;
  double gram_offdiag_mean = 0.0;
};

/// Largest |x_i^H x_j| over distinct columns. Ties resolve to the smallest
/// flat pair index. Throws DegenerateInput when N < 2.
CoherenceReport mutual_coherence(const Frame& frame);

/// max_{i<j} |x_i^H x_j| only, without bound computations.
double max_coherence(const CMatrix& columns);

/// max_{i<j} 2|x_i^H x_j|^2, the minimax objective driven down by the solver.
double frame_objective(const CMatrix& columns);

/// Columns of x divided by their norms; columns with norm below `floor`
/// are copied from `fallback`.
CMatrix normalize_columns(const CMatrix& x, const CMatrix& fallback, double floor = 1e-14);

}  // namespace telet
