#include "telet/frame.hpp"

#include <cmath>
#include <limits>

#include "telet/bounds.hpp"

namespace telet {

std::string to_string(Field field) { return field == Field::real ? "real" : "complex"; }

Field parse_field(const std::string& text) {
  if (text == "real") return Field::real;
  if (text == "complex") return Field::complex;
  throw InvalidInput("unknown field '" + text + "' (expected real or complex)");
}

Frame::Frame(Field field, CMatrix columns) : field_(field), columns_(std::move(columns)) {
  if (columns_.rows() < 1 || columns_.cols() < 1) throw InvalidInput("frame must have d >= 1 and N >= 1");
  if (columns_.cols() < columns_.rows()) {
    throw InvalidInput("frame needs N >= d (got d=" + std::to_string(columns_.rows()) +
                       ", N=" + std::to_string(columns_.cols()) + ")");
  }
  for (Eigen::Index i = 0; i < columns_.cols(); ++i) {
    const double norm = columns_.col(i).norm();
    if (!std::isfinite(norm) || std::abs(norm - 1.0) > kUnitNormTolerance) {
      throw InvalidInput("column " + std::to_string(i) + " is not unit norm (|x|=" + std::to_string(norm) + ")");
    }
  }
  if (field_ == Field::real && (columns_.imag().array() != 0.0).any()) {
    throw InvalidInput("real frame has a nonzero imaginary part");
  }
}

Frame Frame::normalized(Field field, CMatrix columns) {
  for (Eigen::Index i = 0; i < columns.cols(); ++i) {
    const double norm = columns.col(i).norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) throw InvalidInput("cannot normalize column " + std::to_string(i));
    columns.col(i) /= norm;
  }
  return Frame(field, std::move(columns));
}

Eigen::Index pair_flat_index(Eigen::Index n, Eigen::Index i, Eigen::Index j) {
  if (i > j) std::swap(i, j);
  if (i < 0 || j >= n || i == j) throw InvalidInput("invalid pair index");
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

PairIndex pair_from_flat(Eigen::Index n, Eigen::Index flat) {
  if (flat < 0 || flat >= n * (n - 1) / 2) throw InvalidInput("pair flat index out of range");
  Eigen::Index i = 0;
  Eigen::Index row_start = 0;
  while (flat >= row_start + (n - i - 1)) {
    row_start += n - i - 1;
    ++i;
  }
  return PairIndex{i, i + 1 + (flat - row_start), flat};
}

CoherenceReport mutual_coherence(const Frame& frame) {
  const Eigen::Index n = frame.size();
  if (n < 2) throw DegenerateInput("mutual coherence needs at least two vectors");
  const CMatrix gram = frame.matrix().adjoint() * frame.matrix();

  CoherenceReport report;
  report.gram_offdiag_min = std::numeric_limits<double>::infinity();
  report.mu = -1.0;
  double sum = 0.0;
  for_each_pair(n, [&](Eigen::Index i, Eigen::Index j, Eigen::Index p) {
    const double v = std::abs(gram(i, j));
    if (v > report.mu) {
      report.mu = v;
      report.argmax_pair = PairIndex{i, j, p};
    }
    report.gram_offdiag_min = std::min(report.gram_offdiag_min, v);
    sum += v;
  });
  report.gram_offdiag_max = report.mu;
  report.gram_offdiag_mean = sum / static_cast<double>(frame.pair_count());
  report.welch = welch_bound(frame.dim(), n).value;
  if (frame.field() == Field::complex && frame.dim() == 1) {
    report.composite = report.welch;  // composite bound undefined for d = 1
  } else {
    report.composite = composite_bound(frame.dim(), n, frame.field());
  }
  return report;
}

double max_coherence(const CMatrix& columns) {
  const CMatrix gram = columns.adjoint() * columns;
  double mu = 0.0;
  for (Eigen::Index j = 1; j < gram.cols(); ++j) {
    for (Eigen::Index i = 0; i < j; ++i) mu = std::max(mu, std::abs(gram(i, j)));
  }
  return mu;
}

double frame_objective(const CMatrix& columns) {
  const CMatrix gram = columns.adjoint() * columns;
  double best = 0.0;
  for (Eigen::Index j = 1; j < gram.cols(); ++j) {
    for (Eigen::Index i = 0; i < j; ++i) best = std::max(best, std::norm(gram(i, j)));
  }
  return 2.0 * best;
}

CMatrix normalize_columns(const CMatrix& x, const CMatrix& fallback, double floor) {
  CMatrix out(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.cols(); ++i) {
    const double norm = x.col(i).norm();
    if (norm < floor || !std::isfinite(norm)) {
      out.col(i) = fallback.col(i);
    } else {
      out.col(i) = x.col(i) / norm;
    }
  }
  return out;
}

}  // namespace telet
