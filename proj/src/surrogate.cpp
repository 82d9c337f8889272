#include <cmath>

#include "telet/solver.hpp"

namespace telet {

double surrogate_offset(double abs_c, Eigen::Index n, Eigen::Index d) {
  const double nn = static_cast<double>(n);
  return -6.0 * abs_c * abs_c + 4.0 * nn * abs_c + 4.0 * nn * nn * static_cast<double>(d);
}

SurrogateData build_surrogate(const Frame& frame) { return build_surrogate(frame.matrix()); }

SurrogateData build_surrogate(const CMatrix& anchor) {
  const Eigen::Index n = anchor.cols();
  const Eigen::Index d = anchor.rows();
  const Eigen::Index pairs = n * (n - 1) / 2;
  SurrogateData sd;
  sd.anchor = anchor;
  sd.c.resize(pairs);
  sd.abs_c.resize(pairs);
  sd.s.resize(pairs);
  const CMatrix gram = anchor.adjoint() * anchor;
  for_each_pair(n, [&](Eigen::Index i, Eigen::Index j, Eigen::Index p) {
    sd.c(p) = gram(i, j);
    sd.abs_c(p) = std::abs(sd.c(p));
    sd.s(p) = surrogate_offset(sd.abs_c(p), n, d);
  });
  return sd;
}

CMatrix pair_direction(const SurrogateData& sd, Eigen::Index i, Eigen::Index j) {
  if (i > j) std::swap(i, j);
  const Eigen::Index n = sd.size();
  const Eigen::Index p = pair_flat_index(n, i, j);
  const double shift = sd.abs_c(p) + static_cast<double>(n * sd.dim());
  CMatrix out = -shift * sd.anchor;
  out.col(j) += sd.anchor.col(i) * sd.c(p);
  out.col(i) += sd.anchor.col(j) * std::conj(sd.c(p));
  return out;
}

CMatrix apply_D(const SurrogateData& sd, const RVector& q) {
  const Eigen::Index n = sd.size();
  if (q.size() != sd.pair_count()) throw InvalidInput("apply_D: weight vector has wrong length");
  // Column l of X W collects the two sparse block contributions of every pair
  // touching l: block j of d_p is x_i c_p and block i is x_j conj(c_p).
  CMatrix w = CMatrix::Zero(n, n);
  double shift = 0.0;
  for_each_pair(n, [&](Eigen::Index i, Eigen::Index j, Eigen::Index p) {
    w(i, j) = q(p) * sd.c(p);
    w(j, i) = q(p) * std::conj(sd.c(p));
    shift += q(p) * sd.abs_c(p);
  });
  shift += q.sum() * static_cast<double>(n * sd.dim());
  CMatrix a = sd.anchor * w;
  a -= shift * sd.anchor;
  return a;
}

RVector apply_D_adjoint(const SurrogateData& sd, const CMatrix& y) {
  const Eigen::Index n = sd.size();
  if (y.rows() != sd.dim() || y.cols() != n) throw InvalidInput("apply_D_adjoint: y has wrong shape");
  const CMatrix m = sd.anchor.adjoint() * y;  // m(a, b) = x_a^H y_b
  const double trace = m.diagonal().real().sum();
  const double nd = static_cast<double>(n * sd.dim());
  RVector h(sd.pair_count());
  for_each_pair(n, [&](Eigen::Index i, Eigen::Index j, Eigen::Index p) {
    const Complex cross = std::conj(sd.c(p)) * m(i, j) + sd.c(p) * m(j, i);
    h(p) = 4.0 * (cross.real() - (sd.abs_c(p) + nd) * trace);
  });
  return h;
}

RVector surrogate_values(const SurrogateData& sd, const CMatrix& x) { return apply_D_adjoint(sd, x) + sd.s; }

SimplexWeights::SimplexWeights(RVector q) : q_(std::move(q)) {
  if (q_.size() == 0) throw InvalidInput("simplex weights must be non-empty");
  if ((q_.array() < 0.0).any() || !q_.allFinite()) throw InvalidInput("simplex weights must be nonnegative");
  if (std::abs(q_.sum() - 1.0) > 1e-12) throw InvalidInput("simplex weights must sum to one");
}

SimplexWeights SimplexWeights::uniform(Eigen::Index pair_count) {
  return SimplexWeights(RVector::Constant(pair_count, 1.0 / static_cast<double>(pair_count)));
}

SimplexWeights SimplexWeights::indicator(Eigen::Index pair_count, Eigen::Index flat) {
  RVector q = RVector::Zero(pair_count);
  q(flat) = 1.0;
  return SimplexWeights(std::move(q));
}

}  // namespace telet
