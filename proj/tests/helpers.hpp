// Shared fixtures and brute-force oracles for the test binaries.
#pragma once

#include <complex>
#include <random>

#include "telet/frame.hpp"
#include "telet/rng.hpp"

namespace telet::testing {

inline Frame random_frame(Eigen::Index d, Eigen::Index n, Field field, std::uint64_t seed) {
  Rng rng = make_stream(seed, "test-frame");
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix x(d, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    for (Eigen::Index r = 0; r < d; ++r) {
      x(r, c) = field == Field::complex ? Complex(normal(rng), normal(rng)) : Complex(normal(rng), 0.0);
    }
  }
  return Frame::normalized(field, std::move(x));
}

/// Unit-norm frame obtained by adding eps-sized noise to `base`.
inline CMatrix perturb(const CMatrix& base, double eps, Field field, Rng& rng) {
  std::normal_distribution<double> normal(0.0, eps);
  CMatrix x = base;
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
      x(r, c) += field == Field::complex ? Complex(normal(rng), normal(rng)) : Complex(normal(rng), 0.0);
    }
    x.col(c).normalize();
  }
  return x;
}

/// Stacks the columns of a d x N matrix into a vector of length N d.
inline CVector stack(const CMatrix& x) { return Eigen::Map<const CVector>(x.data(), x.size()); }

/// Selection matrix S_l (d x N d) with x_l = S_l x.
inline CMatrix selection(Eigen::Index l, Eigen::Index d, Eigen::Index n) {
  CMatrix s = CMatrix::Zero(d, n * d);
  s.block(0, l * d, d, d).setIdentity();
  return s;
}

/// A_ij = S_j^H S_i. Note x^H A_ij x = x_j^H x_i.
inline CMatrix a_matrix(Eigen::Index i, Eigen::Index j, Eigen::Index d, Eigen::Index n) {
  return selection(j, d, n).adjoint() * selection(i, d, n);
}

/// d_ij = B_ij x - (|c| + N d) x from stacked-vector algebra alone, with
/// c = x^H A_ij x and B_ij = A_ij c^* + A_ij^H c.
inline CVector dense_direction(const CMatrix& x, Eigen::Index i, Eigen::Index j) {
  const Eigen::Index d = x.rows();
  const Eigen::Index n = x.cols();
  const CVector xs = stack(x);
  const CMatrix a = a_matrix(i, j, d, n);
  const Complex c = xs.dot(a * xs);
  const CMatrix b = a * std::conj(c) + a.adjoint() * c;
  return b * xs - (std::abs(c) + static_cast<double>(n * d)) * xs;
}

/// Phi_ij = vec(A) vec(A^H)^H + vec(A^H) vec(A)^H.
inline CMatrix phi_matrix(Eigen::Index i, Eigen::Index j, Eigen::Index d, Eigen::Index n) {
  const CMatrix a = a_matrix(i, j, d, n);
  const CMatrix ah = a.adjoint();
  const CVector va = stack(a);
  const CVector vah = stack(ah);
  return va * vah.adjoint() + vah * va.adjoint();
}

}  // namespace telet::testing
