// Lower bounds on mutual coherence and the coherence-based recovery bound.
#pragma once

#include <cstdint>

#include "telet/frame.hpp"

namespace telet {

struct WelchBound {
  double value = 0.0;
  // Set when N == 1: the bound has no pairs to constrain and value is 0.
  bool degenerate = false;
};

/// sqrt((N - d) / (d (N - 1))). Requires 1 <= d <= N.
WelchBound welch_bound(std::int64_t d, std::int64_t n);

/// Piecewise composite bound. Complex frames use the three-branch rule keyed
/// on N <= d^2, d^2 < N <= 2(d^2 - 1) and N > 2(d^2 - 1); real frames use
/// max(Welch, sqrt((3N - d^2 - 2d) / ((d + 2)(N - d)))), where a negative
/// radicand drops the second term. Requires 1 <= d <= N and N >= 2.
/// Throws DegenerateInput for complex d = 1, where N^{-1/(d-1)} is undefined.
double composite_bound(std::int64_t d, std::int64_t n, Field field);

/// Strict upper bound (1 + 1/mu) / 2 on the sparsity guaranteed recoverable
/// with an equivalent dictionary of coherence mu. mu = 0 returns +infinity.
double recoverability_bound(double mu);

}  // namespace telet
