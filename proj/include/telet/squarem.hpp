// Squared extrapolation around the MM fixed-point map.
#pragma once

#include "telet/solver.hpp"

namespace telet {

struct SquaremState {
  CMatrix base;    // x^t
  CMatrix first;   // F(x^t)
  CMatrix second;  // F(F(x^t))
  CMatrix r;       // first - base
  CMatrix v;       // second - first - r
  double alpha = -1.0;
  int backtrack_count = 0;
  // The extrapolated point was abandoned in favour of `second`.
  bool fell_back = false;
  std::int64_t inner_iters = 0;
  std::int64_t degenerate_blocks = 0;
  std::int64_t rejected_steps = 0;
};

/// x^t - 2 alpha r + alpha^2 v with columns renormalized.
CMatrix squarem_extrapolate(const CMatrix& base, const CMatrix& r, const CMatrix& v, double alpha);

/// One accelerated iteration. The step length starts at -|r|/|v| (capped at
/// -1) and is pulled toward -1 by alpha <- (alpha - 1)/2 while the objective
/// exceeds that of x^t; after max_backtracks the result is F(F(x^t)).
/// `forced_alpha`, when set, bypasses the step-length rule.
Frame squarem_step(const Frame& frame, const SolverConfig& config, SquaremState* state = nullptr,
                   std::optional<double> forced_alpha = std::nullopt);

}  // namespace telet
