#include "telet/squarem.hpp"

#include <cmath>

namespace telet {

CMatrix squarem_extrapolate(const CMatrix& base, const CMatrix& r, const CMatrix& v, double alpha) {
  const CMatrix raw = base - 2.0 * alpha * r + alpha * alpha * v;
  return normalize_columns(raw, base);
}

Frame squarem_step(const Frame& frame, const SolverConfig& config, SquaremState* state,
                   std::optional<double> forced_alpha) {
  SquaremState local;
  SquaremState& st = state ? *state : local;
  st = SquaremState{};

  auto map = [&](const Frame& x) {
    StepInfo info;
    Frame out = outer_step(x, config, &info);
    st.inner_iters += info.inner_iters;
    st.degenerate_blocks += info.degenerate_blocks;
    if (info.rejected) ++st.rejected_steps;
    return out;
  };

  const Frame first = map(frame);
  const Frame second = map(first);
  st.base = frame.matrix();
  st.first = first.matrix();
  st.second = second.matrix();
  st.r = st.first - st.base;
  st.v = st.second - st.first - st.r;

  const double r_norm = st.r.norm();
  const double v_norm = st.v.norm();
  if (!forced_alpha && v_norm < 1e-14) {
    st.alpha = -1.0;
    return second;
  }
  st.alpha = forced_alpha ? *forced_alpha : std::min(-r_norm / v_norm, -1.0);
  if (st.alpha == -1.0) return second;  // the extrapolation reduces to F(F(x))

  const double base_objective = frame_objective(st.base);
  auto is_real = frame.field() == Field::real;
  for (;;) {
    CMatrix candidate = squarem_extrapolate(st.base, st.r, st.v, st.alpha);
    if (is_real) candidate.imag().setZero();
    if (frame_objective(candidate) <= base_objective) return Frame(frame.field(), std::move(candidate));
    if (st.backtrack_count >= config.max_backtracks) break;
    st.alpha = (st.alpha - 1.0) / 2.0;
    ++st.backtrack_count;
  }
  st.fell_back = true;
  return second;
}

}  // namespace telet
