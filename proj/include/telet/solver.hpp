// Majorization-minimization frame design.
//
// Every outer iteration majorizes f(x) = max_{i<j} 2|x_i^H x_j|^2 at the
// current frame x^t by the pointwise maximum of linear surrogates
//
//   g_p(x | x^t) = 4 Re(x^H d_p) + s_p,   p = (i, j),
//
// and minimizes that maximum over the product of unit balls. The inner
// minimax problem is solved in its dual form, a maximization over the
// probability simplex on pairs, by entropic mirror ascent. The columns d_p
// of D are never materialized: D q and Re(D^H y) reduce to two N x N
// matrix products with the frame.
#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "telet/frame.hpp"

namespace telet {

/// Per-pair scalars of the surrogate built at an anchor frame.
struct SurrogateData {
  CMatrix anchor;  // d x N
  RVector abs_c;   // |c_p|, flat pair order
  CVector c;       // c_p = x_i^H x_j
  RVector s;       // s_p = -6|c_p|^2 + 4N|c_p| + 4N^2 d

  Eigen::Index dim() const { return anchor.rows(); }
  Eigen::Index size() const { return anchor.cols(); }
  Eigen::Index pair_count() const { return c.size(); }
};

SurrogateData build_surrogate(const Frame& frame);
SurrogateData build_surrogate(const CMatrix& anchor);

/// s_p as a function of |c_p|.
double surrogate_offset(double abs_c, Eigen::Index n, Eigen::Index d);

/// Dense d_p for one pair, as a d x N matrix (block l is column l). Test and
/// diagnostic use only; the solver never forms it.
CMatrix pair_direction(const SurrogateData& surrogate, Eigen::Index i, Eigen::Index j);

/// g_p(x | x^t) for every pair; the surrogate value is their maximum.
RVector surrogate_values(const SurrogateData& surrogate, const CMatrix& x);

/// Weights on the simplex over pairs, indexed by PairIndex::flat.
class SimplexWeights {
 public:
  explicit SimplexWeights(RVector q);
  static SimplexWeights uniform(Eigen::Index pair_count);
  static SimplexWeights indicator(Eigen::Index pair_count, Eigen::Index flat);

  const RVector& values() const { return q_; }
  Eigen::Index size() const { return q_.size(); }

 private:
  RVector q_;
};

/// a = D q returned as a d x N matrix whose column l is block a_l.
/// Cost O(N^2 d).
CMatrix apply_D(const SurrogateData& surrogate, const RVector& q);
inline CMatrix apply_D(const SurrogateData& surrogate, const SimplexWeights& q) {
  return apply_D(surrogate, q.values());
}

/// 4 Re(D^H y) for a stacked vector y given as a d x N matrix.
RVector apply_D_adjoint(const SurrogateData& surrogate, const CMatrix& y);

enum class Acceleration { none, squarem };
std::string to_string(Acceleration accel);
Acceleration parse_acceleration(const std::string& text);

struct SolverConfig {
  std::int64_t max_outer_iters = 10000;
  std::int64_t inner_iters = 100;
  double mda_eta = 1.0;
  // +1 ascends the dual function; -1 reproduces the sign as printed in
  // some sources. See ascent_sign_probe().
  int mda_sign = +1;
  double stop_tol = 1e-5;
  std::uint64_t rng_seed = 0;
  Acceleration acceleration = Acceleration::squarem;
  std::int64_t trace_every = 1;
  int max_backtracks = 5;
  // When the inner solution fails to lower the objective and the duality
  // gap does not certify a fixed point, mirror ascent is rerun with the step
  // constant multiplied by eta_retry_factor, at most eta_retries times.
  int eta_retries = 3;
  double eta_retry_factor = 10.0;

  void validate() const;
};

struct MdaResult {
  SimplexWeights q;
  CMatrix a;  // D q for the returned q
  std::int64_t iterations = 0;
  // Surrogate value max_p g_p at x = -a/|a| (blockwise) for the returned q,
  // and the largest dual value h(q^k) seen. The surrogate minimum lies
  // between them.
  double primal_value = 0.0;
  double dual_value = 0.0;
};

/// Duality gap at which mirror ascent stops early.
double mda_gap_tolerance(Eigen::Index n, Eigen::Index d);

/// Mirror ascent on the simplex for max_q h(q), h(q) = min_x 4Re((Dq)^H x) + q.s.
/// Returns the iterate whose blockwise minimizer x has the smallest
/// surrogate value.
MdaResult mda_solve(const SurrogateData& surrogate, const SolverConfig& config);

/// Sign for which the dual value grows over a mirror-descent run on a fixed
/// (d=3, N=4) probe surrogate. Used to pin the default of mda_sign.
int ascent_sign_probe(std::uint64_t seed = 0);

struct StepInfo {
  std::int64_t inner_iters = 0;
  // Blocks where |a_l| vanished and the previous column was kept.
  std::int64_t degenerate_blocks = 0;
  // No inner solution improved on the anchor frame; the anchor is returned
  // unchanged.
  bool rejected = false;
  // Rejected and the dual bound shows the surrogate cannot go below the
  // anchor objective: the anchor is a fixed point of the MM map.
  bool fixed_point = false;
  int eta_attempts = 0;
  double objective = 0.0;
};

/// One MM iteration x^{t+1} = -a_l / |a_l| with a = D q*.
Frame outer_step(const Frame& frame, const SolverConfig& config, StepInfo* info = nullptr);

enum class TerminalStatus { bound_reached, max_iters, stalled };
std::string to_string(TerminalStatus status);

struct TraceRecord {
  std::int64_t iter = 0;
  double mu = 0.0;
  double objective = 0.0;
  std::int64_t inner_iters = 0;
  double wall_ms = 0.0;
  // Only meaningful under SQUAREM.
  double alpha = 0.0;
  int backtracks = 0;
};

struct ConvergenceTrace {
  std::vector<TraceRecord> records;
  TerminalStatus status = TerminalStatus::max_iters;
  std::int64_t iterations = 0;
  std::int64_t degenerate_events = 0;
  std::int64_t rejected_steps = 0;
  double best_mu = 1.0;
  std::int64_t best_iter = 0;
  double bound = 0.0;
};

struct SolveResult {
  Frame frame;  // lowest-coherence iterate visited
  ConvergenceTrace trace;
};

/// Repeats outer_step (or squarem_step) until |mu - mu_CB| < stop_tol or the
/// iteration budget is spent.
SolveResult solve(const Frame& frame0, const SolverConfig& config);

}  // namespace telet
