#include "telet/solver.hpp"

#include <chrono>
#include <cmath>

#include "telet/bounds.hpp"
#include "telet/squarem.hpp"

namespace telet {

std::string to_string(Acceleration accel) { return accel == Acceleration::none ? "none" : "squarem"; }

Acceleration parse_acceleration(const std::string& text) {
  if (text == "none") return Acceleration::none;
  if (text == "squarem") return Acceleration::squarem;
  throw InvalidInput("unknown acceleration '" + text + "' (expected none or squarem)");
}

std::string to_string(TerminalStatus status) {
  switch (status) {
    case TerminalStatus::bound_reached: return "bound_reached";
    case TerminalStatus::max_iters: return "max_iters";
    case TerminalStatus::stalled: return "stalled";
  }
  return "unknown";
}

void SolverConfig::validate() const {
  if (max_outer_iters < 1) throw InvalidInput("max_outer_iters must be positive");
  if (inner_iters < 1) throw InvalidInput("inner_iters must be positive");
  if (!(mda_eta > 0.0)) throw InvalidInput("mda_eta must be positive");
  if (mda_sign != 1 && mda_sign != -1) throw InvalidInput("mda_sign must be +1 or -1");
  if (!(stop_tol > 0.0)) throw InvalidInput("stop_tol must be positive");
  if (trace_every < 1) throw InvalidInput("trace_every must be positive");
  if (max_backtracks < 0) throw InvalidInput("max_backtracks must be nonnegative");
  if (eta_retries < 0) throw InvalidInput("eta_retries must be nonnegative");
  if (!(eta_retry_factor >= 1.0)) throw InvalidInput("eta_retry_factor must be at least 1");
}

Frame outer_step(const Frame& frame, const SolverConfig& config, StepInfo* info) {
  StepInfo local;
  StepInfo& out = info ? *info : local;
  out = StepInfo{};

  const double before = frame_objective(frame.matrix());
  if (frame.size() < 2) {
    out.objective = before;
    return frame;
  }

  const SurrogateData sd = build_surrogate(frame);
  const double tolerance = mda_gap_tolerance(frame.size(), frame.dim());
  SolverConfig attempt_config = config;
  for (int attempt = 0; attempt <= config.eta_retries; ++attempt) {
    const MdaResult inner = mda_solve(sd, attempt_config);
    out.inner_iters += inner.iterations;
    out.eta_attempts = attempt + 1;

    CMatrix next = normalize_columns(-inner.a, frame.matrix());
    if (frame.field() == Field::real) next.imag().setZero();
    const double after = frame_objective(next);
    if (after <= before) {
      for (Eigen::Index l = 0; l < inner.a.cols(); ++l) {
        if (!(inner.a.col(l).norm() >= 1e-14)) ++out.degenerate_blocks;
      }
      out.objective = after;
      return Frame(frame.field(), std::move(next));
    }
    if (inner.dual_value >= before - tolerance) {
      out.fixed_point = true;
      break;
    }
    attempt_config.mda_eta *= config.eta_retry_factor;
  }
  out.rejected = true;
  out.objective = before;
  return frame;
}
SolveResult solve(const Frame& frame0, const SolverConfig& config) {
  config.validate();
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  auto elapsed_ms = [&] { return std::chrono::duration<double, std::milli>(Clock::now() - start).count(); };

  ConvergenceTrace trace;
  trace.bound = frame0.size() >= 2 && !(frame0.field() == Field::complex && frame0.dim() == 1)
                    ? composite_bound(frame0.dim(), frame0.size(), frame0.field())
                    : 0.0;

  Frame current = frame0;
  Frame best = frame0;
  trace.best_mu = frame0.size() >= 2 ? max_coherence(frame0.matrix()) : 0.0;
  trace.best_iter = 0;
  trace.records.push_back({0, trace.best_mu, frame_objective(frame0.matrix()), 0, elapsed_ms(), 0.0, 0});

  if (frame0.size() < 2 || std::abs(trace.best_mu - trace.bound) < config.stop_tol) {
    trace.status = TerminalStatus::bound_reached;
    return {best, trace};
  }

  trace.status = TerminalStatus::max_iters;
  for (std::int64_t t = 1; t <= config.max_outer_iters; ++t) {
    TraceRecord rec;
    rec.iter = t;
    bool moved = true;
    if (config.acceleration == Acceleration::squarem) {
      SquaremState state;
      Frame next = squarem_step(current, config, &state);
      rec.inner_iters = state.inner_iters;
      rec.alpha = state.alpha;
      rec.backtracks = state.backtrack_count;
      trace.degenerate_events += state.degenerate_blocks;
      trace.rejected_steps += state.rejected_steps;
      moved = next.matrix() != current.matrix();
      current = std::move(next);
    } else {
      StepInfo info;
      Frame next = outer_step(current, config, &info);
      rec.inner_iters = info.inner_iters;
      trace.degenerate_events += info.degenerate_blocks;
      if (info.rejected) ++trace.rejected_steps;
      moved = !info.rejected;
      current = std::move(next);
    }
    trace.iterations = t;

    rec.mu = max_coherence(current.matrix());
    rec.objective = frame_objective(current.matrix());
    rec.wall_ms = elapsed_ms();
    if (rec.mu < trace.best_mu) {
      trace.best_mu = rec.mu;
      trace.best_iter = t;
      best = current;
    }

    bool done = false;
    if (std::abs(rec.mu - trace.bound) < config.stop_tol) {
      trace.status = TerminalStatus::bound_reached;
      done = true;
    } else if (!moved) {
      trace.status = TerminalStatus::stalled;
      done = true;
    }
    if (done || t % config.trace_every == 0 || t == config.max_outer_iters) trace.records.push_back(rec);
    if (done) break;
  }
  return {best, trace};
}

}  // namespace telet
