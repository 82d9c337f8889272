#include <cmath>
#include <limits>

#include "telet/rng.hpp"
#include "telet/solver.hpp"

namespace telet {

namespace {

// Blockwise minimizer of 4 Re(a^H y) over unit balls: y_l = -a_l / |a_l|.
// A vanishing block ties every feasible point; the anchor column is used.
CMatrix block_minimizer(const CMatrix& a, const CMatrix& anchor) { return normalize_columns(-a, anchor); }

}  // namespace

double mda_gap_tolerance(Eigen::Index n, Eigen::Index d) {
  // h carries a constant of size 4 N^2 d that cancels between terms.
  return 1e-14 * 4.0 * static_cast<double>(n * n * d);
}

MdaResult mda_solve(const SurrogateData& sd, const SolverConfig& config) {
  const Eigen::Index pairs = sd.pair_count();
  RVector q = RVector::Constant(pairs, 1.0 / static_cast<double>(pairs));

  RVector best_q = q;
  double best_primal = std::numeric_limits<double>::infinity();
  double best_dual = -std::numeric_limits<double>::infinity();
  std::int64_t used = 0;
  const double tolerance = mda_gap_tolerance(sd.size(), sd.dim());

  for (std::int64_t k = 1; k <= config.inner_iters; ++k) {
    used = k;
    const CMatrix a = apply_D(sd, q);
    const CMatrix y = block_minimizer(a, sd.anchor);
    const RVector h = apply_D_adjoint(sd, y) + sd.s;

    // Weak duality: any dual value bounds the surrogate minimum from below,
    // so the best primal and best dual together certify the gap.
    const double primal = h.maxCoeff();
    const double dual = q.dot(h);
    if (primal < best_primal) {
      best_primal = primal;
      best_q = q;
    }
    best_dual = std::max(best_dual, dual);
    if (pairs == 1 || best_primal - best_dual <= tolerance) break;

    const double gamma = config.mda_eta / std::sqrt(static_cast<double>(k));
    const double shift = config.mda_sign > 0 ? h.maxCoeff() : h.minCoeff();
    RVector next = q.array() * (static_cast<double>(config.mda_sign) * gamma * (h.array() - shift)).exp();
    next /= next.sum();
    const double change = (next - q).lpNorm<1>();
    q = std::move(next);
    if (change < 1e-8) break;
  }

  MdaResult result{SimplexWeights(best_q), apply_D(sd, best_q), used, best_primal, best_dual};
  return result;
}

int ascent_sign_probe(std::uint64_t seed) {
  // Fixed small random complex frame.
  Rng rng = make_stream(seed, "mda-probe");
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix x(3, 4);
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    for (Eigen::Index r = 0; r < x.rows(); ++r) x(r, c) = Complex(normal(rng), normal(rng));
    x.col(c).normalize();
  }
  const SurrogateData sd = build_surrogate(x);

  // Dual value h(q) = q.s + 4 Re((Dq)^H y*(q)) = q.s - 4 sum_l |a_l|.
  auto dual = [&](const RVector& q) {
    const CMatrix a = apply_D(sd, q);
    return q.dot(sd.s) - 4.0 * a.colwise().norm().sum();
  };

  int best_sign = +1;
  double best_gain = -std::numeric_limits<double>::infinity();
  for (int sign : {+1, -1}) {
    RVector q = RVector::Constant(sd.pair_count(), 1.0 / static_cast<double>(sd.pair_count()));
    const double start = dual(q);
    for (int k = 1; k <= 50; ++k) {
      const CMatrix y = block_minimizer(apply_D(sd, q), sd.anchor);
      const RVector h = apply_D_adjoint(sd, y) + sd.s;
      const double shift = sign > 0 ? h.maxCoeff() : h.minCoeff();
      q = q.array() * (sign * (1.0 / std::sqrt(static_cast<double>(k))) * (h.array() - shift)).exp();
      q /= q.sum();
    }
    const double gain = dual(q) - start;
    if (gain > best_gain) {
      best_gain = gain;
      best_sign = sign;
    }
  }
  return best_sign;
}

}  // namespace telet
