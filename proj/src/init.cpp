#include "telet/init.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "telet/rng.hpp"

namespace telet {

CMatrix random_candidates(Eigen::Index d, Eigen::Index count, Field field, std::uint64_t seed,
                          double jitter) {
  if (!(jitter >= 0.0) || !std::isfinite(jitter)) throw InvalidInput("random_candidates: jitter must be >= 0");
  Rng rng = make_stream(seed, "init");
  CMatrix x(d, count);
  if (field == Field::complex) {
    std::uniform_real_distribution<double> phase(0.0, 1.0);
    for (Eigen::Index c = 0; c < count; ++c) {
      for (Eigen::Index r = 0; r < d; ++r) x(r, c) = std::polar(1.0, 2.0 * std::numbers::pi * phase(rng));
    }
    if (jitter > 0.0) {
      Rng noise_rng = make_stream(seed, "init-jitter");
      std::normal_distribution<double> noise(0.0, jitter / std::sqrt(2.0));
      for (Eigen::Index c = 0; c < count; ++c) {
        for (Eigen::Index r = 0; r < d; ++r) x(r, c) += Complex(noise(noise_rng), noise(noise_rng));
      }
    }
  } else {
    std::normal_distribution<double> normal(0.0, 1.0);
    for (Eigen::Index c = 0; c < count; ++c) {
      for (Eigen::Index r = 0; r < d; ++r) x(r, c) = Complex(normal(rng), 0.0);
    }
  }
  for (Eigen::Index c = 0; c < count; ++c) x.col(c) /= x.col(c).norm();
  return x;
}

CMatrix greedy_prune(const CMatrix& candidates, Eigen::Index keep) {
  const Eigen::Index m = candidates.cols();
  if (keep < 1 || keep > m) throw InvalidInput("greedy_prune: keep must lie in [1, candidates]");
  if (keep == m) return candidates;

  const RMatrix coh = (candidates.adjoint() * candidates).cwiseAbs();
  std::vector<char> active(static_cast<std::size_t>(m), 1);

  // Largest coherence of column k against the active set, skipping `skip`.
  auto row_max = [&](Eigen::Index k, Eigen::Index skip, Eigen::Index* arg) {
    double best = -1.0;
    Eigen::Index best_l = -1;
    for (Eigen::Index l = 0; l < m; ++l) {
      if (l == k || l == skip || !active[static_cast<std::size_t>(l)]) continue;
      if (coh(k, l) > best) {
        best = coh(k, l);
        best_l = l;
      }
    }
    if (arg) *arg = best_l;
    return best;
  };

  RVector best_val(m);
  std::vector<Eigen::Index> best_arg(static_cast<std::size_t>(m));
  for (Eigen::Index k = 0; k < m; ++k) best_val(k) = row_max(k, -1, &best_arg[static_cast<std::size_t>(k)]);

  for (Eigen::Index remaining = m; remaining > keep; --remaining) {
    // Most coherent active pair; ties go to the lexicographically smallest.
    Eigen::Index i = -1;
    for (Eigen::Index k = 0; k < m; ++k) {
      if (!active[static_cast<std::size_t>(k)]) continue;
      if (i < 0 || best_val(k) > best_val(i)) i = k;
    }
    Eigen::Index j = best_arg[static_cast<std::size_t>(i)];
    if (j < i) std::swap(i, j);

    const double next_i = row_max(i, j, nullptr);
    const double next_j = row_max(j, i, nullptr);
    const Eigen::Index removed = next_j > next_i ? j : i;
    active[static_cast<std::size_t>(removed)] = 0;

    for (Eigen::Index k = 0; k < m; ++k) {
      if (active[static_cast<std::size_t>(k)] && best_arg[static_cast<std::size_t>(k)] == removed) {
        best_val(k) = row_max(k, -1, &best_arg[static_cast<std::size_t>(k)]);
      }
    }
  }

  CMatrix out(candidates.rows(), keep);
  Eigen::Index col = 0;
  for (Eigen::Index k = 0; k < m; ++k) {
    if (active[static_cast<std::size_t>(k)]) out.col(col++) = candidates.col(k);
  }
  return out;
}

Frame init_frame(Eigen::Index d, Eigen::Index n, Field field, const InitOptions& options) {
  if (d < 1 || n < d) throw InvalidInput("init_frame needs 1 <= d <= N");
  if (!(options.oversample_factor > 1.0)) throw InvalidInput("oversample_factor must exceed 1");
  const auto count = static_cast<Eigen::Index>(std::ceil(options.oversample_factor * static_cast<double>(n)));
  if (count < n + 1) throw InvalidInput("oversample_factor * N must give at least N + 1 candidates");
  const CMatrix candidates = random_candidates(d, count, field, options.seed, options.complex_jitter);
  return Frame::normalized(field, greedy_prune(candidates, n));
}

}  // namespace telet
