// Random frame initialization with greedy coherence pruning.
#pragma once

#include <cstdint>

#include "telet/frame.hpp"

namespace telet {

struct InitOptions {
  double oversample_factor = 4.0;
  std::uint64_t seed = 0;
  // Complex only: standard deviation of a complex Gaussian added to the
  // unit-modulus entries before normalization. Equal-modulus vectors in C^2
  // all lie on one great circle of the Bloch sphere, a set the solver never
  // leaves; a tiny perturbation moves the start off it.
  double complex_jitter = 1e-6;
};

/// Random candidate set of ceil(oversample_factor * N) unit vectors.
/// Complex: entries exp(i 2 pi phi), phi ~ U[0,1), then normalized.
/// Real: i.i.d. standard normal entries, then normalized.
/// `jitter` applies to the complex field only, see InitOptions.
CMatrix random_candidates(Eigen::Index d, Eigen::Index count, Field field, std::uint64_t seed,
                          double jitter = 0.0);

/// Repeatedly removes one endpoint of the most coherent remaining pair until
/// `keep` columns remain. The removed endpoint is the one whose largest
/// coherence with the other remaining columns (excluding the pair partner)
/// is larger; ties remove the lower index.
CMatrix greedy_prune(const CMatrix& candidates, Eigen::Index keep);

/// Candidate generation followed by greedy pruning. Deterministic in seed.
Frame init_frame(Eigen::Index d, Eigen::Index n, Field field, const InitOptions& options = {});

}  // namespace telet
