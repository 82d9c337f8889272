// Alternating-projection frame design on the Gram matrix.
//
// Each iteration clips off-diagonal Gram entries to a threshold (structural
// constraint), then replaces the result by alpha times the projector onto
// its top-d eigenspace (spectral constraint). A frame is read off the final
// Gram matrix by eigendecomposition.
#pragma once

#include <cstdint>
#include <string>

#include "telet/solver.hpp"

namespace telet {

enum class APVariantName { tropp, xiong, katsaggelos };
std::string to_string(APVariantName name);
APVariantName parse_variant(const std::string& text);

enum class AlphaRule { sqrt_N_over_d, N_over_d, mean_top_d_eigs };
std::string to_string(AlphaRule rule);
AlphaRule parse_alpha_rule(const std::string& text);

// Parameter tables for the variants.
//   standard: tropp clips at the Welch bound and scales by N/d (the values
//             under which it reaches Welch on small frames); xiong clips at
//             sqrt(1/d) with alpha the mean of the top d eigenvalues;
//             katsaggelos clips at the Welch bound with alpha = sqrt(N/d).
//   literal:  as standard, except tropp clips at sqrt(1/d) with
//             alpha = sqrt(N/d).
enum class VariantTable { standard, literal };
std::string to_string(VariantTable table);
VariantTable parse_variant_table(const std::string& text);

struct APVariant {
  APVariantName name = APVariantName::tropp;
  double eta = 0.0;
  AlphaRule alpha_rule = AlphaRule::sqrt_N_over_d;

  static APVariant make(APVariantName name, Eigen::Index d, Eigen::Index n,
                        VariantTable table = VariantTable::standard);
};

/// Off-diagonal entries with magnitude above eta are scaled to magnitude
/// eta, keeping their phase. The diagonal is set to 1.
CMatrix shrink(const CMatrix& gram, double eta);

/// Eigenpairs of a Hermitian matrix sorted by eigenvalue, descending. Each
/// eigenvector's phase is fixed so its first entry of magnitude > 1e-12 is
/// real and positive; near-equal eigenvalues are ordered by the real parts
/// of their eigenvectors, compared lexicographically (larger first).
struct SortedEigen {
  RVector values;
  CMatrix vectors;
};
SortedEigen sorted_eigen(const CMatrix& hermitian);

/// alpha U U^H with U the top-d eigenvectors of `gram`.
CMatrix nearest_alpha_tight(const CMatrix& gram, Eigen::Index d, double alpha);

/// alpha for a given Gram matrix under `rule`.
double tight_alpha(AlphaRule rule, const CMatrix& gram, Eigen::Index d);

/// X = Lambda^{1/2} U^H on the top-d eigenpairs, columns renormalized.
/// Columns that vanish are replaced by the first standard basis vector.
Frame extract_frame(const CMatrix& gram, Eigen::Index d, Field field);

struct BaselineConfig {
  std::int64_t max_iters = 10000;
  std::uint64_t seed = 0;
  std::int64_t trace_every = 1;
};

struct BaselineResult {
  Frame frame;  // extracted from the lowest-coherence Gram iterate
  ConvergenceTrace trace;
  APVariant variant;
};

/// Starts from the Gram matrix of init_frame(d, N, field, seed). The trace
/// records the coherence of the column-normalized alpha-tight Gram matrix
/// each iteration (objective column: 2 mu^2). The iteration can collapse
/// columns late in a run, so the frame returned is read off the iterate of
/// lowest coherence. Status is bound_reached when that coherence is within
/// 1e-5 of the composite bound, else max_iters.
BaselineResult alternating_projection(Eigen::Index d, Eigen::Index n, Field field, const APVariant& variant,
                                      const BaselineConfig& config);

}  // namespace telet
