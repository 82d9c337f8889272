// Compressed-sensing sensing-matrix design and a synthetic recovery harness.
//
// Signals u = Psi s + e with K-sparse s are measured as y = Theta u. Theta is
// chosen so that the equivalent dictionary Theta Psi is incoherent, traded
// off against the energy Theta passes from the representation error e.
// Everything here is real-valued.
#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "telet/solver.hpp"

namespace telet {

/// Orthonormal Haar wavelet analysis matrix; rows are basis functions.
/// Requires N to be a power of two.
RMatrix haar_dictionary(Eigen::Index n);

/// Orthonormal DCT-II matrix; rows are basis functions.
RMatrix dct_dictionary(Eigen::Index n);

struct SensingSolution {
  RMatrix theta;
  // Least squares: Psi was rank deficient and the least-norm solution was
  // returned. SRE-aware: the normal matrix was singular and a ridge term
  // was added.
  bool flagged = false;
};

/// argmin_Theta ||X - Theta Psi||_F^2 (least-norm solution).
SensingSolution ls_sensing_matrix(const RMatrix& x_target, const RMatrix& psi);

struct SensingProblem {
  RMatrix psi;         // N x N dictionary
  RMatrix sre_moment;  // E E^T, N x N
  double omega = 0.5;
  Eigen::Index d = 0;

  /// Builds E E^T from a raw N x R error matrix.
  static SensingProblem from_sre(RMatrix psi, const RMatrix& sre, double omega, Eigen::Index d);
  void validate() const;
};

/// omega ||X - Theta Psi||_F^2 + (1 - omega) ||Theta E||_F^2.
double sensing_objective(const SensingProblem& problem, const RMatrix& theta, const RMatrix& x_target);

/// Gradient of sensing_objective with respect to Theta.
RMatrix sensing_gradient(const SensingProblem& problem, const RMatrix& theta, const RMatrix& x_target);

/// Closed-form minimizer of sensing_objective over Theta:
/// Theta = omega X Psi^T (omega Psi Psi^T + (1 - omega) E E^T)^{-1}.
/// A singular system gets a ridge of 1e-10 trace / N and is flagged.
SensingSolution sre_aware_sensing_matrix(const SensingProblem& problem, const RMatrix& x_target);

/// Gaussian sensing matrix with i.i.d. N(0, 1/d) entries.
RMatrix gaussian_sensing_matrix(Eigen::Index d, Eigen::Index n, std::uint64_t seed);

struct AlternationRecord {
  std::int64_t alternation = 0;
  double objective = 0.0;  // sensing_objective after the Theta update
  double mu = 0.0;         // coherence of the normalized Theta Psi
  double frame_mu = 0.0;   // coherence of the designed target frame
};

struct SensingDesign {
  RMatrix theta;
  Frame target;
  std::vector<AlternationRecord> records;
  bool flagged = false;  // some Theta update needed regularization
};

/// Alternates between (a) running the frame solver, warm-started at the
/// column-normalized Theta Psi, to obtain a target frame, and (b) the
/// closed-form Theta update for that target. Theta starts Gaussian
/// (stream "cs-theta0" of `seed`) unless `theta0` is given.
SensingDesign optimize_sensing(const SensingProblem& problem, const SolverConfig& telet_config,
                               std::int64_t n_alternations, std::uint64_t seed,
                               const std::optional<RMatrix>& theta0 = std::nullopt);

/// Orthogonal matching pursuit: up to K greedy atom selections by normalized
/// correlation, each followed by a least-squares refit on the active set.
/// Stops early when the residual vanishes or an atom would repeat.
RVector omp_recover(const RVector& y, const RMatrix& a, Eigen::Index k);

struct SparseSignalSet {
  RMatrix s;       // N x R, exactly K nonzeros per column
  RMatrix u_star;  // Psi S
  RMatrix noise;   // N x R, i.i.d. N(0, sigma2)
  double sigma2 = 0.0;
  Eigen::Index k = 0;
  std::uint64_t seed = 0;

  RMatrix observed() const { return u_star + noise; }
};

/// Supports uniform without replacement, nonzero values N(0, 1).
SparseSignalSet make_signal_set(const RMatrix& psi, Eigen::Index k, Eigen::Index r, double sigma2,
                                std::uint64_t seed);

/// ||U_hat - U*||_F^2 / (d R).
double recovery_mse(const RMatrix& u_hat, const RMatrix& u_star, Eigen::Index d);

/// Recovers every column with OMP on A = Theta Psi and returns Psi S_hat.
RMatrix recover_signals(const RMatrix& theta, const RMatrix& psi, const RMatrix& observed, Eigen::Index k);

/// Peak signal-to-noise ratio in dB for 8-bit data (peak 255). Identical
/// inputs give +infinity.
double psnr(const RMatrix& reference, const RMatrix& reconstructed);

/// (mu_a - mu_b) / mu_a * 100.
double percent_decrease(double mu_a, double mu_b);

enum class CsMethod { telet, ls_etf_target, gaussian_random };
std::string to_string(CsMethod method);
CsMethod parse_cs_method(const std::string& text);

struct ExperimentSpec {
  Eigen::Index n = 32;
  std::vector<Eigen::Index> d_list{10};
  std::vector<Eigen::Index> k_list{4};
  Eigen::Index r = 50;
  double sigma2 = 0.25;
  double omega = 0.5;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  std::string dictionary = "haar";  // haar | dct
  std::vector<CsMethod> methods{CsMethod::telet, CsMethod::ls_etf_target, CsMethod::gaussian_random};
  std::int64_t telet_iters = 200;
  std::int64_t alternations = 10;
  std::int64_t inner_iters = 100;

  void validate() const;
};

ExperimentSpec parse_experiment_spec(const std::string& json_text);
ExperimentSpec load_experiment_spec(const std::string& path);
std::string experiment_spec_to_json(const ExperimentSpec& spec);

struct ExperimentRow {
  CsMethod method;
  Eigen::Index d = 0;
  Eigen::Index k = 0;
  std::uint64_t seed = 0;
  double mse = 0.0;
  double mu_ed = 0.0;
  double wall_ms = 0.0;
};

/// Rows ordered by (d, K, seed, method), methods in the order listed by the
/// experiment spec. For each (d, K, seed) one signal set is drawn and shared by all methods. The
/// telet method designs Theta with optimize_sensing using the drawn noise
/// as E; ls_etf_target fits Theta to a frame designed from a fresh random
/// start; gaussian_random draws Theta directly.
std::vector<ExperimentRow> run_synthetic_experiment(const ExperimentSpec& spec);

inline constexpr const char* kResultsHeader = "method,d,K,seed,MSE,mu_ED,wall_ms";
void write_results_csv(const std::vector<ExperimentRow>& rows, std::ostream& out);

}  // namespace telet
