#include "telet/cs.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "telet/init.hpp"
#include "telet/rng.hpp"

namespace telet {

RMatrix haar_dictionary(Eigen::Index n) {
  if (n < 1 || (n & (n - 1)) != 0) throw InvalidInput("haar_dictionary: N must be a power of two");
  RMatrix h = RMatrix::Ones(1, 1);
  const double r = 1.0 / std::sqrt(2.0);
  while (h.rows() < n) {
    const Eigen::Index m = h.rows();
    RMatrix next(2 * m, 2 * m);
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) {
        next(i, 2 * j) = r * h(i, j);
        next(i, 2 * j + 1) = r * h(i, j);
      }
    }
    next.bottomRows(m).setZero();
    for (Eigen::Index i = 0; i < m; ++i) {
      next(m + i, 2 * i) = r;
      next(m + i, 2 * i + 1) = -r;
    }
    h = std::move(next);
  }
  return h;
}

RMatrix dct_dictionary(Eigen::Index n) {
  if (n < 1) throw InvalidInput("dct_dictionary: N must be positive");
  RMatrix c(n, n);
  const double nd = static_cast<double>(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double scale = std::sqrt((k == 0 ? 1.0 : 2.0) / nd);
    for (Eigen::Index j = 0; j < n; ++j) {
      c(k, j) = scale * std::cos(std::numbers::pi * (2.0 * static_cast<double>(j) + 1.0) * static_cast<double>(k) / (2.0 * nd));
    }
  }
  return c;
}

SensingSolution ls_sensing_matrix(const RMatrix& x_target, const RMatrix& psi) {
  if (x_target.cols() != psi.cols()) throw InvalidInput("ls_sensing_matrix: X and Psi column counts differ");
  Eigen::CompleteOrthogonalDecomposition<RMatrix> cod(psi.transpose());
  SensingSolution out;
  out.theta = cod.solve(x_target.transpose()).transpose();
  out.flagged = cod.rank() < std::min(psi.rows(), psi.cols());
  return out;
}

SensingProblem SensingProblem::from_sre(RMatrix psi, const RMatrix& sre, double omega, Eigen::Index d) {
  if (sre.rows() != psi.rows()) throw InvalidInput("SRE rows must match the dictionary");
  SensingProblem p{std::move(psi), sre * sre.transpose(), omega, d};
  p.validate();
  return p;
}

void SensingProblem::validate() const {
  if (!(omega >= 0.0 && omega <= 1.0)) throw InvalidInput("omega must lie in [0, 1]");
  if (psi.rows() != psi.cols() || psi.rows() == 0) throw InvalidInput("dictionary must be square and non-empty");
  if (sre_moment.rows() != psi.rows() || sre_moment.cols() != psi.rows()) {
    throw InvalidInput("SRE second moment must be N x N");
  }
  if (d < 1 || d > psi.rows()) throw InvalidInput("measurement dimension must satisfy 1 <= d <= N");
}

double sensing_objective(const SensingProblem& problem, const RMatrix& theta, const RMatrix& x_target) {
  const double fit = (x_target - theta * problem.psi).squaredNorm();
  const double sre = (theta * problem.sre_moment * theta.transpose()).trace();
  return problem.omega * fit + (1.0 - problem.omega) * sre;
}

RMatrix sensing_gradient(const SensingProblem& problem, const RMatrix& theta, const RMatrix& x_target) {
  return 2.0 * problem.omega * (theta * problem.psi - x_target) * problem.psi.transpose() +
         2.0 * (1.0 - problem.omega) * theta * problem.sre_moment;
}

SensingSolution sre_aware_sensing_matrix(const SensingProblem& problem, const RMatrix& x_target) {
  problem.validate();
  if (x_target.rows() != problem.d || x_target.cols() != problem.psi.rows()) {
    throw InvalidInput("target frame must be d x N");
  }
  const Eigen::Index n = problem.psi.rows();
  RMatrix m = problem.omega * problem.psi * problem.psi.transpose() + (1.0 - problem.omega) * problem.sre_moment;
  m = 0.5 * (m + m.transpose());
  SensingSolution out;
  Eigen::SelfAdjointEigenSolver<RMatrix> eig(m, Eigen::EigenvaluesOnly);
  const double top = eig.eigenvalues().cwiseAbs().maxCoeff();
  if (!(eig.eigenvalues().minCoeff() > 1e-12 * std::max(top, 1e-300))) {
    const double ridge = 1e-10 * std::max(m.trace(), 1.0) / static_cast<double>(n);
    m.diagonal().array() += ridge;
    out.flagged = true;
  }
  const RMatrix rhs = problem.omega * problem.psi * x_target.transpose();
  out.theta = m.ldlt().solve(rhs).transpose();
  return out;
}

RMatrix gaussian_sensing_matrix(Eigen::Index d, Eigen::Index n, std::uint64_t seed) {
  Rng rng = make_stream(seed, "cs-gaussian");
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(d)));
  RMatrix theta(d, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) theta(i, j) = normal(rng);
  }
  return theta;
}

namespace {

Frame equivalent_frame(const RMatrix& theta, const RMatrix& psi) {
  const RMatrix ed = theta * psi;
  CMatrix x = ed.cast<Complex>();
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double norm = x.col(j).norm();
    if (!(norm > 1e-14)) throw DegenerateInput("equivalent dictionary has a zero column");
    x.col(j) /= norm;
  }
  return Frame(Field::real, std::move(x));
}

}  // namespace

SensingDesign optimize_sensing(const SensingProblem& problem, const SolverConfig& telet_config,
                               std::int64_t n_alternations, std::uint64_t seed, const std::optional<RMatrix>& theta0) {
  problem.validate();
  if (n_alternations < 1) throw InvalidInput("n_alternations must be positive");
  const Eigen::Index n = problem.psi.rows();
  RMatrix theta = theta0 ? *theta0 : gaussian_sensing_matrix(problem.d, n, derive_seed(seed, "cs-theta0"));
  if (theta.rows() != problem.d || theta.cols() != n) throw InvalidInput("theta0 must be d x N");

  SensingDesign out{theta, equivalent_frame(theta, problem.psi), {}, false};
  for (std::int64_t t = 1; t <= n_alternations; ++t) {
    SolveResult designed = solve(equivalent_frame(theta, problem.psi), telet_config);
    const RMatrix target = designed.frame.matrix().real();
    SensingSolution next = sre_aware_sensing_matrix(problem, target);
    out.flagged = out.flagged || next.flagged;
    theta = std::move(next.theta);
    AlternationRecord rec;
    rec.alternation = t;
    rec.objective = sensing_objective(problem, theta, target);
    rec.mu = max_coherence(equivalent_frame(theta, problem.psi).matrix());
    rec.frame_mu = designed.trace.best_mu;
    out.records.push_back(rec);
    out.target = std::move(designed.frame);
  }
  out.theta = std::move(theta);
  return out;
}

RVector omp_recover(const RVector& y, const RMatrix& a, Eigen::Index k) {
  if (y.size() != a.rows()) throw InvalidInput("omp_recover: y and A row counts differ");
  if (k < 0 || k > a.rows()) throw InvalidInput("omp_recover: need 0 <= K <= d");
  const Eigen::Index n = a.cols();
  const RVector norms = a.colwise().norm().transpose();
  RVector s_hat = RVector::Zero(n);
  const double y_norm = y.norm();
  if (k == 0 || !(y_norm > 0.0)) return s_hat;

  std::vector<Eigen::Index> support;
  std::vector<char> active(static_cast<std::size_t>(n), 0);
  RVector residual = y;
  RVector coef;
  for (Eigen::Index step = 0; step < k; ++step) {
    if (residual.norm() <= 1e-12 * y_norm) break;
    const RVector corr = a.transpose() * residual;
    Eigen::Index best = -1;
    double best_score = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!(norms(j) > 0.0)) continue;
      const double score = std::abs(corr(j)) / norms(j);
      if (score > best_score) {
        best_score = score;
        best = j;
      }
    }
    if (best < 0 || active[static_cast<std::size_t>(best)]) break;
    active[static_cast<std::size_t>(best)] = 1;
    support.push_back(best);
    RMatrix sub(a.rows(), static_cast<Eigen::Index>(support.size()));
    for (std::size_t c = 0; c < support.size(); ++c) sub.col(static_cast<Eigen::Index>(c)) = a.col(support[c]);
    coef = sub.colPivHouseholderQr().solve(y);
    residual = y - sub * coef;
  }
  for (std::size_t c = 0; c < support.size(); ++c) s_hat(support[c]) = coef(static_cast<Eigen::Index>(c));
  return s_hat;
}

SparseSignalSet make_signal_set(const RMatrix& psi, Eigen::Index k, Eigen::Index r, double sigma2,
                                std::uint64_t seed) {
  const Eigen::Index n = psi.cols();
  if (k < 0 || k > n) throw InvalidInput("sparsity K must satisfy 0 <= K <= N");
  if (r < 1) throw InvalidInput("signal count R must be positive");
  if (!(sigma2 >= 0.0)) throw InvalidInput("noise variance must be non-negative");
  Rng rng = make_stream(seed, "cs-signals");
  Rng noise_rng = make_stream(seed, "cs-noise");
  std::normal_distribution<double> normal(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, std::sqrt(sigma2));

  SparseSignalSet set;
  set.s = RMatrix::Zero(n, r);
  set.sigma2 = sigma2;
  set.k = k;
  set.seed = seed;
  std::vector<Eigen::Index> positions(static_cast<std::size_t>(n));
  for (Eigen::Index t = 0; t < r; ++t) {
    std::iota(positions.begin(), positions.end(), Eigen::Index{0});
    // Partial Fisher-Yates: the first k entries form a uniform k-subset.
    for (Eigen::Index i = 0; i < k; ++i) {
      std::uniform_int_distribution<Eigen::Index> pick(i, n - 1);
      std::swap(positions[static_cast<std::size_t>(i)], positions[static_cast<std::size_t>(pick(rng))]);
      set.s(positions[static_cast<std::size_t>(i)], t) = normal(rng);
    }
  }
  set.u_star = psi * set.s;
  set.noise = RMatrix::Zero(psi.rows(), r);
  if (sigma2 > 0.0) {
    for (Eigen::Index t = 0; t < r; ++t) {
      for (Eigen::Index i = 0; i < psi.rows(); ++i) set.noise(i, t) = noise(noise_rng);
    }
  }
  return set;
}

double recovery_mse(const RMatrix& u_hat, const RMatrix& u_star, Eigen::Index d) {
  if (u_hat.rows() != u_star.rows() || u_hat.cols() != u_star.cols()) throw InvalidInput("recovery_mse: shape mismatch");
  return (u_hat - u_star).squaredNorm() / static_cast<double>(d * u_star.cols());
}

RMatrix recover_signals(const RMatrix& theta, const RMatrix& psi, const RMatrix& observed, Eigen::Index k) {
  const RMatrix a = theta * psi;
  const RMatrix y = theta * observed;
  RMatrix s_hat(psi.cols(), observed.cols());
  for (Eigen::Index t = 0; t < observed.cols(); ++t) s_hat.col(t) = omp_recover(y.col(t), a, k);
  return psi * s_hat;
}

double psnr(const RMatrix& reference, const RMatrix& reconstructed) {
  if (reference.rows() != reconstructed.rows() || reference.cols() != reconstructed.cols() || reference.size() == 0) {
    throw InvalidInput("psnr: shape mismatch");
  }
  const double mse = (reference - reconstructed).squaredNorm() / static_cast<double>(reference.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

double percent_decrease(double mu_a, double mu_b) {
  if (!(mu_a > 0.0)) throw InvalidInput("percent_decrease: reference coherence must be positive");
  return (mu_a - mu_b) / mu_a * 100.0;
}

std::string to_string(CsMethod method) {
  switch (method) {
    case CsMethod::telet: return "telet";
    case CsMethod::ls_etf_target: return "ls_etf_target";
    case CsMethod::gaussian_random: return "gaussian_random";
  }
  return "unknown";
}

CsMethod parse_cs_method(const std::string& text) {
  if (text == "telet") return CsMethod::telet;
  if (text == "ls_etf_target") return CsMethod::ls_etf_target;
  if (text == "gaussian_random") return CsMethod::gaussian_random;
  throw InvalidInput("unknown method '" + text + "'");
}

void ExperimentSpec::validate() const {
  if (n < 2) throw InvalidInput("spec: N must be at least 2");
  if (d_list.empty() || k_list.empty() || seeds.empty() || methods.empty()) {
    throw InvalidInput("spec: d_list, K_list, seeds and methods must be non-empty");
  }
  for (auto d : d_list) {
    if (d < 1 || d > n) throw InvalidInput("spec: every d must satisfy 1 <= d <= N");
    for (auto k : k_list) {
      if (k < 1 || k > d) throw InvalidInput("spec: every K must satisfy 1 <= K <= d");
    }
  }
  if (r < 1) throw InvalidInput("spec: R must be positive");
  if (!(sigma2 >= 0.0)) throw InvalidInput("spec: sigma2 must be non-negative");
  if (!(omega >= 0.0 && omega <= 1.0)) throw InvalidInput("spec: omega must lie in [0, 1]");
  if (dictionary != "haar" && dictionary != "dct") throw InvalidInput("spec: dictionary must be haar or dct");
  if (dictionary == "haar" && (n & (n - 1)) != 0) throw InvalidInput("spec: haar needs N a power of two");
  if (telet_iters < 1 || alternations < 1 || inner_iters < 1) throw InvalidInput("spec: iteration counts must be positive");
}

ExperimentSpec parse_experiment_spec(const std::string& json_text) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string("spec: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw InvalidInput("spec: top level must be an object");
  static const std::set<std::string> known{"N", "d_list", "K_list", "R", "sigma2", "omega", "seeds",
                                           "dictionary", "methods", "telet_iters", "alternations", "inner_iters"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw InvalidInput("spec: unknown key '" + key + "'");
  }
  ExperimentSpec spec;
  try {
    if (j.contains("N")) spec.n = j.at("N").get<Eigen::Index>();
    if (j.contains("d_list")) spec.d_list = j.at("d_list").get<std::vector<Eigen::Index>>();
    if (j.contains("K_list")) spec.k_list = j.at("K_list").get<std::vector<Eigen::Index>>();
    if (j.contains("R")) spec.r = j.at("R").get<Eigen::Index>();
    if (j.contains("sigma2")) spec.sigma2 = j.at("sigma2").get<double>();
    if (j.contains("omega")) spec.omega = j.at("omega").get<double>();
    if (j.contains("seeds")) spec.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    if (j.contains("dictionary")) spec.dictionary = j.at("dictionary").get<std::string>();
    if (j.contains("methods")) {
      spec.methods.clear();
      for (const auto& m : j.at("methods")) spec.methods.push_back(parse_cs_method(m.get<std::string>()));
    }
    if (j.contains("telet_iters")) spec.telet_iters = j.at("telet_iters").get<std::int64_t>();
    if (j.contains("alternations")) spec.alternations = j.at("alternations").get<std::int64_t>();
    if (j.contains("inner_iters")) spec.inner_iters = j.at("inner_iters").get<std::int64_t>();
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("spec: ") + e.what());
  }
  spec.validate();
  return spec;
}

ExperimentSpec load_experiment_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open spec file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_experiment_spec(buf.str());
}

std::string experiment_spec_to_json(const ExperimentSpec& spec) {
  nlohmann::json methods = nlohmann::json::array();
  for (auto m : spec.methods) methods.push_back(to_string(m));
  nlohmann::json j{{"N", spec.n},           {"d_list", spec.d_list}, {"K_list", spec.k_list},
                   {"R", spec.r},           {"sigma2", spec.sigma2}, {"omega", spec.omega},
                   {"seeds", spec.seeds},   {"dictionary", spec.dictionary}, {"methods", methods},
                   {"telet_iters", spec.telet_iters}, {"alternations", spec.alternations},
                   {"inner_iters", spec.inner_iters}};
  return j.dump(2);
}

std::vector<ExperimentRow> run_synthetic_experiment(const ExperimentSpec& spec) {
  spec.validate();
  using Clock = std::chrono::steady_clock;
  // Columns of Psi are the synthesis atoms.
  const RMatrix psi = (spec.dictionary == "haar" ? haar_dictionary(spec.n) : dct_dictionary(spec.n)).transpose();

  SolverConfig telet_config;
  telet_config.max_outer_iters = spec.telet_iters;
  telet_config.inner_iters = spec.inner_iters;
  telet_config.trace_every = spec.telet_iters;

  std::vector<ExperimentRow> rows;
  for (auto d : spec.d_list) {
    for (auto k : spec.k_list) {
      const auto cell = static_cast<std::uint64_t>(d) * 65536u + static_cast<std::uint64_t>(k);
      for (auto seed : spec.seeds) {
        const SparseSignalSet set = make_signal_set(psi, k, spec.r, spec.sigma2, derive_seed(seed, "cs-set", cell));
        const RMatrix observed = set.observed();
        const RMatrix gaussian = gaussian_sensing_matrix(d, spec.n, derive_seed(seed, "cs-theta", cell));
        telet_config.rng_seed = derive_seed(seed, "cs-telet", cell);
        for (auto method : spec.methods) {
          const auto start = Clock::now();
          RMatrix theta;
          switch (method) {
            case CsMethod::gaussian_random:
              theta = gaussian;
              break;
            case CsMethod::telet: {
              const SensingProblem problem = SensingProblem::from_sre(psi, set.noise, spec.omega, d);
              theta = optimize_sensing(problem, telet_config, spec.alternations, seed, gaussian).theta;
              break;
            }
            case CsMethod::ls_etf_target: {
              const Frame start_frame = init_frame(d, spec.n, Field::real, InitOptions{4.0, derive_seed(seed, "cs-etf", cell)});
              const Frame target = solve(start_frame, telet_config).frame;
              theta = ls_sensing_matrix(target.matrix().real(), psi).theta;
              break;
            }
          }
          const RMatrix u_hat = recover_signals(theta, psi, observed, k);
          ExperimentRow row;
          row.method = method;
          row.d = d;
          row.k = k;
          row.seed = seed;
          row.mse = recovery_mse(u_hat, set.u_star, d);
          row.mu_ed = max_coherence((theta * psi).cast<Complex>().colwise().normalized());
          row.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
          rows.push_back(row);
        }
      }
    }
  }
  return rows;
}

void write_results_csv(const std::vector<ExperimentRow>& rows, std::ostream& out) {
  out << kResultsHeader << '\n';
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%lld,%lld,%llu,%.17g,%.17g,%.3f", to_string(r.method).c_str(),
                  static_cast<long long>(r.d), static_cast<long long>(r.k), static_cast<unsigned long long>(r.seed),
                  r.mse, r.mu_ed, r.wall_ms);
    out << buf << '\n';
  }
}

}  // namespace telet
