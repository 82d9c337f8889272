#include "telet/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include "telet/bounds.hpp"
#include "telet/init.hpp"

namespace telet {

std::string to_string(APVariantName name) {
  switch (name) {
    case APVariantName::tropp: return "tropp";
    case APVariantName::xiong: return "xiong";
    case APVariantName::katsaggelos: return "katsaggelos";
  }
  return "unknown";
}

APVariantName parse_variant(const std::string& text) {
  if (text == "tropp") return APVariantName::tropp;
  if (text == "xiong") return APVariantName::xiong;
  if (text == "katsaggelos") return APVariantName::katsaggelos;
  throw InvalidInput("unknown variant '" + text + "' (expected tropp, xiong or katsaggelos)");
}

std::string to_string(AlphaRule rule) {
  switch (rule) {
    case AlphaRule::sqrt_N_over_d: return "sqrt_N_over_d";
    case AlphaRule::N_over_d: return "N_over_d";
    case AlphaRule::mean_top_d_eigs: return "mean_top_d_eigs";
  }
  return "unknown";
}

AlphaRule parse_alpha_rule(const std::string& text) {
  if (text == "sqrt_N_over_d") return AlphaRule::sqrt_N_over_d;
  if (text == "N_over_d") return AlphaRule::N_over_d;
  if (text == "mean_top_d_eigs") return AlphaRule::mean_top_d_eigs;
  throw InvalidInput("unknown alpha rule '" + text + "'");
}

std::string to_string(VariantTable table) { return table == VariantTable::standard ? "standard" : "literal"; }

VariantTable parse_variant_table(const std::string& text) {
  if (text == "standard") return VariantTable::standard;
  if (text == "literal") return VariantTable::literal;
  throw InvalidInput("unknown variant table '" + text + "' (expected standard or literal)");
}

APVariant APVariant::make(APVariantName name, Eigen::Index d, Eigen::Index n, VariantTable table) {
  if (d < 1 || n < d) throw InvalidInput("variant needs 1 <= d <= N");
  const double inv_sqrt_d = std::sqrt(1.0 / static_cast<double>(d));
  const double welch = welch_bound(d, n).value;
  APVariant v;
  v.name = name;
  switch (name) {
    case APVariantName::tropp:
      if (table == VariantTable::literal) {
        v.eta = inv_sqrt_d;
        v.alpha_rule = AlphaRule::sqrt_N_over_d;
      } else {
        v.eta = welch;
        v.alpha_rule = AlphaRule::N_over_d;
      }
      break;
    case APVariantName::xiong:
      v.eta = inv_sqrt_d;
      v.alpha_rule = AlphaRule::mean_top_d_eigs;
      break;
    case APVariantName::katsaggelos:
      v.eta = welch;
      v.alpha_rule = AlphaRule::sqrt_N_over_d;
      break;
  }
  // Welch is 0 at N = d; any positive threshold then keeps the problem sane.
  if (!(v.eta > 0.0)) v.eta = 1e-12;
  return v;
}

CMatrix shrink(const CMatrix& gram, double eta) {
  if (gram.rows() != gram.cols()) throw InvalidInput("shrink: Gram matrix must be square");
  CMatrix out = gram;
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
      if (i == j) {
        out(i, j) = 1.0;
        continue;
      }
      const double mag = std::abs(out(i, j));
      if (mag > eta) out(i, j) *= eta / mag;
    }
  }
  return out;
}

SortedEigen sorted_eigen(const CMatrix& hermitian) {
  const CMatrix sym = 0.5 * (hermitian + hermitian.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  const Eigen::Index n = sym.rows();
  CMatrix vecs = solver.eigenvectors();
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index r = 0; r < n; ++r) {
      const double mag = std::abs(vecs(r, k));
      if (mag > 1e-12) {
        vecs.col(k) *= std::conj(vecs(r, k)) / mag;
        break;
      }
    }
  }
  const RVector& vals = solver.eigenvalues();
  const double scale = std::max(1.0, vals.cwiseAbs().maxCoeff());
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (std::abs(vals(a) - vals(b)) > 1e-10 * scale) return vals(a) > vals(b);
    for (Eigen::Index r = 0; r < n; ++r) {
      const double ra = vecs(r, a).real();
      const double rb = vecs(r, b).real();
      if (ra != rb) return ra > rb;
    }
    return false;
  });
  SortedEigen out{RVector(n), CMatrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = vals(order[static_cast<std::size_t>(k)]);
    out.vectors.col(k) = vecs.col(order[static_cast<std::size_t>(k)]);
  }
  return out;
}

CMatrix nearest_alpha_tight(const CMatrix& gram, Eigen::Index d, double alpha) {
  if (d < 1 || d > gram.rows()) throw InvalidInput("nearest_alpha_tight: need 1 <= d <= N");
  const SortedEigen eig = sorted_eigen(gram);
  const CMatrix u = eig.vectors.leftCols(d);
  return alpha * (u * u.adjoint());
}

double tight_alpha(AlphaRule rule, const CMatrix& gram, Eigen::Index d) {
  const double n = static_cast<double>(gram.rows());
  switch (rule) {
    case AlphaRule::sqrt_N_over_d: return std::sqrt(n / static_cast<double>(d));
    case AlphaRule::N_over_d: return n / static_cast<double>(d);
    case AlphaRule::mean_top_d_eigs: return sorted_eigen(gram).values.head(d).sum() / static_cast<double>(d);
  }
  return 1.0;
}

Frame extract_frame(const CMatrix& gram, Eigen::Index d, Field field) {
  const Eigen::Index n = gram.rows();
  const SortedEigen eig = sorted_eigen(gram);
  CMatrix x(d, n);
  for (Eigen::Index k = 0; k < d; ++k) {
    x.row(k) = std::sqrt(std::max(eig.values(k), 0.0)) * eig.vectors.col(k).adjoint();
  }
  if (field == Field::real) x.imag().setZero();
  const CMatrix fallback = CMatrix::Identity(d, n).col(0).replicate(1, n);
  return Frame(field, normalize_columns(x, fallback, 1e-12));
}

namespace {

double normalized_coherence(const CMatrix& gram) {
  double mu = 0.0;
  for (Eigen::Index j = 0; j < gram.cols(); ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      const double denom = std::sqrt(std::abs(gram(i, i).real() * gram(j, j).real()));
      mu = std::max(mu, denom > 0.0 ? std::abs(gram(i, j)) / denom : 1.0);
    }
  }
  return std::min(mu, 1.0);
}

}  // namespace

BaselineResult alternating_projection(Eigen::Index d, Eigen::Index n, Field field, const APVariant& variant,
                                      const BaselineConfig& config) {
  if (config.max_iters < 1 || config.trace_every < 1) throw InvalidInput("baseline: iteration counts must be positive");
  if (!(variant.eta > 0.0)) throw InvalidInput("baseline: eta must be positive");
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  auto elapsed_ms = [&] { return std::chrono::duration<double, std::milli>(Clock::now() - start).count(); };

  const Frame x0 = init_frame(d, n, field, InitOptions{4.0, config.seed});
  CMatrix gram = x0.matrix().adjoint() * x0.matrix();

  ConvergenceTrace trace;
  trace.bound = n >= 2 && !(field == Field::complex && d == 1) ? composite_bound(d, n, field) : 0.0;
  const double mu0 = n >= 2 ? max_coherence(x0.matrix()) : 0.0;
  trace.records.push_back({0, mu0, 2.0 * mu0 * mu0, 0, elapsed_ms(), 0.0, 0});
  trace.best_mu = std::numeric_limits<double>::infinity();
  trace.status = TerminalStatus::max_iters;
  std::optional<CMatrix> best_gram;

  for (std::int64_t t = 1; t <= config.max_iters; ++t) {
    const CMatrix structured = shrink(gram, variant.eta);
    gram = nearest_alpha_tight(structured, d, tight_alpha(variant.alpha_rule, structured, d));
    if (field == Field::real) gram.imag().setZero();
    trace.iterations = t;
    const double mu = normalized_coherence(gram);
    if (mu < trace.best_mu || !best_gram) {
      trace.best_mu = mu;
      trace.best_iter = t;
      best_gram = gram;
    }
    const bool done = std::abs(mu - trace.bound) < 1e-5;
    if (done) trace.status = TerminalStatus::bound_reached;
    if (done || t % config.trace_every == 0 || t == config.max_iters) {
      trace.records.push_back({t, mu, 2.0 * mu * mu, 0, elapsed_ms(), 0.0, 0});
    }
    if (done) break;
  }
  return {extract_frame(*best_gram, d, field), std::move(trace), variant};
}

}  // namespace telet
