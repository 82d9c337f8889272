#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "helpers.hpp"
#include "telet/baselines.hpp"
#include "telet/bounds.hpp"

using namespace telet;

namespace {

CMatrix gram_of(const Frame& f) { return f.matrix().adjoint() * f.matrix(); }

}  // namespace

TEST_CASE("shrink examples") {
  CHECK(shrink(CMatrix::Identity(4, 4), 0.5) == CMatrix::Identity(4, 4));

  CMatrix g = CMatrix::Identity(2, 2);
  const Complex big = std::polar(0.9, 0.7);
  g(0, 1) = big;
  g(1, 0) = std::conj(big);
  const CMatrix s = shrink(g, 0.5);
  CHECK(std::abs(s(0, 1) - std::polar(0.5, 0.7)) < 1e-15);
  CHECK(std::abs(s(1, 0) - std::polar(0.5, -0.7)) < 1e-15);

  CMatrix edge = CMatrix::Identity(2, 2);
  edge(0, 1) = edge(1, 0) = 0.5;
  CHECK(shrink(edge, 0.5) == edge);

  CMatrix diag = 3.0 * CMatrix::Identity(2, 2);
  CHECK(shrink(diag, 0.5) == CMatrix::Identity(2, 2));
}

TEST_CASE("shrink is idempotent") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const CMatrix g = gram_of(testing::random_frame(3, 7, Field::complex, seed));
    const CMatrix once = shrink(g, 0.4);
    CHECK((shrink(once, 0.4) - once).cwiseAbs().maxCoeff() <= 1e-14);
  }
}

TEST_CASE("nearest alpha-tight projection") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const CMatrix g = gram_of(testing::random_frame(3, 7, Field::complex, seed));
    const double alpha = 7.0 / 3.0;
    const CMatrix t = nearest_alpha_tight(g, 3, alpha);
    CHECK((t * t - alpha * t).norm() <= 1e-8 * alpha * alpha);
    CHECK(std::abs(t.trace() - Complex(alpha * 3.0, 0.0)) <= 1e-10);
    CHECK((nearest_alpha_tight(t, 3, alpha) - t).cwiseAbs().maxCoeff() <= 1e-10);
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(t, Eigen::EigenvaluesOnly);
    for (Eigen::Index k = 0; k < eig.eigenvalues().size(); ++k) {
      const double lambda = eig.eigenvalues()(k);
      CHECK((std::abs(lambda) <= 1e-10 || std::abs(lambda - alpha) <= 1e-10));
    }
  }
}

TEST_CASE("eigen ordering is deterministic under ties") {
  // Eigenvalue 1 with multiplicity 2: the tie is broken by eigenvector
  // entries, so two calls agree and the order is stable.
  const CMatrix g = [] { CMatrix m = CMatrix::Identity(3, 3); m(2, 2) = 2.0; return m; }();
  const SortedEigen a = sorted_eigen(g);
  const SortedEigen b = sorted_eigen(g);
  CHECK(a.vectors == b.vectors);
  CHECK(a.values(0) == doctest::Approx(2.0));
  for (Eigen::Index k = 0; k < 3; ++k) {
    Eigen::Index r = 0;
    while (std::abs(a.vectors(r, k)) <= 1e-12) ++r;
    CHECK(a.vectors(r, k).imag() == doctest::Approx(0.0));
    CHECK(a.vectors(r, k).real() > 0.0);
  }
  // Between the two tied eigenvectors, the lexicographically larger comes first.
  const CVector u = a.vectors.col(1), w = a.vectors.col(2);
  Eigen::Index r = 0;
  while (r < 3 && u(r).real() == w(r).real()) ++r;
  CHECK((r == 3 || u(r).real() > w(r).real()));
}

TEST_CASE("variant tables") {
  const auto tropp = APVariant::make(APVariantName::tropp, 4, 7);
  CHECK(tropp.eta == doctest::Approx(welch_bound(4, 7).value));
  CHECK(tropp.alpha_rule == AlphaRule::N_over_d);
  const auto literal = APVariant::make(APVariantName::tropp, 4, 7, VariantTable::literal);
  CHECK(literal.eta == doctest::Approx(0.5));
  CHECK(literal.alpha_rule == AlphaRule::sqrt_N_over_d);
  const auto xiong = APVariant::make(APVariantName::xiong, 4, 7);
  CHECK(xiong.eta == doctest::Approx(0.5));
  CHECK(xiong.alpha_rule == AlphaRule::mean_top_d_eigs);
  const auto kats = APVariant::make(APVariantName::katsaggelos, 4, 7);
  CHECK(kats.eta == doctest::Approx(std::sqrt(3.0 / 24.0)));
  CHECK(kats.alpha_rule == AlphaRule::sqrt_N_over_d);
  CHECK(parse_variant("xiong") == APVariantName::xiong);
  CHECK_THROWS_AS(parse_variant("icbp"), InvalidInput);

  const CMatrix g = CMatrix::Identity(7, 7);
  CHECK(tight_alpha(AlphaRule::sqrt_N_over_d, g, 4) == doctest::Approx(std::sqrt(7.0 / 4.0)));
  CHECK(tight_alpha(AlphaRule::N_over_d, g, 4) == doctest::Approx(7.0 / 4.0));
  CHECK(tight_alpha(AlphaRule::mean_top_d_eigs, g, 4) == doctest::Approx(1.0));
}

TEST_CASE("extracted frames satisfy the frame invariants") {
  for (Field field : {Field::complex, Field::real}) {
    const Frame f = testing::random_frame(3, 6, field, 4);
    const Frame x = extract_frame(gram_of(f), 3, field);
    CHECK(x.dim() == 3);
    CHECK(x.size() == 6);
    // Rank-d Gram: the extracted frame reproduces it up to a unitary.
    CHECK((gram_of(x) - gram_of(f)).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("alternating projection: N = d gives an orthonormal basis") {
  BaselineConfig config;
  config.max_iters = 200;
  const auto r = alternating_projection(3, 3, Field::complex, APVariant::make(APVariantName::tropp, 3, 3), config);
  CHECK(max_coherence(r.frame.matrix()) <= 1e-6);
}

TEST_CASE("alternating projection: tropp reaches Welch on (4,7)") {
  BaselineConfig config;
  config.max_iters = 10000;
  const auto r = alternating_projection(4, 7, Field::complex, APVariant::make(APVariantName::tropp, 4, 7), config);
  CHECK(std::abs(max_coherence(r.frame.matrix()) - 0.3536) <= 5e-3);
  CHECK(max_coherence(r.frame.matrix()) == doctest::Approx(r.trace.best_mu).epsilon(1e-9));
}

TEST_CASE("alternating projection: literal tropp table stalls at sqrt(1/d)-level coherence on (4,7)") {
  BaselineConfig config;
  config.max_iters = 2000;
  const auto r = alternating_projection(4, 7, Field::complex,
                                        APVariant::make(APVariantName::tropp, 4, 7, VariantTable::literal), config);
  CHECK(max_coherence(r.frame.matrix()) > 0.4);
}

TEST_CASE("alternating projection: deterministic, traced, real-safe") {
  BaselineConfig config;
  config.max_iters = 50;
  config.trace_every = 10;
  config.seed = 3;
  for (auto name : {APVariantName::tropp, APVariantName::xiong, APVariantName::katsaggelos}) {
    for (Field field : {Field::complex, Field::real}) {
      const auto v = APVariant::make(name, 3, 6);
      const auto a = alternating_projection(3, 6, field, v, config);
      const auto b = alternating_projection(3, 6, field, v, config);
      CHECK(a.frame.matrix() == b.frame.matrix());
      CHECK(a.trace.records.front().iter == 0);
      CHECK(a.trace.records.back().iter == a.trace.iterations);
      if (field == Field::real) CHECK(a.frame.matrix().imag().cwiseAbs().maxCoeff() == 0.0);
    }
  }
}
