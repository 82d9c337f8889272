#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "helpers.hpp"
#include "telet/bounds.hpp"
#include "telet/init.hpp"
#include "telet/squarem.hpp"

using namespace telet;

namespace {

std::int64_t iterations_to(const ConvergenceTrace& trace, double level) {
  for (const auto& rec : trace.records) {
    if (rec.mu <= level) return rec.iter;
  }
  return -1;
}

}  // namespace

TEST_CASE("extrapolation renormalizes columns") {
  const Frame f = testing::random_frame(3, 5, Field::complex, 1);
  Rng rng = make_stream(1, "extrapolate");
  const CMatrix r = testing::perturb(f.matrix(), 0.3, Field::complex, rng) - f.matrix();
  const CMatrix v = testing::perturb(f.matrix(), 0.3, Field::complex, rng) - f.matrix();
  const CMatrix x = squarem_extrapolate(f.matrix(), r, v, -2.5);
  for (Eigen::Index c = 0; c < x.cols(); ++c) CHECK(std::abs(x.col(c).norm() - 1.0) <= 1e-12);
  CHECK_NOTHROW(Frame(Field::complex, x));
}

TEST_CASE("fixed point passes through unchanged") {
  const Frame eye(Field::complex, CMatrix::Identity(3, 3));
  SquaremState st;
  const Frame out = squarem_step(eye, SolverConfig{}, &st);
  CHECK(st.r.norm() == 0.0);
  CHECK(st.v.norm() == 0.0);
  CHECK(out.matrix() == eye.matrix());
}

TEST_CASE("alpha = -1 reduces to two plain steps") {
  const SolverConfig config;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Frame f = init_frame(3, 6, Field::complex, {4.0, seed});
    SquaremState st;
    const Frame out = squarem_step(f, config, &st, -1.0);
    const Frame two = outer_step(outer_step(f, config), config);
    CHECK(out.matrix() == two.matrix());
    CHECK(st.alpha == -1.0);
    CHECK(st.backtrack_count == 0);
  }
}

TEST_CASE("step length and safeguard contract") {
  SolverConfig config;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    for (Field field : {Field::complex, Field::real}) {
      Frame f = init_frame(4, 8, field, {4.0, seed});
      for (int t = 0; t < 8; ++t) {
        SquaremState st;
        const double before = frame_objective(f.matrix());
        f = squarem_step(f, config, &st);
        CHECK(frame_objective(f.matrix()) <= before + 1e-10);
        CHECK(st.alpha <= -1.0);
        CHECK(st.backtrack_count >= 0);
        CHECK(st.backtrack_count <= config.max_backtracks);
        CHECK(std::abs(st.r.norm() - (st.first - st.base).norm()) <= 1e-12);
        if (field == Field::real) CHECK(f.matrix().imag().cwiseAbs().maxCoeff() == 0.0);
        for (Eigen::Index c = 0; c < f.size(); ++c) CHECK(std::abs(f.column(c).norm() - 1.0) <= 1e-12);
      }
    }
  }
}

TEST_CASE("zero backtracks falls back to the double step") {
  SolverConfig config;
  config.max_backtracks = 0;
  const Frame f = init_frame(4, 8, Field::complex, {4.0, 3});
  for (int t = 0; t < 5; ++t) {
    SquaremState st;
    const Frame out = squarem_step(f, config, &st, -50.0);
    if (st.fell_back) CHECK(out.matrix() == st.second);
    CHECK(frame_objective(out.matrix()) <= frame_objective(f.matrix()) + 1e-10);
  }
}

TEST_CASE("acceleration reduces iterations on (4,10)") {
  const Frame x0 = init_frame(4, 10, Field::complex, {4.0, 0});
  const double level = composite_bound(4, 10, Field::complex) + 1e-2;
  SolverConfig config;
  config.max_outer_iters = 3000;
  config.acceleration = Acceleration::squarem;
  const auto fast = iterations_to(solve(x0, config).trace, level);
  config.acceleration = Acceleration::none;
  const auto slow = iterations_to(solve(x0, config).trace, level);
  MESSAGE("squarem " << fast << " vs plain " << slow);
  REQUIRE(fast > 0);
  CHECK((slow < 0 || fast < slow));
}
