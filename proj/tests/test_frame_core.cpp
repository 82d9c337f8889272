#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <set>
#include <sstream>

#include "helpers.hpp"
#include "telet/bounds.hpp"
#include "telet/frame_io.hpp"
#include "telet/init.hpp"

using namespace telet;
using telet::testing::random_frame;

TEST_CASE("Frame enforces its invariants") {
  CHECK_NOTHROW(Frame(Field::complex, CMatrix::Identity(3, 3)));
  CMatrix bad = CMatrix::Identity(3, 3);
  bad(0, 0) = 1.0 + 1e-9;
  CHECK_THROWS_AS(Frame(Field::complex, bad), InvalidInput);
  CHECK_THROWS_AS(Frame(Field::complex, CMatrix::Identity(3, 2)), InvalidInput);
  CMatrix imag = CMatrix::Identity(2, 2);
  imag(0, 0) = Complex(0.0, 1.0);
  CHECK_NOTHROW(Frame(Field::complex, imag));
  CHECK_THROWS_AS(Frame(Field::real, imag), InvalidInput);
  CHECK_THROWS_AS(Frame::normalized(Field::real, CMatrix::Zero(2, 2)), InvalidInput);
}

TEST_CASE("pair enumeration is a row-major bijection") {
  for (Eigen::Index n : {2, 3, 7}) {
    std::set<Eigen::Index> seen;
    Eigen::Index expect = 0;
    for_each_pair(n, [&](Eigen::Index i, Eigen::Index j, Eigen::Index p) {
      CHECK(i < j);
      CHECK(p == expect++);
      CHECK(pair_flat_index(n, i, j) == p);
      CHECK(pair_from_flat(n, p) == PairIndex{i, j, p});
      seen.insert(p);
    });
    CHECK(static_cast<Eigen::Index>(seen.size()) == n * (n - 1) / 2);
  }
  CHECK(pair_flat_index(4, 0, 1) == 0);
  CHECK(pair_flat_index(4, 1, 2) == 3);
  CHECK(pair_flat_index(4, 2, 3) == 5);
  CHECK_THROWS_AS(pair_flat_index(4, 2, 2), InvalidInput);
}

TEST_CASE("mutual coherence examples") {
  const auto eye = mutual_coherence(Frame(Field::real, CMatrix::Identity(4, 4)));
  CHECK(eye.mu == doctest::Approx(0.0));

  CMatrix two(2, 2);
  two << 1.0, 1.0 / std::sqrt(2.0), 0.0, 1.0 / std::sqrt(2.0);
  const auto r = mutual_coherence(Frame(Field::real, two));
  CHECK(r.mu == doctest::Approx(0.70710678118654752).epsilon(1e-14));
  CHECK(r.argmax_pair == PairIndex{0, 1, 0});

  CMatrix dup(2, 3);
  dup << 1.0, 0.0, 1.0, 0.0, 1.0, 0.0;
  CHECK(mutual_coherence(Frame(Field::real, dup)).mu == doctest::Approx(1.0));

  CHECK_THROWS_AS(mutual_coherence(Frame(Field::real, CMatrix::Identity(1, 1))), DegenerateInput);
}

TEST_CASE("coherence report fields are consistent") {
  const Frame f = random_frame(3, 7, Field::complex, 5);
  const auto r = mutual_coherence(f);
  CHECK(r.mu == doctest::Approx(r.gram_offdiag_max).epsilon(1e-15));
  CHECK(r.gram_offdiag_min <= r.gram_offdiag_mean);
  CHECK(r.gram_offdiag_mean <= r.gram_offdiag_max);
  CHECK(r.welch == doctest::Approx(welch_bound(3, 7).value));
  CHECK(r.composite == doctest::Approx(composite_bound(3, 7, Field::complex)));
  CHECK(r.mu >= r.welch - 1e-12);
  CHECK(std::abs(f.column(r.argmax_pair.i).dot(f.column(r.argmax_pair.j))) == doctest::Approx(r.mu));
  CHECK(max_coherence(f.matrix()) == doctest::Approx(r.mu).epsilon(1e-15));
  CHECK(frame_objective(f.matrix()) == doctest::Approx(2.0 * r.mu * r.mu).epsilon(1e-14));
}

TEST_CASE("coherence ties resolve to the smallest flat index") {
  // |x0.x2| = |x1.x2| = 0.5 exactly: flat pairs 1 and 2 tie, pair 0 is 0.
  CMatrix x(3, 3);
  x.col(0) << 1.0, 0.0, 0.0;
  x.col(1) << 0.0, 1.0, 0.0;
  x.col(2) << 0.5, 0.5, std::sqrt(0.5);
  const auto r = mutual_coherence(Frame::normalized(Field::real, x));
  CHECK(r.argmax_pair == PairIndex{0, 2, 1});
  CHECK(r.mu == doctest::Approx(0.5));
}

TEST_CASE("Welch bound") {
  CHECK(welch_bound(4, 5).value == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(welch_bound(5, 6).value == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(welch_bound(3, 3).value == 0.0);
  const auto degenerate = welch_bound(1, 1);
  CHECK(degenerate.degenerate);
  CHECK(degenerate.value == 0.0);
  CHECK_THROWS_AS(welch_bound(4, 3), InvalidInput);
  CHECK_THROWS_AS(welch_bound(0, 3), InvalidInput);
}

TEST_CASE("composite bound oracle values") {
  auto round4 = [](double v) { return std::round(v * 1e4) / 1e4; };
  CHECK(round4(composite_bound(2, 8, Field::complex)) == 0.75);
  CHECK(round4(composite_bound(3, 16, Field::complex)) == 0.6202);
  CHECK(round4(composite_bound(4, 19, Field::complex)) == 0.5);
  CHECK(round4(composite_bound(5, 26, Field::complex)) == 0.4472);
  CHECK(round4(composite_bound(6, 37, Field::complex)) == 0.4082);
  CHECK(round4(composite_bound(23, 500, Field::complex)) == 0.2039);
  CHECK(round4(composite_bound(25, 500, Field::complex)) == 0.1951);
  CHECK(round4(composite_bound(50, 1000, Field::complex)) == 0.1379);
  CHECK(round4(composite_bound(2, 8, Field::real)) == 0.8165);
  CHECK(round4(composite_bound(4, 6, Field::real)) == 0.3162);
  CHECK(round4(composite_bound(23, 500, Field::real)) == 0.2785);
  CHECK_THROWS_AS(composite_bound(1, 3, Field::complex), DegenerateInput);
  CHECK(composite_bound(1, 3, Field::real) == doctest::Approx(1.0));
}

TEST_CASE("composite bound equals Welch for complex N <= d^2") {
  for (Eigen::Index d = 2; d <= 6; ++d) {
    for (Eigen::Index n = d; n <= d * d; ++n) {
      if (n < 2) continue;
      CHECK(composite_bound(d, n, Field::complex) == doctest::Approx(welch_bound(d, n).value).epsilon(1e-15));
      CHECK(composite_bound(d, n, Field::real) >= welch_bound(d, n).value - 1e-15);
    }
  }
}

TEST_CASE("recoverability bound") {
  CHECK(recoverability_bound(1.0) == doctest::Approx(1.0));
  CHECK(recoverability_bound(0.25) == doctest::Approx(2.5));
  CHECK(recoverability_bound(0.5) == doctest::Approx(1.5));
  CHECK(std::isinf(recoverability_bound(0.0)));
  CHECK_THROWS_AS(recoverability_bound(1.5), InvalidInput);
  CHECK_THROWS_AS(recoverability_bound(-0.1), InvalidInput);
}

TEST_CASE("coherence is at least Welch on random frames") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Eigen::Index d = 2 + static_cast<Eigen::Index>(seed % 4);
    const Eigen::Index n = d + 1 + static_cast<Eigen::Index>(seed % 5);
    for (Field field : {Field::real, Field::complex}) {
      CHECK(max_coherence(random_frame(d, n, field, seed).matrix()) >= welch_bound(d, n).value - 1e-12);
    }
  }
}

TEST_CASE("coherence invariances") {
  Rng rng = make_stream(11, "invariance");
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * 3.141592653589793);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Frame f = random_frame(3, 6, Field::complex, seed);
    const double mu = max_coherence(f.matrix());

    CMatrix g(3, 3);
    for (Eigen::Index r = 0; r < 3; ++r) {
      for (Eigen::Index c = 0; c < 3; ++c) g(r, c) = Complex(normal(rng), normal(rng));
    }
    const CMatrix u = Eigen::HouseholderQR<CMatrix>(g).householderQ();
    CHECK(max_coherence(u * f.matrix()) == doctest::Approx(mu).epsilon(1e-10));

    CMatrix scaled = f.matrix();
    for (Eigen::Index c = 0; c < scaled.cols(); ++c) scaled.col(c) *= std::polar(1.0, phase(rng));
    CHECK(max_coherence(scaled) == doctest::Approx(mu).epsilon(1e-10));

    Eigen::PermutationMatrix<Eigen::Dynamic> perm(6);
    perm.setIdentity();
    std::shuffle(perm.indices().data(), perm.indices().data() + 6, rng);
    CHECK(max_coherence(f.matrix() * perm) == doctest::Approx(mu).epsilon(1e-10));
  }
}

TEST_CASE("init_frame contract") {
  for (Field field : {Field::complex, Field::real}) {
    const Frame a = init_frame(4, 9, field, {4.0, 3});
    const Frame b = init_frame(4, 9, field, {4.0, 3});
    CHECK(a.matrix() == b.matrix());
    CHECK(a.field() == field);
    for (Eigen::Index c = 0; c < a.size(); ++c) CHECK(std::abs(a.column(c).norm() - 1.0) <= 1e-12);
    CHECK(max_coherence(a.matrix()) < 1.0);
    const CMatrix candidates = random_candidates(4, 36, field, 3, field == Field::complex ? 1e-6 : 0.0);
    CHECK(max_coherence(a.matrix()) <= max_coherence(candidates) + 1e-15);
    CHECK(init_frame(4, 9, field, {4.0, 4}).matrix() != a.matrix());
  }
  CHECK_THROWS_AS(init_frame(4, 9, Field::complex, {1.0, 0}), InvalidInput);
  CHECK_THROWS_AS(init_frame(4, 3, Field::complex, {}), InvalidInput);
}

TEST_CASE("complex candidates have near-unit-modulus entries") {
  const CMatrix exact = random_candidates(3, 10, Field::complex, 2, 0.0);
  CHECK((exact.cwiseAbs().array() - 1.0 / std::sqrt(3.0)).abs().maxCoeff() < 1e-14);
  const CMatrix jittered = random_candidates(3, 10, Field::complex, 2, 1e-6);
  CHECK((jittered - exact).cwiseAbs().maxCoeff() < 1e-4);
  CHECK((jittered - exact).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("greedy pruning removes the endpoint with the larger runner-up coherence") {
  // Columns 0 and 1 are the most coherent pair. Column 1 is also close to
  // column 2, column 0 is not, so column 1 must go.
  CMatrix x(3, 4);
  const double a = 0.1, b = 0.35;
  x.col(0) = CVector::Unit(3, 0);
  x.col(1) << std::cos(a), std::sin(a), 0.0;
  x.col(2) << std::cos(a + b), std::sin(a + b), 0.0;
  x.col(3) = CVector::Unit(3, 2);
  const CMatrix kept = greedy_prune(x, 3);
  CHECK(kept.col(0).isApprox(x.col(0)));
  CHECK(kept.col(1).isApprox(x.col(2)));
  CHECK(kept.col(2).isApprox(x.col(3)));

  // Symmetric tie: the lower index is removed.
  CMatrix t(2, 3);
  t.col(0) << 1.0, 0.0;
  t.col(1) << std::cos(0.1), std::sin(0.1);
  t.col(2) << 0.0, 1.0;
  const CMatrix kept_t = greedy_prune(t, 2);
  CHECK(kept_t.cols() == 2);
}

TEST_CASE("frame file round trip") {
  for (Field field : {Field::real, Field::complex}) {
    const Frame f = random_frame(3, 5, field, 9);
    std::stringstream buf;
    write_frame(f, buf);
    const Frame g = read_frame(buf);
    CHECK(g.field() == field);
    CHECK((g.matrix() - f.matrix()).cwiseAbs().maxCoeff() <= 1e-15);
  }
  const auto path = std::filesystem::temp_directory_path() / "telet_frame_roundtrip.txt";
  const Frame f = random_frame(2, 4, Field::complex, 1);
  write_frame(f, path);
  CHECK(read_frame(path).matrix() == f.matrix());
  std::filesystem::remove(path);
}

TEST_CASE("frame file format details") {
  std::stringstream buf;
  write_frame(Frame(Field::complex, CMatrix::Identity(2, 2)), buf);
  std::string header;
  std::getline(buf, header);
  CHECK(header == "telet-frame v1 field=complex d=2 N=2");
  std::string line;
  std::getline(buf, line);
  CHECK(line == "1:0,0:0");

  std::stringstream comments("# a comment\ntelet-frame v1 field=real d=2 N=2\n# inside\n1,0\n0,1\n");
  CHECK(read_frame(comments).matrix() == CMatrix::Identity(2, 2));
}

TEST_CASE("frame file rejects malformed input") {
  auto reject = [](const std::string& text) {
    std::stringstream in(text);
    CHECK_THROWS_AS(read_frame(in), FrameFormatError);
  };
  reject("");
  reject("telet-frame v2 field=real d=2 N=2\n1,0\n0,1\n");
  reject("telet-frame v1 field=quaternion d=2 N=2\n1,0\n0,1\n");
  reject("telet-frame v1 field=real d=3 N=2\n1,0,0\n0,1,0\n");  // N < d
  reject("telet-frame v1 field=real d=2 N=2\n1,0\n0:1,1\n");    // imaginary part in a real file
  reject("telet-frame v1 field=real d=2 N=2\n1,0,0\n0,1\n");    // row length mismatch
  reject("telet-frame v1 field=real d=2 N=2\n1,0\n");           // missing vector
  reject("telet-frame v1 field=real d=2 N=2\n1,0\n0,1\n1,0\n");  // extra vector
  reject("telet-frame v1 field=real d=2 N=2\n1,0\nnan,1\n");
  reject("telet-frame v1 field=real d=2 N=2\n1,0\ninf,0\n");
  reject("telet-frame v1 field=real d=2 N=2\n1,0\n0,abc\n");
  reject("telet-frame v1 field=real d=2 N=2\n1,0\n0,2\n");  // not unit norm
  CHECK_THROWS_AS(read_frame(std::filesystem::path("/nonexistent/frame.txt")), FrameFormatError);
}
