#include "anc/dsp.hpp"
#include "anc/siggen.hpp"
#include "test_support.hpp"

#include <doctest.h>

using namespace anc;
using anc::test::random_vector;

namespace {

Signal sig(std::initializer_list<double> v) {
  Vector x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double s : v) x[i++] = s;
  return Signal(x, 1.0);
}

FirPath path(std::initializer_list<double> v) { return FirPath(sig(v).samples); }

}  // namespace

TEST_SUITE("dsp") {
  TEST_CASE("fir_filter examples") {
    CHECK(fir_filter(path({1}), sig({3, 1, 4})).samples == sig({3, 1, 4}).samples);
    CHECK(fir_filter(path({0, 1}), sig({1, 2, 3})).samples == sig({0, 1, 2}).samples);
    CHECK(fir_filter(path({1, 1}), sig({1, 2, 3})).samples == sig({1, 3, 5}).samples);
  }

  TEST_CASE("fir_filter keeps length and rate; rejects empty input") {
    const Signal x(Vector::Ones(7), 16000.0);
    const auto y = fir_filter(path({0.5, 0.25, 0.125, 1, 1, 1, 1, 1, 1, 1}), x);
    CHECK(y.size() == 7);
    CHECK(y.sample_rate_hz == 16000.0);
    CHECK_THROWS_WITH_AS(fir_filter(path({1}), Signal(Vector(0), 1.0)), "empty signal", std::invalid_argument);
  }

  TEST_CASE("fir_filter matches a naive double loop") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> taps(1, 64), len(1, 4096);
    for (int trial = 0; trial < 25; ++trial) {
      const FirPath p(random_vector(rng, taps(rng)));
      const Signal x(random_vector(rng, len(rng)), 8000.0);
      const auto ref = test::naive_convolution(test::to_std(p.coefficients), test::to_std(x.samples));
      const auto got = fir_filter(p, x);
      for (std::size_t n = 0; n < ref.size(); ++n) REQUIRE(got[static_cast<Eigen::Index>(n)] == doctest::Approx(ref[n]).epsilon(1e-12));
    }
  }

  TEST_CASE("fir_filter is linear") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
      const FirPath p(random_vector(rng, 33));
      const Vector x = random_vector(rng, 500), y = random_vector(rng, 500);
      const double a = 1.7, b = -0.3;
      const auto lhs = fir_filter(p, Signal(a * x + b * y, 1.0)).samples;
      const Vector rhs = a * fir_filter(p, Signal(x, 1.0)).samples + b * fir_filter(p, Signal(y, 1.0)).samples;
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, rhs.cwiseAbs().maxCoeff()));
    }
  }

  TEST_CASE("delaying the output equals shifting the taps") {
    std::mt19937_64 rng(9);
    const Eigen::Index k = 7;
    const FirPath p(random_vector(rng, 20));
    Vector shifted = Vector::Zero(p.size() + k);
    shifted.tail(p.size()) = p.coefficients;
    const Signal x(random_vector(rng, 300), 1.0);
    const auto lhs = fir_filter(FirPath::impulse(k), fir_filter(p, x));
    const auto rhs = fir_filter(FirPath(shifted), x);
    CHECK(test::max_abs_diff(lhs.samples, rhs.samples) <= 1e-12);
  }

  TEST_CASE("delay line pushes newest first") {
    DelayLine line(3);
    CHECK(line.contents() == Vector::Zero(3));
    line = delay_push(line, 5.0);
    CHECK(line.contents() == (Vector(3) << 5, 0, 0).finished());
    line = delay_push(line, 7.0);
    CHECK(line.contents() == (Vector(3) << 7, 5, 0).finished());

    DelayLine fifo(3);
    for (double v : {1.0, 2.0, 3.0, 4.0}) fifo.push(v);
    CHECK(fifo.contents() == (Vector(3) << 4, 3, 2).finished());
    CHECK_THROWS_AS(DelayLine(0), std::invalid_argument);
  }

  TEST_CASE("delay line holds the last N pushes in reverse order") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> cap(1, 40), extra(0, 100);
    for (int trial = 0; trial < 50; ++trial) {
      const int n = cap(rng);
      const int pushes = n + extra(rng);
      const Vector values = random_vector(rng, pushes);
      DelayLine line(n);
      for (double v : values) line.push(v);
      const Vector expect = values.tail(n).reverse();
      REQUIRE(line.contents() == expect);
      for (int k = 0; k < n; ++k) REQUIRE(line.at(k) == expect[k]);
    }
  }

  TEST_CASE("dot examples") {
    CHECK(dot(Vector((Vector(2) << 1, 2).finished()), Vector((Vector(2) << 3, 4).finished())) == 11.0);
    CHECK(dot(Vector::Zero(5), Vector::Ones(5)) == 0.0);
    CHECK(dot(Vector((Vector(3) << 1, -1, 2).finished()), Vector((Vector(3) << 2, 2, 1).finished())) == 2.0);
    CHECK_THROWS_AS(dot(Vector::Zero(2), Vector::Zero(3)), std::invalid_argument);
  }

  TEST_CASE("autocorr_matrix of white noise is near identity") {
    const auto x = white_noise(100000, 42, 1.0);
    const Matrix r = autocorr_matrix(x, 4);
    CHECK((r - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 0.05);
  }

  TEST_CASE("autocorr_matrix small cases") {
    const Signal c(Vector::Constant(50, 3.0), 1.0);
    const Matrix rc = autocorr_matrix(c, 2);
    // Biased estimator: lag-1 sum has M−1 terms.
    CHECK(rc(0, 0) == doctest::Approx(9.0));
    CHECK(rc(0, 1) == doctest::Approx(9.0 * 49.0 / 50.0));

    Vector alt(10000);
    for (Eigen::Index i = 0; i < alt.size(); ++i) alt[i] = i % 2 == 0 ? 1.0 : 0.0;
    const Matrix ra = autocorr_matrix(Signal(alt, 1.0), 2);
    // Direct lag sums: lag 0 = 5000/10000, lag 1 = 0.
    CHECK(ra(0, 0) == doctest::Approx(0.5));
    CHECK(ra(1, 1) == doctest::Approx(0.5));
    CHECK(ra(0, 1) == 0.0);

    CHECK_THROWS_AS(autocorr_matrix(Signal(Vector::Ones(3), 1.0), 4), std::invalid_argument);
  }

  TEST_CASE("autocorr_matrix is symmetric and positive semidefinite") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 10; ++trial) {
      const Signal x(random_vector(rng, 400), 1.0);
      const Matrix r = autocorr_matrix(x, 12);
      REQUIRE(r == r.transpose());
      const Matrix neg = -r;
      CHECK(-max_eigenvalue(neg, 1e-12) >= -1e-10);
    }
  }

  TEST_CASE("max_eigenvalue examples") {
    CHECK(max_eigenvalue(Matrix::Identity(3, 3), 1e-12) == doctest::Approx(1.0).epsilon(1e-12));
    const Matrix d = Vector((Vector(3) << 1, 5, 2).finished()).asDiagonal();
    CHECK(max_eigenvalue(d, 1e-12) == doctest::Approx(5.0).epsilon(1e-10));
    const Matrix m = (Matrix(2, 2) << 2, 1, 1, 2).finished();
    CHECK(std::abs(max_eigenvalue(m, 1e-12) - 3.0) <= 1e-10);
    CHECK_THROWS_AS(max_eigenvalue((Matrix(2, 2) << 1, 2, 0, 1).finished(), 1e-9), std::invalid_argument);
  }

  TEST_CASE("max_eigenvalue agrees with a dense eigensolver") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 20; ++trial) {
      const Matrix a = Matrix::NullaryExpr(10, 10, [&] { return std::uniform_real_distribution<double>(-1, 1)(rng); });
      const Matrix s = a + a.transpose();
      const double expect = Eigen::SelfAdjointEigenSolver<Matrix>(s).eigenvalues().maxCoeff();
      CHECK(max_eigenvalue(s, 1e-12) == doctest::Approx(expect).epsilon(1e-8));
    }
  }
}
