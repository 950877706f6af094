#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "cospec/exterior.hpp"
#include "cospec/linalg.hpp"
#include "cospec/matrix.hpp"
#include "cospec/rng.hpp"

using namespace cospec;

namespace {

CMat random_complex(int n, RandomSource& rng) {
  CMat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = rng.gaussian_complex();
  return m;
}

CMat random_unitary(int n, RandomSource& rng) {
  CMat g = random_complex(n, rng);
  CMat q;
  std::vector<double> logs;
  thin_qr(g, q, logs);
  return q;
}

QMat random_rational(int n, RandomSource& rng) {
  QMat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Rational q(rng.uniform_int(41) - 20, 1 + rng.uniform_int(9));
      q.canonicalize();
      m(i, j) = q;
    }
  return m;
}

}  // namespace

TEST_CASE("svd of the identity") {
  CMat id = CMat::identity(3);
  SingularData sd = singular_decomposition(id);
  for (double s : sd.singular_values) CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("svd of a diagonal matrix is the diagonal") {
  CMat d(4, 4);
  d(0, 0) = 5; d(1, 1) = 4; d(2, 2) = 2; d(3, 3) = 1;
  SingularData sd = singular_decomposition(d);
  CHECK(sd.singular_values[0] == doctest::Approx(5));
  CHECK(sd.singular_values[1] == doctest::Approx(4));
  CHECK(sd.singular_values[2] == doctest::Approx(2));
  CHECK(sd.singular_values[3] == doctest::Approx(1));
}

TEST_CASE("svd reconstruction residual on well-conditioned random matrices") {
  RandomSource rng(11, 0);
  for (int t = 0; t < 20; ++t) {
    CMat m = random_complex(5, rng);
    SingularData sd = singular_decomposition(m);
    if (sd.singular_values[0] / sd.singular_values[4] > 1e6) continue;
    CHECK(sd.reconstruction_residual(m) < 1e-10);
    // sorted non-increasing
    for (int i = 0; i + 1 < 5; ++i) CHECK(sd.singular_values[i] >= sd.singular_values[i + 1]);
  }
}

TEST_CASE("singular values of a unitary are all 1") {
  RandomSource rng(12, 0);
  for (int t = 0; t < 10; ++t) {
    CMat u = random_unitary(4, rng);
    SingularData sd = singular_decomposition(u);
    for (double s : sd.singular_values) CHECK(std::abs(s - 1.0) < 1e-12);
  }
}

TEST_CASE("eigen decomposition of diag(3,2,1)") {
  CMat d(3, 3);
  d(0, 0) = 3; d(1, 1) = 2; d(2, 2) = 1;
  EigenData ed = eigen_decomposition(d);
  CHECK(std::abs(ed.eigenvalues[0] - cdouble(3)) < 1e-12);
  CHECK(std::abs(ed.eigenvalues[1] - cdouble(2)) < 1e-12);
  CHECK(std::abs(ed.eigenvalues[2] - cdouble(1)) < 1e-12);
}

TEST_CASE("eigenvalues of a rotation by pi/3 lie on the unit circle") {
  double th = M_PI / 3;
  CMat r(2, 2);
  r(0, 0) = std::cos(th); r(0, 1) = -std::sin(th);
  r(1, 0) = std::sin(th); r(1, 1) = std::cos(th);
  EigenData ed = eigen_decomposition(r);
  CHECK(std::abs(std::abs(ed.eigenvalues[0]) - 1.0) < 1e-12);
  CHECK(std::abs(std::abs(ed.eigenvalues[1]) - 1.0) < 1e-12);
  // tie broken by ascending argument
  CHECK(std::abs(ed.eigenvalues[0] - std::exp(cdouble(0, -th))) < 1e-12);
  CHECK(std::abs(ed.eigenvalues[1] - std::exp(cdouble(0, th))) < 1e-12);
}

TEST_CASE("companion matrix of x^2 - x - 1 has golden-ratio spectrum") {
  CMat c(2, 2);
  c(0, 0) = 0; c(0, 1) = 1;
  c(1, 0) = 1; c(1, 1) = 1;
  EigenData ed = eigen_decomposition(c);
  double phi = (1.0 + std::sqrt(5.0)) / 2.0;  // roots by the quadratic formula
  CHECK(std::abs(ed.eigenvalues[0] - cdouble(phi)) < 1e-12);
  CHECK(std::abs(ed.eigenvalues[1] - cdouble(1.0 - phi)) < 1e-12);
  // residual invariant: ||Bv - lambda v|| small
  for (int k = 0; k < 2; ++k) {
    std::vector<cdouble> v = ed.eigenvectors.col(k);
    std::vector<cdouble> bv = c * v;
    for (int i = 0; i < 2; ++i) bv[i] -= ed.eigenvalues[k] * v[i];
    CHECK(vector_norm(bv) < 1e-12);
  }
}

TEST_CASE("rational matrix product is associative bit-exactly") {
  RandomSource rng(13, 0);
  for (int t = 0; t < 20; ++t) {
    QMat a = random_rational(4, rng), b = random_rational(4, rng), c = random_rational(4, rng);
    CHECK(((a * b) * c) == (a * (b * c)));
  }
}

TEST_CASE("rational inverse is exact") {
  RandomSource rng(14, 0);
  for (int t = 0; t < 10; ++t) {
    QMat a = random_rational(4, rng);
    if (a.det() == 0) continue;
    CHECK((a * a.inverse()) == QMat::identity(4));
  }
}

TEST_CASE("exact rank and nullspace") {
  QMat m(2, 3, {1, 2, 3, 2, 4, 6});
  CHECK(exact_rank(m) == 1);
  auto ns = exact_nullspace(m);
  CHECK(ns.size() == 2);
  for (const auto& v : ns) {
    Rational r = m(0, 0) * v[0] + m(0, 1) * v[1] + m(0, 2) * v[2];
    CHECK(r == 0);
  }
}

TEST_CASE("random source reproducibility per (seed, stream)") {
  RandomSource a(42, 7), b(42, 7), c(42, 8);
  bool all_equal = true, any_diff = false;
  for (int i = 0; i < 100; ++i) {
    auto x = a.next_u64(), y = b.next_u64(), z = c.next_u64();
    all_equal = all_equal && (x == y);
    any_diff = any_diff || (x != z);
  }
  CHECK(all_equal);
  CHECK(any_diff);
}

TEST_CASE("rational reconstruction from floats") {
  CHECK(rational_reconstruct(0.5) == Rational(1, 2));
  CHECK(rational_reconstruct(2.0 / 3.0) == Rational(2, 3));
  CHECK(rational_reconstruct(-7.0 / 13.0) == Rational(-7, 13));
}
