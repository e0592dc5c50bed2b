#include <doctest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "ctfactor/error.hpp"
#include "ctfactor/numerics.hpp"
#include "support.hpp"

using namespace ctfactor;
using testsupport::random_pd;

namespace {

/// Gauss-Jordan with partial pivoting, written out by hand.
Matrix gauss_jordan_inverse(Matrix a) {
  const Eigen::Index n = a.rows();
  Matrix inv = Matrix::Identity(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index piv = c;
    for (Eigen::Index r = c + 1; r < n; ++r)
      if (std::fabs(a(r, c)) > std::fabs(a(piv, c))) piv = r;
    a.row(c).swap(a.row(piv));
    inv.row(c).swap(inv.row(piv));
    const double d = a(c, c);
    a.row(c) /= d;
    inv.row(c) /= d;
    for (Eigen::Index r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a(r, c);
      a.row(r) -= f * a.row(c);
      inv.row(r) -= f * inv.row(c);
    }
  }
  return inv;
}

}  // namespace

TEST_CASE("cholesky examples") {
  CHECK(cholesky(Matrix::Identity(3, 3)).lower.isApprox(Matrix::Identity(3, 3)));
  Matrix s(2, 2);
  s << 4, 2, 2, 5;
  Matrix expect(2, 2);
  expect << 2, 0, 1, 2;
  CHECK((cholesky(s).lower - expect).cwiseAbs().maxCoeff() < 1e-15);
  Matrix bad(2, 2);
  bad << 1, 2, 2, 1;
  CHECK_THROWS_AS(cholesky(bad), NotPositiveDefinite);
  Matrix singular = Matrix::Ones(3, 3);
  CHECK_THROWS_AS(cholesky(singular), NotPositiveDefinite);
}

TEST_CASE("cholesky reconstructs random PD matrices") {
  Rng rng(3);
  for (int t = 0; t < 200; ++t) {
    const auto d = static_cast<Eigen::Index>(1 + rng.index(40));
    const Matrix s = random_pd(d, rng);
    const Matrix l = cholesky(s).lower;
    CHECK(l.isLowerTriangular());
    CHECK((l * l.transpose() - s).cwiseAbs().maxCoeff() <= 1e-9 * s.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("logdet_pd examples and eigenvalue oracle") {
  CHECK(logdet_pd(Matrix::Identity(5, 5)) == doctest::Approx(0.0));
  Matrix d = Matrix::Zero(2, 2);
  d.diagonal() << 2, 3;
  CHECK(logdet_pd(d) == doctest::Approx(std::log(6.0)).epsilon(1e-14));
  Rng rng(17);
  for (int t = 0; t < 50; ++t) {
    const Matrix s = random_pd(4, rng);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(s);
    const double oracle = eig.eigenvalues().array().log().sum();
    CHECK(std::fabs(logdet_pd(s) - oracle) < 1e-10);
  }
}

TEST_CASE("solve_pd examples and explicit-inverse oracle") {
  Rng rng(23);
  const Matrix b = testsupport::random_matrix(3, 2, rng);
  CHECK((solve_pd(Matrix::Identity(3, 3), b) - b).cwiseAbs().maxCoeff() < 1e-15);
  Matrix d = Matrix::Zero(2, 2);
  d.diagonal() << 2, 4;
  Matrix expect = Matrix::Zero(2, 2);
  expect.diagonal() << 0.5, 0.25;
  CHECK((solve_pd(d, Matrix::Identity(2, 2)) - expect).cwiseAbs().maxCoeff() < 1e-15);
  for (int t = 0; t < 50; ++t) {
    const Matrix s = random_pd(5, rng);
    const Matrix rhs = testsupport::random_matrix(5, 3, rng);
    const Matrix x = solve_pd(s, rhs);
    CHECK((x - gauss_jordan_inverse(s) * rhs).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((s * x - rhs).cwiseAbs().maxCoeff() <= 1e-8 * (1.0 + rhs.cwiseAbs().maxCoeff()));
    CHECK((solve_pd(s, s) - Matrix::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((inverse_pd(s) - gauss_jordan_inverse(s)).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("mvn_sample: law of large numbers, determinism, shape") {
  Rng a(1);
  const DataMatrix x = mvn_sample(Matrix::Identity(2, 2), 100000, a);
  CHECK((sample_covariance(x) - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 0.05);

  Rng rng(9);
  const Matrix s = random_pd(4, rng);
  Rng r1(77), r2(77);
  const DataMatrix y1 = mvn_sample(s, 50, r1), y2 = mvn_sample(s, 50, r2);
  CHECK(y1 == y2);

  Rng r3(5);
  const DataMatrix one = mvn_sample(s, 1, r3);
  CHECK(one.rows() == 1);
  CHECK(one.cols() == 4);

  Matrix bad(2, 2);
  bad << 1, 2, 2, 1;
  CHECK_THROWS_AS(mvn_sample(bad, 5, r3), NotPositiveDefinite);
}

TEST_CASE("sample covariance and Pearson correlation against per-entry formulas") {
  Rng rng(31);
  const DataMatrix x = testsupport::random_matrix(40, 5, rng);
  const Matrix s = sample_covariance(x);
  const Matrix r = pearson_correlation(x);
  for (Eigen::Index i = 0; i < 5; ++i) {
    for (Eigen::Index j = 0; j < 5; ++j) {
      const double mi = x.col(i).mean(), mj = x.col(j).mean();
      double sij = 0.0, sii = 0.0, sjj = 0.0;
      for (Eigen::Index k = 0; k < 40; ++k) {
        sij += (x(k, i) - mi) * (x(k, j) - mj);
        sii += (x(k, i) - mi) * (x(k, i) - mi);
        sjj += (x(k, j) - mj) * (x(k, j) - mj);
      }
      CHECK(s(i, j) == doctest::Approx(sij / 39.0).epsilon(1e-12));
      CHECK(r(i, j) == doctest::Approx(sij / std::sqrt(sii * sjj)).epsilon(1e-12));
    }
  }
  CHECK(r.diagonal().isOnes());
  CHECK(r == r.transpose());
  CHECK((covariance_to_correlation(s) - r).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("Pearson correlation edge cases") {
  DataMatrix x(4, 3);
  x << 1, 1, 2, 2, 2, 2, 3, 3, 2, 4, 4, 2;
  CHECK_THROWS_AS(pearson_correlation(x), ConstantColumn);
  x.col(2) << 5, 1, 4, 0;
  const Matrix r = pearson_correlation(x);
  CHECK(r(0, 1) == 1.0);  // duplicated column, clamped to exactly 1
}
