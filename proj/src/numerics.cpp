#include "ctfactor/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ctfactor/error.hpp"
#include "ctfactor/kernels.hpp"

namespace ctfactor {

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void require_square(const Matrix& s, const char* what) {
  if (s.rows() != s.cols() || s.rows() == 0) {
    throw DimensionMismatch(std::string(what) + ": expected a non-empty square matrix, got " +
                            std::to_string(s.rows()) + "x" + std::to_string(s.cols()));
  }
}

}  // namespace

bool is_symmetric(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      if (std::fabs(m(i, j) - m(j, i)) > tol) return false;
    }
  }
  return true;
}

CholeskyFactor cholesky(const Matrix& s, double relative_tolerance) {
  require_square(s, "cholesky");
  const Eigen::Index p = s.rows();
  const double scale = s.diagonal().cwiseAbs().maxCoeff();
  const double floor = relative_tolerance * (scale > 0.0 ? scale : 1.0);

  // Row-major so the inner products below run over contiguous memory.
  RowMajor l = RowMajor::Zero(p, p);
  const auto& k = kernels::active();
  for (Eigen::Index i = 0; i < p; ++i) {
    const double* row_i = l.row(i).data();
    for (Eigen::Index j = 0; j < i; ++j) {
      const double acc = k.dot(row_i, l.row(j).data(), static_cast<std::size_t>(j));
      l(i, j) = (s(i, j) - acc) / l(j, j);
    }
    const double pivot = s(i, i) - k.dot(row_i, row_i, static_cast<std::size_t>(i));
    if (!(pivot > floor)) {
      throw NotPositiveDefinite("cholesky: pivot " + std::to_string(i) + " is " + std::to_string(pivot) +
                                " (threshold " + std::to_string(floor) + ")");
    }
    l(i, i) = std::sqrt(pivot);
  }
  return CholeskyFactor{Matrix(l)};
}

double logdet(const CholeskyFactor& factor) { return 2.0 * factor.lower.diagonal().array().log().sum(); }

double logdet_pd(const Matrix& s) { return logdet(cholesky(s)); }

Matrix solve(const CholeskyFactor& factor, const Matrix& b) {
  if (b.rows() != factor.lower.rows() || b.cols() < 1) {
    throw DimensionMismatch("solve_pd: right-hand side has " + std::to_string(b.rows()) + " rows, expected " +
                            std::to_string(factor.lower.rows()));
  }
  const auto lower = factor.lower.triangularView<Eigen::Lower>();
  Matrix y = lower.solve(b);
  return lower.transpose().solve(y);
}

Matrix solve_pd(const Matrix& s, const Matrix& b) { return solve(cholesky(s), b); }

Matrix inverse_pd(const Matrix& s) { return solve_pd(s, Matrix::Identity(s.rows(), s.cols())); }

DataMatrix mvn_sample(const Matrix& sigma, std::size_t n, Rng& rng) {
  const CholeskyFactor factor = cholesky(sigma);
  const Eigen::Index p = sigma.rows();
  DataMatrix z(static_cast<Eigen::Index>(n), p);
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    for (Eigen::Index j = 0; j < p; ++j) z(i, j) = rng.normal();
  }
  return z * factor.lower.transpose();
}

Matrix sample_covariance(const DataMatrix& data, int ddof) {
  const Eigen::Index n = data.rows();
  if (n - ddof <= 0) throw DomainError("sample_covariance: need more than " + std::to_string(ddof) + " rows");
  const Eigen::Index p = data.cols();
  Matrix centered = data.rowwise() - data.colwise().mean();
  Matrix cov(p, p);
  const auto& k = kernels::active();
  const double denom = static_cast<double>(n - ddof);
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double c = k.dot(centered.col(i).data(), centered.col(j).data(), static_cast<std::size_t>(n)) / denom;
      cov(i, j) = c;
      cov(j, i) = c;
    }
  }
  return cov;
}

Matrix covariance_to_correlation(const Matrix& s) {
  require_square(s, "covariance_to_correlation");
  Vector inv_sd(s.rows());
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    if (!(s(i, i) > 0.0)) throw DomainError("covariance_to_correlation: non-positive variance at " + std::to_string(i));
    inv_sd(i) = 1.0 / std::sqrt(s(i, i));
  }
  Matrix r = inv_sd.asDiagonal() * s * inv_sd.asDiagonal();
  r.diagonal().setOnes();
  return r;
}

Matrix pearson_correlation(const DataMatrix& data) {
  const Eigen::Index n = data.rows();
  const Eigen::Index p = data.cols();
  if (n < 2) throw DomainError("pearson_correlation: need at least 2 rows");
  Matrix centered = data.rowwise() - data.colwise().mean();
  const auto& k = kernels::active();
  Vector norms(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    const double ss = k.dot(centered.col(j).data(), centered.col(j).data(), static_cast<std::size_t>(n));
    if (!(ss > 0.0)) throw ConstantColumn("column " + std::to_string(j) + " has zero variance");
    norms(j) = std::sqrt(ss);
    centered.col(j) /= norms(j);
  }
  Matrix r(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    r(i, i) = 1.0;
    for (Eigen::Index j = 0; j < i; ++j) {
      double c = k.dot(centered.col(i).data(), centered.col(j).data(), static_cast<std::size_t>(n));
      c = std::clamp(c, -1.0, 1.0);
      r(i, j) = c;
      r(j, i) = c;
    }
  }
  return r;
}

}  // namespace ctfactor
