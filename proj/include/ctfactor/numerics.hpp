#pragma once

#include <Eigen/Dense>
#include <cstddef>

#include "ctfactor/rng.hpp"

namespace ctfactor {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
/// n x p observations, one row per sample.
using DataMatrix = Eigen::MatrixXd;

/// Lower-triangular L with L * L^T equal to the factored matrix.
struct CholeskyFactor {
  Matrix lower;
};

/// Relative pivot threshold: a pivot <= kPivotTolerance * max(diag) fails.
inline constexpr double kPivotTolerance = 1e-12;

/// True iff `m` is square and exactly symmetric up to `tol` (absolute).
bool is_symmetric(const Matrix& m, double tol = 0.0);

/// Throws NotPositiveDefinite on a pivot below tolerance and
/// DimensionMismatch on a non-square input. Only the lower triangle of `s`
/// is read.
CholeskyFactor cholesky(const Matrix& s, double relative_tolerance = kPivotTolerance);

double logdet_pd(const Matrix& s);
double logdet(const CholeskyFactor& factor);

/// Solves S X = B.
Matrix solve_pd(const Matrix& s, const Matrix& b);
Matrix solve(const CholeskyFactor& factor, const Matrix& b);
Matrix inverse_pd(const Matrix& s);

/// n draws from N(0, sigma); row i uses the i-th block of p normals from `rng`.
DataMatrix mvn_sample(const Matrix& sigma, std::size_t n, Rng& rng);

/// Covariance of the columns of `data` after centering at the column means,
/// divided by `n - ddof`.
Matrix sample_covariance(const DataMatrix& data, int ddof = 1);

/// Pearson product-moment correlation of the columns of `data`. Throws
/// ConstantColumn naming the first zero-variance column.
Matrix pearson_correlation(const DataMatrix& data);

/// D^{-1/2} S D^{-1/2}; throws DomainError on a non-positive diagonal.
Matrix covariance_to_correlation(const Matrix& s);

}  // namespace ctfactor
