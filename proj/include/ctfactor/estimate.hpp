#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ctfactor/model.hpp"
#include "ctfactor/numerics.hpp"
#include "ctfactor/rng.hpp"

namespace ctfactor {

struct FitOptions {
  int max_iterations = 2000;
  double loglik_tolerance = 1e-8;  // absolute change in log-likelihood
  double omega_floor = 1e-6;
  int restarts = 3;
  std::uint64_t seed = 20230717;
  bool record_trace = false;

  void validate() const;
};

struct FitResult {
  FactorParams theta;
  double loglik = 0.0;
  int n_iterations = 0;
  bool converged = false;
  std::size_t n_free_params = 0;
  /// Sample covariance was not positive definite (fit still proceeds).
  bool sample_not_pd = false;
  /// Log-likelihood before the first and after every iteration of the
  /// returned restart, when FitOptions::record_trace is set.
  std::vector<double> trace;
  std::vector<std::string> warnings;
};

/// -(n/2) [p log(2 pi) + log det(Sigma) + trace(S Sigma^{-1})].
double gaussian_loglik(const Matrix& sigma_model, const Matrix& s_sample, double n);

/// |support| + d(d-1)/2 + p.
std::size_t count_free_params(const Structure& s);

/// Maximum-likelihood fit of the factor model with the zero pattern of `s`,
/// unit-diagonal Phi and diagonal Omega >= omega_floor, by EM over the
/// latent factors. Keeps the best of `restarts` initializations and fixes
/// column signs so each factor's reference child loads non-negatively.
FitResult fit_mle(const Matrix& s_sample, double n, const Structure& s, const FitOptions& opts = {});

/// -2 loglik + n_free_params log n.
double bic(const FitResult& fit, double n);

/// Flips columns of the fitted loadings (and the matching rows/columns of
/// Phi) so that, per factor, the smallest-index unique child (else the
/// smallest-index child) has a non-negative loading.
void canonicalize_signs(FactorParams& theta, const Structure& s);

/// Sum over K folds of the held-out Gaussian log-likelihood of a model fitted
/// on the other folds. Rows are shuffled with `rng`; both folds are centered
/// at the training mean and covariances use divisor = row count.
double kfold_test_loglik(const DataMatrix& data, const Structure& s, std::size_t k_folds, const FitOptions& opts,
                         Rng& rng);

}  // namespace ctfactor
