#include "ctfactor/estimate.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "ctfactor/error.hpp"

namespace ctfactor {

void FitOptions::validate() const {
  if (max_iterations <= 0 || !(loglik_tolerance > 0.0) || !(omega_floor > 0.0) || restarts <= 0) {
    throw DomainError("fit options must all be positive");
  }
}

double gaussian_loglik(const Matrix& sigma_model, const Matrix& s_sample, double n) {
  if (sigma_model.rows() != s_sample.rows() || sigma_model.cols() != s_sample.cols()) {
    throw DimensionMismatch("gaussian_loglik: model and sample covariance shapes differ");
  }
  const CholeskyFactor factor = cholesky(sigma_model);
  const double p = static_cast<double>(sigma_model.rows());
  const double trace = solve(factor, s_sample).trace();
  return -0.5 * n * (p * std::log(2.0 * std::numbers::pi) + logdet(factor) + trace);
}

std::size_t count_free_params(const Structure& s) { return s.size() + s.d() * (s.d() - 1) / 2 + s.p(); }

double bic(const FitResult& fit, double n) {
  return -2.0 * fit.loglik + static_cast<double>(fit.n_free_params) * std::log(n);
}

void canonicalize_signs(FactorParams& theta, const Structure& s) {
  const auto uc = unique_children(s);
  const auto cols = s.columns();
  for (std::size_t k = 0; k < s.d(); ++k) {
    const std::size_t ref = !uc.sets[k].empty() ? uc.sets[k].front() : cols[k].front();
    const auto kk = static_cast<Eigen::Index>(k);
    if (theta.lambda(static_cast<Eigen::Index>(ref), kk) < 0.0) {
      theta.lambda.col(kk) *= -1.0;
      theta.phi.row(kk) *= -1.0;
      theta.phi.col(kk) *= -1.0;
    }
  }
}

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;

struct State {
  FactorParams theta;
  CholeskyFactor sigma_factor;
  double loglik = 0.0;
};

double loglik_from_factor(const CholeskyFactor& factor, const Matrix& s, double n) {
  const double p = static_cast<double>(s.rows());
  return -0.5 * n * (p * kLog2Pi + logdet(factor) + solve(factor, s).trace());
}

State evaluate_state(FactorParams theta, const Matrix& s, double n) {
  State st{std::move(theta), {}, 0.0};
  st.sigma_factor = cholesky(implied_covariance(st.theta));
  st.loglik = loglik_from_factor(st.sigma_factor, s, n);
  return st;
}

/// One EM update. The M-step runs over Phi with a free diagonal; rescaling to
/// a unit diagonal afterwards leaves Lambda Phi Lambda^T unchanged, so the
/// likelihood of the rescaled point equals that of the M-step optimum.
FactorParams em_step(const State& st, const Matrix& s, const std::vector<std::vector<std::size_t>>& parents,
                     double omega_floor) {
  const FactorParams& th = st.theta;
  const Eigen::Index p = th.lambda.rows();
  const Eigen::Index d = th.lambda.cols();

  const Matrix lambda_phi = th.lambda * th.phi;            // p x d
  const Matrix b = solve(st.sigma_factor, lambda_phi);     // Sigma^{-1} Lambda Phi, p x d
  const Matrix cross = s * b;                              // E[x L^T] averaged, p x d
  Matrix second = b.transpose() * cross + th.phi - b.transpose() * lambda_phi;  // E[L L^T] averaged
  second = (0.5 * (second + second.transpose())).eval();

  FactorParams next;
  next.lambda = Matrix::Zero(p, d);
  next.omega = Vector(p);
  for (Eigen::Index i = 0; i < p; ++i) {
    const auto& par = parents[static_cast<std::size_t>(i)];
    if (!par.empty()) {
      const auto m = static_cast<Eigen::Index>(par.size());
      Matrix block(m, m);
      Vector rhs(m);
      for (Eigen::Index a = 0; a < m; ++a) {
        rhs(a) = cross(i, static_cast<Eigen::Index>(par[a]));
        for (Eigen::Index c = 0; c < m; ++c) {
          block(a, c) = second(static_cast<Eigen::Index>(par[a]), static_cast<Eigen::Index>(par[c]));
        }
      }
      const Vector coef = solve_pd(block, rhs);
      for (Eigen::Index a = 0; a < m; ++a) next.lambda(i, static_cast<Eigen::Index>(par[a])) = coef(a);
    }
    const auto row = next.lambda.row(i);
    const double resid = s(i, i) - 2.0 * row.dot(cross.row(i)) + (row * second * row.transpose())(0, 0);
    next.omega(i) = std::max(resid, omega_floor);
  }

  const Vector scale = second.diagonal().cwiseSqrt();
  next.phi = scale.cwiseInverse().asDiagonal() * second * scale.cwiseInverse().asDiagonal();
  next.phi = (0.5 * (next.phi + next.phi.transpose())).eval();
  next.phi.diagonal().setOnes();
  next.lambda = next.lambda * scale.asDiagonal();
  return next;
}

FactorParams initial_params(const Matrix& s, const Structure& st, Rng* jitter) {
  FactorParams th;
  const auto p = static_cast<Eigen::Index>(st.p());
  const auto d = static_cast<Eigen::Index>(st.d());
  th.lambda = Matrix::Zero(p, d);
  for (const auto& [row, col] : st.support()) {
    double value = 0.5;
    if (jitter != nullptr) value += jitter->uniform(-0.1, 0.1);
    th.lambda(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = value;
  }
  th.phi = Matrix::Identity(d, d);
  th.omega = 0.5 * s.diagonal();
  return th;
}

struct RunOutcome {
  State state;
  int iterations = 0;
  bool converged = false;
  std::vector<double> trace;
};

RunOutcome run_em(FactorParams start, const Matrix& s, double n, const Structure& st, const FitOptions& opts) {
  const auto parents = st.parents();
  RunOutcome out{evaluate_state(std::move(start), s, n), 0, false, {}};
  if (opts.record_trace) out.trace.push_back(out.state.loglik);
  for (int it = 1; it <= opts.max_iterations; ++it) {
    State next = evaluate_state(em_step(out.state, s, parents, opts.omega_floor), s, n);
    const double change = next.loglik - out.state.loglik;
    out.state = std::move(next);
    out.iterations = it;
    if (opts.record_trace) out.trace.push_back(out.state.loglik);
    if (std::fabs(change) < opts.loglik_tolerance) {
      out.converged = true;
      break;
    }
  }
  return out;
}

}  // namespace

FitResult fit_mle(const Matrix& s_sample, double n, const Structure& s, const FitOptions& opts) {
  opts.validate();
  if (s_sample.rows() != static_cast<Eigen::Index>(s.p()) || s_sample.cols() != static_cast<Eigen::Index>(s.p())) {
    throw DimensionMismatch("fit_mle: sample covariance is not p x p");
  }
  if (!(n > 0.0)) throw DomainError("fit_mle: n must be positive");
  for (Eigen::Index i = 0; i < s_sample.rows(); ++i) {
    if (!(s_sample(i, i) > 0.0)) throw DomainError("fit_mle: sample variances must be positive");
  }
  const Matrix sample = 0.5 * (s_sample + s_sample.transpose());

  FitResult result;
  try {
    (void)cholesky(sample);
  } catch (const NotPositiveDefinite&) {
    result.sample_not_pd = true;
    result.warnings.emplace_back("sample covariance is not positive definite; likelihood uses the model covariance only");
  }

  Rng jitter(opts.seed);
  std::optional<RunOutcome> best;
  std::string last_error;
  for (int r = 0; r < opts.restarts; ++r) {
    try {
      RunOutcome run = run_em(initial_params(sample, s, r == 0 ? nullptr : &jitter), sample, n, s, opts);
      if (!best || run.state.loglik > best->state.loglik) best = std::move(run);
    } catch (const NotPositiveDefinite& e) {
      last_error = e.what();
    }
  }
  if (!best) throw NotPositiveDefinite("fit_mle: every restart failed: " + last_error);

  result.theta = std::move(best->state.theta);
  canonicalize_signs(result.theta, s);
  result.loglik = best->state.loglik;
  result.n_iterations = best->iterations;
  result.converged = best->converged;
  result.n_free_params = count_free_params(s);
  result.trace = std::move(best->trace);
  if (!result.converged) result.warnings.emplace_back("EM reached max_iterations before the tolerance");
  return result;
}

double kfold_test_loglik(const DataMatrix& data, const Structure& s, std::size_t k_folds, const FitOptions& opts,
                         Rng& rng) {
  const auto n = static_cast<std::size_t>(data.rows());
  if (k_folds < 2) throw DomainError("kfold_test_loglik: need at least 2 folds");
  if (n < k_folds) throw DomainError("kfold_test_loglik: fewer rows than folds");
  if (static_cast<std::size_t>(data.cols()) != s.p()) throw DimensionMismatch("kfold_test_loglik: data has wrong width");

  std::vector<Eigen::Index> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<Eigen::Index>(i);
  rng.shuffle(std::span<Eigen::Index>(order));

  double total = 0.0;
  for (std::size_t f = 0; f < k_folds; ++f) {
    const std::size_t lo = f * n / k_folds;
    const std::size_t hi = (f + 1) * n / k_folds;
    std::vector<Eigen::Index> train, test;
    for (std::size_t pos = 0; pos < n; ++pos) (pos >= lo && pos < hi ? test : train).push_back(order[pos]);

    const DataMatrix x_train = data(train, Eigen::all);
    const Eigen::RowVectorXd mean = x_train.colwise().mean();
    const Matrix c_train = x_train.rowwise() - mean;
    const Matrix s_train = c_train.transpose() * c_train / static_cast<double>(train.size());
    const Matrix c_test = data(test, Eigen::all).rowwise() - mean;
    const Matrix s_test = c_test.transpose() * c_test / static_cast<double>(test.size());

    const FitResult fit = fit_mle(s_train, static_cast<double>(train.size()), s, opts);
    total += gaussian_loglik(implied_covariance(fit.theta), s_test, static_cast<double>(test.size()));
  }
  return total;
}

}  // namespace ctfactor
