#include "ctfactor/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ctfactor/error.hpp"

namespace ctfactor {

namespace {

constexpr double kUnitDiagonalTolerance = 1e-9;

std::string idx(std::size_t i) { return std::to_string(i); }

}  // namespace

// ---------------------------------------------------------------- FactorParams

void FactorParams::validate(bool allow_zero_rows) const {
  const auto rows = lambda.rows();
  const auto cols = lambda.cols();
  if (rows == 0 || cols == 0) throw DimensionMismatch("lambda must be non-empty");
  if (phi.rows() != cols || phi.cols() != cols) {
    throw DimensionMismatch("phi is " + idx(phi.rows()) + "x" + idx(phi.cols()) + ", expected " + idx(cols) + "x" +
                            idx(cols));
  }
  if (omega.size() != rows) throw DimensionMismatch("omega has " + idx(omega.size()) + " entries, expected " + idx(rows));
  if (!is_symmetric(phi, 1e-12)) throw InvalidModel("phi is not symmetric");
  for (Eigen::Index k = 0; k < cols; ++k) {
    if (std::fabs(phi(k, k) - 1.0) > kUnitDiagonalTolerance) throw InvalidModel("phi diagonal entry " + idx(k) + " is not 1");
  }
  try {
    (void)cholesky(phi);
  } catch (const NotPositiveDefinite&) {
    throw InvalidModel("phi is not positive definite");
  }
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (!(omega(i) > 0.0)) throw InvalidModel("omega entry " + idx(i) + " is not positive");
    if (!allow_zero_rows && (lambda.row(i).array() == 0.0).all()) {
      throw InvalidModel("lambda row " + idx(i) + " is all zero");
    }
  }
  for (Eigen::Index k = 0; k < cols; ++k) {
    if ((lambda.col(k).array() == 0.0).all()) throw InvalidModel("lambda column " + idx(k) + " is all zero");
  }
}

// ------------------------------------------------------------------- Structure

Structure::Structure(std::size_t p, std::size_t d, std::vector<Pair> support)
    : p_(p), d_(d), support_(std::move(support)) {
  if (p_ == 0 || d_ == 0) throw InvalidModel("structure needs p >= 1 and d >= 1");
  std::sort(support_.begin(), support_.end());
  support_.erase(std::unique(support_.begin(), support_.end()), support_.end());
  std::vector<bool> used(d_, false);
  for (const auto& [row, col] : support_) {
    if (row >= p_ || col >= d_) throw InvalidModel("support entry (" + idx(row) + ", " + idx(col) + ") out of range");
    used[col] = true;
  }
  for (std::size_t k = 0; k < d_; ++k) {
    if (!used[k]) throw InvalidModel("factor " + idx(k) + " has no children");
  }
}

Structure Structure::from_columns(std::size_t p, const std::vector<std::vector<std::size_t>>& columns) {
  std::vector<Pair> support;
  for (std::size_t k = 0; k < columns.size(); ++k) {
    for (std::size_t row : columns[k]) support.emplace_back(row, k);
  }
  return Structure(p, columns.size(), std::move(support));
}

Structure Structure::from_loadings(const Matrix& lambda) {
  std::vector<Pair> support;
  for (Eigen::Index i = 0; i < lambda.rows(); ++i) {
    for (Eigen::Index k = 0; k < lambda.cols(); ++k) {
      if (lambda(i, k) != 0.0) support.emplace_back(i, k);
    }
  }
  return Structure(static_cast<std::size_t>(lambda.rows()), static_cast<std::size_t>(lambda.cols()), std::move(support));
}

Structure Structure::independent_cluster(std::size_t d, std::size_t children) {
  std::vector<Pair> support;
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t c = 0; c < children; ++c) support.emplace_back(k * children + c, k);
  }
  return Structure(d * children, d, std::move(support));
}

std::vector<std::vector<std::size_t>> Structure::columns() const {
  std::vector<std::vector<std::size_t>> cols(d_);
  for (const auto& [row, col] : support_) cols[col].push_back(row);
  return cols;
}

std::vector<std::vector<std::size_t>> Structure::parents() const {
  std::vector<std::vector<std::size_t>> rows(p_);
  for (const auto& [row, col] : support_) rows[row].push_back(col);
  return rows;
}

bool Structure::contains(std::size_t row, std::size_t col) const {
  return std::binary_search(support_.begin(), support_.end(), Pair{row, col});
}

std::vector<std::size_t> Structure::zero_rows() const {
  std::vector<bool> has(p_, false);
  for (const auto& entry : support_) has[entry.first] = true;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < p_; ++i) {
    if (!has[i]) out.push_back(i);
  }
  return out;
}

std::vector<std::vector<std::size_t>> Structure::canonical_columns() const {
  auto cols = columns();
  std::sort(cols.begin(), cols.end());
  return cols;
}

bool Structure::equivalent(const Structure& other) const {
  return p_ == other.p_ && d_ == other.d_ && size() == other.size() &&
         canonical_columns() == other.canonical_columns();
}

Structure Structure::permuted(const std::vector<std::size_t>& order) const {
  if (order.size() != d_) throw DimensionMismatch("permutation has wrong length");
  const auto cols = columns();
  std::vector<std::vector<std::size_t>> out;
  out.reserve(d_);
  for (std::size_t k : order) out.push_back(cols.at(k));
  return from_columns(p_, out);
}

std::vector<std::size_t> UniqueChildren::violating() const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < sets.size(); ++k) {
    if (sets[k].empty()) out.push_back(k);
  }
  return out;
}

// ------------------------------------------------------------ implied moments

Matrix implied_covariance(const FactorParams& theta) {
  if (theta.phi.rows() != theta.lambda.cols() || theta.phi.cols() != theta.lambda.cols() ||
      theta.omega.size() != theta.lambda.rows()) {
    throw DimensionMismatch("implied_covariance: inconsistent parameter shapes");
  }
  Matrix sigma = theta.lambda * theta.phi * theta.lambda.transpose();
  sigma.diagonal() += theta.omega;
  // Exact symmetry regardless of summation order.
  return (0.5 * (sigma + sigma.transpose())).eval();
}

Matrix implied_correlation(const FactorParams& theta) { return covariance_to_correlation(implied_covariance(theta)); }

EdgePartition edge_partition(const Structure& s) {
  const auto parents = s.parents();
  EdgePartition out;
  for (std::size_t i = 0; i < s.p(); ++i) {
    for (std::size_t j = i + 1; j < s.p(); ++j) {
      // Parent lists are sorted; a merge finds any common element.
      const auto& a = parents[i];
      const auto& b = parents[j];
      bool share = false;
      for (std::size_t x = 0, y = 0; x < a.size() && y < b.size();) {
        if (a[x] == b[y]) {
          share = true;
          break;
        }
        if (a[x] < b[y]) ++x;
        else ++y;
      }
      (share ? out.shared : out.unshared).emplace_back(i, j);
    }
  }
  return out;
}

namespace {

ThresholdabilityReport make_report(double min_shared, double max_unshared, bool degenerate, double max_abs) {
  ThresholdabilityReport r;
  r.min_shared = min_shared;
  r.max_unshared = max_unshared;
  r.thresholdable = max_unshared < min_shared;
  r.gap = 0.5 * (min_shared - max_unshared);
  r.tau0 = 0.5 * (min_shared + max_unshared);
  r.degenerate = degenerate;
  r.max_abs_corr = max_abs;
  return r;
}

}  // namespace

ThresholdabilityReport thresholdability(const FactorParams& theta) {
  const Matrix rho = implied_correlation(theta);
  const EdgePartition part = edge_partition(Structure::from_loadings(theta.lambda));
  double min_shared = 1.0;
  double max_unshared = 0.0;
  double max_abs = 0.0;
  for (const auto& [i, j] : part.shared) {
    const double a = std::fabs(rho(i, j));
    min_shared = std::min(min_shared, a);
    max_abs = std::max(max_abs, a);
  }
  for (const auto& [i, j] : part.unshared) {
    const double a = std::fabs(rho(i, j));
    max_unshared = std::max(max_unshared, a);
    max_abs = std::max(max_abs, a);
  }
  return make_report(min_shared, max_unshared, part.shared.empty() || part.unshared.empty(), max_abs);
}

bool general_sufficient_check(const FactorParams& theta) {
  const std::size_t p = theta.p();
  const std::size_t d = theta.d();
  // Standardized loadings: row i scaled by 1 / sqrt(lambda_i Phi lambda_i^T + omega_i).
  Matrix std_lambda = theta.lambda;
  for (std::size_t i = 0; i < p; ++i) {
    const auto row = theta.lambda.row(static_cast<Eigen::Index>(i));
    const double var = (row * theta.phi * row.transpose())(0, 0) + theta.omega(static_cast<Eigen::Index>(i));
    std_lambda.row(static_cast<Eigen::Index>(i)) /= std::sqrt(var);
  }
  std::vector<std::vector<std::size_t>> parents(p);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t k = 0; k < d; ++k) {
      if (theta.lambda(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) != 0.0) parents[i].push_back(k);
    }
  }
  // Sum over a in rows_set, b in cols_set of L~(i,a) Phi(a,b) L~(j,b).
  auto block = [&](std::size_t i, const std::vector<std::size_t>& left, const std::vector<std::size_t>& right,
                   std::size_t j) {
    double total = 0.0;
    for (std::size_t a : left) {
      for (std::size_t b : right) {
        total += std_lambda(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a)) *
                 theta.phi(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) *
                 std_lambda(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(b));
      }
    }
    return total;
  };

  double min_shared = 1.0;
  double max_unshared = 0.0;
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = i + 1; j < p; ++j) {
      std::vector<std::size_t> only_i, only_j, both;
      std::set_difference(parents[i].begin(), parents[i].end(), parents[j].begin(), parents[j].end(),
                          std::back_inserter(only_i));
      std::set_difference(parents[j].begin(), parents[j].end(), parents[i].begin(), parents[i].end(),
                          std::back_inserter(only_j));
      std::set_intersection(parents[i].begin(), parents[i].end(), parents[j].begin(), parents[j].end(),
                            std::back_inserter(both));
      if (both.empty()) {
        // No shared parents: A = Pi_i, B = Pi_j.
        max_unshared = std::max(max_unshared, std::fabs(block(i, parents[i], parents[j], j)));
      } else {
        const double value = block(i, only_i, only_j, j) + block(i, both, only_j, j) + block(i, only_i, both, j) +
                             block(i, both, both, j);
        min_shared = std::min(min_shared, std::fabs(value));
      }
    }
  }
  return max_unshared < min_shared;
}

UniqueChildren unique_children(const Structure& s) {
  const auto parents = s.parents();
  UniqueChildren out;
  out.sets.resize(s.d());
  for (std::size_t i = 0; i < s.p(); ++i) {
    if (parents[i].size() == 1) out.sets[parents[i].front()].push_back(i);
  }
  out.ucc_holds = std::all_of(out.sets.begin(), out.sets.end(), [](const auto& u) { return !u.empty(); });
  return out;
}

RotationalUniqueness rotational_uniqueness_check(const Matrix& lambda, double rank_tolerance) {
  const auto p = lambda.rows();
  const auto d = lambda.cols();
  RotationalUniqueness out;
  out.condition1 = true;
  out.condition2 = true;
  for (Eigen::Index j = 0; j < d; ++j) {
    std::vector<Eigen::Index> zero_rows;
    for (Eigen::Index i = 0; i < p; ++i) {
      if (lambda(i, j) == 0.0) zero_rows.push_back(i);
    }
    out.zeros_per_column.push_back(zero_rows.size());
    if (static_cast<Eigen::Index>(zero_rows.size()) < d - 1) out.condition1 = false;

    // Rows with a zero in column j, with column j removed.
    Matrix reduced(static_cast<Eigen::Index>(zero_rows.size()), d - 1);
    for (Eigen::Index r = 0; r < reduced.rows(); ++r) {
      Eigen::Index c = 0;
      for (Eigen::Index k = 0; k < d; ++k) {
        if (k != j) reduced(r, c++) = lambda(zero_rows[static_cast<std::size_t>(r)], k);
      }
    }
    std::size_t rank = 0;
    if (reduced.size() > 0) {
      const Vector sv = Eigen::JacobiSVD<Matrix>(reduced).singularValues();
      const double largest = sv.size() > 0 ? sv(0) : 0.0;
      if (largest > 0.0) {
        for (Eigen::Index k = 0; k < sv.size(); ++k) {
          if (sv(k) > rank_tolerance * largest) ++rank;
        }
      }
    }
    out.reduced_rank.push_back(rank);
    if (static_cast<Eigen::Index>(rank) != d - 1) out.condition2 = false;
  }
  return out;
}

double consistency_bound_raw(long n, long p, double gamma, double c_const) {
  if (n < 5) throw DomainError("consistency_bound: n must be >= 5");
  if (p < 1) throw DomainError("consistency_bound: p must be >= 1");
  if (!(gamma >= 0.0 && gamma <= 2.0)) throw DomainError("consistency_bound: gamma must lie in [0, 2]");
  if (!(c_const > 0.0)) throw DomainError("consistency_bound: C must be positive");
  const double g2 = gamma * gamma;
  const double ratio = (4.0 - g2) / (4.0 + g2);
  if (ratio == 0.0) return 0.0;
  const double log_eta = std::log(c_const) + std::log(static_cast<double>(p)) +
                         (p > 1 ? std::log(static_cast<double>(p - 1)) : -std::numeric_limits<double>::infinity()) +
                         std::log(static_cast<double>(n - 2)) + static_cast<double>(n - 4) * std::log(ratio);
  return std::exp(log_eta);
}

double consistency_bound(long n, long p, double gamma, double c_const) {
  return std::clamp(consistency_bound_raw(n, p, gamma, c_const), 0.0, 1.0);
}

double ucc_probability_bound(long p, long d, double alpha) {
  if (p < 1 || d < 1) throw DomainError("ucc_probability_bound: p and d must be positive");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("ucc_probability_bound: alpha must lie in (0, 1)");
  const double exponent = alpha * static_cast<double>(p) * std::pow(1.0 - alpha, static_cast<double>(d));
  return std::clamp(1.0 - static_cast<double>(d) * std::exp(-exponent), 0.0, 1.0);
}

}  // namespace ctfactor
