#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "ctfactor/numerics.hpp"

namespace ctfactor {

/// Parameters of X = Lambda L + eps with L ~ N(0, Phi), eps ~ N(0, diag(omega)).
struct FactorParams {
  Matrix lambda;  // p x d loadings
  Matrix phi;     // d x d factor correlation, unit diagonal
  Vector omega;   // p error variances

  std::size_t p() const { return static_cast<std::size_t>(lambda.rows()); }
  std::size_t d() const { return static_cast<std::size_t>(lambda.cols()); }

  /// Checks shapes, unit-diagonal PD Phi, positive omega and the absence of
  /// all-zero rows/columns in lambda. Throws DimensionMismatch or InvalidModel.
  /// `allow_zero_rows` admits variables without parents (fitted noise-only
  /// variables).
  void validate(bool allow_zero_rows = false) const;
};

using Pair = std::pair<std::size_t, std::size_t>;

/// The pair (d, support of Lambda). Support is kept sorted by (row, col);
/// every column must be non-empty, rows may be empty.
class Structure {
 public:
  Structure() = default;
  /// Throws InvalidModel on out-of-range indices or an empty column.
  Structure(std::size_t p, std::size_t d, std::vector<Pair> support);

  static Structure from_columns(std::size_t p, const std::vector<std::vector<std::size_t>>& columns);
  /// Support of the nonzero entries of `lambda`.
  static Structure from_loadings(const Matrix& lambda);
  /// One factor per block of `children` consecutive rows.
  static Structure independent_cluster(std::size_t d, std::size_t children);

  std::size_t p() const { return p_; }
  std::size_t d() const { return d_; }
  const std::vector<Pair>& support() const { return support_; }
  std::size_t size() const { return support_.size(); }

  /// Row indices per column, ascending.
  std::vector<std::vector<std::size_t>> columns() const;
  /// Column indices per row, ascending (the parent sets).
  std::vector<std::vector<std::size_t>> parents() const;
  bool contains(std::size_t row, std::size_t col) const;
  /// Rows that load on no factor.
  std::vector<std::size_t> zero_rows() const;

  /// Columns sorted lexicographically: equal for two structures iff they
  /// coincide up to a column permutation.
  std::vector<std::vector<std::size_t>> canonical_columns() const;
  bool equivalent(const Structure& other) const;
  /// The same structure with columns listed in `order` (a permutation).
  Structure permuted(const std::vector<std::size_t>& order) const;

  friend bool operator==(const Structure&, const Structure&) = default;

 private:
  std::size_t p_ = 0;
  std::size_t d_ = 0;
  std::vector<Pair> support_;
};

/// Unordered distinct pairs (i < j) split by whether they share a parent.
struct EdgePartition {
  std::vector<Pair> shared;
  std::vector<Pair> unshared;
};

struct ThresholdabilityReport {
  bool thresholdable = false;
  double min_shared = 1.0;    // min |rho| over shared-parent pairs (1 if none)
  double max_unshared = 0.0;  // max |rho| over the other pairs (0 if none)
  double gap = 0.0;           // (min_shared - max_unshared) / 2
  double tau0 = 0.0;          // (min_shared + max_unshared) / 2
  double max_abs_corr = 0.0;  // max off-diagonal |rho| (the bound M)
  bool degenerate = false;    // one side of the partition was empty
};

struct UniqueChildren {
  std::vector<std::vector<std::size_t>> sets;  // U_k per factor
  bool ucc_holds = false;
  std::vector<std::size_t> violating() const;
};

struct RotationalUniqueness {
  bool condition1 = false;  // >= d-1 zeros in every column
  bool condition2 = false;  // rank of every reduced block equals d-1
  std::vector<std::size_t> zeros_per_column;
  std::vector<std::size_t> reduced_rank;
};

Matrix implied_covariance(const FactorParams& theta);
Matrix implied_correlation(const FactorParams& theta);

EdgePartition edge_partition(const Structure& s);

ThresholdabilityReport thresholdability(const FactorParams& theta);

/// Evaluates the thresholdability inequality written in terms of the
/// standardized loadings and the blocks of Phi indexed by the exclusive and
/// shared parent sets of each pair. Must agree with thresholdability().
bool general_sufficient_check(const FactorParams& theta);

UniqueChildren unique_children(const Structure& s);

RotationalUniqueness rotational_uniqueness_check(const Matrix& lambda, double rank_tolerance = 1e-10);

/// C p (p-1) (n-2) ((4 - g^2) / (4 + g^2))^(n-4), unclamped. Requires
/// n >= 5, 0 <= gamma <= 2, c_const > 0.
double consistency_bound_raw(long n, long p, double gamma, double c_const = 1.0);
/// consistency_bound_raw clamped to [0, 1].
double consistency_bound(long n, long p, double gamma, double c_const = 1.0);

/// 1 - d exp(-alpha p (1 - alpha)^d), clamped to [0, 1].
double ucc_probability_bound(long p, long d, double alpha);

}  // namespace ctfactor
