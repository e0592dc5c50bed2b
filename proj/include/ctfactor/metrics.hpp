#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ctfactor/model.hpp"

namespace ctfactor {

/// Structure-recovery scores, each optimized over column matchings of the
/// estimate against the truth. Unmatched columns (when d_hat != d) count
/// all their entries as errors.
struct MetricReport {
  std::size_t hd = 0;
  double f1 = 0.0;
  /// best_permutation[k] = true column matched to estimated column k, or -1.
  std::vector<long> best_permutation;
  std::size_t d_hat = 0;
  std::size_t d_true = 0;
};

enum class Metric { hd, f1 };

/// Minimum-cost assignment of every row to a distinct column; requires
/// rows <= cols. Returns the column assigned to each row.
std::vector<std::size_t> linear_sum_assignment(const std::vector<std::vector<std::int64_t>>& cost);

/// HD = min over matchings of |A(est P) symmetric-difference A(truth)|.
MetricReport hamming_distance(const Structure& est, const Structure& truth);
/// F1 = max over matchings of 2|cap| / (2|cap| + |symmetric difference|).
MetricReport f1_score(const Structure& est, const Structure& truth);
/// Both scores, each with its own optimal matching (HD's matching reported).
MetricReport evaluate(const Structure& est, const Structure& truth);

inline constexpr std::size_t kBruteForceMaxColumns = 8;

/// Enumerates every padded column permutation. Throws TooLarge when
/// max(d_hat, d) exceeds kBruteForceMaxColumns.
double brute_force_metric(const Structure& est, const Structure& truth, Metric which);

}  // namespace ctfactor
