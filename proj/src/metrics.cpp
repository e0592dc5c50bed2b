#include "ctfactor/metrics.hpp"

#include <algorithm>
#include <iterator>
#include <limits>
#include <numeric>
#include <string>

#include "ctfactor/error.hpp"
#include "ctfactor/kernels.hpp"

namespace ctfactor {

std::vector<std::size_t> linear_sum_assignment(const std::vector<std::vector<std::int64_t>>& cost) {
  const std::size_t n = cost.size();
  if (n == 0) return {};
  const std::size_t m = cost.front().size();
  if (m < n) throw DimensionMismatch("linear_sum_assignment: needs rows <= cols");

  // Shortest augmenting path with potentials, 1-based with column 0 as the
  // virtual source. O(n^2 m).
  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
  std::vector<std::int64_t> u(n + 1, 0), v(m + 1, 0), minv(m + 1);
  std::vector<std::size_t> owner(m + 1, 0), way(m + 1, 0);
  std::vector<char> used(m + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    owner[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = owner[j0];
      std::int64_t delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const std::int64_t cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[owner[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (owner[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      owner[j0] = owner[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> assignment(n, 0);
  for (std::size_t j = 1; j <= m; ++j) {
    if (owner[j] != 0) assignment[owner[j] - 1] = j - 1;
  }
  return assignment;
}

namespace {

struct ColumnSets {
  std::size_t words = 0;
  std::vector<std::vector<std::uint64_t>> bits;
  std::vector<std::int64_t> sizes;
  std::int64_t total = 0;
};

ColumnSets column_sets(const Structure& s) {
  ColumnSets out;
  out.words = kernels::words_for_bits(s.p());
  out.bits.assign(s.d(), std::vector<std::uint64_t>(out.words, 0));
  out.sizes.assign(s.d(), 0);
  for (const auto& [row, col] : s.support()) {
    out.bits[col][row / 64] |= std::uint64_t{1} << (row % 64);
    ++out.sizes[col];
  }
  out.total = static_cast<std::int64_t>(s.size());
  return out;
}

void require_same_p(const Structure& est, const Structure& truth) {
  if (est.p() != truth.p()) {
    throw DimensionMismatch("structures have different p: " + std::to_string(est.p()) + " vs " +
                            std::to_string(truth.p()));
  }
}

/// Intersection sizes, est columns x true columns.
std::vector<std::vector<std::int64_t>> overlaps(const ColumnSets& est, const ColumnSets& truth) {
  const auto& k = kernels::active();
  std::vector<std::vector<std::int64_t>> out(est.bits.size(), std::vector<std::int64_t>(truth.bits.size(), 0));
  for (std::size_t a = 0; a < est.bits.size(); ++a) {
    for (std::size_t b = 0; b < truth.bits.size(); ++b) {
      out[a][b] = static_cast<std::int64_t>(k.and_popcount(est.bits[a].data(), truth.bits[b].data(), est.words));
    }
  }
  return out;
}

/// Solves the padded problem as a rectangular assignment over the smaller
/// side. `pair_cost(a, b)` is the cost of matching est a with true b; an
/// unmatched column of either side costs `unmatched_est[a]` /
/// `unmatched_true[b]`. Returns (total cost, matching est -> true or -1).
template <typename PairCost>
std::pair<std::int64_t, std::vector<long>> padded_assignment(std::size_t d_est, std::size_t d_true, PairCost pair_cost,
                                                             const std::vector<std::int64_t>& unmatched_est,
                                                             const std::vector<std::int64_t>& unmatched_true) {
  const std::int64_t all_est = std::accumulate(unmatched_est.begin(), unmatched_est.end(), std::int64_t{0});
  const std::int64_t all_true = std::accumulate(unmatched_true.begin(), unmatched_true.end(), std::int64_t{0});
  std::vector<long> matching(d_est, -1);
  std::int64_t total = 0;
  if (d_est <= d_true) {
    // Every est column is matched; the cost of leaving a true column open is
    // folded in by subtracting it from each pair it takes part in.
    std::vector<std::vector<std::int64_t>> cost(d_est, std::vector<std::int64_t>(d_true));
    for (std::size_t a = 0; a < d_est; ++a) {
      for (std::size_t b = 0; b < d_true; ++b) cost[a][b] = pair_cost(a, b) - unmatched_true[b];
    }
    const auto assign = linear_sum_assignment(cost);
    total = all_true;
    for (std::size_t a = 0; a < d_est; ++a) {
      matching[a] = static_cast<long>(assign[a]);
      total += cost[a][assign[a]];
    }
  } else {
    std::vector<std::vector<std::int64_t>> cost(d_true, std::vector<std::int64_t>(d_est));
    for (std::size_t b = 0; b < d_true; ++b) {
      for (std::size_t a = 0; a < d_est; ++a) cost[b][a] = pair_cost(a, b) - unmatched_est[a];
    }
    const auto assign = linear_sum_assignment(cost);
    total = all_est;
    for (std::size_t b = 0; b < d_true; ++b) {
      matching[assign[b]] = static_cast<long>(b);
      total += cost[b][assign[b]];
    }
  }
  return {total, matching};
}

}  // namespace

MetricReport hamming_distance(const Structure& est, const Structure& truth) {
  require_same_p(est, truth);
  const ColumnSets e = column_sets(est);
  const ColumnSets t = column_sets(truth);
  const auto inter = overlaps(e, t);
  auto sym_diff = [&](std::size_t a, std::size_t b) { return e.sizes[a] + t.sizes[b] - 2 * inter[a][b]; };
  auto [total, matching] = padded_assignment(est.d(), truth.d(), sym_diff, e.sizes, t.sizes);
  MetricReport r;
  r.hd = static_cast<std::size_t>(total);
  r.best_permutation = std::move(matching);
  r.d_hat = est.d();
  r.d_true = truth.d();
  const std::int64_t denom = e.total + t.total;
  r.f1 = denom > 0 ? static_cast<double>(denom - total) / static_cast<double>(denom) : 0.0;
  return r;
}

MetricReport f1_score(const Structure& est, const Structure& truth) {
  require_same_p(est, truth);
  const ColumnSets e = column_sets(est);
  const ColumnSets t = column_sets(truth);
  const auto inter = overlaps(e, t);
  const std::vector<std::int64_t> zeros_est(est.d(), 0), zeros_true(truth.d(), 0);
  auto reward = [&](std::size_t a, std::size_t b) { return -inter[a][b]; };
  auto [neg_cap, matching] = padded_assignment(est.d(), truth.d(), reward, zeros_est, zeros_true);
  const std::int64_t cap = -neg_cap;
  const std::int64_t sym = e.total + t.total - 2 * cap;
  MetricReport r;
  r.f1 = (2 * cap + sym) > 0 ? static_cast<double>(2 * cap) / static_cast<double>(2 * cap + sym) : 0.0;
  r.hd = static_cast<std::size_t>(sym);
  r.best_permutation = std::move(matching);
  r.d_hat = est.d();
  r.d_true = truth.d();
  return r;
}

MetricReport evaluate(const Structure& est, const Structure& truth) {
  MetricReport hd = hamming_distance(est, truth);
  hd.f1 = f1_score(est, truth).f1;
  return hd;
}

double brute_force_metric(const Structure& est, const Structure& truth, Metric which) {
  require_same_p(est, truth);
  const std::size_t m = std::max(est.d(), truth.d());
  if (m > kBruteForceMaxColumns) {
    throw TooLarge("brute-force metric is limited to " + std::to_string(kBruteForceMaxColumns) + " columns");
  }
  auto est_cols = est.columns();
  auto true_cols = truth.columns();
  est_cols.resize(m);
  true_cols.resize(m);
  std::vector<std::size_t> perm(m);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double best = which == Metric::hd ? std::numeric_limits<double>::infinity() : -1.0;
  do {
    std::size_t cap = 0;
    std::size_t sym = 0;
    for (std::size_t k = 0; k < m; ++k) {
      const auto& a = est_cols[k];
      const auto& b = true_cols[perm[k]];
      std::vector<std::size_t> common;
      std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
      cap += common.size();
      sym += a.size() + b.size() - 2 * common.size();
    }
    if (which == Metric::hd) {
      best = std::min(best, static_cast<double>(sym));
    } else {
      const double denom = static_cast<double>(2 * cap + sym);
      best = std::max(best, denom > 0 ? static_cast<double>(2 * cap) / denom : 0.0);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace ctfactor
