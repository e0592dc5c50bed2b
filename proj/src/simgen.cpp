#include "ctfactor/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <numeric>
#include <string>
#include <vector>

#include "ctfactor/error.hpp"

namespace ctfactor {

namespace {

constexpr int kMaxAttempts = 100;
constexpr double kPhiLo = 0.6;
constexpr double kPhiHi = 0.8;

}  // namespace

void SimSpec::validate() const {
  if (d == 0 || children_per_factor == 0 || n == 0) throw InvalidSpec("d, children and n must be positive");
  if (!(lambda_lo <= lambda_hi)) throw InvalidSpec("lambda range must satisfy lo <= hi");
  if (!(lambda_lo > 0.0) || !(lambda_hi < 1.0)) throw InvalidSpec("loadings must lie in (0, 1)");
  if (!(phi_scale >= 0.0 && phi_scale <= 1.0)) throw InvalidSpec("phi_scale must lie in [0, 1]");
  if (!(ucc_violation_fraction >= 0.0 && ucc_violation_fraction <= 1.0)) {
    throw InvalidSpec("ucc_violation_fraction must lie in [0, 1]");
  }
  if (!(extra_parent_ratio > 0.0)) throw InvalidSpec("extra_parent_ratio must be positive");
}

SimSpec SimSpec::highdim_preset(std::size_t n) {
  if (n != 250 && n != 500 && n != 1000) throw InvalidSpec("high-dimensional presets exist for n = 250, 500, 1000");
  SimSpec spec;
  spec.n = n;
  spec.d = n / 10;
  spec.children_per_factor = 15;  // p = 1.5 n = 15 d
  return spec;
}

Matrix gen_phi(std::size_t d, double scale, Rng& rng) {
  if (d == 0) throw InvalidSpec("gen_phi: d must be positive");
  const auto dd = static_cast<Eigen::Index>(d);
  if (d == 1) return Matrix::Identity(1, 1);
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    Matrix a(dd, dd);
    for (Eigen::Index i = 0; i < dd; ++i) {
      for (Eigen::Index j = 0; j < dd; ++j) a(i, j) = rng.uniform();
    }
    const Matrix ata = a.transpose() * a;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < dd; ++i) {
      for (Eigen::Index j = 0; j < i; ++j) {
        lo = std::min(lo, ata(i, j));
        hi = std::max(hi, ata(i, j));
      }
    }
    Matrix phi = Matrix::Identity(dd, dd);
    for (Eigen::Index i = 0; i < dd; ++i) {
      for (Eigen::Index j = 0; j < i; ++j) {
        const double unit = hi > lo ? (ata(i, j) - lo) / (hi - lo) : 0.5;
        phi(i, j) = phi(j, i) = scale * (kPhiLo + (kPhiHi - kPhiLo) * unit);
      }
    }
    try {
      (void)cholesky(phi);
      return phi;
    } catch (const NotPositiveDefinite&) {
    }
  }
  throw GenerationFailure("gen_phi: no positive definite draw in " + std::to_string(kMaxAttempts) + " attempts");
}

FactorParams gen_independent_cluster(const SimSpec& spec, Rng& rng) {
  spec.validate();
  const auto p = static_cast<Eigen::Index>(spec.p());
  const auto d = static_cast<Eigen::Index>(spec.d);
  FactorParams th;
  th.phi = gen_phi(spec.d, spec.phi_scale, rng);
  th.lambda = Matrix::Zero(p, d);
  th.omega = Vector(p);
  for (Eigen::Index i = 0; i < p; ++i) {
    const Eigen::Index k = i / static_cast<Eigen::Index>(spec.children_per_factor);
    th.lambda(i, k) = rng.uniform(spec.lambda_lo, spec.lambda_hi);
    const auto row = th.lambda.row(i);
    const double communality = (row * th.phi * row.transpose())(0, 0);
    if (!(communality < 1.0)) throw InvalidVariance("implied communality of variable " + std::to_string(i) + " is >= 1");
    th.omega(i) = 1.0 - communality;
  }
  return th;
}

FactorParams gen_ucc_violation(const SimSpec& spec, Rng& rng) {
  spec.validate();
  if (spec.ucc_violation_fraction == 0.0) {
    SimSpec orthogonal = spec;
    orthogonal.phi_scale = 0.0;
    return gen_independent_cluster(orthogonal, rng);
  }
  if (spec.d < 2) throw InvalidSpec("unique-child violations need at least 2 factors");

  const std::size_t d = spec.d;
  const auto violating =
      static_cast<std::size_t>(std::ceil(spec.ucc_violation_fraction * static_cast<double>(d) - 1e-12));
  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.shuffle(std::span<std::size_t>(order));

  constexpr long kNone = -1;
  std::vector<long> extra(d, kNone);
  for (std::size_t s = 0; s < violating; ++s) {
    const std::size_t k = order[s];
    std::size_t e = rng.index(d - 1);
    if (e >= k) ++e;
    extra[k] = static_cast<long>(e);
  }

  const auto p = static_cast<Eigen::Index>(spec.p());
  FactorParams th;
  th.phi = Matrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  th.lambda = Matrix::Zero(p, static_cast<Eigen::Index>(d));
  th.omega = Vector(p);
  const double r2_lo = spec.lambda_lo * spec.lambda_lo;
  const double r2_hi = spec.lambda_hi * spec.lambda_hi;
  const double main_share = spec.extra_parent_ratio / (spec.extra_parent_ratio + 1.0);
  for (Eigen::Index i = 0; i < p; ++i) {
    const auto k = static_cast<std::size_t>(i) / spec.children_per_factor;
    const double r2 = rng.uniform(r2_lo, r2_hi);
    if (extra[k] == kNone) {
      th.lambda(i, static_cast<Eigen::Index>(k)) = std::sqrt(r2);
    } else {
      th.lambda(i, static_cast<Eigen::Index>(k)) = std::sqrt(main_share * r2);
      th.lambda(i, extra[k]) = std::sqrt((1.0 - main_share) * r2);
    }
    th.omega(i) = 1.0 - r2;
  }
  return th;
}

Structure gen_random_bipartite(std::size_t p, std::size_t d, double alpha, Rng& rng) {
  if (p == 0 || d == 0) throw InvalidSpec("gen_random_bipartite: p and d must be positive");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidSpec("gen_random_bipartite: alpha must lie in (0, 1]");
  for (int whole = 0; whole < kMaxAttempts; ++whole) {
    std::vector<Pair> support;
    std::vector<bool> column_used(d, false);
    for (std::size_t i = 0; i < p; ++i) {
      std::vector<std::size_t> row;
      for (int attempt = 0; attempt < kMaxAttempts && row.empty(); ++attempt) {
        for (std::size_t k = 0; k < d; ++k) {
          if (rng.bernoulli(alpha)) row.push_back(k);
        }
      }
      if (row.empty()) throw GenerationFailure("gen_random_bipartite: row stayed empty after redraws");
      for (std::size_t k : row) {
        support.emplace_back(i, k);
        column_used[k] = true;
      }
    }
    if (std::all_of(column_used.begin(), column_used.end(), [](bool b) { return b; })) {
      return Structure(p, d, std::move(support));
    }
  }
  throw GenerationFailure("gen_random_bipartite: a factor stayed childless after redraws");
}

DataMatrix sample_dataset(const FactorParams& theta, std::size_t n, Rng& rng) {
  if (n == 0) throw DomainError("sample_dataset: n must be positive");
  theta.validate(true);
  const Eigen::Index p = theta.lambda.rows();
  const Eigen::Index d = theta.lambda.cols();
  const CholeskyFactor phi_factor = cholesky(theta.phi);
  const Vector sd = theta.omega.cwiseSqrt();
  DataMatrix x(static_cast<Eigen::Index>(n), p);
  Vector z(d);
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    for (Eigen::Index k = 0; k < d; ++k) z(k) = rng.normal();
    const Vector latent = phi_factor.lower * z;
    for (Eigen::Index i = 0; i < p; ++i) x(r, i) = theta.lambda.row(i).dot(latent) + sd(i) * rng.normal();
  }
  return x;
}

FactorParams generate_model(const SimSpec& spec, Rng& rng) {
  return spec.ucc_violation_fraction > 0.0 ? gen_ucc_violation(spec, rng) : gen_independent_cluster(spec, rng);
}

}  // namespace ctfactor
