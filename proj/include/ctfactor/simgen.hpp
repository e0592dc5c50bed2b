#pragma once

#include <cstddef>
#include <cstdint>

#include "ctfactor/model.hpp"
#include "ctfactor/numerics.hpp"
#include "ctfactor/rng.hpp"

namespace ctfactor {

/// Ground-truth generator settings. `lambda_lo`/`lambda_hi` bound the
/// loadings of independent-cluster models; their squares bound the per-
/// variable R^2 of models with unique-child violations.
struct SimSpec {
  std::size_t d = 3;
  std::size_t children_per_factor = 5;
  double lambda_lo = 0.6;
  double lambda_hi = 0.8;
  double phi_scale = 0.25;
  std::size_t n = 1000;
  std::uint64_t seed = 1;
  double ucc_violation_fraction = 0.0;
  double extra_parent_ratio = 5.0;  // main : extra share of R^2

  std::size_t p() const { return d * children_per_factor; }
  /// Throws InvalidSpec.
  void validate() const;

  /// n in {250, 500, 1000}: p = 1.5 n, d = 0.1 n (15 children per factor).
  static SimSpec highdim_preset(std::size_t n);
};

/// Unit-diagonal factor correlation. Off-diagonals are those of A^T A,
/// A ~ U(0,1)^{d x d}, mapped affinely onto [0.6, 0.8] and multiplied by
/// `scale`; A is redrawn (up to 100 times) until the result is positive
/// definite, else GenerationFailure.
Matrix gen_phi(std::size_t d, double scale, Rng& rng);

/// One nonzero loading per row, U(lambda_lo, lambda_hi); Phi from gen_phi;
/// omega set for unit implied variances (InvalidVariance if impossible).
FactorParams gen_independent_cluster(const SimSpec& spec, Rng& rng);

/// Starts from an independent cluster with Phi = I, picks
/// ceil(fraction * d) factors and gives all their children one shared extra
/// parent chosen among the other factors. Per-variable R^2 ~ U(lo^2, hi^2)
/// split main:extra = ratio:1 for two-parent rows; omega = 1 - R^2.
/// With fraction 0 this is gen_independent_cluster with Phi = I.
FactorParams gen_ucc_violation(const SimSpec& spec, Rng& rng);

/// Bernoulli(alpha) bipartite support. Empty rows are redrawn row by row and
/// a draw with an empty column is redrawn whole (each up to 100 attempts).
Structure gen_random_bipartite(std::size_t p, std::size_t d, double alpha, Rng& rng);

/// X = L Lambda^T + eps with L ~ N(0, Phi), eps ~ N(0, Omega), row-wise.
DataMatrix sample_dataset(const FactorParams& theta, std::size_t n, Rng& rng);

/// Dispatches on spec.ucc_violation_fraction.
FactorParams generate_model(const SimSpec& spec, Rng& rng);

}  // namespace ctfactor
