#pragma once

// Hand-rolled generators shared by the unit suites.

#include <algorithm>
#include <vector>

#include "ctfactor/graph.hpp"
#include "ctfactor/model.hpp"
#include "ctfactor/numerics.hpp"
#include "ctfactor/rng.hpp"
#include "ctfactor/simgen.hpp"

namespace testsupport {

using namespace ctfactor;

inline Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.normal();
  return m;
}

inline Matrix random_pd(Eigen::Index d, Rng& rng) {
  const Matrix a = random_matrix(d, d, rng);
  Matrix s = a * a.transpose() + static_cast<double>(d) * Matrix::Identity(d, d);
  return 0.5 * (s + s.transpose());
}

/// Bernoulli(alpha) support; every column nonempty, rows may be empty
/// unless `full_rows`.
inline Structure random_structure(std::size_t p, std::size_t d, double alpha, Rng& rng, bool full_rows = true) {
  for (;;) {
    std::vector<Pair> sup;
    std::vector<bool> col(d, false);
    for (std::size_t i = 0; i < p; ++i) {
      bool any = false;
      for (std::size_t k = 0; k < d; ++k) {
        if (rng.bernoulli(alpha)) {
          sup.emplace_back(i, k);
          col[k] = any = true;
        }
      }
      if (!any && full_rows) {
        const std::size_t k = rng.index(d);
        sup.emplace_back(i, k);
        col[k] = true;
      }
    }
    if (std::all_of(col.begin(), col.end(), [](bool b) { return b; })) return Structure(p, d, sup);
  }
}

/// Valid parameters on a random support: signed loadings, random
/// correlation Phi, positive omega.
inline FactorParams random_theta(std::size_t p, std::size_t d, Rng& rng, double alpha = 0.4) {
  const Structure s = random_structure(p, d, alpha, rng);
  FactorParams th;
  th.lambda = Matrix::Zero(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(d));
  for (const auto& [r, c] : s.support()) {
    const double mag = rng.uniform(0.2, 0.95);
    th.lambda(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rng.bernoulli(0.8) ? mag : -mag;
  }
  const auto dd = static_cast<Eigen::Index>(d);
  Matrix phi = random_pd(dd, rng);
  const Vector sd = phi.diagonal().cwiseSqrt().cwiseInverse();
  phi = sd.asDiagonal() * phi * sd.asDiagonal();
  phi = (0.5 * (phi + phi.transpose())).eval();
  phi.diagonal().setOnes();
  th.phi = phi;
  th.omega = Vector(static_cast<Eigen::Index>(p));
  for (Eigen::Index i = 0; i < th.omega.size(); ++i) th.omega(i) = rng.uniform(0.1, 1.0);
  return th;
}

inline ThresholdedGraph random_graph(std::size_t p, double density, Rng& rng) {
  std::vector<Pair> edges;
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < p; ++j)
      if (rng.bernoulli(density)) edges.emplace_back(i, j);
  return ThresholdedGraph::from_edges(p, edges);
}

}  // namespace testsupport
