#include <doctest.h>

#include <algorithm>
#include <set>

#include "ctfactor/error.hpp"
#include "ctfactor/graph.hpp"
#include "ctfactor/metrics.hpp"
#include "support.hpp"

using namespace ctfactor;
using testsupport::random_graph;

namespace {

ThresholdedGraph cycle4() { return ThresholdedGraph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}); }

Matrix block_corr(std::size_t blocks, std::size_t size, double within) {
  const auto p = static_cast<Eigen::Index>(blocks * size);
  Matrix r = Matrix::Identity(p, p);
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = 0; j < p; ++j)
      if (i != j && i / static_cast<Eigen::Index>(size) == j / static_cast<Eigen::Index>(size)) r(i, j) = within;
  return r;
}

}  // namespace

TEST_CASE("build_graph thresholds strictly") {
  Rng rng(1);
  Matrix r = Matrix::Identity(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < i; ++j) r(i, j) = r(j, i) = rng.uniform(-0.9, 0.9);
  CHECK(build_graph(r, 1.0).edge_count() == 0);
  CHECK(build_graph(r, 0.0).edge_count() == 10);
  const ThresholdedGraph g = build_graph(r, 0.4);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK_FALSE(g.adjacent(i, i));
    for (std::size_t j = 0; j < 5; ++j) {
      if (i != j) CHECK(g.adjacent(i, j) == (std::fabs(r(i, j)) > 0.4));
    }
  }
  r(0, 1) = r(1, 0) = 0.5;
  CHECK_FALSE(build_graph(r, 0.5).adjacent(0, 1));
  CHECK_THROWS_AS(build_graph(r, 1.5), DomainError);
  CHECK_THROWS_AS(build_graph(r, -0.1), DomainError);
  Matrix off = r;
  off(2, 2) = 0.9;
  CHECK_THROWS_AS(build_graph(off, 0.3), DomainError);
}

TEST_CASE("build_graph at tau0 of a thresholdable model gives the shared-parent pairs") {
  Rng rng(5);
  for (int t = 0; t < 100; ++t) {
    SimSpec spec;
    spec.d = 2 + rng.index(4);
    spec.phi_scale = rng.bernoulli(0.5) ? 0.0 : 0.25;
    const FactorParams th = gen_independent_cluster(spec, rng);
    const ThresholdabilityReport rep = thresholdability(th);
    if (!rep.thresholdable) continue;
    const ThresholdedGraph g = build_graph(implied_correlation(th), rep.tau0);
    CHECK(g.edges() == edge_partition(Structure::from_loadings(th.lambda)).shared);
  }
}

TEST_CASE("neighborhood and is_clique against scans") {
  Rng rng(9);
  const ThresholdedGraph empty(4, 0.5);
  CHECK(neighborhood(empty, 2) == std::vector<std::size_t>{2});
  for (int t = 0; t < 200; ++t) {
    const std::size_t p = 1 + rng.index(70);
    const ThresholdedGraph g = random_graph(p, rng.uniform(), rng);
    const std::size_t i = rng.index(p);
    std::vector<std::size_t> scan;
    for (std::size_t j = 0; j < p; ++j)
      if (j == i || g.adjacent(i, j)) scan.push_back(j);
    CHECK(neighborhood(g, i) == scan);
    CHECK(g.degree(i) == scan.size() - 1);

    std::vector<std::size_t> set;
    for (std::size_t j = 0; j < p; ++j)
      if (rng.bernoulli(0.15)) set.push_back(j);
    bool all_pairs = true;
    for (std::size_t a = 0; a < set.size(); ++a)
      for (std::size_t b = a + 1; b < set.size(); ++b) all_pairs &= g.adjacent(set[a], set[b]);
    CHECK(is_clique(g, set) == all_pairs);
  }
  const ThresholdedGraph k3 = ThresholdedGraph::from_edges(3, {{0, 1}, {1, 2}, {0, 2}});
  CHECK(neighborhood(k3, 0) == std::vector<std::size_t>{0, 1, 2});
  CHECK(is_clique(k3, std::vector<std::size_t>{}));
  CHECK(is_clique(k3, std::vector<std::size_t>{1}));
  CHECK_FALSE(is_clique(cycle4(), std::vector<std::size_t>{0, 2}));
  CHECK_THROWS_AS(neighborhood(k3, 3), IndexError);
  CHECK_THROWS_AS(is_clique(k3, std::vector<std::size_t>{0, 7}), IndexError);
}

TEST_CASE("independent maximal cliques: hand examples") {
  const CliqueSet e = independent_maximal_cliques(ThresholdedGraph(4, 0.0));
  CHECK(e.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(e.cliques[i] == std::vector<std::size_t>{i});
    CHECK(e.unique_members[i] == std::vector<std::size_t>{i});
  }

  std::vector<Pair> all;
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = i + 1; j < 5; ++j) all.emplace_back(i, j);
  const CliqueSet k5 = independent_maximal_cliques(ThresholdedGraph::from_edges(5, all));
  CHECK(k5.size() == 1);
  CHECK(k5.unique_members[0].size() == 5);

  const ThresholdedGraph path = ThresholdedGraph::from_edges(3, {{0, 1}, {1, 2}});
  const CliqueSet ps = independent_maximal_cliques(path);
  CHECK(ps.cliques == std::vector<std::vector<std::size_t>>{{0, 1}, {1, 2}});
  CHECK(ps.unique_members == std::vector<std::vector<std::size_t>>{{0}, {2}});
  CHECK(brute_force_independent_cliques(path) == ps);
  CHECK(maximal_cliques(cycle4()).size() == 4);
  CHECK(independent_maximal_cliques(cycle4()).empty());
  CHECK(brute_force_independent_cliques(cycle4()).empty());

  const ThresholdedGraph blocks = build_graph(block_corr(3, 5, 0.6), 0.3);
  const CliqueSet b = independent_maximal_cliques(blocks);
  CHECK(b.size() == 3);
  for (const auto& c : b.cliques) CHECK(c.size() == 5);
  const Structure s = structure_from_cliques(b, 15);
  CHECK(s == Structure::independent_cluster(3, 5));
}

TEST_CASE("neighborhood-based search equals the brute-force oracle on random graphs") {
  Rng rng(314);
  for (int t = 0; t < 300; ++t) {
    const std::size_t p = 1 + rng.index(12);
    const double density = 0.1 + 0.1 * static_cast<double>(rng.index(9));
    const ThresholdedGraph g = random_graph(p, density, rng);
    const CliqueSet fast = independent_maximal_cliques(g);
    REQUIRE(fast == brute_force_independent_cliques(g));

    const auto maximal = maximal_cliques(g);
    for (std::size_t c = 0; c < fast.size(); ++c) {
      CHECK(is_clique(g, fast.cliques[c]));
      CHECK(std::find(maximal.begin(), maximal.end(), fast.cliques[c]) != maximal.end());
      for (std::size_t u : fast.unique_members[c]) CHECK(neighborhood(g, u) == fast.cliques[c]);
      for (std::size_t v = 0; v < p; ++v) {
        if (std::binary_search(fast.cliques[c].begin(), fast.cliques[c].end(), v)) continue;
        bool adjacent_to_all = true;
        for (std::size_t m : fast.cliques[c]) adjacent_to_all &= g.adjacent(v, m);
        CHECK_FALSE(adjacent_to_all);
      }
    }
  }
  CHECK_THROWS_AS(brute_force_independent_cliques(ThresholdedGraph(26, 0.0)), TooLarge);
}

TEST_CASE("structure_from_cliques") {
  CHECK_THROWS_AS(structure_from_cliques(CliqueSet{}, 3), EmptyCliqueSet);
  CliqueSet one;
  one.cliques = {{0, 1, 2, 3}};
  one.unique_members = {{0, 1, 2, 3}};
  const Structure s = structure_from_cliques(one, 4);
  CHECK(s.d() == 1);
  CHECK(s.size() == 4);

  // Vertex 2 lies in no independent clique and becomes an empty row.
  const ThresholdedGraph g = ThresholdedGraph::from_edges(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
  const CliqueSet cs = independent_maximal_cliques(g);
  const Structure t = structure_from_cliques(cs, 5);
  CHECK(t.d() == 2);
  CHECK(t.zero_rows() == std::vector<std::size_t>{2});
  CHECK(t.columns() == std::vector<std::vector<std::size_t>>{{0, 1}, {3, 4}});
}

TEST_CASE("population graph of a UCC model recovers the support") {
  Rng rng(27);
  int tested = 0;
  for (int t = 0; t < 200 && tested < 60; ++t) {
    SimSpec spec;
    spec.d = 2 + rng.index(4);
    spec.children_per_factor = 2 + rng.index(5);
    spec.ucc_violation_fraction = 0.0;
    spec.phi_scale = 0.25;
    const FactorParams th = gen_independent_cluster(spec, rng);
    const ThresholdabilityReport rep = thresholdability(th);
    if (!rep.thresholdable) continue;
    ++tested;
    const Structure est = structure_from_cliques(independent_maximal_cliques(build_graph(implied_correlation(th), rep.tau0)), spec.p());
    CHECK(hamming_distance(est, Structure::from_loadings(th.lambda)).hd == 0);
  }
  CHECK(tested >= 30);
}

TEST_CASE("edge sets shrink as the threshold rises") {
  Rng rng(41);
  Matrix r = Matrix::Identity(30, 30);
  for (int i = 0; i < 30; ++i)
    for (int j = 0; j < i; ++j) r(i, j) = r(j, i) = rng.uniform(-1.0, 1.0);
  std::set<Pair> previous;
  bool first = true;
  for (double tau = 0.0; tau <= 1.0; tau += 0.05) {
    const auto e = build_graph(r, tau).edges();
    const std::set<Pair> now(e.begin(), e.end());
    if (!first) CHECK(std::includes(previous.begin(), previous.end(), now.begin(), now.end()));
    previous = now;
    first = false;
  }
}
