#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <span>

#include "ctfactor/ct.hpp"
#include "ctfactor/error.hpp"
#include "support.hpp"

using namespace ctfactor;

TEST_CASE("threshold grid and selection names") {
  const auto t = default_thresholds();
  REQUIRE(t.size() == 40);
  CHECK(t.front() == 0.0);
  CHECK(t.back() == 1.0);
  CHECK(t[13] == doctest::Approx(1.0 / 3.0));
  CHECK(std::is_sorted(t.begin(), t.end()));
  CHECK(parse_selection("bic") == Selection::bic);
  CHECK(parse_selection("min-hd") == Selection::min_hd_oracle);
  CHECK(parse_selection(selection_name(Selection::min_hd_oracle)) == Selection::min_hd_oracle);
  CHECK(parse_selection("none") == Selection::none);
  CHECK_THROWS_AS(parse_selection("aic"), DomainError);
}

TEST_CASE("config validation") {
  CtConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.thresholds = {};
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg.thresholds = {0.2, 1.2};
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg.thresholds = {0.2};
  cfg.selection = Selection::min_hd_oracle;
  CHECK_THROWS_AS(cfg.validate(), MissingTruth);
  CHECK_THROWS_AS(ct_run(Matrix::Identity(3, 3), 100, cfg), MissingTruth);
}

TEST_CASE("identity correlation gives the trivial structure") {
  CtConfig cfg;
  cfg.thresholds = {0.3};
  const CtResult res = ct_run(Matrix::Identity(6, 6), 200, cfg);
  REQUIRE(res.candidates.size() == 1);
  CHECK(res.candidates[0].trivial);
  CHECK(res.candidates[0].structure.d() == 6);
  CHECK(res.sweep[0].edges == 0);
  REQUIRE(res.selected() != nullptr);
}

TEST_CASE("dedupe") {
  Rng rng(3);
  for (int t = 0; t < 100; ++t) {
    const std::size_t d = 1 + rng.index(5);
    const Structure a = testsupport::random_structure(12, d, 0.3, rng);
    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(std::span<std::size_t>(order));
    const Structure b = a.permuted(order);
    const Structure other = testsupport::random_structure(12, d + 1, 0.3, rng);
    const std::vector<Structure> input{a, other, b, a};
    const DedupeResult dr = dedupe_structures(input);
    CHECK(dr.unique.size() == 2);
    CHECK(dr.unique[0] == a);
    CHECK(dr.index_of == std::vector<std::size_t>{0, 1, 0, 0});
    CHECK(std::accumulate(dr.multiplicity.begin(), dr.multiplicity.end(), std::size_t{0}) == input.size());
    // Merging agrees with a zero Hamming distance.
    for (std::size_t i = 0; i < input.size(); ++i)
      for (std::size_t j = 0; j < input.size(); ++j)
        CHECK((dr.index_of[i] == dr.index_of[j]) == (hamming_distance(input[i], input[j]).hd == 0));
  }
}

TEST_CASE("population correlation recovers the truth") {
  Rng rng(21);
  SimSpec spec;
  for (int t = 0; t < 10; ++t) {
    const FactorParams th = gen_independent_cluster(spec, rng);
    const Structure truth = Structure::from_loadings(th.lambda);
    CtConfig cfg;
    cfg.selection = Selection::min_hd_oracle;
    cfg.truth = truth;
    const CtResult res = ct_run(implied_correlation(th), 1e6, cfg);
    REQUIRE(res.selected() != nullptr);
    CHECK(*res.selected()->hd == 0);
    CHECK(res.selected()->structure.equivalent(truth));
    // The truth also appears at the midpoint threshold.
    const ThresholdabilityReport rep = thresholdability(th);
    CtConfig mid;
    mid.thresholds = {rep.tau0};
    mid.selection = Selection::none;
    CHECK(ct_run(implied_correlation(th), 1e6, mid).candidates.at(0).structure.equivalent(truth));
  }
}

TEST_CASE("BIC selection on sample data") {
  Rng rng(8);
  SimSpec spec;
  const FactorParams th = gen_independent_cluster(spec, rng);
  const DataMatrix x = sample_dataset(th, 500, rng);
  CtConfig cfg;
  cfg.truth = Structure::from_loadings(th.lambda);
  const CtResult res = ct_run(pearson_correlation(x), 500, cfg);
  REQUIRE(res.selected() != nullptr);
  CHECK(res.models_evaluated == res.candidates.size());
  for (const Candidate& c : res.candidates) {
    if (c.bic) CHECK(*res.selected()->bic <= *c.bic);
    CHECK(c.hd.has_value());
    CHECK_FALSE(c.taus.empty());
  }
  for (std::size_t i = 1; i < res.sweep.size(); ++i) CHECK(res.sweep[i].edges <= res.sweep[i - 1].edges);
  std::size_t with_candidate = 0;
  for (const SweepRecord& s : res.sweep)
    if (s.candidate) ++with_candidate;
  std::size_t tau_total = 0;
  for (const Candidate& c : res.candidates) tau_total += c.taus.size();
  CHECK(tau_total == with_candidate);
  CHECK(*res.selected()->f1 > 0.9);
}

TEST_CASE("duplicated columns land in a shared clique") {
  Rng rng(14);
  SimSpec spec;
  const FactorParams th = gen_independent_cluster(spec, rng);
  DataMatrix x = sample_dataset(th, 400, rng);
  DataMatrix y(x.rows(), x.cols() + 1);
  y.leftCols(x.cols()) = x;
  y.col(x.cols()) = x.col(2);
  CtConfig cfg;
  cfg.selection = Selection::none;
  const CtResult res = ct_run(pearson_correlation(y), 400, cfg);
  const double r_dup = pearson_correlation(y)(2, 15);
  for (const Candidate& c : res.candidates) {
    if (c.taus.front() >= r_dup) continue;
    const auto parents = c.structure.parents();
    CHECK(parents[2] == parents[15]);
  }
}

TEST_CASE("dimension and input checks") {
  CtConfig cfg;
  Matrix r = Matrix::Identity(3, 3);
  r(0, 1) = 0.5;
  CHECK_THROWS(ct_run(r, 100, cfg));
  CHECK_THROWS(ct_run(Matrix::Identity(3, 3), 0, cfg));
  CtConfig hd;
  hd.selection = Selection::min_hd_oracle;
  hd.truth = Structure::independent_cluster(2, 2);
  CHECK_THROWS_AS(ct_run(Matrix::Identity(3, 3), 100, hd), DimensionMismatch);
}
