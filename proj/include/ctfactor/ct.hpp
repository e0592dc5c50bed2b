#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ctfactor/estimate.hpp"
#include "ctfactor/metrics.hpp"
#include "ctfactor/model.hpp"

namespace ctfactor {

enum class Selection { bic, min_hd_oracle, none };

std::string_view selection_name(Selection s);
/// Accepts "bic", "min-hd" / "min-hd-oracle", "none". Throws DomainError.
Selection parse_selection(std::string_view name);

/// k / 39 for k = 0..39.
std::vector<double> default_thresholds();

struct CtConfig {
  std::vector<double> thresholds = default_thresholds();
  Selection selection = Selection::bic;
  FitOptions fit_options;
  std::optional<Structure> truth;  // required for min_hd_oracle

  /// Throws DomainError / MissingTruth.
  void validate() const;
};

struct Candidate {
  std::vector<double> taus;  // every threshold that produced this structure
  Structure structure;
  std::optional<FitResult> fit;
  std::optional<double> bic;
  std::optional<std::size_t> hd;  // against the truth, when one is given
  std::optional<double> f1;
  std::optional<std::string> fit_error;
  bool trivial = false;  // every variable is its own factor
  std::vector<std::size_t> zero_rows;
};

/// What happened at one threshold of the sweep.
struct SweepRecord {
  double tau = 0.0;
  std::size_t edges = 0;
  std::size_t cliques = 0;
  std::optional<std::size_t> candidate;  // none: no independent maximal clique
};

struct PhaseTimes {
  double graph_seconds = 0.0;
  double clique_seconds = 0.0;
  double fit_seconds = 0.0;
  double select_seconds = 0.0;
};

struct CtResult {
  std::vector<Candidate> candidates;
  std::optional<std::size_t> selected_index;
  std::size_t models_evaluated = 0;
  std::vector<SweepRecord> sweep;
  std::vector<std::string> warnings;
  PhaseTimes times;

  const Candidate* selected() const { return selected_index ? &candidates[*selected_index] : nullptr; }
};

struct DedupeResult {
  std::vector<Structure> unique;
  std::vector<std::size_t> multiplicity;  // per unique structure
  std::vector<std::size_t> index_of;      // input position -> unique index
};

/// Merges structures equal up to a column permutation, keeping first
/// occurrences in input order.
DedupeResult dedupe_structures(const std::vector<Structure>& structures);

/// Threshold sweep over `r`: graph, independent maximal cliques, structure,
/// deduplication, then the configured selection. `n` is the sample size used
/// for likelihoods and BIC.
CtResult ct_run(const Matrix& r, double n, const CtConfig& cfg);

}  // namespace ctfactor
