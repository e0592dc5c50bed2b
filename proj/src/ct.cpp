#include "ctfactor/ct.hpp"

#include <chrono>
#include <map>
#include <string>

#include "ctfactor/error.hpp"
#include "ctfactor/graph.hpp"

namespace ctfactor {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

std::string_view selection_name(Selection s) {
  switch (s) {
    case Selection::bic:
      return "bic";
    case Selection::min_hd_oracle:
      return "min-hd-oracle";
    case Selection::none:
      return "none";
  }
  return "unknown";
}

Selection parse_selection(std::string_view name) {
  if (name == "bic") return Selection::bic;
  if (name == "min-hd" || name == "min-hd-oracle") return Selection::min_hd_oracle;
  if (name == "none") return Selection::none;
  throw DomainError("unknown selection mode: " + std::string(name));
}

std::vector<double> default_thresholds() {
  std::vector<double> out(40);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = static_cast<double>(k) / 39.0;
  return out;
}

void CtConfig::validate() const {
  if (thresholds.empty()) throw DomainError("threshold list is empty");
  for (double t : thresholds) {
    if (!(t >= 0.0 && t <= 1.0)) throw DomainError("threshold " + std::to_string(t) + " outside [0, 1]");
  }
  if (selection == Selection::min_hd_oracle && !truth) {
    throw MissingTruth("min-hd-oracle selection requires a true structure");
  }
  fit_options.validate();
}

DedupeResult dedupe_structures(const std::vector<Structure>& structures) {
  DedupeResult out;
  std::map<std::pair<std::size_t, std::vector<std::vector<std::size_t>>>, std::size_t> seen;
  for (const auto& s : structures) {
    if (!out.unique.empty() && s.p() != out.unique.front().p()) {
      throw DimensionMismatch("dedupe_structures: structures have different p");
    }
    auto key = std::make_pair(s.p(), s.canonical_columns());
    auto [it, inserted] = seen.emplace(std::move(key), out.unique.size());
    if (inserted) {
      out.unique.push_back(s);
      out.multiplicity.push_back(1);
    } else {
      ++out.multiplicity[it->second];
    }
    out.index_of.push_back(it->second);
  }
  return out;
}

CtResult ct_run(const Matrix& r, double n, const CtConfig& cfg) {
  cfg.validate();
  const auto p = static_cast<std::size_t>(r.rows());
  if (cfg.truth && cfg.truth->p() != p) throw DimensionMismatch("truth structure has a different p");
  if (cfg.selection == Selection::bic && !(n > 0.0)) throw DomainError("sample size must be positive for BIC");

  CtResult out;
  if (cfg.selection == Selection::bic && n < static_cast<double>(p)) {
    out.warnings.push_back("n < p: the sample correlation is rank deficient and likelihood comparisons are fragile");
  }

  std::vector<Structure> found;
  std::vector<std::size_t> found_sweep;
  for (double tau : cfg.thresholds) {
    auto t0 = Clock::now();
    const ThresholdedGraph g = build_graph(r, tau);
    out.times.graph_seconds += seconds_since(t0);
    t0 = Clock::now();
    const CliqueSet cs = independent_maximal_cliques(g);
    out.times.clique_seconds += seconds_since(t0);

    SweepRecord rec{tau, g.edge_count(), cs.size(), std::nullopt};
    if (cs.empty()) {
      out.warnings.push_back("threshold " + std::to_string(tau) + " produced no independent maximal clique");
    } else {
      found.push_back(structure_from_cliques(cs, p));
      found_sweep.push_back(out.sweep.size());
    }
    out.sweep.push_back(rec);
  }

  const DedupeResult dd = dedupe_structures(found);
  out.candidates.resize(dd.unique.size());
  for (std::size_t c = 0; c < dd.unique.size(); ++c) {
    Candidate& cand = out.candidates[c];
    cand.structure = dd.unique[c];
    cand.trivial = cand.structure.d() == p;
    cand.zero_rows = cand.structure.zero_rows();
  }
  for (std::size_t f = 0; f < found.size(); ++f) {
    SweepRecord& rec = out.sweep[found_sweep[f]];
    rec.candidate = dd.index_of[f];
    out.candidates[dd.index_of[f]].taus.push_back(rec.tau);
  }
  out.models_evaluated = out.candidates.size();

  if (cfg.truth) {
    for (Candidate& cand : out.candidates) {
      const MetricReport m = evaluate(cand.structure, *cfg.truth);
      cand.hd = m.hd;
      cand.f1 = m.f1;
    }
  }

  if (cfg.selection == Selection::bic) {
    const auto t0 = Clock::now();
    for (Candidate& cand : out.candidates) {
      try {
        cand.fit = fit_mle(r, n, cand.structure, cfg.fit_options);
        cand.bic = bic(*cand.fit, n);
      } catch (const Error& e) {
        cand.fit_error = e.what();
      }
    }
    out.times.fit_seconds = seconds_since(t0);
  }

  const auto t0 = Clock::now();
  for (std::size_t c = 0; c < out.candidates.size(); ++c) {
    const Candidate& cand = out.candidates[c];
    const Candidate* best = out.selected();
    if (cfg.selection == Selection::bic && cand.bic) {
      if (!best || *cand.bic < *best->bic) out.selected_index = c;
    } else if (cfg.selection == Selection::min_hd_oracle) {
      if (!best || *cand.hd < *best->hd) out.selected_index = c;
    }
  }
  out.times.select_seconds = seconds_since(t0);
  return out;
}

}  // namespace ctfactor
