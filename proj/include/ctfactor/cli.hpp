#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ctfactor/ct.hpp"
#include "ctfactor/simgen.hpp"

namespace ctfactor::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitInternal = 3;

/// Entry point of the `ctfactor` tool. Never throws; returns the exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Maps an in-flight exception to 2 (bad input) or 3 (anything else).
int exit_code_for_current_exception(std::ostream& err);

struct BenchConfig {
  SimSpec spec;
  std::size_t reps = 1;
  std::uint64_t seed = 1;
  Selection selection = Selection::bic;
  std::vector<double> thresholds = default_thresholds();
  FitOptions fit_options;
  std::size_t jobs = 1;
};

struct BenchRow {
  std::size_t replicate = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  double f1 = 0.0;
  std::size_t hd = 0;
  std::size_t d_hat = 0;
  std::size_t d_true = 0;
  std::size_t models_evaluated = 0;
  double seconds = 0.0;
  std::string error;
};

/// generate -> sample -> ct_run -> metrics for one replicate seed.
BenchRow run_replicate(const BenchConfig& cfg, std::size_t replicate);
/// All replicates, `cfg.jobs` at a time; rows ordered by replicate.
std::vector<BenchRow> run_bench(const BenchConfig& cfg);

/// Mean/SD summaries. Holds no timing, so equal inputs give equal bytes.
nlohmann::json aggregate(const BenchConfig& cfg, const std::vector<BenchRow>& rows);
std::string rows_to_csv(const std::vector<BenchRow>& rows);

/// CT_FACTOR_JOBS when set to a positive integer, else the hardware count.
std::size_t default_jobs();

}  // namespace ctfactor::cli
