#include "ctfactor/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "ctfactor/error.hpp"
#include "ctfactor/graph.hpp"
#include "ctfactor/io.hpp"
#include "ctfactor/metrics.hpp"
#include "ctfactor/model.hpp"
#include "ctfactor/numerics.hpp"

namespace ctfactor::cli {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

void emit(const json& j, const std::string& path, std::ostream& out) {
  const std::string text = j.dump(2) + "\n";
  if (path.empty() || path == "-") {
    out << text;
  } else {
    io::write_text(path, text);
  }
}

struct MatrixInput {
  Matrix r;
  std::optional<double> n;
  std::string source;
};

MatrixInput load_correlation(const std::string& data_path, const std::string& corr_path) {
  if (data_path.empty() == corr_path.empty()) throw DomainError("give exactly one of --data or --corr");
  MatrixInput in;
  if (!data_path.empty()) {
    const io::CsvTable t = io::read_csv(data_path);
    if (t.values.rows() < 2) throw ParseError("data must have at least 2 rows");
    if (t.values.cols() < 1) throw ParseError("data has no columns");
    in.r = pearson_correlation(t.values);
    in.n = static_cast<double>(t.values.rows());
    in.source = "data";
  } else {
    io::CorrInput c = io::corr_from_json(io::read_json(corr_path));
    in.r = std::move(c.matrix);
    in.n = c.n;
    in.source = "corr";
  }
  return in;
}

std::vector<double> resolve_thresholds(const std::vector<double>& given, std::size_t count) {
  if (!given.empty()) {
    std::vector<double> t = given;
    std::sort(t.begin(), t.end());
    return t;
  }
  if (count == 0) return default_thresholds();
  if (count < 2) throw DomainError("--n-thresholds must be at least 2");
  std::vector<double> t(count);
  for (std::size_t k = 0; k < count; ++k) t[k] = static_cast<double>(k) / static_cast<double>(count - 1);
  return t;
}

void add_fit_flags(CLI::App* cmd, FitOptions& fo) {
  cmd->add_option("--max-iter", fo.max_iterations, "EM iteration cap")->check(CLI::PositiveNumber);
  cmd->add_option("--tol", fo.loglik_tolerance, "EM log-likelihood change tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--restarts", fo.restarts, "EM starts per candidate")->check(CLI::PositiveNumber);
}

void add_sim_flags(CLI::App* cmd, SimSpec& spec) {
  cmd->add_option("--d", spec.d, "number of factors")->check(CLI::PositiveNumber);
  cmd->add_option("--children", spec.children_per_factor, "children per factor")->check(CLI::PositiveNumber);
  cmd->add_option("--lambda-lo", spec.lambda_lo, "smallest loading");
  cmd->add_option("--lambda-hi", spec.lambda_hi, "largest loading");
  cmd->add_option("--phi-scale", spec.phi_scale, "factor correlation scale");
  cmd->add_option("--n", spec.n, "sample size")->check(CLI::PositiveNumber);
  cmd->add_option("--ucc-violation", spec.ucc_violation_fraction, "fraction of factors without a unique child");
  cmd->add_option("--extra-ratio", spec.extra_parent_ratio, "main:extra R^2 ratio for two-parent rows");
}

/// "highdim-250" or "250".
std::size_t parse_preset(std::string name) {
  if (name.rfind("highdim-", 0) == 0) name = name.substr(8);
  try {
    return static_cast<std::size_t>(std::stoul(name));
  } catch (const std::exception&) {
    throw InvalidSpec("unknown preset '" + name + "'");
  }
}

/// Preset fields first, then any flags the user gave explicitly on top.
SimSpec apply_preset(const std::string& preset, const SimSpec& flags, const CLI::App* cmd) {
  if (preset.empty()) return flags;
  SimSpec spec = SimSpec::highdim_preset(parse_preset(preset));
  auto given = [&](const char* name) { return cmd->count(name) > 0; };
  if (given("--d")) spec.d = flags.d;
  if (given("--children")) spec.children_per_factor = flags.children_per_factor;
  if (given("--lambda-lo")) spec.lambda_lo = flags.lambda_lo;
  if (given("--lambda-hi")) spec.lambda_hi = flags.lambda_hi;
  if (given("--phi-scale")) spec.phi_scale = flags.phi_scale;
  if (given("--n")) spec.n = flags.n;
  if (given("--ucc-violation")) spec.ucc_violation_fraction = flags.ucc_violation_fraction;
  if (given("--extra-ratio")) spec.extra_parent_ratio = flags.extra_parent_ratio;
  return spec;
}

json model_summary(const FactorParams& theta) {
  const ThresholdabilityReport tr = thresholdability(theta);
  const UniqueChildren uc = unique_children(Structure::from_loadings(theta.lambda));
  const auto bad = uc.violating();
  return {{"thresholdable", tr.thresholdable},
          {"gap", tr.gap},
          {"tau0", tr.tau0},
          {"ucc_holds", uc.ucc_holds},
          {"latents_without_unique_child", bad},
          {"fraction_without_unique_child", static_cast<double>(bad.size()) / static_cast<double>(theta.d())}};
}

int cmd_fit(const std::string& data, const std::string& corr, std::optional<double> n_flag,
            const std::string& truth_path, const std::string& select, const std::vector<double>& thr,
            std::size_t n_thr, const FitOptions& fo, std::uint64_t seed, std::size_t folds, const std::string& out_path,
            std::ostream& out, std::ostream& err) {
  MatrixInput in = load_correlation(data, corr);
  if (n_flag) in.n = n_flag;
  CtConfig cfg;
  cfg.selection = parse_selection(select);
  cfg.thresholds = resolve_thresholds(thr, n_thr);
  cfg.fit_options = fo;
  cfg.fit_options.seed = seed;
  if (!truth_path.empty()) cfg.truth = io::structure_from_any(io::read_json(truth_path));
  if (cfg.selection == Selection::bic && !in.n) throw DomainError("BIC selection needs n: pass --n or include it in the JSON");

  const CtResult res = ct_run(in.r, in.n.value_or(1.0), cfg);
  for (const auto& w : res.warnings) err << "warning: " << w << "\n";

  json report = io::to_json(res);
  report["p"] = in.r.rows();
  report["n"] = in.n ? json(*in.n) : json(nullptr);
  report["input"] = in.source;
  report["selection"] = std::string(selection_name(cfg.selection));
  report["thresholds"] = cfg.thresholds;
  report["selected"] = nullptr;
  if (const Candidate* best = res.selected()) {
    json sel = {{"structure", io::to_json(best->structure)}};
    if (best->fit) sel["fit"] = io::to_json(*best->fit, best->bic);
    if (cfg.truth) sel["metrics"] = io::to_json(evaluate(best->structure, *cfg.truth));
    if (folds > 0) {
      if (data.empty()) throw DomainError("--folds needs --data");
      Rng rng(seed);
      sel["cv_test_loglik"] = kfold_test_loglik(io::read_csv(data).values, best->structure, folds, cfg.fit_options, rng);
      sel["cv_folds"] = folds;
    }
    report["selected"] = std::move(sel);
  }
  emit(report, out_path, out);
  return kExitOk;
}

int cmd_simulate(const SimSpec& spec, const std::string& model_out, const std::string& data_out,
                 const std::string& corr_out, std::ostream& out) {
  spec.validate();
  Rng rng(spec.seed);
  const FactorParams theta = generate_model(spec, rng);
  const DataMatrix x = sample_dataset(theta, spec.n, rng);
  io::write_text(model_out, io::to_json(theta).dump(2) + "\n");
  std::vector<std::string> header;
  for (std::size_t i = 0; i < spec.p(); ++i) header.push_back("X" + std::to_string(i + 1));
  io::write_text(data_out, io::to_csv(x, header));
  if (!corr_out.empty()) {
    io::write_text(corr_out, io::corr_to_json(pearson_correlation(x), static_cast<double>(spec.n)).dump(2) + "\n");
  }
  json summary = model_summary(theta);
  summary["p"] = spec.p();
  summary["d"] = spec.d;
  summary["n"] = spec.n;
  summary["seed"] = spec.seed;
  summary["model"] = model_out;
  summary["data"] = data_out;
  out << summary.dump(2) << "\n";
  return kExitOk;
}

int cmd_cliques(const std::string& data, const std::string& corr, double tau, const std::string& out_path,
                std::ostream& out) {
  const MatrixInput in = load_correlation(data, corr);
  auto t0 = Clock::now();
  const ThresholdedGraph g = build_graph(in.r, tau);
  const double graph_s = seconds_since(t0);
  t0 = Clock::now();
  const CliqueSet cs = independent_maximal_cliques(g);
  const double clique_s = seconds_since(t0);
  json report = {{"p", g.p()},
                 {"tau", tau},
                 {"edges", g.edge_count()},
                 {"count", cs.size()},
                 {"cliques", io::to_json(cs)},
                 {"timing", {{"graph_seconds", graph_s}, {"clique_seconds", clique_s}}}};
  emit(report, out_path, out);
  return kExitOk;
}

int cmd_check(const std::string& model_path, const std::vector<long>& n_grid, double c_const,
              const std::string& out_path, std::ostream& out) {
  const FactorParams theta = io::model_from_json(io::read_json(model_path));
  const Structure s = Structure::from_loadings(theta.lambda);
  const ThresholdabilityReport tr = thresholdability(theta);
  const UniqueChildren uc = unique_children(s);
  const RotationalUniqueness ru = rotational_uniqueness_check(theta.lambda);

  json curve = json::array();
  if (tr.thresholdable) {
    for (long n : n_grid) {
      const auto p = static_cast<long>(theta.p());
      curve.push_back({{"n", n}, {"eta", consistency_bound(n, p, tr.gap, c_const)},
                       {"eta_raw", consistency_bound_raw(n, p, tr.gap, c_const)}});
    }
  }
  json report = {
      {"p", theta.p()},
      {"d", theta.d()},
      {"thresholdability",
       {{"thresholdable", tr.thresholdable},
        {"gap", tr.gap},
        {"tau0", tr.tau0},
        {"min_shared", tr.min_shared},
        {"max_unshared", tr.max_unshared},
        {"degenerate", tr.degenerate}}},
      {"general_sufficient", general_sufficient_check(theta)},
      {"ucc", {{"holds", uc.ucc_holds}, {"unique_children", uc.sets}, {"violating", uc.violating()}}},
      {"rotational_uniqueness",
       {{"condition1", ru.condition1},
        {"condition2", ru.condition2},
        {"zeros_per_column", ru.zeros_per_column},
        {"reduced_rank", ru.reduced_rank}}},
      {"consistency_bound", {{"c_const", c_const}, {"curve", std::move(curve)}}}};
  emit(report, out_path, out);
  return kExitOk;
}

int cmd_evaluate(const std::string& est_path, const std::string& truth_path, const std::string& out_path,
                 std::ostream& out) {
  json est = io::read_json(est_path);
  // A fit report carries its pick under selected.structure.
  if (est.is_object() && est.contains("selected") && est.at("selected").is_object()) {
    est = est.at("selected").at("structure");
  }
  const Structure e = io::structure_from_any(est);
  const Structure t = io::structure_from_any(io::read_json(truth_path));
  emit(io::to_json(evaluate(e, t)), out_path, out);
  return kExitOk;
}

json summarize(const std::vector<double>& xs) {
  if (xs.empty()) return {{"mean", nullptr}, {"sd", nullptr}, {"count", 0}};
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double sd = xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0;
  return {{"mean", mean}, {"sd", sd}, {"count", xs.size()}};
}

}  // namespace

std::size_t default_jobs() {
  if (const char* env = std::getenv("CT_FACTOR_JOBS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

BenchRow run_replicate(const BenchConfig& cfg, std::size_t replicate) {
  BenchRow row;
  row.replicate = replicate;
  row.seed = Rng::derive_seed(cfg.seed, replicate);
  row.d_true = cfg.spec.d;
  const auto t0 = Clock::now();
  try {
    SimSpec spec = cfg.spec;
    spec.seed = row.seed;
    Rng rng(row.seed);
    const FactorParams theta = generate_model(spec, rng);
    const DataMatrix x = sample_dataset(theta, spec.n, rng);
    CtConfig ct;
    ct.thresholds = cfg.thresholds;
    ct.selection = cfg.selection;
    ct.fit_options = cfg.fit_options;
    ct.truth = Structure::from_loadings(theta.lambda);
    const CtResult res = ct_run(pearson_correlation(x), static_cast<double>(spec.n), ct);
    row.models_evaluated = res.models_evaluated;
    const Candidate* best = res.selected();
    if (best == nullptr) throw InternalError("no candidate could be selected");
    const MetricReport m = evaluate(best->structure, *ct.truth);
    row.f1 = m.f1;
    row.hd = m.hd;
    row.d_hat = m.d_hat;
    row.ok = true;
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  row.seconds = seconds_since(t0);
  return row;
}

std::vector<BenchRow> run_bench(const BenchConfig& cfg) {
  if (cfg.reps == 0) throw DomainError("replicate count must be at least 1");
  cfg.spec.validate();
  std::vector<BenchRow> rows(cfg.reps);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cfg.reps; i = next++) rows[i] = run_replicate(cfg, i);
  };
  const std::size_t jobs = std::clamp<std::size_t>(cfg.jobs, 1, cfg.reps);
  std::vector<std::jthread> pool;
  for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  pool.clear();
  return rows;
}

json aggregate(const BenchConfig& cfg, const std::vector<BenchRow>& rows) {
  std::vector<double> f1, hd, d_hat, rel_d, models;
  std::size_t d_correct = 0;
  json failures = json::array();
  for (const BenchRow& r : rows) {
    if (!r.ok) {
      failures.push_back({{"replicate", r.replicate}, {"seed", r.seed}, {"error", r.error}});
      continue;
    }
    f1.push_back(r.f1);
    hd.push_back(static_cast<double>(r.hd));
    d_hat.push_back(static_cast<double>(r.d_hat));
    rel_d.push_back(std::fabs(static_cast<double>(r.d_hat) - static_cast<double>(r.d_true)) /
                    static_cast<double>(r.d_true));
    models.push_back(static_cast<double>(r.models_evaluated));
    d_correct += r.d_hat == r.d_true;
  }
  const SimSpec& s = cfg.spec;
  return {{"config",
           {{"d", s.d},
            {"children", s.children_per_factor},
            {"p", s.p()},
            {"n", s.n},
            {"lambda_lo", s.lambda_lo},
            {"lambda_hi", s.lambda_hi},
            {"phi_scale", s.phi_scale},
            {"ucc_violation", s.ucc_violation_fraction},
            {"reps", cfg.reps},
            {"seed", cfg.seed},
            {"selection", std::string(selection_name(cfg.selection))},
            {"n_thresholds", cfg.thresholds.size()}}},
          {"completed", f1.size()},
          {"failures", std::move(failures)},
          {"f1", summarize(f1)},
          {"hd", summarize(hd)},
          {"d_hat", summarize(d_hat)},
          {"abs_rel_d_error", summarize(rel_d)},
          {"d_correct_fraction", f1.empty() ? json(nullptr) : json(static_cast<double>(d_correct) / static_cast<double>(f1.size()))},
          {"models_evaluated", summarize(models)}};
}

std::string rows_to_csv(const std::vector<BenchRow>& rows) {
  std::string out = "replicate,seed,ok,f1,hd,d_hat,d_true,models_evaluated,seconds,error\n";
  for (const BenchRow& r : rows) {
    std::string err = r.error;
    std::replace(err.begin(), err.end(), ',', ';');
    std::replace(err.begin(), err.end(), '\n', ' ');
    out += std::to_string(r.replicate) + ',' + std::to_string(r.seed) + ',' + (r.ok ? "1" : "0") + ',' +
           io::format_double(r.f1) + ',' + std::to_string(r.hd) + ',' + std::to_string(r.d_hat) + ',' +
           std::to_string(r.d_true) + ',' + std::to_string(r.models_evaluated) + ',' + io::format_double(r.seconds) +
           ',' + err + '\n';
  }
  return out;
}

int exit_code_for_current_exception(std::ostream& err) {
  try {
    throw;
  } catch (const ParseError& e) {
    err << "input error: " << e.what() << "\n";
  } catch (const ConstantColumn& e) {
    err << "input error: " << e.what() << "\n";
  } catch (const MissingTruth& e) {
    err << "input error: " << e.what() << "\n";
  } catch (const InvalidSpec& e) {
    err << "input error: " << e.what() << "\n";
  } catch (const InvalidModel& e) {
    err << "input error: " << e.what() << "\n";
  } catch (const DomainError& e) {
    err << "input error: " << e.what() << "\n";
  } catch (const DimensionMismatch& e) {
    err << "input error: " << e.what() << "\n";
  } catch (const NotPositiveDefinite& e) {
    err << "input error: " << e.what() << "\n";
  } catch (const InvalidVariance& e) {
    err << "input error: " << e.what() << "\n";
  } catch (const std::filesystem::filesystem_error& e) {
    err << "input error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (...) {
    err << "internal error: unknown exception\n";
    return kExitInternal;
  }
  return kExitInput;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Factor-analysis structure learning by correlation thresholding", "ctfactor"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "ctfactor 0.1.0 (rng xoshiro256ss-polar/1)");

  std::string data, corr, truth, out_path, select = "bic", model_path, estimate;
  std::optional<double> n_flag;
  std::vector<double> thresholds;
  std::size_t n_thresholds = 0, folds = 0;
  std::uint64_t seed = 1;
  FitOptions fo;

  CLI::App* fit = app.add_subcommand("fit", "learn a structure from data or a correlation matrix");
  fit->add_option("--data", data, "CSV data file")->check(CLI::ExistingFile);
  fit->add_option("--corr", corr, "correlation JSON {n, matrix}")->check(CLI::ExistingFile);
  fit->add_option("--n", n_flag, "sample size (overrides the JSON)");
  fit->add_option("--truth", truth, "true structure or model JSON")->check(CLI::ExistingFile);
  fit->add_option("--select", select, "bic | min-hd | none");
  fit->add_option("--thresholds", thresholds, "explicit thresholds")->delimiter(',');
  fit->add_option("--n-thresholds", n_thresholds, "equidistant thresholds on [0, 1]");
  fit->add_option("--seed", seed, "seed for EM restarts and CV folds");
  fit->add_option("--folds", folds, "K-fold CV test log-likelihood of the pick");
  fit->add_option("-o,--out", out_path, "report path (default stdout)");
  add_fit_flags(fit, fo);

  SimSpec sim_flags;
  std::string preset, model_out = "model.json", data_out = "data.csv", corr_out;
  CLI::App* sim = app.add_subcommand("simulate", "draw a model and a data set");
  add_sim_flags(sim, sim_flags);
  sim->add_option("--seed", sim_flags.seed, "random seed");
  sim->add_option("--preset", preset, "highdim-250 | highdim-500 | highdim-1000");
  sim->add_option("--model-out", model_out, "model JSON path");
  sim->add_option("--data-out", data_out, "data CSV path");
  sim->add_option("--corr-out", corr_out, "also write the sample correlation JSON");

  SimSpec bench_flags;
  std::string which, bench_preset, mode, csv_out;
  std::size_t reps = 10, jobs = default_jobs();
  std::uint64_t bench_seed = 1;
  CLI::App* bench = app.add_subcommand("bench", "simulation benchmark");
  bench->add_option("setting", which, "low | high")->required()->check(CLI::IsMember({"low", "high"}));
  add_sim_flags(bench, bench_flags);
  bench->add_option("--preset", bench_preset, "high-dimensional preset n (250, 500, 1000)");
  bench->add_option("--reps", reps, "replicates")->check(CLI::PositiveNumber);
  bench->add_option("--seed", bench_seed, "base seed; replicate r uses seed + r");
  bench->add_option("--mode", mode, "bic | min-hd | none (default: bic for low, min-hd for high)");
  bench->add_option("--jobs", jobs, "parallel replicates (default CT_FACTOR_JOBS)")->check(CLI::PositiveNumber);
  bench->add_option("--thresholds", thresholds, "explicit thresholds")->delimiter(',');
  bench->add_option("--n-thresholds", n_thresholds, "equidistant thresholds on [0, 1]");
  bench->add_option("-o,--out", out_path, "aggregate JSON path (default stdout)");
  bench->add_option("--csv", csv_out, "per-replicate CSV path");
  add_fit_flags(bench, fo);

  double tau = 0.0;
  CLI::App* cliques = app.add_subcommand("cliques", "independent maximal cliques at one threshold");
  cliques->add_option("--data", data, "CSV data file")->check(CLI::ExistingFile);
  cliques->add_option("--corr", corr, "correlation JSON")->check(CLI::ExistingFile);
  cliques->add_option("--tau", tau, "threshold")->required();
  cliques->add_option("-o,--out", out_path, "report path (default stdout)");

  std::vector<long> n_grid{100, 300, 1000, 3000, 10000};
  double c_const = 1.0;
  CLI::App* check = app.add_subcommand("check", "structural conditions of a model");
  check->add_option("model", model_path, "model JSON")->required()->check(CLI::ExistingFile);
  check->add_option("--n-grid", n_grid, "sample sizes for the consistency bound")->delimiter(',');
  check->add_option("--c", c_const, "constant of the consistency bound")->check(CLI::PositiveNumber);
  check->add_option("-o,--out", out_path, "report path (default stdout)");

  CLI::App* eval = app.add_subcommand("evaluate", "HD and F1 of an estimate against the truth");
  eval->add_option("--estimate", estimate, "structure, model or fit report JSON")->required()->check(CLI::ExistingFile);
  eval->add_option("--truth", truth, "structure or model JSON")->required()->check(CLI::ExistingFile);
  eval->add_option("-o,--out", out_path, "report path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (fit->parsed()) {
      return cmd_fit(data, corr, n_flag, truth, select, thresholds, n_thresholds, fo, seed, folds, out_path, out, err);
    }
    if (sim->parsed()) return cmd_simulate(apply_preset(preset, sim_flags, sim), model_out, data_out, corr_out, out);
    if (cliques->parsed()) return cmd_cliques(data, corr, tau, out_path, out);
    if (check->parsed()) return cmd_check(model_path, n_grid, c_const, out_path, out);
    if (eval->parsed()) return cmd_evaluate(estimate, truth, out_path, out);
    if (bench->parsed()) {
      BenchConfig cfg;
      const bool high = which == "high";
      if (high && bench_preset.empty()) bench_preset = "250";
      cfg.spec = apply_preset(high ? bench_preset : std::string{}, bench_flags, bench);
      cfg.reps = reps;
      cfg.seed = bench_seed;
      cfg.selection = parse_selection(mode.empty() ? (high ? "min-hd" : "bic") : mode);
      if (cfg.selection == Selection::bic && cfg.spec.n < cfg.spec.p()) {
        err << "warning: n < p; BIC selection on a rank-deficient sample correlation\n";
      }
      cfg.thresholds = resolve_thresholds(thresholds, n_thresholds);
      cfg.fit_options = fo;
      cfg.jobs = jobs;
      const std::vector<BenchRow> rows = run_bench(cfg);
      if (!csv_out.empty()) io::write_text(csv_out, rows_to_csv(rows));
      emit(aggregate(cfg, rows), out_path, out);
      return kExitOk;
    }
  } catch (...) {
    return exit_code_for_current_exception(err);
  }
  return kExitInternal;
}

}  // namespace ctfactor::cli
