#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "metaeval/agreement.hpp"
#include "metaeval/dataset.hpp"
#include "metaeval/discriminative_power.hpp"
#include "metaeval/errors.hpp"
#include "metaeval/measures.hpp"
#include "metaeval/numeric.hpp"
#include "metaeval/perm_test.hpp"
#include "metaeval/ranking_consistency.hpp"
#include "metaeval/score_matrix.hpp"
#include "metaeval/simulation.hpp"

#ifndef METAEVAL_VERSION
#define METAEVAL_VERSION "0.0.0"
#endif

namespace {

using namespace metaeval;
namespace fs = std::filesystem;

std::vector<Measure> parse_measures(const std::vector<std::string>& tokens) {
  if (tokens.empty()) {
    const auto& all = all_measures();
    return {all.begin(), all.end()};
  }
  std::vector<Measure> out;
  out.reserve(tokens.size());
  for (const std::string& t : tokens) out.push_back(measure_from_token(t));
  return out;
}

fs::path ensure_out_dir(const std::string& out) {
  const fs::path dir(out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot create output directory: " + out);
  }
  return dir;
}

class RunClock {
 public:
  double seconds() const {
    return std::chrono::duration<double>(Clock::now() - start_).count();
  }

 private:
  using Clock = std::chrono::steady_clock;
  Clock::time_point start_ = Clock::now();
};

void write_run_manifest(const fs::path& dir, const std::string& subcommand,
                        nlohmann::json inputs, double wall_seconds) {
  nlohmann::json doc;
  doc["subcommand"] = subcommand;
  doc["inputs"] = std::move(inputs);
  doc["version"] = METAEVAL_VERSION;
  doc["wall_time_seconds"] = wall_seconds;
  const fs::path path = dir / "run_manifest.json";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write run manifest: " + path.string());
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("failed writing run manifest: " + path.string());
}

std::string cell_or_undef(const MeasureResult& r) {
  return r.is_defined() ? to_decimal_string(*r.value) : std::string("undef");
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

int cmd_validate(const std::string& manifest) {
  const MetaEvalDataset ds = load_dataset(manifest);
  std::cout << "manifest: " << manifest << '\n'
            << "systems (N): " << ds.systems() << '\n'
            << "inputs (M): " << ds.inputs() << '\n'
            << "metrics (K): " << ds.metric_count() << '\n'
            << "matrix,tie_ratio,distinct_values\n";
  std::cout << "human," << to_decimal_string(tie_ratio(ds.human)) << ','
            << distinct_value_count(ds.human) << '\n';
  for (const MetricEntry& e : ds.metrics) {
    std::cout << e.name << ',' << to_decimal_string(tie_ratio(e.scores)) << ','
              << distinct_value_count(e.scores) << '\n';
  }
  return 0;
}

int cmd_measures(const std::string& manifest,
                 const std::vector<std::string>& tokens,
                 const std::string& out_dir) {
  const MetaEvalDataset ds = load_dataset(manifest);
  const std::vector<Measure> measures = parse_measures(tokens);
  RunClock clock;

  std::vector<std::vector<std::string>> cells(ds.metric_count());
  for (const Measure& m : measures) {
    const auto results = evaluate_all(ds, m);
    for (std::size_t k = 0; k < results.size(); ++k) {
      cells[k].push_back(cell_or_undef(results[k].second));
    }
  }

  std::ostringstream table;
  table << "metric";
  for (const Measure& m : measures) table << ',' << to_token(m);
  table << '\n';
  for (std::size_t k = 0; k < ds.metric_count(); ++k) {
    table << ds.metrics[k].name;
    for (const std::string& c : cells[k]) table << ',' << c;
    table << '\n';
  }

  if (out_dir.empty()) {
    std::cout << table.str();
    return 0;
  }
  const fs::path dir = ensure_out_dir(out_dir);
  {
    std::ofstream out(dir / "measures.csv", std::ios::binary);
    if (!out) throw IoError("cannot write measures.csv");
    out << table.str();
  }
  nlohmann::json inputs;
  inputs["manifest"] = manifest;
  inputs["measures"] = tokens;
  inputs["out"] = out_dir;
  write_run_manifest(dir, "measures", std::move(inputs), clock.seconds());
  return 0;
}

int cmd_dp(const std::string& manifest, const std::vector<std::string>& tokens,
           std::uint64_t seed, std::uint32_t iterations,
           const std::string& out_dir, unsigned workers) {
  const MetaEvalDataset ds = load_dataset(manifest);
  const std::vector<Measure> measures = parse_measures(tokens);
  const fs::path dir = ensure_out_dir(out_dir);
  RunClock clock;

  std::ofstream summary(dir / "dp_summary.csv", std::ios::binary);
  if (!summary) throw IoError("cannot write dp_summary.csv");
  summary << "measure,dp_value,pair_count,degenerate_pairs\n";
  for (const Measure& m : measures) {
    const DPReport report =
        discriminative_power(ds, m, PermTestConfig{iterations, seed}, workers);
    const std::string token = to_token(m);
    summary << token << ',' << to_decimal_string(report.dp_value) << ','
            << report.pair_pvalues.pair_count() << ','
            << report.degenerate_pair_count() << '\n';
    write_pvalue_matrix_csv(report.pair_pvalues,
                            dir / ("pvalues_" + token + ".csv"));
    write_curve_csv(report, dir / ("curve_" + token + ".csv"));
  }
  summary.close();

  nlohmann::json inputs;
  inputs["manifest"] = manifest;
  inputs["measures"] = tokens;
  inputs["iterations"] = iterations;
  inputs["seed"] = seed;
  inputs["workers"] = workers;
  inputs["out"] = out_dir;
  write_run_manifest(dir, "dp", std::move(inputs), clock.seconds());
  return 0;
}

int cmd_rc(const std::string& manifest, const std::vector<std::string>& tokens,
           std::uint64_t seed, std::uint32_t iterations,
           const std::string& out_dir, unsigned workers, bool dump_taus) {
  const MetaEvalDataset ds = load_dataset(manifest);
  const std::vector<Measure> measures = parse_measures(tokens);
  const fs::path dir = ensure_out_dir(out_dir);
  RunClock clock;

  std::ofstream summary(dir / "rc_summary.csv", std::ios::binary);
  if (!summary) throw IoError("cannot write rc_summary.csv");
  summary << "measure,rc_value,iterations,undefined_iterations\n";
  for (const Measure& m : measures) {
    const RCReport report =
        ranking_consistency(ds, m, RCConfig{iterations, seed}, workers);
    const std::string token = to_token(m);
    summary << token << ',' << to_decimal_string(report.rc_value) << ','
            << iterations << ',' << report.undefined_iterations << '\n';
    if (dump_taus) {
      write_taus_csv(report, dir / ("taus_" + token + ".csv"));
    }
  }
  summary.close();

  nlohmann::json inputs;
  inputs["manifest"] = manifest;
  inputs["measures"] = tokens;
  inputs["iterations"] = iterations;
  inputs["seed"] = seed;
  inputs["workers"] = workers;
  inputs["out"] = out_dir;
  inputs["dump_taus"] = dump_taus;
  write_run_manifest(dir, "rc", std::move(inputs), clock.seconds());
  return 0;
}

int cmd_agreement(const std::string& manifest, const std::string& out_dir,
                  unsigned workers) {
  const MetaEvalDataset ds = load_dataset(manifest);
  const fs::path dir = ensure_out_dir(out_dir);
  RunClock clock;

  const AgreementMatrix am = agreement_heatmap(ds, workers);
  write_agreement_csv(am, dir / "agreement.csv");

  nlohmann::json inputs;
  inputs["manifest"] = manifest;
  inputs["workers"] = workers;
  inputs["out"] = out_dir;
  write_run_manifest(dir, "agreement", std::move(inputs), clock.seconds());
  return 0;
}

int cmd_simulate(const std::string& params_path,
                 const std::vector<std::string>& tokens, std::uint64_t seed,
                 const std::string& sweep_gm, std::optional<std::int64_t> gh,
                 const std::string& out_dir, unsigned workers) {
  SimulationParams params = load_simulation_params(params_path);
  params.seed = seed;
  if (gh) params.G_h = *gh;

  std::int64_t gm_lo = params.G_m;
  std::int64_t gm_hi = params.G_m;
  if (!sweep_gm.empty()) {
    const auto dots = sweep_gm.find("..");
    try {
      if (dots == std::string::npos) {
        gm_lo = gm_hi = std::stoll(sweep_gm);
      } else {
        gm_lo = std::stoll(sweep_gm.substr(0, dots));
        gm_hi = std::stoll(sweep_gm.substr(dots + 2));
      }
    } catch (const std::exception&) {
      throw ValidationError("cannot parse --sweep-gm value: " + sweep_gm);
    }
  }

  const std::vector<Measure> measures = parse_measures(tokens);
  const fs::path dir = ensure_out_dir(out_dir);
  RunClock clock;

  const auto rows =
      sweep_metric_granularity(params, gm_lo, gm_hi, measures, workers);
  write_sweep_csv(rows, dir / "sweep.csv");

  nlohmann::json inputs;
  inputs["params"] = params_path;
  inputs["measures"] = tokens;
  inputs["seed"] = seed;
  inputs["sweep_gm"] = sweep_gm;
  if (gh) inputs["gh"] = *gh;
  inputs["workers"] = workers;
  inputs["out"] = out_dir;
  write_run_manifest(dir, "simulate", std::move(inputs), clock.seconds());
  return 0;
}

int cmd_estimate(const std::string& manifest,
                 const std::vector<std::string>& metric_names,
                 const std::string& out_dir) {
  const MetaEvalDataset ds = load_dataset(manifest);
  RunClock clock;

  std::vector<std::string> names =
      metric_names.empty() ? ds.metric_names() : metric_names;
  nlohmann::json arr = nlohmann::json::array();
  for (const std::string& name : names) {
    const EstimatedParams est = estimate_params(ds, name);
    nlohmann::json e;
    e["dataset_id"] = est.dataset_id;
    e["metric_name"] = est.metric_name;
    e["mu_m"] = est.mu_m;
    e["sigma_m"] = est.sigma_m;
    e["mu_h"] = est.mu_h;
    e["sigma_h"] = est.sigma_h;
    e["rho_sys"] = est.rho_sys;
    e["mu_rho_item"] = est.mu_rho_item;
    e["sigma_rho_item"] = est.sigma_rho_item;
    e["N"] = est.N;
    e["M"] = est.M;
    e["G_m"] = est.G_m;
    e["G_h"] = est.G_h;
    e["degenerate_rows"] = est.degenerate_rows;
    arr.push_back(std::move(e));
  }

  if (out_dir.empty()) {
    std::cout << arr.dump(2) << '\n';
    return 0;
  }
  const fs::path dir = ensure_out_dir(out_dir);
  {
    std::ofstream out(dir / "estimated_params.json", std::ios::binary);
    if (!out) throw IoError("cannot write estimated_params.json");
    out << arr.dump(2) << '\n';
  }
  nlohmann::json inputs;
  inputs["manifest"] = manifest;
  inputs["metrics"] = metric_names;
  inputs["out"] = out_dir;
  write_run_manifest(dir, "estimate", std::move(inputs), clock.seconds());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Meta-evaluation of automatic metrics against human scores: "
               "correlation measures, significance tests, ranking stability "
               "and granularity simulation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", METAEVAL_VERSION);

  std::string manifest, out_dir, params_path, sweep_gm;
  std::vector<std::string> measure_tokens, metric_names;
  std::uint64_t seed = 0;
  std::uint32_t iterations = 1000;
  unsigned workers = 1;
  std::int64_t gh_value = 0;
  bool dump_taus = false;

  auto add_manifest = [&](CLI::App* sub) {
    sub->add_option("--manifest", manifest, "Dataset manifest (JSON)")
        ->required();
  };
  auto add_measures = [&](CLI::App* sub) {
    sub->add_option("--measures", measure_tokens,
                    "Measure tokens, e.g. global-pearson (default: all 12)")
        ->delimiter(',');
  };
  auto add_stochastic = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "Master seed")->required();
    sub->add_option("--iterations", iterations, "Iteration count T");
    sub->add_option("--workers", workers, "Worker thread bound");
  };

  CLI::App* validate = app.add_subcommand(
      "validate", "Load a dataset and print shape, tie ratios, granularities");
  add_manifest(validate);

  CLI::App* measures_cmd = app.add_subcommand(
      "measures", "Evaluate correlation measures for every metric");
  add_manifest(measures_cmd);
  add_measures(measures_cmd);
  measures_cmd->add_option("--out", out_dir, "Output directory");

  CLI::App* dp = app.add_subcommand(
      "dp", "Discriminative power: pairwise permutation tests per measure");
  add_manifest(dp);
  add_measures(dp);
  add_stochastic(dp);
  dp->add_option("--out", out_dir, "Output directory")->required();

  CLI::App* rc = app.add_subcommand(
      "rc", "Ranking consistency via split-half resampling per measure");
  add_manifest(rc);
  add_measures(rc);
  add_stochastic(rc);
  rc->add_option("--out", out_dir, "Output directory")->required();
  rc->add_flag("--dump-taus", dump_taus, "Write per-iteration tau CSVs");

  CLI::App* agreement = app.add_subcommand(
      "agreement", "12x12 agreement between measure-induced metric rankings");
  add_manifest(agreement);
  agreement->add_option("--out", out_dir, "Output directory")->required();
  agreement->add_option("--workers", workers, "Worker thread bound");

  CLI::App* simulate = app.add_subcommand(
      "simulate", "Granularity sensitivity via statistical simulation");
  simulate->add_option("--params", params_path, "Simulation params (JSON)")
      ->required();
  add_measures(simulate);
  simulate->add_option("--seed", seed, "Master seed (overrides params file)")
      ->required();
  simulate->add_option("--sweep-gm", sweep_gm,
                       "Metric granularity sweep, e.g. 2..15");
  CLI::Option* gh_opt =
      simulate->add_option("--gh", gh_value, "Human granularity override");
  simulate->add_option("--workers", workers, "Worker thread bound");
  simulate->add_option("--out", out_dir, "Output directory")->required();

  CLI::App* estimate = app.add_subcommand(
      "estimate", "Estimate generative-model parameters from a dataset");
  add_manifest(estimate);
  estimate->add_option("--metric", metric_names,
                       "Metric name (repeatable; default: all)");
  estimate->add_option("--out", out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (validate->parsed()) return cmd_validate(manifest);
    if (measures_cmd->parsed()) {
      return cmd_measures(manifest, measure_tokens, out_dir);
    }
    if (dp->parsed()) {
      return cmd_dp(manifest, measure_tokens, seed, iterations, out_dir,
                    workers);
    }
    if (rc->parsed()) {
      return cmd_rc(manifest, measure_tokens, seed, iterations, out_dir,
                    workers, dump_taus);
    }
    if (agreement->parsed()) return cmd_agreement(manifest, out_dir, workers);
    if (simulate->parsed()) {
      return cmd_simulate(params_path, measure_tokens, seed, sweep_gm,
                          gh_opt->count() > 0
                              ? std::optional<std::int64_t>(gh_value)
                              : std::nullopt,
                          out_dir, workers);
    }
    if (estimate->parsed()) {
      return cmd_estimate(manifest, metric_names, out_dir);
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const DegeneracyError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
