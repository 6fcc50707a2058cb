// Acceptance suite: one pass/fail line per criterion. Exit code is the
// number of failed criteria. Optional arguments select criterion ids.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "metaeval/agreement.hpp"
#include "metaeval/correlation.hpp"
#include "metaeval/dataset.hpp"
#include "metaeval/discriminative_power.hpp"
#include "metaeval/measures.hpp"
#include "metaeval/numeric.hpp"
#include "metaeval/perm_test.hpp"
#include "metaeval/ranking_consistency.hpp"
#include "metaeval/rng.hpp"
#include "metaeval/simulation.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

namespace {

using namespace metaeval;

const unsigned kWorkers = std::max(1u, std::thread::hardware_concurrency());
const Measure kGlobalPearson{Grouping::Global, CoefKind::Pearson};

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) { return to_decimal_string(v); }

// ---------------------------------------------------------------------------
// 1. Coefficient oracle suite: tie-dense randomized vectors against the
//    O(n^2) pair-counting oracle and rank-then-pearson, within 1e-12.
// ---------------------------------------------------------------------------
Outcome criterion1() {
  RngEngine rng(160001);
  std::size_t kendall_checked = 0, spearman_checked = 0;
  for (int trial = 0; trial < 1200; ++trial) {
    const std::size_t n = 2 + bounded_uint(rng, 11);
    std::vector<double> x(n), y(n);
    for (double& v : x) v = static_cast<double>(bounded_uint(rng, 5));
    for (double& v : y) v = static_cast<double>(bounded_uint(rng, 5));

    const CoefResult tau = kendall_tau_b(x, y);
    const auto tau_oracle = oracles::kendall_brute(x, y);
    if (tau.is_defined() != tau_oracle.has_value()) {
      return {false, "kendall definedness disagrees with the oracle"};
    }
    if (tau.is_defined()) {
      const double diff =
          std::abs(tau.value() - static_cast<double>(*tau_oracle));
      if (diff > 1e-12) {
        return {false, "kendall deviates from the pair oracle by " + fmt(diff)};
      }
      ++kendall_checked;
    }

    const CoefResult rho = spearman(x, y);
    if (rho.is_defined()) {
      const double oracle =
          static_cast<double>(oracles::spearman_via_ranks(x, y));
      const double diff = std::abs(rho.value() - oracle);
      if (diff > 1e-12) {
        return {false,
                "spearman deviates from rank-then-pearson by " + fmt(diff)};
      }
      ++spearman_checked;
    }
  }
  if (kendall_checked < 1000 || spearman_checked < 1000) {
    return {false, "fewer than 1000 defined comparisons"};
  }
  return {true, std::to_string(kendall_checked) + " kendall and " +
                    std::to_string(spearman_checked) + " spearman checks"};
}

// ---------------------------------------------------------------------------
// 2. Measure identity on x = z, and structural degeneration at M=1 / N=1.
// ---------------------------------------------------------------------------
Outcome criterion2() {
  RngEngine rng(160002);
  const auto x = fixtures::random_matrix(7, 11, rng);
  for (const Measure& m : all_measures()) {
    const MeasureResult r = evaluate(m, x, x);
    if (!r.is_defined() || std::abs(*r.value - 1.0) > 1e-12) {
      return {false, to_token(m) + " on x = z is not 1"};
    }
  }

  const auto xc = fixtures::random_matrix(9, 1, rng);
  const auto zc = fixtures::random_matrix(9, 1, rng);
  const auto xr = fixtures::random_matrix(1, 9, rng);
  const auto zr = fixtures::random_matrix(1, 9, rng);
  for (CoefKind c :
       {CoefKind::Pearson, CoefKind::Spearman, CoefKind::KendallTauB}) {
    const auto input = evaluate(Measure{Grouping::Input, c}, xc, zc);
    const auto global_col = evaluate(Measure{Grouping::Global, c}, xc, zc);
    if (std::abs(*input.value - *global_col.value) > 1e-12) {
      return {false, "input-level at M=1 differs from global"};
    }
    const auto item = evaluate(Measure{Grouping::Item, c}, xr, zr);
    const auto global_row = evaluate(Measure{Grouping::Global, c}, xr, zr);
    if (std::abs(*item.value - *global_row.value) > 1e-12) {
      return {false, "item-level at N=1 differs from global"};
    }
  }
  return {true, "all 12 identities and 6 degenerations hold"};
}

// ---------------------------------------------------------------------------
// 3. Permutation-test calibration on pure noise.
// ---------------------------------------------------------------------------
Outcome criterion3() {
  const int seeds = 200;
  int significant = 0;
  CompensatedSum p_sum;
  for (int s = 0; s < seeds; ++s) {
    RngEngine data_rng(derive_seed(160003, s));
    const auto z = fixtures::random_matrix(8, 50, data_rng);
    const auto x = fixtures::random_matrix(8, 50, data_rng);
    const auto y = fixtures::random_matrix(8, 50, data_rng);
    const auto r = perm_both(x, y, z, kGlobalPearson,
                             {200, derive_seed(777, s)}, kWorkers);
    if (r.p_value <= 0.05) ++significant;
    p_sum.add(r.p_value);
  }
  const double frac = static_cast<double>(significant) / seeds;
  const double mean_p = p_sum.value() / seeds;
  const bool pass = frac >= 0.01 && frac <= 0.12 && mean_p >= 0.40 &&
                    mean_p <= 0.60;
  return {pass, "frac(p<=0.05) = " + fmt(frac) + ", mean p = " + fmt(mean_p)};
}

// ---------------------------------------------------------------------------
// 4. DP separation: a near-perfect metric lowers the DP value.
// ---------------------------------------------------------------------------
Outcome criterion4() {
  const int seeds = 50;
  int favourable = 0;
  for (int s = 0; s < seeds; ++s) {
    RngEngine rng(derive_seed(160004, s));
    const auto z = fixtures::random_matrix(16, 100, rng);
    const double sigma_z = sample_stddev(z.values());

    std::vector<MetricEntry> strong;
    strong.push_back({"good", fixtures::noisy_copy(z, 0.1 * sigma_z, rng), {}});
    std::vector<MetricEntry> noise;
    for (int k = 0; k < 4; ++k) {
      strong.push_back({"sn" + std::to_string(k),
                        fixtures::random_matrix(16, 100, rng), {}});
      noise.push_back({"nn" + std::to_string(k),
                       fixtures::random_matrix(16, 100, rng), {}});
    }
    noise.push_back({"nn4", fixtures::random_matrix(16, 100, rng), {}});

    const PermTestConfig cfg{200, derive_seed(888, s)};
    const double dp_strong =
        discriminative_power(fixtures::dataset_of(z, std::move(strong)),
                             kGlobalPearson, cfg, kWorkers)
            .dp_value;
    const double dp_noise =
        discriminative_power(fixtures::dataset_of(z, std::move(noise)),
                             kGlobalPearson, cfg, kWorkers)
            .dp_value;
    if (dp_strong < dp_noise) ++favourable;
  }
  const bool pass = favourable >= 45;  // 90% of 50
  return {pass, std::to_string(favourable) + "/50 seeds separate"};
}

// ---------------------------------------------------------------------------
// 5. RC stability with well-separated metric quality.
// ---------------------------------------------------------------------------
Outcome criterion5() {
  const int seeds = 20;
  CompensatedSum rc_sum;
  for (int s = 0; s < seeds; ++s) {
    RngEngine rng(derive_seed(160005, s));
    const auto z = fixtures::random_matrix(16, 100, rng);
    const double sigma_z = sample_stddev(z.values());
    std::vector<MetricEntry> metrics;
    int tag = 0;
    for (double rel : {0.05, 0.4, 1.0, 2.0}) {
      metrics.push_back({"m" + std::to_string(tag++),
                         fixtures::noisy_copy(z, rel * sigma_z, rng), {}});
    }
    const auto ds = fixtures::dataset_of(z, std::move(metrics));
    const auto report = ranking_consistency(
        ds, kGlobalPearson, {100, derive_seed(999, s)}, kWorkers);
    rc_sum.add(report.rc_value);
  }
  const double mean_rc = rc_sum.value() / seeds;
  return {mean_rc >= 0.9, "mean rc = " + fmt(mean_rc)};
}

// ---------------------------------------------------------------------------
// 6. Granularity simulation reproduces the qualitative sweep pattern.
// ---------------------------------------------------------------------------
Outcome criterion6() {
  SimulationParams params;  // defaults are the estimated real-data settings
  params.G_h = 13;
  params.T1 = 100;
  params.T2 = 100;
  params.seed = 160006;

  const auto& measures = all_measures();
  const auto rows = sweep_metric_granularity(
      params, 2, 15, {measures.data(), measures.size()}, kWorkers);

  std::map<std::string, std::map<std::int64_t, double>> curves;
  for (const SweepRow& r : rows) {
    if (!r.mean_value) {
      return {false, to_token(r.measure) + " undefined at G_m = " +
                         std::to_string(r.g_m)};
    }
    curves[to_token(r.measure)][r.g_m] = *r.mean_value;
  }

  auto range_of = [&](const std::string& token) {
    double lo = 2.0, hi = -2.0;
    for (const auto& [g, v] : curves[token]) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    return hi - lo;
  };

  // Evaluate every sub-check so a failure line carries the whole picture.
  std::vector<std::string> violations;
  const double gp_range = range_of("global-pearson");
  std::string detail = "range(global-pearson) = " + fmt(gp_range);
  for (const std::string token :
       {"system-pearson", "system-spearman", "system-kendall", "global-kendall",
        "input-kendall", "item-kendall"}) {
    const double r = range_of(token);
    detail += ", range(" + token + ") = " + fmt(r);
    if (r > 0.5 * gp_range) {
      violations.push_back(token + " range " + fmt(r) + " > 0.5 * " +
                           fmt(gp_range));
    }
  }

  const auto& gp = curves["global-pearson"];
  const double rise = gp.at(13) - gp.at(2);
  detail += ", rise(2->13) = " + fmt(rise);
  if (rise < 0.05) violations.push_back("rise " + fmt(rise) + " < 0.05");

  std::vector<double> gs, vals;
  for (std::int64_t g = 2; g <= 13; ++g) {
    gs.push_back(static_cast<double>(g));
    vals.push_back(gp.at(g));
  }
  const CoefResult trend = spearman(gs, vals);
  if (!trend.is_defined() || trend.value() < 0.8) {
    violations.push_back(
        "monotone trend rho = " +
        (trend.is_defined() ? fmt(trend.value()) : std::string("undefined")));
  } else {
    detail += ", trend rho = " + fmt(trend.value());
  }

  if (!violations.empty()) {
    std::string joined;
    for (const std::string& v : violations) {
      joined += (joined.empty() ? "" : "; ") + v;
    }
    return {false, detail + " -- violated: " + joined};
  }
  return {true, detail};
}

// ---------------------------------------------------------------------------
// 7. Closed-loop parameter recovery.
// ---------------------------------------------------------------------------
Outcome criterion7() {
  SimulationParams p;
  p.N = 16;
  p.M = 1000;
  // rho_sys = 0.92, mu_rho_item = 0.35, sigma_rho_item = 0.14 are defaults.
  const int seeds = 20;
  CompensatedSum mu_m, sigma_m, mu_h, sigma_h, rho_sys, mu_rho, sigma_rho;
  for (int s = 0; s < seeds; ++s) {
    RngEngine rng(derive_seed(160007, s));
    auto [metric, human] = sample_continuous_matrices(p, rng);
    const auto ds = fixtures::dataset_of(std::move(human),
                                         {{"sim", std::move(metric), {}}});
    const EstimatedParams est = estimate_params(ds, "sim");
    mu_m.add(est.mu_m);
    sigma_m.add(est.sigma_m);
    mu_h.add(est.mu_h);
    sigma_h.add(est.sigma_h);
    rho_sys.add(est.rho_sys);
    mu_rho.add(est.mu_rho_item);
    sigma_rho.add(est.sigma_rho_item);
  }
  const auto avg = [&](CompensatedSum& s) { return s.value() / seeds; };
  struct Check {
    const char* name;
    double got, want;
  };
  const Check checks[] = {
      {"mu_m", avg(mu_m), p.mu_m},
      {"sigma_m", avg(sigma_m), p.sigma_m},
      {"mu_h", avg(mu_h), p.mu_h},
      {"sigma_h", avg(sigma_h), p.sigma_h},
      {"rho_sys", avg(rho_sys), p.rho_sys},
      {"mu_rho_item", avg(mu_rho), p.mu_rho_item},
      {"sigma_rho_item", avg(sigma_rho), p.sigma_rho_item},
  };
  std::string detail;
  for (const Check& c : checks) {
    if (!detail.empty()) detail += ", ";
    detail += std::string(c.name) + " = " + fmt(c.got);
    if (std::abs(c.got - c.want) > 0.05) {
      return {false, detail + " (wanted " + fmt(c.want) + " +- 0.05)"};
    }
  }
  return {true, detail};
}

// ---------------------------------------------------------------------------
// 8. Byte-identical reruns of every stochastic subcommand at workers 1 and 8.
// ---------------------------------------------------------------------------
int run_cli(const std::string& args, const std::filesystem::path& log) {
  const std::string cmd = std::string(METAEVAL_CLI_PATH) + " " + args + " > " +
                          log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Compares every report file byte for byte. The run manifest records the
// worker count and wall time, so across different worker counts it is
// skipped; between same-config reruns it must match up to the wall time.
bool dirs_equal(const std::filesystem::path& a, const std::filesystem::path& b,
                bool compare_manifest, std::string& detail) {
  std::vector<std::string> names;
  for (const auto& entry : std::filesystem::directory_iterator(a)) {
    names.push_back(entry.path().filename().string());
  }
  std::sort(names.begin(), names.end());
  std::vector<std::string> names_b;
  for (const auto& entry : std::filesystem::directory_iterator(b)) {
    names_b.push_back(entry.path().filename().string());
  }
  std::sort(names_b.begin(), names_b.end());
  if (names != names_b) {
    detail = "file lists differ between " + a.string() + " and " + b.string();
    return false;
  }
  for (const std::string& name : names) {
    if (name == "run_manifest.json") {
      if (!compare_manifest) continue;
      auto doc_a = nlohmann::json::parse(slurp(a / name));
      auto doc_b = nlohmann::json::parse(slurp(b / name));
      doc_a.erase("wall_time_seconds");
      doc_b.erase("wall_time_seconds");
      doc_a["inputs"].erase("out");  // reruns land in distinct directories
      doc_b["inputs"].erase("out");
      if (doc_a != doc_b) {
        detail = "run manifests differ beyond wall time";
        return false;
      }
    } else if (slurp(a / name) != slurp(b / name)) {
      detail = name + " differs between " + a.string() + " and " + b.string();
      return false;
    }
  }
  return true;
}

Outcome criterion8() {
  fixtures::TempDir tmp("acc8");
  RngEngine rng(160008);
  const auto z = fixtures::random_matrix(8, 40, rng);
  std::vector<MetricEntry> metrics;
  for (int k = 0; k < 4; ++k) {
    metrics.push_back({"m" + std::to_string(k),
                       fixtures::noisy_copy(z, 0.2 + 0.3 * k, rng), {}});
  }
  const auto manifest = fixtures::write_dataset_files(
      fixtures::dataset_of(z, std::move(metrics)), tmp.path());

  SimulationParams params;
  params.N = 6;
  params.M = 20;
  params.G_h = 7;
  params.T1 = 10;
  params.T2 = 10;
  save_simulation_params(params, tmp.path() / "params.json");

  struct Job {
    std::string name;
    std::string args;  // without --workers/--out
  };
  const Job jobs[] = {
      {"dp", "dp --manifest " + manifest.string() +
                 " --measures global-pearson,input-kendall --seed 42 "
                 "--iterations 200"},
      {"rc", "rc --manifest " + manifest.string() +
                 " --measures global-pearson,system-spearman --seed 42 "
                 "--iterations 200 --dump-taus"},
      {"simulate", "simulate --params " + (tmp.path() / "params.json").string() +
                       " --seed 42 --sweep-gm 2..5"},
  };

  for (const Job& job : jobs) {
    std::vector<std::filesystem::path> outs;
    for (const std::string variant : {"w1_a", "w1_b", "w8_a", "w8_b"}) {
      const unsigned workers = variant[1] == '1' ? 1 : 8;
      const auto out = tmp.path() / (job.name + "_" + variant);
      const int code =
          run_cli(job.args + " --workers " + std::to_string(workers) +
                      " --out " + out.string(),
                  tmp.path() / "log.txt");
      if (code != 0) {
        return {false, job.name + " exited with " + std::to_string(code)};
      }
      outs.push_back(out);
    }
    std::string detail;
    // Data artifacts must match across every run, whatever the worker count.
    for (std::size_t i = 1; i < outs.size(); ++i) {
      if (!dirs_equal(outs[0], outs[i], false, detail)) {
        return {false, job.name + ": " + detail};
      }
    }
    // Same-config reruns must also reproduce the manifest up to wall time.
    if (!dirs_equal(outs[0], outs[1], true, detail) ||
        !dirs_equal(outs[2], outs[3], true, detail)) {
      return {false, job.name + ": " + detail};
    }
  }
  return {true, "dp, rc and simulate reports are byte-identical"};
}

// ---------------------------------------------------------------------------
// 9. Agreement matrix structure.
// ---------------------------------------------------------------------------
Outcome criterion9() {
  RngEngine rng(160009);
  const auto z = fixtures::random_matrix(6, 14, rng);
  std::vector<MetricEntry> metrics;
  for (int k = 0; k < 5; ++k) {
    metrics.push_back({"m" + std::to_string(k),
                       fixtures::noisy_copy(z, 0.15 + 0.25 * k, rng), {}});
  }
  const auto ds = fixtures::dataset_of(z, std::move(metrics));
  const AgreementMatrix am = agreement_heatmap(ds, kWorkers);

  std::size_t defined_cells = 0;
  for (std::size_t i = 0; i < 12; ++i) {
    for (std::size_t j = 0; j < 12; ++j) {
      const auto ij = am.at(i, j);
      const auto ji = am.at(j, i);
      if (ij.has_value() != ji.has_value()) {
        return {false, "asymmetric definedness"};
      }
      if (ij) {
        ++defined_cells;
        if (std::abs(*ij - *ji) > 1e-12) {
          return {false, "asymmetric values at (" + std::to_string(i) + ", " +
                             std::to_string(j) + ")"};
        }
      }
    }
    if (am.at(i, i) && *am.at(i, i) != 1.0) {
      return {false, "diagonal not exactly 1 at " + std::to_string(i)};
    }
  }
  return {true, std::to_string(defined_cells) + "/144 cells defined, "
                "symmetric with unit diagonal"};
}

struct Criterion {
  int id;
  const char* name;
  double runtime_limit_seconds;
  Outcome (*run)();
};

const Criterion kCriteria[] = {
    {1, "coefficient oracle suite", 5, criterion1},
    {2, "measure identity and degeneration", 1, criterion2},
    {3, "permutation-test calibration", 300, criterion3},
    {4, "dp separation", 900, criterion4},
    {5, "rc stability", 300, criterion5},
    {6, "granularity simulation sweep", 1800, criterion6},
    {7, "closed-loop parameter recovery", 300, criterion7},
    {8, "byte-identical stochastic reruns", 600, criterion8},
    {9, "agreement matrix structure", 60, criterion9},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));

  int failures = 0;
  for (const Criterion& c : kCriteria) {
    if (!selected.empty() &&
        std::find(selected.begin(), selected.end(), c.id) == selected.end()) {
      continue;
    }
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (elapsed > c.runtime_limit_seconds) {
      outcome.pass = false;
      outcome.detail += " [exceeded " + fmt(c.runtime_limit_seconds) + " s]";
    }
    std::cout << (outcome.pass ? "[PASS]" : "[FAIL]") << " criterion " << c.id
              << " (" << c.name << "): " << outcome.detail << " ["
              << fmt(elapsed) << " s]" << std::endl;
    if (!outcome.pass) ++failures;
  }
  return failures;
}
