#include "metaeval/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

#include "metaeval/errors.hpp"
#include "metaeval/numeric.hpp"
#include "metaeval/parallel.hpp"

namespace metaeval {

void validate(const SimulationParams& p) {
  auto require = [](bool ok, const char* msg) {
    if (!ok) throw ValidationError(std::string("simulation params: ") + msg);
  };
  require(std::isfinite(p.mu_m) && std::isfinite(p.mu_h), "means must be finite");
  require(std::isfinite(p.sigma_m) && p.sigma_m > 0.0, "sigma_m must be > 0");
  require(std::isfinite(p.sigma_h) && p.sigma_h > 0.0, "sigma_h must be > 0");
  require(p.rho_sys >= -1.0 && p.rho_sys <= 1.0, "rho_sys must be in [-1, 1]");
  require(std::isfinite(p.mu_rho_item), "mu_rho_item must be finite");
  require(std::isfinite(p.sigma_rho_item) && p.sigma_rho_item >= 0.0,
          "sigma_rho_item must be >= 0");
  if (p.sigma_rho_item == 0.0) {
    require(p.mu_rho_item >= -1.0 && p.mu_rho_item <= 1.0,
            "mu_rho_item must be in [-1, 1] when sigma_rho_item is 0");
  }
  require(p.N >= 2, "N must be >= 2");
  require(p.M >= 2, "M must be >= 2");
  require(p.G_m >= 2, "G_m must be >= 2");
  require(p.G_h >= 2, "G_h must be >= 2");
  require(p.T1 >= 1, "T1 must be >= 1");
  require(p.T2 >= 1, "T2 must be >= 1");
}

namespace {

const char* const kParamKeys[] = {"mu_m", "mu_h",        "sigma_m",
                                  "sigma_h", "rho_sys",  "mu_rho_item",
                                  "sigma_rho_item", "N", "M",
                                  "G_m",     "G_h",      "T1",
                                  "T2",      "seed"};

}  // namespace

SimulationParams load_simulation_params(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open params file: " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("params file is not valid JSON (" + path.string() +
                          "): " + e.what());
  }
  for (const auto& [key, _] : doc.items()) {
    if (std::find_if(std::begin(kParamKeys), std::end(kParamKeys),
                     [&](const char* k) { return key == k; }) ==
        std::end(kParamKeys)) {
      throw ValidationError("params file has unknown field '" + key + "'");
    }
  }

  SimulationParams p;
  try {
    p.mu_m = doc.at("mu_m").get<double>();
    p.mu_h = doc.at("mu_h").get<double>();
    p.sigma_m = doc.at("sigma_m").get<double>();
    p.sigma_h = doc.at("sigma_h").get<double>();
    p.rho_sys = doc.at("rho_sys").get<double>();
    p.mu_rho_item = doc.at("mu_rho_item").get<double>();
    p.sigma_rho_item = doc.at("sigma_rho_item").get<double>();
    p.N = doc.at("N").get<std::size_t>();
    p.M = doc.at("M").get<std::size_t>();
    p.G_m = doc.at("G_m").get<std::int64_t>();
    p.G_h = doc.at("G_h").get<std::int64_t>();
    if (doc.contains("T1")) p.T1 = doc.at("T1").get<std::uint32_t>();
    if (doc.contains("T2")) p.T2 = doc.at("T2").get<std::uint32_t>();
    if (doc.contains("seed")) p.seed = doc.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("malformed params file " + path.string() + ": " +
                          e.what());
  }
  validate(p);
  return p;
}

void save_simulation_params(const SimulationParams& p,
                            const std::filesystem::path& path) {
  nlohmann::json doc;
  doc["mu_m"] = p.mu_m;
  doc["mu_h"] = p.mu_h;
  doc["sigma_m"] = p.sigma_m;
  doc["sigma_h"] = p.sigma_h;
  doc["rho_sys"] = p.rho_sys;
  doc["mu_rho_item"] = p.mu_rho_item;
  doc["sigma_rho_item"] = p.sigma_rho_item;
  doc["N"] = p.N;
  doc["M"] = p.M;
  doc["G_m"] = p.G_m;
  doc["G_h"] = p.G_h;
  doc["T1"] = p.T1;
  doc["T2"] = p.T2;
  doc["seed"] = p.seed;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write params file: " + path.string());
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("failed writing params file: " + path.string());
}

std::pair<double, double> sample_bivariate_normal(double mu_a, double mu_b,
                                                  double sigma_a,
                                                  double sigma_b, double rho,
                                                  RngEngine& rng) {
  if (!(sigma_a > 0.0) || !(sigma_b > 0.0)) {
    throw ValidationError("sample_bivariate_normal: sigmas must be > 0");
  }
  if (!(rho >= -1.0 && rho <= 1.0)) {
    throw ValidationError("sample_bivariate_normal: rho must be in [-1, 1]");
  }
  const auto [u, v] = standard_normal_pair(rng);
  const double a = mu_a + sigma_a * u;
  const double b =
      mu_b + sigma_b * (rho * u + std::sqrt(1.0 - rho * rho) * v);
  return {a, b};
}

double sample_truncated_normal(double mu, double sigma, double lo, double hi,
                               RngEngine& rng) {
  if (!(sigma > 0.0)) {
    throw ValidationError("sample_truncated_normal: sigma must be > 0");
  }
  if (!(lo < hi)) {
    throw ValidationError("sample_truncated_normal: needs lo < hi");
  }
  // Plain rejection; adequate for intervals holding non-negligible mass. The
  // cap turns a vanishing acceptance region into an error instead of a hang.
  constexpr int kMaxDraws = 1 << 20;
  for (int i = 0; i < kMaxDraws; ++i) {
    const double v = mu + sigma * standard_normal(rng);
    if (v >= lo && v <= hi) return v;
  }
  throw DegeneracyError(
      "sample_truncated_normal: interval mass numerically zero after " +
      std::to_string(kMaxDraws) + " draws");
}

void discretize_frame(std::span<const double> in,
                      std::span<const double> thresholds,
                      std::span<double> out) {
  for (std::size_t i = 1; i < thresholds.size(); ++i) {
    if (!(thresholds[i - 1] < thresholds[i])) {
      throw ValidationError("discretize: thresholds must be strictly ascending");
    }
  }
  if (out.size() != in.size()) {
    throw std::invalid_argument("discretize_frame: output size mismatch");
  }
  // Bucket k is the smallest k with v <= t_k (1-based), else G = |t| + 1;
  // equivalently 1 + (count of thresholds < v).
  for (std::size_t c = 0; c < in.size(); ++c) {
    const auto it =
        std::lower_bound(thresholds.begin(), thresholds.end(), in[c]);
    out[c] = static_cast<double>(1 + (it - thresholds.begin()));
  }
}

ScoreMatrix discretize(const ScoreMatrix& m,
                       std::span<const double> thresholds) {
  std::vector<double> out(m.values().size());
  discretize_frame(m.values(), thresholds, out);
  return ScoreMatrix(m.system_ids(), m.input_ids(), std::move(out));
}

void sample_continuous_frame(const SimulationParams& params, RngEngine& rng,
                             std::span<double> x_out, std::span<double> z_out) {
  validate(params);
  const std::size_t cells = params.N * params.M;
  if (x_out.size() != cells || z_out.size() != cells) {
    throw std::invalid_argument("sample_continuous_frame: frame size mismatch");
  }
  for (std::size_t i = 0; i < params.N; ++i) {
    const auto [mu_i_m, mu_i_h] = sample_bivariate_normal(
        params.mu_m, params.mu_h, params.sigma_m, params.sigma_h,
        params.rho_sys, rng);
    const double rho_i =
        params.sigma_rho_item == 0.0
            ? params.mu_rho_item
            : sample_truncated_normal(params.mu_rho_item,
                                      params.sigma_rho_item, -1.0, 1.0, rng);
    for (std::size_t j = 0; j < params.M; ++j) {
      const auto [x, z] = sample_bivariate_normal(
          mu_i_m, mu_i_h, params.sigma_m, params.sigma_h, rho_i, rng);
      x_out[i * params.M + j] = x;
      z_out[i * params.M + j] = z;
    }
  }
}

std::pair<ScoreMatrix, ScoreMatrix> sample_continuous_matrices(
    const SimulationParams& params, RngEngine& rng) {
  std::vector<double> x(params.N * params.M), z(params.N * params.M);
  sample_continuous_frame(params, rng, x, z);
  std::vector<std::string> system_ids, input_ids;
  for (std::size_t i = 0; i < params.N; ++i) {
    system_ids.push_back("sys" + std::to_string(i + 1));
  }
  for (std::size_t j = 0; j < params.M; ++j) {
    input_ids.push_back("in" + std::to_string(j + 1));
  }
  return {ScoreMatrix(system_ids, input_ids, std::move(x)),
          ScoreMatrix(system_ids, input_ids, std::move(z))};
}

namespace {

std::uint64_t double_bits(double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof(bits));
  return bits;
}

// Sorted thresholds for one matrix: count draws from U(mu-sigma, mu+sigma).
// The stream is keyed on the range parameters, so the metric and human sides
// draw independently in general but produce identical thresholds whenever
// their (mu, sigma) ranges coincide.
std::vector<double> sample_thresholds(std::size_t count, double mu,
                                      double sigma, std::uint64_t iter_seed) {
  RngEngine rng(derive_seed(iter_seed, double_bits(mu), double_bits(sigma)));
  std::vector<double> t(count);
  for (std::size_t i = 0; i < count; ++i) {
    t[i] = uniform(rng, mu - sigma, mu + sigma);
  }
  std::sort(t.begin(), t.end());
  return t;
}

std::vector<double> dedup(std::vector<double> t) {
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return t;
}

}  // namespace

std::vector<SimMeasureStat> simulate(const SimulationParams& params,
                                     std::span<const Measure> measures,
                                     unsigned workers) {
  validate(params);
  if (measures.empty()) {
    throw ValidationError("simulate: no measures requested");
  }

  const std::size_t n_measures = measures.size();
  const std::size_t cells = params.N * params.M;

  struct OuterPartial {
    std::vector<CompensatedSum> sums;
    std::vector<std::uint64_t> defined;
    std::vector<std::uint64_t> undefined;
  };
  std::vector<OuterPartial> partials(params.T1);

  parallel_for(params.T1, workers, [&](std::size_t t1) {
    OuterPartial part;
    part.sums.resize(n_measures);
    part.defined.assign(n_measures, 0);
    part.undefined.assign(n_measures, 0);

    RngEngine rng(derive_seed(params.seed, t1, 0));
    std::vector<double> x(cells), z(cells);
    sample_continuous_frame(params, rng, x, z);

    std::vector<double> xq(cells), zq(cells);
    for (std::uint32_t t2 = 0; t2 < params.T2; ++t2) {
      const std::uint64_t thr_seed = derive_seed(params.seed, t1, 1 + t2);
      // Uniform draws can collide exactly; collapsing duplicates keeps the
      // thresholds strictly ascending with unchanged bucket assignment.
      const auto tm = dedup(sample_thresholds(
          static_cast<std::size_t>(params.G_m - 1), params.mu_m,
          params.sigma_m, thr_seed));
      const auto th = dedup(sample_thresholds(
          static_cast<std::size_t>(params.G_h - 1), params.mu_h,
          params.sigma_h, thr_seed));
      discretize_frame(x, tm, xq);
      discretize_frame(z, th, zq);
      for (std::size_t mi = 0; mi < n_measures; ++mi) {
        const MeasureResult r =
            evaluate_frame(measures[mi], params.N, params.M, xq, zq);
        if (r.is_defined()) {
          part.sums[mi].add(*r.value);
          ++part.defined[mi];
        } else {
          ++part.undefined[mi];
        }
      }
    }
    partials[t1] = std::move(part);
  });

  std::vector<SimMeasureStat> stats(n_measures);
  for (std::size_t mi = 0; mi < n_measures; ++mi) {
    stats[mi].measure = measures[mi];
    CompensatedSum total;
    for (const OuterPartial& part : partials) {
      total.add(part.sums[mi].value());
      stats[mi].defined_evaluations += part.defined[mi];
      stats[mi].undefined_evaluations += part.undefined[mi];
    }
    if (stats[mi].defined_evaluations > 0) {
      stats[mi].mean_value =
          total.value() / static_cast<double>(stats[mi].defined_evaluations);
    }
  }
  return stats;
}

std::vector<SweepRow> sweep_metric_granularity(SimulationParams base,
                                               std::int64_t gm_lo,
                                               std::int64_t gm_hi,
                                               std::span<const Measure> measures,
                                               unsigned workers) {
  if (gm_lo < 2 || gm_hi < gm_lo) {
    throw ValidationError("sweep: need 2 <= gm_lo <= gm_hi");
  }
  std::vector<SweepRow> rows;
  for (std::int64_t g = gm_lo; g <= gm_hi; ++g) {
    base.G_m = g;
    const auto stats = simulate(base, measures, workers);
    for (const SimMeasureStat& s : stats) {
      rows.push_back(SweepRow{g, s.measure, s.mean_value});
    }
  }
  return rows;
}

void write_sweep_csv(std::span<const SweepRow> rows,
                     const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write sweep: " + path.string());
  out << "G_m,measure_token,mean_value\n";
  for (const SweepRow& r : rows) {
    out << r.g_m << ',' << to_token(r.measure) << ',';
    if (r.mean_value) out << to_decimal_string(*r.mean_value);
    out << '\n';
  }
  if (!out) throw IoError("failed writing sweep: " + path.string());
}

EstimatedParams estimate_params(const MetaEvalDataset& dataset,
                                std::string_view metric_name) {
  const MetricEntry& entry = dataset.metric(metric_name);
  const ScoreMatrix metric = entry.scale
                                 ? normalize_01(entry.scores, entry.scale)
                                 : entry.scores;
  const ScoreMatrix human = dataset.human_scale
                                ? normalize_01(dataset.human,
                                               dataset.human_scale)
                                : dataset.human;

  EstimatedParams est;
  est.dataset_id = dataset.source_id;
  est.metric_name = std::string(metric_name);
  est.N = metric.systems();
  est.M = metric.inputs();
  est.G_m = distinct_value_count(metric);
  est.G_h = distinct_value_count(human);

  est.mu_m = mean(metric.values());
  est.mu_h = mean(human.values());

  // sigma: mean of the per-system (row) standard deviations.
  CompensatedSum sig_m, sig_h;
  for (std::size_t i = 0; i < metric.systems(); ++i) {
    sig_m.add(sample_stddev(metric.row(i)));
    sig_h.add(sample_stddev(human.row(i)));
  }
  est.sigma_m = sig_m.value() / static_cast<double>(metric.systems());
  est.sigma_h = sig_h.value() / static_cast<double>(metric.systems());

  const MeasureResult sys =
      evaluate(Measure{Grouping::System, CoefKind::Pearson}, metric, human);
  if (!sys.is_defined()) {
    throw DegeneracyError("estimate_params: system-level Pearson undefined");
  }
  est.rho_sys = *sys.value;

  const MeasureResult item =
      evaluate(Measure{Grouping::Item, CoefKind::Pearson}, metric, human);
  if (!item.is_defined()) {
    throw DegeneracyError("estimate_params: item-level Pearson undefined");
  }
  est.mu_rho_item = *item.value;
  est.degenerate_rows = item.undefined_group_count;

  std::vector<double> row_corrs;
  row_corrs.reserve(item.per_group.size());
  for (const CoefResult& g : item.per_group) {
    if (g.is_defined()) row_corrs.push_back(g.value());
  }
  est.sigma_rho_item = row_corrs.size() >= 2 ? sample_stddev(row_corrs) : 0.0;
  return est;
}

}  // namespace metaeval
