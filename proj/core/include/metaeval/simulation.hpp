#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "metaeval/dataset.hpp"
#include "metaeval/measures.hpp"
#include "metaeval/rng.hpp"
#include "metaeval/score_matrix.hpp"

namespace metaeval {

/// Generative model parameters. Per system i, (mu_i_m, mu_i_h) follows a
/// bivariate normal with means (mu_m, mu_h), stds (sigma_m, sigma_h) and
/// correlation rho_sys; rho_i follows a normal(mu_rho_item, sigma_rho_item)
/// truncated to [-1, 1]; each cell pair (x_ij, z_ij) then follows a bivariate
/// normal with means (mu_i_m, mu_i_h), the same sigmas, and correlation rho_i.
struct SimulationParams {
  double mu_m = 0.47;
  double mu_h = 0.65;
  double sigma_m = 0.16;
  double sigma_h = 0.14;
  double rho_sys = 0.92;
  double mu_rho_item = 0.35;
  double sigma_rho_item = 0.14;
  std::size_t N = 16;
  std::size_t M = 100;
  std::int64_t G_m = 13;  // metric score granularity
  std::int64_t G_h = 13;  // human score granularity
  std::uint32_t T1 = 100;  // outer iterations (fresh continuous matrices)
  std::uint32_t T2 = 100;  // inner iterations (fresh thresholds)
  std::uint64_t seed = 0;
};

/// Throws ValidationError when any field is out of range.
void validate(const SimulationParams& params);

/// JSON round-trip with the field names above, verbatim. T1, T2 and seed may
/// be omitted in the file (defaults apply); unknown keys are rejected.
SimulationParams load_simulation_params(const std::filesystem::path& path);
void save_simulation_params(const SimulationParams& params,
                            const std::filesystem::path& path);

/// (a, b) with the given marginal means/stds and correlation rho, built as
/// a = mu_a + sigma_a*u and b = mu_b + sigma_b*(rho*u + sqrt(1-rho^2)*v)
/// over independent standard normals u, v.
std::pair<double, double> sample_bivariate_normal(double mu_a, double mu_b,
                                                  double sigma_a,
                                                  double sigma_b, double rho,
                                                  RngEngine& rng);

/// normal(mu, sigma) conditioned on [lo, hi] by rejection sampling. Throws
/// DegeneracyError once a draw cap is hit, which signals an interval of
/// numerically negligible mass.
double sample_truncated_normal(double mu, double sigma, double lo, double hi,
                               RngEngine& rng);

/// Buckets 1..G for G-1 strictly ascending thresholds: a value v maps to the
/// smallest k with v <= t_k, else G. Frame variant writes into `out`.
void discretize_frame(std::span<const double> in,
                      std::span<const double> thresholds,
                      std::span<double> out);
ScoreMatrix discretize(const ScoreMatrix& m,
                       std::span<const double> thresholds);

/// Fills row-major N x M frames with one continuous draw of the generative
/// model (no discretization). Exposed so parameter estimation can be checked
/// against known ground truth.
void sample_continuous_frame(const SimulationParams& params, RngEngine& rng,
                             std::span<double> x_out, std::span<double> z_out);

/// Convenience wrapper producing aligned matrices with generated ids.
std::pair<ScoreMatrix, ScoreMatrix> sample_continuous_matrices(
    const SimulationParams& params, RngEngine& rng);

struct SimMeasureStat {
  Measure measure;
  /// Mean over all defined evaluations; empty if every one was undefined.
  std::optional<double> mean_value;
  std::uint64_t defined_evaluations = 0;
  std::uint64_t undefined_evaluations = 0;
};

/// T1 outer iterations sample continuous matrices; T2 inner iterations sample
/// fresh threshold sets, discretize both matrices and evaluate every measure.
/// Each side's threshold stream is keyed on its own (mu, sigma) range, so the
/// metric and human draws are independent in general while identical range
/// settings yield identical thresholds. Outer iterations parallelize over
/// derived seeds; results are bit-identical for any worker count.
std::vector<SimMeasureStat> simulate(const SimulationParams& params,
                                     std::span<const Measure> measures,
                                     unsigned workers = 1);

struct SweepRow {
  std::int64_t g_m = 2;
  Measure measure;
  std::optional<double> mean_value;
};

/// Runs simulate for every G_m in [gm_lo, gm_hi] with the same seed (common
/// random numbers across sweep points).
std::vector<SweepRow> sweep_metric_granularity(SimulationParams base,
                                               std::int64_t gm_lo,
                                               std::int64_t gm_hi,
                                               std::span<const Measure> measures,
                                               unsigned workers = 1);

/// CSV with columns (G_m, measure_token, mean_value).
void write_sweep_csv(std::span<const SweepRow> rows,
                     const std::filesystem::path& path);

/// Generative-model estimates from one metric of a dataset. Scores are taken
/// as already lying on the 0-1 scale unless a declared scale is present, in
/// which case they are normalized first.
struct EstimatedParams {
  std::string dataset_id;
  std::string metric_name;
  double mu_m = 0.0;
  double sigma_m = 0.0;
  double mu_h = 0.0;
  double sigma_h = 0.0;
  double rho_sys = 0.0;
  double mu_rho_item = 0.0;
  double sigma_rho_item = 0.0;
  std::size_t N = 0;
  std::size_t M = 0;
  std::size_t G_m = 0;  // empirical: distinct metric score count
  std::size_t G_h = 0;  // empirical: distinct human score count
  std::size_t degenerate_rows = 0;  // rows skipped in the rho_item moments
};

EstimatedParams estimate_params(const MetaEvalDataset& dataset,
                                std::string_view metric_name);

}  // namespace metaeval
