#pragma once

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "metaeval/dataset.hpp"
#include "metaeval/measures.hpp"
#include "metaeval/rng.hpp"

namespace metaeval {

struct RCConfig {
  std::uint32_t iterations = 1000;  // T
  std::uint64_t seed = 0;
};

struct RCReport {
  Measure measure;
  double rc_value = 0.0;  // mean tau over defined iterations
  /// One entry per iteration; NaN marks iterations skipped because a
  /// half-measure or the tau itself was undefined.
  std::vector<double> per_iteration_taus;
  std::uint32_t undefined_iterations = 0;
};

/// Uniform random disjoint cover of {0..inputs-1} with sizes floor(M/2) and
/// M - floor(M/2); both halves are returned sorted.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_halves(
    std::size_t inputs, RngEngine& rng);

/// Ranking consistency: T times, split the input columns in half, score every
/// metric on both halves with the measure, and correlate the two K-vectors
/// with Kendall's tau-b. Iteration t derives its rng from (cfg.seed, t);
/// results are bit-identical for any worker count. Throws DegeneracyError
/// when every iteration is undefined.
RCReport ranking_consistency(const MetaEvalDataset& dataset,
                             const Measure& measure, const RCConfig& cfg,
                             unsigned workers = 1);

/// CSV with columns (iteration, tau); undefined iterations get an empty cell.
void write_taus_csv(const RCReport& report, const std::filesystem::path& path);

}  // namespace metaeval
