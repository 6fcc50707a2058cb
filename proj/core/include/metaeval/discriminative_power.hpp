#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include "metaeval/perm_test.hpp"

namespace metaeval {

/// Discriminative power of one measure on one dataset: the mean permutation
/// p-value over all metric pairs. Lower means the measure separates metrics
/// more strongly.
struct DPReport {
  Measure measure;
  double dp_value = 0.0;
  PairwisePValues pair_pvalues;
  std::vector<double> curve;  // all pair p-values, sorted descending

  std::size_t degenerate_pair_count() const;
};

DPReport discriminative_power(const MetaEvalDataset& dataset,
                              const Measure& measure,
                              const PermTestConfig& cfg, unsigned workers = 1);

/// CSV with columns (pair_rank, p_value), rank 1 = largest p-value.
void write_curve_csv(const DPReport& report, const std::filesystem::path& path);

}  // namespace metaeval
