#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "metaeval/score_matrix.hpp"

namespace metaeval {

struct MetricEntry {
  std::string name;
  ScoreMatrix scores;
  std::optional<Scale> scale;
};

/// Human scores plus K >= 1 metric score matrices, all dimension- and
/// id-aligned with the human matrix.
struct MetaEvalDataset {
  std::string source_id;  // where the data came from (manifest path or a label)
  ScoreMatrix human;
  std::optional<Scale> human_scale;
  std::vector<MetricEntry> metrics;

  std::size_t systems() const noexcept { return human.systems(); }
  std::size_t inputs() const noexcept { return human.inputs(); }
  std::size_t metric_count() const noexcept { return metrics.size(); }

  const MetricEntry& metric(std::string_view name) const;
  std::vector<std::string> metric_names() const;

  /// Checks the dataset invariants; throws ValidationError on violation.
  void validate() const;
};

/// Builds a dataset from in-memory parts and validates it.
MetaEvalDataset make_dataset(std::string source_id, ScoreMatrix human,
                             std::vector<MetricEntry> metrics,
                             std::optional<Scale> human_scale = std::nullopt);

/// Score matrix CSV: header row carries the input ids (first header field is
/// a free label), first column carries the system ids, remaining cells are
/// decimal scores with '.' as separator.
ScoreMatrix read_matrix_csv(const std::filesystem::path& path);

/// Writes the matrix in the same CSV layout; numbers use the shortest decimal
/// form that parses back to the identical double.
void write_matrix_csv(const ScoreMatrix& m, const std::filesystem::path& path);

/// Loads a dataset from a JSON manifest:
///   {"human": {"path": ..., "scale": [lo, hi]?},
///    "metrics": [{"name": ..., "path": ..., "scale": [lo, hi]?}, ...]}
/// Matrix paths resolve relative to the manifest's directory. Loaded datasets
/// must have N >= 2 systems and M >= 2 inputs.
MetaEvalDataset load_dataset(const std::filesystem::path& manifest_path);

}  // namespace metaeval
