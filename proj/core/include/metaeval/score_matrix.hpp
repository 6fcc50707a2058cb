#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace metaeval {

/// Declared score range of a matrix, e.g. {1, 5} for a 1-5 Likert scale.
struct Scale {
  double lo = 0.0;
  double hi = 1.0;
};

/// Dense score matrix, row-major: one row per system, one column per input.
/// Every cell is finite, ids are unique, and the contents never change after
/// construction, so instances can be shared freely across threads.
class ScoreMatrix {
 public:
  ScoreMatrix(std::vector<std::string> system_ids,
              std::vector<std::string> input_ids, std::vector<double> values);

  std::size_t systems() const noexcept { return system_ids_.size(); }
  std::size_t inputs() const noexcept { return input_ids_.size(); }

  const std::vector<std::string>& system_ids() const noexcept {
    return system_ids_;
  }
  const std::vector<std::string>& input_ids() const noexcept {
    return input_ids_;
  }

  std::span<const double> values() const noexcept { return values_; }
  double at(std::size_t system, std::size_t input) const {
    return values_[system * inputs() + input];
  }
  std::span<const double> row(std::size_t system) const {
    return {values_.data() + system * inputs(), inputs()};
  }

  /// Same shape and identical system/input ids.
  bool aligned_with(const ScoreMatrix& other) const;

 private:
  std::vector<std::string> system_ids_;
  std::vector<std::string> input_ids_;
  std::vector<double> values_;
};

/// Discrete rating setup: an s-point scale averaged over a annotators admits
/// a*(s-1)+1 distinct final scores.
struct GranularitySpec {
  std::int64_t scale_points = 2;
  std::int64_t annotators = 1;
};

std::int64_t granularity(const GranularitySpec& spec);

/// Fraction of unordered cell pairs (over all N*M cells) whose values are
/// exactly equal.
double tie_ratio(const ScoreMatrix& m);

/// Number of distinct cell values (the matrix's empirical granularity).
std::size_t distinct_value_count(const ScoreMatrix& m);

/// Affine map onto [0, 1]. With a declared scale, lo -> 0 and hi -> 1 and all
/// cells must already lie inside [lo, hi]; without one the empirical min and
/// max are mapped, which requires a non-constant matrix.
ScoreMatrix normalize_01(const ScoreMatrix& m,
                         std::optional<Scale> scale = std::nullopt);

}  // namespace metaeval
