#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "metaeval/correlation.hpp"
#include "metaeval/dataset.hpp"

namespace metaeval {

/// How two score matrices are decomposed into vectors before correlating:
/// the flattened whole, per-input columns, per-system rows, or per-system
/// means.
enum class Grouping { Global, Input, Item, System };

/// One of the 12 correlation measures: a grouping paired with a coefficient.
struct Measure {
  Grouping grouping = Grouping::Global;
  CoefKind coef = CoefKind::Pearson;

  friend auto operator<=>(const Measure&, const Measure&) = default;
};

/// All 12 measures in canonical order (grouping-major, coefficient-minor).
const std::array<Measure, 12>& all_measures();

std::string_view to_token(Grouping g);
std::string to_token(const Measure& m);         // e.g. "global-pearson"
Measure measure_from_token(std::string_view t);  // throws ValidationError

struct MeasureResult {
  /// Mean over the defined groups; empty when every group is undefined.
  std::optional<double> value;
  std::size_t group_count = 0;
  std::size_t undefined_group_count = 0;
  std::vector<CoefResult> per_group;

  bool is_defined() const noexcept { return value.has_value(); }
};

/// Layout-level evaluation on row-major frames (no id checks); both frames
/// must be systems x inputs. This is the hot path shared by the permutation
/// test, resampling, and simulation code.
MeasureResult evaluate_frame(const Measure& measure, std::size_t systems,
                             std::size_t inputs, std::span<const double> x,
                             std::span<const double> z);

/// Evaluates one measure between a metric matrix and the human matrix.
/// Input/Item groups whose coefficient is undefined are skipped from the mean
/// and counted in the result.
MeasureResult evaluate(const Measure& measure, const ScoreMatrix& x,
                       const ScoreMatrix& z);

/// One result per metric, dataset order preserved.
std::vector<std::pair<std::string, MeasureResult>> evaluate_all(
    const MetaEvalDataset& dataset, const Measure& measure);

}  // namespace metaeval
