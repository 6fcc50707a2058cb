#include "metaeval/score_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "metaeval/errors.hpp"

namespace metaeval {

namespace {
void require_unique(const std::vector<std::string>& ids, const char* what) {
  std::unordered_set<std::string_view> seen;
  for (const auto& id : ids) {
    if (!seen.insert(id).second) {
      throw ValidationError(std::string("duplicate ") + what + " id: " + id);
    }
  }
}
}  // namespace

ScoreMatrix::ScoreMatrix(std::vector<std::string> system_ids,
                         std::vector<std::string> input_ids,
                         std::vector<double> values)
    : system_ids_(std::move(system_ids)),
      input_ids_(std::move(input_ids)),
      values_(std::move(values)) {
  const std::size_t n = system_ids_.size();
  const std::size_t m = input_ids_.size();
  if (n == 0 || m == 0) {
    throw ValidationError("score matrix needs at least one system and input");
  }
  if (n * m < 2) {
    throw ValidationError("score matrix needs at least two cells");
  }
  if (values_.size() != n * m) {
    throw ValidationError("score matrix value count does not match " +
                          std::to_string(n) + "x" + std::to_string(m));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) {
      throw ValidationError("score matrix contains a non-finite value");
    }
  }
  require_unique(system_ids_, "system");
  require_unique(input_ids_, "input");
}

bool ScoreMatrix::aligned_with(const ScoreMatrix& other) const {
  return system_ids_ == other.system_ids_ && input_ids_ == other.input_ids_;
}

std::int64_t granularity(const GranularitySpec& spec) {
  if (spec.scale_points < 2) {
    throw ValidationError("granularity: scale_points must be >= 2");
  }
  if (spec.annotators < 1) {
    throw ValidationError("granularity: annotators must be >= 1");
  }
  return spec.annotators * (spec.scale_points - 1) + 1;
}

double tie_ratio(const ScoreMatrix& m) {
  std::vector<double> vals(m.values().begin(), m.values().end());
  std::sort(vals.begin(), vals.end());
  const std::size_t n = vals.size();
  std::uint64_t tied = 0;
  std::size_t run_start = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    if (i == n || vals[i] != vals[run_start]) {
      const std::uint64_t t = i - run_start;
      tied += t * (t - 1) / 2;
      run_start = i;
    }
  }
  const std::uint64_t total =
      static_cast<std::uint64_t>(n) * (static_cast<std::uint64_t>(n) - 1) / 2;
  return total == 0 ? 0.0
                    : static_cast<double>(tied) / static_cast<double>(total);
}

std::size_t distinct_value_count(const ScoreMatrix& m) {
  std::vector<double> vals(m.values().begin(), m.values().end());
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  return vals.size();
}

ScoreMatrix normalize_01(const ScoreMatrix& m, std::optional<Scale> scale) {
  double lo, hi;
  if (scale) {
    lo = scale->lo;
    hi = scale->hi;
    if (!(lo < hi)) {
      throw ValidationError("normalize_01: declared scale needs lo < hi");
    }
    for (double v : m.values()) {
      if (v < lo || v > hi) {
        throw ValidationError("normalize_01: value outside declared scale");
      }
    }
  } else {
    const auto [mn, mx] =
        std::minmax_element(m.values().begin(), m.values().end());
    lo = *mn;
    hi = *mx;
    if (lo == hi) {
      throw ValidationError(
          "normalize_01: constant matrix has no empirical range");
    }
  }
  const double range = hi - lo;
  std::vector<double> out;
  out.reserve(m.values().size());
  for (double v : m.values()) out.push_back((v - lo) / range);
  return ScoreMatrix(m.system_ids(), m.input_ids(), std::move(out));
}

}  // namespace metaeval
