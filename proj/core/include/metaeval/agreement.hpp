#pragma once

#include <array>
#include <filesystem>
#include <optional>

#include "metaeval/dataset.hpp"
#include "metaeval/measures.hpp"

namespace metaeval {

/// Pairwise agreement between the metric rankings induced by the 12 measures:
/// cell (i, j) is Kendall's tau-b between the K-vectors of measure values.
/// Cells where a measure is undefined for some metric, or the tau itself is
/// degenerate, stay unset so consumers can tell "no data" from "no agreement".
struct AgreementMatrix {
  std::array<Measure, 12> measures;
  std::array<std::optional<double>, 12 * 12> taus;

  std::optional<double> at(std::size_t i, std::size_t j) const {
    return taus[i * 12 + j];
  }
};

/// tau-b between the two K-vectors of per-metric measure values. Throws
/// DegeneracyError when either measure is undefined for some metric or the
/// tau is degenerate.
double ranking_agreement(const MetaEvalDataset& dataset, const Measure& m1,
                         const Measure& m2);

/// All 12 x 12 agreements; each measure's values are computed once and
/// reused. Symmetric with unit diagonal where defined.
AgreementMatrix agreement_heatmap(const MetaEvalDataset& dataset,
                                  unsigned workers = 1);

/// CSV with measure tokens as header row and first column; unset cells empty.
void write_agreement_csv(const AgreementMatrix& am,
                         const std::filesystem::path& path);

}  // namespace metaeval
