#include "metaeval/agreement.hpp"

#include <fstream>
#include <vector>

#include "metaeval/errors.hpp"
#include "metaeval/numeric.hpp"
#include "metaeval/parallel.hpp"

namespace metaeval {

namespace {

// Per-metric values of one measure; empty optional when any metric is
// undefined under it.
std::optional<std::vector<double>> measure_vector(
    const MetaEvalDataset& dataset, const Measure& measure) {
  std::vector<double> values;
  values.reserve(dataset.metric_count());
  for (const MetricEntry& entry : dataset.metrics) {
    const MeasureResult r = evaluate(measure, entry.scores, dataset.human);
    if (!r.is_defined()) return std::nullopt;
    values.push_back(*r.value);
  }
  return values;
}

}  // namespace

double ranking_agreement(const MetaEvalDataset& dataset, const Measure& m1,
                         const Measure& m2) {
  if (dataset.metric_count() < 2) {
    throw ValidationError("ranking_agreement: need at least 2 metrics");
  }
  const auto v1 = measure_vector(dataset, m1);
  if (!v1) {
    throw DegeneracyError("ranking_agreement: " + to_token(m1) +
                          " undefined for some metric");
  }
  const auto v2 = measure_vector(dataset, m2);
  if (!v2) {
    throw DegeneracyError("ranking_agreement: " + to_token(m2) +
                          " undefined for some metric");
  }
  const CoefResult tau = kendall_tau_b(*v1, *v2);
  if (!tau.is_defined()) {
    throw DegeneracyError("ranking_agreement: tau degenerate between " +
                          to_token(m1) + " and " + to_token(m2));
  }
  return tau.value();
}

AgreementMatrix agreement_heatmap(const MetaEvalDataset& dataset,
                                  unsigned workers) {
  if (dataset.metric_count() < 2) {
    throw ValidationError("agreement_heatmap: need at least 2 metrics");
  }

  AgreementMatrix am;
  am.measures = all_measures();

  std::vector<std::optional<std::vector<double>>> vectors(12);
  parallel_for(12, workers, [&](std::size_t i) {
    vectors[i] = measure_vector(dataset, am.measures[i]);
  });

  for (std::size_t i = 0; i < 12; ++i) {
    for (std::size_t j = i; j < 12; ++j) {
      std::optional<double> cell;
      if (vectors[i] && vectors[j]) {
        const CoefResult tau = kendall_tau_b(*vectors[i], *vectors[j]);
        if (tau.is_defined()) cell = tau.value();
      }
      am.taus[i * 12 + j] = cell;
      am.taus[j * 12 + i] = cell;
    }
  }
  return am;
}

void write_agreement_csv(const AgreementMatrix& am,
                         const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write agreement matrix: " + path.string());
  out << "measure";
  for (const Measure& m : am.measures) out << ',' << to_token(m);
  out << '\n';
  for (std::size_t i = 0; i < 12; ++i) {
    out << to_token(am.measures[i]);
    for (std::size_t j = 0; j < 12; ++j) {
      out << ',';
      if (const auto cell = am.at(i, j)) out << to_decimal_string(*cell);
    }
    out << '\n';
  }
  if (!out) throw IoError("failed writing agreement matrix: " + path.string());
}

}  // namespace metaeval
