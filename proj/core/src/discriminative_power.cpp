#include "metaeval/discriminative_power.hpp"

#include <algorithm>
#include <fstream>
#include <functional>

#include "metaeval/errors.hpp"
#include "metaeval/numeric.hpp"

namespace metaeval {

std::size_t DPReport::degenerate_pair_count() const {
  std::size_t count = 0;
  for (const PermTestResult& r : pair_pvalues.pairs) {
    if (r.degenerate) ++count;
  }
  return count;
}

DPReport discriminative_power(const MetaEvalDataset& dataset,
                              const Measure& measure,
                              const PermTestConfig& cfg, unsigned workers) {
  DPReport report;
  report.measure = measure;
  report.pair_pvalues = pairwise_pvalues(dataset, measure, cfg, workers);

  CompensatedSum sum;
  report.curve.reserve(report.pair_pvalues.pair_count());
  for (const PermTestResult& r : report.pair_pvalues.pairs) {
    sum.add(r.p_value);
    report.curve.push_back(r.p_value);
  }
  std::sort(report.curve.begin(), report.curve.end(), std::greater<>());
  report.dp_value =
      sum.value() / static_cast<double>(report.pair_pvalues.pair_count());
  return report;
}

void write_curve_csv(const DPReport& report,
                     const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write p-value curve: " + path.string());
  out << "pair_rank,p_value\n";
  for (std::size_t r = 0; r < report.curve.size(); ++r) {
    out << (r + 1) << ',' << to_decimal_string(report.curve[r]) << '\n';
  }
  if (!out) throw IoError("failed writing p-value curve: " + path.string());
}

}  // namespace metaeval
