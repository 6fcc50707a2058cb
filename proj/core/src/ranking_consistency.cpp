#include "metaeval/ranking_consistency.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include "metaeval/errors.hpp"
#include "metaeval/numeric.hpp"
#include "metaeval/parallel.hpp"

namespace metaeval {

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_halves(
    std::size_t inputs, RngEngine& rng) {
  if (inputs < 2) throw ValidationError("split_halves: need >= 2 inputs");
  std::vector<std::size_t> idx(inputs);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  // Fisher-Yates with an explicit bounded draw keeps the split identical
  // across standard library implementations.
  for (std::size_t i = inputs - 1; i > 0; --i) {
    const std::size_t j = static_cast<std::size_t>(bounded_uint(rng, i + 1));
    std::swap(idx[i], idx[j]);
  }
  const std::size_t m1 = inputs / 2;
  std::vector<std::size_t> first(idx.begin(), idx.begin() + m1);
  std::vector<std::size_t> second(idx.begin() + m1, idx.end());
  std::sort(first.begin(), first.end());
  std::sort(second.begin(), second.end());
  return {std::move(first), std::move(second)};
}

namespace {

// Gathers the selected columns of src (N x M row-major) into dst (N x |cols|).
void gather_columns(std::span<const double> src, std::size_t systems,
                    std::size_t inputs, std::span<const std::size_t> cols,
                    std::vector<double>& dst) {
  dst.resize(systems * cols.size());
  for (std::size_t i = 0; i < systems; ++i) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      dst[i * cols.size() + c] = src[i * inputs + cols[c]];
    }
  }
}

}  // namespace

RCReport ranking_consistency(const MetaEvalDataset& dataset,
                             const Measure& measure, const RCConfig& cfg,
                             unsigned workers) {
  const std::size_t k = dataset.metric_count();
  const std::size_t n = dataset.systems();
  const std::size_t m = dataset.inputs();
  if (k < 2) {
    throw ValidationError("ranking_consistency: need at least 2 metrics");
  }
  if (m < 2) {
    throw ValidationError("ranking_consistency: need at least 2 inputs");
  }
  if (cfg.iterations < 1) {
    throw ValidationError("ranking_consistency: iterations must be >= 1");
  }

  RCReport report;
  report.measure = measure;
  report.per_iteration_taus.assign(
      cfg.iterations, std::numeric_limits<double>::quiet_NaN());

  parallel_for(cfg.iterations, workers, [&](std::size_t t) {
    RngEngine rng(derive_seed(cfg.seed, t));
    const auto [d1, d2] = split_halves(m, rng);

    std::vector<double> z1, z2, x1, x2;
    gather_columns(dataset.human.values(), n, m, d1, z1);
    gather_columns(dataset.human.values(), n, m, d2, z2);

    std::vector<double> r1(k), r2(k);
    for (std::size_t i = 0; i < k; ++i) {
      gather_columns(dataset.metrics[i].scores.values(), n, m, d1, x1);
      gather_columns(dataset.metrics[i].scores.values(), n, m, d2, x2);
      const MeasureResult v1 = evaluate_frame(measure, n, d1.size(), x1, z1);
      const MeasureResult v2 = evaluate_frame(measure, n, d2.size(), x2, z2);
      if (!v1.is_defined() || !v2.is_defined()) return;  // iteration skipped
      r1[i] = *v1.value;
      r2[i] = *v2.value;
    }
    const CoefResult tau = kendall_tau_b(r1, r2);
    if (tau.is_defined()) report.per_iteration_taus[t] = tau.value();
  });

  CompensatedSum sum;
  std::uint32_t defined = 0;
  for (double tau : report.per_iteration_taus) {
    if (std::isnan(tau)) {
      ++report.undefined_iterations;
    } else {
      sum.add(tau);
      ++defined;
    }
  }
  if (defined == 0) {
    throw DegeneracyError(
        "ranking_consistency: every iteration was undefined (identical or "
        "degenerate metric rankings)");
  }
  report.rc_value = sum.value() / static_cast<double>(defined);
  return report;
}

void write_taus_csv(const RCReport& report,
                    const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write tau dump: " + path.string());
  out << "iteration,tau\n";
  for (std::size_t t = 0; t < report.per_iteration_taus.size(); ++t) {
    out << t << ',';
    if (!std::isnan(report.per_iteration_taus[t])) {
      out << to_decimal_string(report.per_iteration_taus[t]);
    }
    out << '\n';
  }
  if (!out) throw IoError("failed writing tau dump: " + path.string());
}

}  // namespace metaeval
