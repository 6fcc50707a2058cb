#include "metaeval/measures.hpp"

#include <stdexcept>

#include "metaeval/errors.hpp"
#include "metaeval/numeric.hpp"

namespace metaeval {

const std::array<Measure, 12>& all_measures() {
  static const std::array<Measure, 12> measures = [] {
    std::array<Measure, 12> out{};
    std::size_t i = 0;
    for (Grouping g : {Grouping::Global, Grouping::Input, Grouping::Item,
                       Grouping::System}) {
      for (CoefKind c :
           {CoefKind::Pearson, CoefKind::Spearman, CoefKind::KendallTauB}) {
        out[i++] = Measure{g, c};
      }
    }
    return out;
  }();
  return measures;
}

std::string_view to_token(Grouping g) {
  switch (g) {
    case Grouping::Global:
      return "global";
    case Grouping::Input:
      return "input";
    case Grouping::Item:
      return "item";
    case Grouping::System:
      return "system";
  }
  throw std::logic_error("unknown Grouping");
}

std::string to_token(const Measure& m) {
  return std::string(to_token(m.grouping)) + "-" +
         std::string(to_token(m.coef));
}

Measure measure_from_token(std::string_view t) {
  for (const Measure& m : all_measures()) {
    if (to_token(m) == t) return m;
  }
  throw ValidationError("unknown measure token: " + std::string(t));
}

namespace {

// Accumulates group coefficients and produces the skip-and-count mean.
MeasureResult collect(std::vector<CoefResult> groups) {
  MeasureResult result;
  result.group_count = groups.size();
  CompensatedSum sum;
  std::size_t defined = 0;
  for (const CoefResult& g : groups) {
    if (g.is_defined()) {
      sum.add(g.value());
      ++defined;
    } else {
      ++result.undefined_group_count;
    }
  }
  if (defined > 0) {
    result.value = sum.value() / static_cast<double>(defined);
  }
  result.per_group = std::move(groups);
  return result;
}

}  // namespace

MeasureResult evaluate_frame(const Measure& measure, std::size_t systems,
                             std::size_t inputs, std::span<const double> x,
                             std::span<const double> z) {
  const std::size_t cells = systems * inputs;
  if (x.size() != cells || z.size() != cells) {
    throw std::invalid_argument("evaluate_frame: frame size mismatch");
  }

  switch (measure.grouping) {
    case Grouping::Global: {
      std::vector<CoefResult> groups;
      groups.push_back(correlation(measure.coef, x, z));
      return collect(std::move(groups));
    }
    case Grouping::Input: {
      std::vector<CoefResult> groups;
      groups.reserve(inputs);
      std::vector<double> xc(systems), zc(systems);
      for (std::size_t j = 0; j < inputs; ++j) {
        for (std::size_t i = 0; i < systems; ++i) {
          xc[i] = x[i * inputs + j];
          zc[i] = z[i * inputs + j];
        }
        groups.push_back(correlation(measure.coef, xc, zc));
      }
      return collect(std::move(groups));
    }
    case Grouping::Item: {
      std::vector<CoefResult> groups;
      groups.reserve(systems);
      for (std::size_t i = 0; i < systems; ++i) {
        groups.push_back(correlation(measure.coef,
                                     x.subspan(i * inputs, inputs),
                                     z.subspan(i * inputs, inputs)));
      }
      return collect(std::move(groups));
    }
    case Grouping::System: {
      // Row means in extended precision; system-level gaps between metrics
      // are often tiny.
      std::vector<double> xm(systems), zm(systems);
      for (std::size_t i = 0; i < systems; ++i) {
        long double sx = 0.0L, sz = 0.0L;
        for (std::size_t j = 0; j < inputs; ++j) {
          sx += x[i * inputs + j];
          sz += z[i * inputs + j];
        }
        xm[i] = static_cast<double>(sx / static_cast<long double>(inputs));
        zm[i] = static_cast<double>(sz / static_cast<long double>(inputs));
      }
      std::vector<CoefResult> groups;
      groups.push_back(correlation(measure.coef, xm, zm));
      return collect(std::move(groups));
    }
  }
  throw std::logic_error("unknown Grouping");
}

MeasureResult evaluate(const Measure& measure, const ScoreMatrix& x,
                       const ScoreMatrix& z) {
  if (!x.aligned_with(z)) {
    throw ValidationError("evaluate: matrices differ in shape or ids");
  }
  return evaluate_frame(measure, x.systems(), x.inputs(), x.values(),
                        z.values());
}

std::vector<std::pair<std::string, MeasureResult>> evaluate_all(
    const MetaEvalDataset& dataset, const Measure& measure) {
  std::vector<std::pair<std::string, MeasureResult>> out;
  out.reserve(dataset.metric_count());
  for (const MetricEntry& entry : dataset.metrics) {
    out.emplace_back(entry.name, evaluate(measure, entry.scores, dataset.human));
  }
  return out;
}

}  // namespace metaeval
