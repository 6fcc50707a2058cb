#pragma once

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "metaeval/dataset.hpp"
#include "metaeval/rng.hpp"
#include "metaeval/score_matrix.hpp"

namespace fixtures {

using metaeval::MetaEvalDataset;
using metaeval::MetricEntry;
using metaeval::RngEngine;
using metaeval::ScoreMatrix;

inline std::vector<std::string> make_ids(const std::string& prefix,
                                         std::size_t count) {
  std::vector<std::string> ids;
  ids.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    ids.push_back(prefix + std::to_string(i + 1));
  }
  return ids;
}

inline ScoreMatrix matrix_from(std::size_t n, std::size_t m,
                               std::vector<double> values) {
  return ScoreMatrix(make_ids("sys", n), make_ids("in", m), std::move(values));
}

inline ScoreMatrix random_matrix(std::size_t n, std::size_t m, RngEngine& rng,
                                 double lo = 0.0, double hi = 1.0) {
  std::vector<double> values(n * m);
  for (double& v : values) v = metaeval::uniform(rng, lo, hi);
  return matrix_from(n, m, std::move(values));
}

inline ScoreMatrix noisy_copy(const ScoreMatrix& z, double sigma,
                              RngEngine& rng) {
  std::vector<double> values(z.values().begin(), z.values().end());
  for (double& v : values) v += sigma * metaeval::standard_normal(rng);
  return ScoreMatrix(z.system_ids(), z.input_ids(), std::move(values));
}

inline MetaEvalDataset dataset_of(ScoreMatrix human,
                                  std::vector<MetricEntry> metrics,
                                  std::string id = "fixture") {
  return metaeval::make_dataset(std::move(id), std::move(human),
                                std::move(metrics));
}

/// Unique scratch directory under the system temp dir, removed on scope exit.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<unsigned> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("metaeval_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

/// Writes matrix CSVs plus a manifest into dir; returns the manifest path.
inline std::filesystem::path write_dataset_files(
    const MetaEvalDataset& ds, const std::filesystem::path& dir) {
  metaeval::write_matrix_csv(ds.human, dir / "human.csv");
  std::string metrics_json;
  for (std::size_t k = 0; k < ds.metrics.size(); ++k) {
    const auto file = "metric_" + std::to_string(k) + ".csv";
    metaeval::write_matrix_csv(ds.metrics[k].scores, dir / file);
    if (k > 0) metrics_json += ", ";
    metrics_json +=
        "{\"name\": \"" + ds.metrics[k].name + "\", \"path\": \"" + file + "\"}";
  }
  const auto manifest = dir / "manifest.json";
  std::ofstream out(manifest);
  out << "{\"human\": {\"path\": \"human.csv\"}, \"metrics\": [" << metrics_json
      << "]}\n";
  return manifest;
}

}  // namespace fixtures
