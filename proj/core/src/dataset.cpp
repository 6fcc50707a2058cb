#include "metaeval/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "metaeval/errors.hpp"
#include "metaeval/numeric.hpp"

namespace metaeval {

const MetricEntry& MetaEvalDataset::metric(std::string_view name) const {
  for (const MetricEntry& e : metrics) {
    if (e.name == name) return e;
  }
  throw ValidationError("dataset has no metric named '" + std::string(name) +
                        "'");
}

std::vector<std::string> MetaEvalDataset::metric_names() const {
  std::vector<std::string> names;
  names.reserve(metrics.size());
  for (const MetricEntry& e : metrics) names.push_back(e.name);
  return names;
}

void MetaEvalDataset::validate() const {
  if (metrics.empty()) {
    throw ValidationError("dataset needs at least one metric");
  }
  std::unordered_set<std::string_view> names;
  for (const MetricEntry& e : metrics) {
    if (e.name.empty()) throw ValidationError("metric with empty name");
    if (!names.insert(e.name).second) {
      throw ValidationError("duplicate metric name: " + e.name);
    }
    if (!e.scores.aligned_with(human)) {
      throw ValidationError("metric '" + e.name +
                            "' does not match the human matrix shape/ids");
    }
  }
}

MetaEvalDataset make_dataset(std::string source_id, ScoreMatrix human,
                             std::vector<MetricEntry> metrics,
                             std::optional<Scale> human_scale) {
  MetaEvalDataset ds{std::move(source_id), std::move(human), human_scale,
                     std::move(metrics)};
  ds.validate();
  return ds;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string::size_type start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

double parse_cell(const std::string& field, const std::filesystem::path& path,
                  std::size_t row, std::size_t col) {
  double v = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto res = std::from_chars(begin, end, v);
  const auto where = [&] {
    return path.string() + " row " + std::to_string(row) + " column " +
           std::to_string(col);
  };
  if (res.ec != std::errc() || res.ptr != end || field.empty()) {
    throw ValidationError("non-numeric cell '" + field + "' in " + where());
  }
  if (!std::isfinite(v)) {
    throw ValidationError("non-finite cell '" + field + "' in " + where());
  }
  return v;
}

}  // namespace

ScoreMatrix read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open matrix file: " + path.string());

  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.size() < 2) {
    throw ValidationError("matrix file too short: " + path.string());
  }

  const std::vector<std::string> header = split_csv_line(lines[0]);
  if (header.size() < 2) {
    throw ValidationError("matrix header needs at least one input id: " +
                          path.string());
  }
  std::vector<std::string> input_ids(header.begin() + 1, header.end());
  const std::size_t m = input_ids.size();

  std::vector<std::string> system_ids;
  std::vector<double> values;
  values.reserve((lines.size() - 1) * m);
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const std::vector<std::string> fields = split_csv_line(lines[r]);
    if (fields.size() != m + 1) {
      throw ValidationError("row " + std::to_string(r) + " of " +
                            path.string() + " has " +
                            std::to_string(fields.size() - 1) +
                            " cells, expected " + std::to_string(m));
    }
    system_ids.push_back(fields[0]);
    for (std::size_t c = 1; c < fields.size(); ++c) {
      values.push_back(parse_cell(fields[c], path, r, c));
    }
  }
  return ScoreMatrix(std::move(system_ids), std::move(input_ids),
                     std::move(values));
}

void write_matrix_csv(const ScoreMatrix& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write matrix file: " + path.string());
  out << "system";
  for (const auto& id : m.input_ids()) out << ',' << id;
  out << '\n';
  for (std::size_t i = 0; i < m.systems(); ++i) {
    out << m.system_ids()[i];
    for (std::size_t j = 0; j < m.inputs(); ++j) {
      out << ',' << to_decimal_string(m.at(i, j));
    }
    out << '\n';
  }
  if (!out) throw IoError("failed writing matrix file: " + path.string());
}

namespace {

std::optional<Scale> parse_scale(const nlohmann::json& node,
                                 const std::string& context) {
  if (!node.contains("scale")) return std::nullopt;
  const auto& s = node.at("scale");
  if (!s.is_array() || s.size() != 2 || !s[0].is_number() ||
      !s[1].is_number()) {
    throw ValidationError(context + ": scale must be a [lo, hi] number pair");
  }
  Scale scale{s[0].get<double>(), s[1].get<double>()};
  if (!(scale.lo < scale.hi)) {
    throw ValidationError(context + ": scale needs lo < hi");
  }
  return scale;
}

}  // namespace

MetaEvalDataset load_dataset(const std::filesystem::path& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw IoError("cannot open manifest: " + manifest_path.string());

  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("manifest is not valid JSON (" +
                          manifest_path.string() + "): " + e.what());
  }

  const auto base = manifest_path.has_parent_path()
                        ? manifest_path.parent_path()
                        : std::filesystem::path(".");
  auto resolve = [&](const std::string& p) {
    const std::filesystem::path fp(p);
    return fp.is_absolute() ? fp : base / fp;
  };

  try {
    const auto& human_node = doc.at("human");
    const auto human_path = resolve(human_node.at("path").get<std::string>());
    ScoreMatrix human = read_matrix_csv(human_path);
    const auto human_scale = parse_scale(human_node, "human");

    std::vector<MetricEntry> metrics;
    for (const auto& metric_node : doc.at("metrics")) {
      const std::string name = metric_node.at("name").get<std::string>();
      const auto metric_path =
          resolve(metric_node.at("path").get<std::string>());
      ScoreMatrix scores = read_matrix_csv(metric_path);
      if (!scores.aligned_with(human)) {
        throw ValidationError("metric '" + name + "' (" +
                              metric_path.string() +
                              ") does not match the human matrix shape/ids");
      }
      metrics.push_back(MetricEntry{name, std::move(scores),
                                    parse_scale(metric_node, name)});
    }

    if (human.systems() < 2 || human.inputs() < 2) {
      throw ValidationError("dataset needs at least 2 systems and 2 inputs");
    }
    return make_dataset(manifest_path.string(), std::move(human),
                        std::move(metrics), human_scale);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("malformed manifest " + manifest_path.string() +
                          ": " + e.what());
  }
}

}  // namespace metaeval
