#include "kdkm/io.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "kdkm/rng.hpp"

static_assert(std::endian::native == std::endian::little,
              "binary dataset codec assumes a little-endian host");

namespace kdkm {

namespace {

constexpr char kMagic[4] = {'K', 'D', 'K', 'M'};
constexpr unsigned char kVersion = 1;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::runtime_error(path + ": " + what);
}

[[noreturn]] void fail_line(const std::string& path, std::size_t line, const std::string& what) {
  fail(path, "line " + std::to_string(line) + ": " + what);
}

double parse_double(std::string_view token, const std::string& path, std::size_t line) {
  std::size_t begin = 0;
  std::size_t end = token.size();
  while (begin < end && (token[begin] == ' ' || token[begin] == '\t')) ++begin;
  while (end > begin && (token[end - 1] == ' ' || token[end - 1] == '\t' ||
                         token[end - 1] == '\r')) {
    --end;
  }
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data() + begin, token.data() + end, value);
  if (ec != std::errc{} || ptr != token.data() + end || begin == end) {
    fail_line(path, line, "cannot parse '" + std::string(token) + "' as a real");
  }
  return value;
}

std::vector<Point> load_csv(std::ifstream& ifs, const std::string& path) {
  std::vector<Point> points;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(ifs, line)) {
    ++line_no;
    std::string_view view = line;
    if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
    if (view.empty() || view.front() == '#') continue;

    Point p;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = view.find(',', start);
      const std::size_t stop = comma == std::string_view::npos ? view.size() : comma;
      p.push_back(parse_double(view.substr(start, stop - start), path, line_no));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (!points.empty() && p.size() != points.front().size()) {
      fail_line(path, line_no,
                "dimension mismatch: got " + std::to_string(p.size()) + ", expected " +
                    std::to_string(points.front().size()));
    }
    points.push_back(std::move(p));
  }
  if (points.empty()) fail(path, "no data points");
  return points;
}

std::vector<Point> load_binary(std::ifstream& ifs, const std::string& path) {
  char magic[4];
  unsigned char version = 0;
  std::uint64_t n = 0;
  std::uint32_t m = 0;
  if (!ifs.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
    fail(path, "bad magic bytes");
  }
  if (!ifs.read(reinterpret_cast<char*>(&version), 1) || version != kVersion) {
    fail(path, "unsupported version " + std::to_string(version));
  }
  if (!ifs.read(reinterpret_cast<char*>(&n), 8) || !ifs.read(reinterpret_cast<char*>(&m), 4)) {
    fail(path, "truncated header");
  }
  if (n > 0 && m < 1) fail(path, "dimensionality must be >= 1");

  std::vector<Point> points;
  points.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    Point p(m);
    if (!ifs.read(reinterpret_cast<char*>(p.data()), static_cast<std::streamsize>(m) * 8)) {
      fail(path, "truncated at point " + std::to_string(i) + " of " + std::to_string(n));
    }
    points.push_back(std::move(p));
  }
  return points;
}

void append_double(std::string& out, double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  out.append(buf, ptr);
}

void write_comment_lines(std::ofstream& ofs, const std::string& comment) {
  std::size_t start = 0;
  while (start <= comment.size() && !comment.empty()) {
    const std::size_t stop = comment.find('\n', start);
    ofs << "# " << comment.substr(start, stop - start) << '\n';
    if (stop == std::string::npos) break;
    start = stop + 1;
  }
}

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream ofs(path, mode);
  if (!ofs) fail(path, "cannot open for writing");
  return ofs;
}

nlohmann::json point_rows(const std::vector<Point>& points) {
  nlohmann::json rows = nlohmann::json::array();
  for (const Point& p : points) rows.push_back(p);
  return rows;
}

}  // namespace

DatasetFormat dataset_format_from_string(const std::string& name) {
  if (name == "csv") return DatasetFormat::Csv;
  if (name == "binary" || name == "bin") return DatasetFormat::Binary;
  throw std::invalid_argument("unknown dataset format '" + name + "'");
}

std::vector<Point> load_dataset(const std::string& path, std::optional<DatasetFormat> format) {
  std::ifstream ifs(path, std::ios::binary);
  if (!ifs) fail(path, "cannot open");
  if (!format) {
    char magic[4] = {};
    ifs.read(magic, 4);
    const bool is_binary = ifs.gcount() == 4 && std::memcmp(magic, kMagic, 4) == 0;
    ifs.clear();
    ifs.seekg(0);
    format = is_binary ? DatasetFormat::Binary : DatasetFormat::Csv;
  }
  return *format == DatasetFormat::Binary ? load_binary(ifs, path) : load_csv(ifs, path);
}

void save_dataset(const std::string& path, std::span<const Point> points, DatasetFormat format,
                  const std::string& header_comment) {
  if (points.empty()) throw std::invalid_argument("save_dataset: no points");
  const std::size_t m = points.front().size();
  for (const Point& p : points) {
    if (p.size() != m) throw std::invalid_argument("save_dataset: ragged dimensions");
  }

  if (format == DatasetFormat::Csv) {
    std::ofstream ofs = open_out(path);
    write_comment_lines(ofs, header_comment);
    std::string row;
    for (const Point& p : points) {
      row.clear();
      for (std::size_t d = 0; d < m; ++d) {
        if (d) row.push_back(',');
        append_double(row, p[d]);
      }
      row.push_back('\n');
      ofs << row;
    }
    if (!ofs) fail(path, "write failed");
    return;
  }

  std::ofstream ofs = open_out(path, std::ios::binary);
  const std::uint64_t n = points.size();
  const std::uint32_t m32 = static_cast<std::uint32_t>(m);
  ofs.write(kMagic, 4);
  ofs.write(reinterpret_cast<const char*>(&kVersion), 1);
  ofs.write(reinterpret_cast<const char*>(&n), 8);
  ofs.write(reinterpret_cast<const char*>(&m32), 4);
  for (const Point& p : points) {
    ofs.write(reinterpret_cast<const char*>(p.data()), static_cast<std::streamsize>(m) * 8);
  }
  if (!ofs) fail(path, "write failed");
}

nlohmann::json result_to_json(const ClusteringResult& result, const nlohmann::json& config_echo) {
  nlohmann::json phases = nlohmann::json::array();
  for (const auto& [name, seconds] : result.metrics.phase_seconds) {
    phases.push_back({{"name", name}, {"seconds", seconds}});
  }
  return nlohmann::json{
      {"schema", "kdkm-result-v1"},
      {"config", config_echo},
      {"k", result.centroids.size()},
      {"iterations", result.iterations},
      {"iterations_level1", result.iterations_level1},
      {"centroids", point_rows(result.centroids)},
      {"assignments", result.assignments},
      {"metrics",
       {{"distance_evaluations", result.metrics.counters.distance_evaluations},
        {"pruning_evaluations", result.metrics.counters.pruning_evaluations},
        {"node_visits", result.metrics.counters.node_visits},
        {"resolve_distance_evaluations", result.metrics.resolve_distance_evaluations},
        {"distance_evaluations_per_iteration",
         result.metrics.distance_evaluations_per_iteration},
        {"peak_tree_bytes_estimate", result.metrics.peak_tree_bytes_estimate},
        {"phases", phases},
        {"total_seconds", result.metrics.total_seconds}}},
  };
}

ClusteringResult result_from_json(const nlohmann::json& doc) {
  if (doc.at("schema").get<std::string>() != "kdkm-result-v1") {
    throw std::runtime_error("unexpected result schema");
  }
  ClusteringResult result;
  for (const auto& row : doc.at("centroids")) {
    result.centroids.push_back(row.get<Point>());
  }
  result.assignments = doc.at("assignments").get<std::vector<int>>();
  result.iterations = doc.at("iterations").get<int>();
  result.iterations_level1 = doc.at("iterations_level1").get<std::vector<int>>();

  const nlohmann::json& metrics = doc.at("metrics");
  result.metrics.counters.distance_evaluations =
      metrics.at("distance_evaluations").get<std::uint64_t>();
  result.metrics.counters.pruning_evaluations =
      metrics.at("pruning_evaluations").get<std::uint64_t>();
  result.metrics.counters.node_visits = metrics.at("node_visits").get<std::uint64_t>();
  result.metrics.resolve_distance_evaluations =
      metrics.at("resolve_distance_evaluations").get<std::uint64_t>();
  result.metrics.distance_evaluations_per_iteration =
      metrics.at("distance_evaluations_per_iteration").get<std::vector<std::uint64_t>>();
  result.metrics.peak_tree_bytes_estimate =
      metrics.at("peak_tree_bytes_estimate").get<std::uint64_t>();
  for (const auto& phase : metrics.at("phases")) {
    result.metrics.add_phase(phase.at("name").get<std::string>(),
                             phase.at("seconds").get<double>());
  }
  result.metrics.total_seconds = metrics.at("total_seconds").get<double>();
  return result;
}

void save_result_json(const ClusteringResult& result, const nlohmann::json& config_echo,
                      const std::string& path) {
  std::ofstream ofs = open_out(path);
  ofs << result_to_json(result, config_echo).dump(2) << '\n';
  if (!ofs) fail(path, "write failed");
}

void save_result_csv(const ClusteringResult& result, const std::string& path) {
  std::ofstream ofs = open_out(path);
  ofs << "# kdkm-result-v1\n";
  ofs << "# centroid,<index>,<coordinates...> then assignment,<point>,<cluster>\n";
  std::string row;
  for (std::size_t c = 0; c < result.centroids.size(); ++c) {
    row = "centroid," + std::to_string(c);
    for (double v : result.centroids[c]) {
      row.push_back(',');
      append_double(row, v);
    }
    row.push_back('\n');
    ofs << row;
  }
  for (std::size_t i = 0; i < result.assignments.size(); ++i) {
    ofs << "assignment," << i << ',' << result.assignments[i] << '\n';
  }
  if (!ofs) fail(path, "write failed");
}

ClusteringResult load_result_json(const std::string& path) {
  std::ifstream ifs(path);
  if (!ifs) fail(path, "cannot open");
  nlohmann::json doc;
  ifs >> doc;
  return result_from_json(doc);
}

void save_ground_truth(const GroundTruth& truth, const std::string& path) {
  const nlohmann::json doc{
      {"schema", "kdkm-ground-truth-v1"},
      {"generator", kGeneratorId},
      {"means", point_rows(truth.means)},
      {"stddevs", truth.stddevs},
      {"labels", truth.labels},
  };
  std::ofstream ofs = open_out(path);
  ofs << doc.dump(2) << '\n';
  if (!ofs) fail(path, "write failed");
}

}  // namespace kdkm
