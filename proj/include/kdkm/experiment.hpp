#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "kdkm/datagen.hpp"
#include "kdkm/geometry.hpp"
#include "kdkm/metrics.hpp"

namespace kdkm {

enum class Algorithm { Lloyd, Filter, TwoLevel };

Algorithm algorithm_from_string(const std::string& name);
std::string to_string(Algorithm algorithm);

enum class OutputFormat { Csv, Json };

OutputFormat output_format_from_string(const std::string& name);

struct ExperimentConfig {
  Algorithm algorithm = Algorithm::Filter;
  std::string input_path;        // dataset file; empty means generate
  std::optional<GenSpec> gen;    // used when input_path is empty
  int k = 8;
  Metric metric = Metric::Euclidean;
  int partitions = 4;
  unsigned workers = 4;
  double epsilon = 1e-9;
  int max_iterations = 1000;
  std::uint64_t seed = 1;
  int leaf_capacity = 1;
  bool shuffle = false;
};

nlohmann::json config_echo(const ExperimentConfig& config);

// Loads config.input_path, or generates from config.gen when the path is
// empty.
std::vector<Point> acquire_points(const ExperimentConfig& config);

ClusteringResult run_single(std::span<const Point> points, const ExperimentConfig& config);

struct ReportRow {
  std::string algorithm;
  std::size_t n = 0;
  std::size_t dimensionality = 0;
  int k = 0;
  std::string metric;
  int partitions = 0;
  unsigned workers = 0;
  std::uint64_t seed = 0;
  int iterations = 0;
  std::uint64_t distance_evaluations = 0;
  std::uint64_t pruning_evaluations = 0;
  std::uint64_t node_visits = 0;
  std::uint64_t resolve_distance_evaluations = 0;
  double wall_seconds = 0.0;
  double wcss = 0.0;
  // Paired full-scan baseline; absent for lloyd rows or unpaired runs.
  std::optional<std::uint64_t> lloyd_distance_evaluations;
  std::optional<double> lloyd_wall_seconds;
  std::optional<double> speedup_vs_lloyd;
};

struct SweepSettings {
  enum class Mode { K, Dimension };
  Mode mode = Mode::K;
  std::vector<int> k_values = {2, 4, 8, 16, 32, 64, 100};
  std::vector<int> dim_values = {2, 3, 5, 10, 15, 20};
  bool with_baseline = true;
};

ReportRow make_report_row(std::span<const Point> points, const ExperimentConfig& config,
                          const ClusteringResult& result);

// One row per swept value. K mode reuses one dataset; dimension mode
// regenerates per dimensionality and therefore needs a generation spec whose
// first axis's bounds replicate across the swept dimensionality.
std::vector<ReportRow> run_sweep(const ExperimentConfig& base, const SweepSettings& settings);

std::string report_to_csv(std::span<const ReportRow> rows);
nlohmann::json report_to_json(std::span<const ReportRow> rows);
void save_report(std::span<const ReportRow> rows, const std::string& path, OutputFormat format);

}  // namespace kdkm
