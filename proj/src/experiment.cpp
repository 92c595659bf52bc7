#include "kdkm/experiment.hpp"

#include <chrono>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "kdkm/baseline.hpp"
#include "kdkm/filtering.hpp"
#include "kdkm/io.hpp"
#include "kdkm/kdtree.hpp"
#include "kdkm/twolevel.hpp"

namespace kdkm {

namespace {

using Clock = std::chrono::steady_clock;

FilterConfig filter_config_of(const ExperimentConfig& config) {
  FilterConfig fc;
  fc.metric = config.metric;
  fc.epsilon = config.epsilon;
  fc.max_iterations = config.max_iterations;
  return fc;
}

}  // namespace

Algorithm algorithm_from_string(const std::string& name) {
  if (name == "lloyd") return Algorithm::Lloyd;
  if (name == "filter") return Algorithm::Filter;
  if (name == "two_level" || name == "two-level") return Algorithm::TwoLevel;
  throw std::invalid_argument("unknown algorithm '" + name + "'");
}

std::string to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::Lloyd: return "lloyd";
    case Algorithm::Filter: return "filter";
    case Algorithm::TwoLevel: return "two_level";
  }
  throw std::invalid_argument("unknown algorithm value");
}

OutputFormat output_format_from_string(const std::string& name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  throw std::invalid_argument("unknown output format '" + name + "'");
}

nlohmann::json config_echo(const ExperimentConfig& config) {
  nlohmann::json echo{
      {"algorithm", to_string(config.algorithm)},
      {"k", config.k},
      {"metric", to_string(config.metric)},
      {"partitions", config.partitions},
      {"workers", config.workers},
      {"epsilon", config.epsilon},
      {"max_iterations", config.max_iterations},
      {"seed", config.seed},
      {"leaf_capacity", config.leaf_capacity},
      {"shuffle", config.shuffle},
  };
  if (!config.input_path.empty()) echo["input"] = config.input_path;
  return echo;
}

std::vector<Point> acquire_points(const ExperimentConfig& config) {
  if (!config.input_path.empty()) return load_dataset(config.input_path);
  if (!config.gen) {
    throw std::invalid_argument("no input path and no generation spec");
  }
  return generate(*config.gen).points;
}

ClusteringResult run_single(std::span<const Point> points, const ExperimentConfig& config) {
  if (config.k < 1) throw std::invalid_argument("k must be >= 1");
  const FilterConfig fc = filter_config_of(config);

  switch (config.algorithm) {
    case Algorithm::Lloyd: {
      const CandidateSet initial = lloyd_init(points, config.k, config.seed);
      return run_lloyd(points, initial, fc, config.workers);
    }
    case Algorithm::Filter: {
      const auto build_start = Clock::now();
      const KdTree tree = KdTree::build(points, config.leaf_capacity);
      const double build_seconds =
          std::chrono::duration<double>(Clock::now() - build_start).count();
      const CandidateSet initial = lloyd_init(points, config.k, config.seed);
      ClusteringResult result = run_filtering(tree, initial, fc);
      result.metrics.phase_seconds.insert(result.metrics.phase_seconds.begin(),
                                          {"build", build_seconds});
      result.metrics.total_seconds += build_seconds;
      return result;
    }
    case Algorithm::TwoLevel: {
      TwoLevelConfig tc;
      tc.partitions = config.partitions;
      tc.k = config.k;
      tc.filter_config = fc;
      tc.rng_seed = config.seed;
      tc.shuffle = config.shuffle;
      tc.leaf_capacity = config.leaf_capacity;
      tc.workers = config.workers;
      return run_two_level(points, tc);
    }
  }
  throw std::invalid_argument("unknown algorithm value");
}

ReportRow make_report_row(std::span<const Point> points, const ExperimentConfig& config,
                          const ClusteringResult& result) {
  ReportRow row;
  row.algorithm = to_string(config.algorithm);
  row.n = points.size();
  row.dimensionality = points.empty() ? 0 : points.front().size();
  row.k = config.k;
  row.metric = to_string(config.metric);
  row.partitions = config.algorithm == Algorithm::TwoLevel ? config.partitions : 1;
  row.workers = config.workers;
  row.seed = config.seed;
  row.iterations = result.iterations;
  row.distance_evaluations = result.metrics.counters.distance_evaluations;
  row.pruning_evaluations = result.metrics.counters.pruning_evaluations;
  row.node_visits = result.metrics.counters.node_visits;
  row.resolve_distance_evaluations = result.metrics.resolve_distance_evaluations;
  row.wall_seconds = result.metrics.total_seconds;
  row.wcss = within_cluster_sum_of_squares(points, result.centroids, result.assignments);
  return row;
}

std::vector<ReportRow> run_sweep(const ExperimentConfig& base, const SweepSettings& settings) {
  std::vector<ReportRow> rows;

  auto run_value = [&](const ExperimentConfig& config, std::span<const Point> points) {
    ClusteringResult result = run_single(points, config);
    ReportRow row = make_report_row(points, config, result);
    if (settings.with_baseline && config.algorithm != Algorithm::Lloyd) {
      ExperimentConfig paired = config;
      paired.algorithm = Algorithm::Lloyd;
      const ClusteringResult baseline = run_single(points, paired);
      row.lloyd_distance_evaluations = baseline.metrics.counters.distance_evaluations;
      row.lloyd_wall_seconds = baseline.metrics.total_seconds;
      if (row.wall_seconds > 0.0) {
        row.speedup_vs_lloyd = *row.lloyd_wall_seconds / row.wall_seconds;
      }
    }
    rows.push_back(std::move(row));
  };

  if (settings.mode == SweepSettings::Mode::K) {
    const std::vector<Point> points = acquire_points(base);
    for (int k : settings.k_values) {
      ExperimentConfig config = base;
      config.k = k;
      run_value(config, points);
    }
    return rows;
  }

  if (!base.input_path.empty() || !base.gen) {
    throw std::invalid_argument("dimension sweep needs a generation spec, not an input file");
  }
  for (int dim : settings.dim_values) {
    if (dim < 1) throw std::invalid_argument("dimension sweep values must be >= 1");
    ExperimentConfig config = base;
    GenSpec spec = *base.gen;
    spec.dimensionality = static_cast<std::size_t>(dim);
    spec.domain.lo.assign(static_cast<std::size_t>(dim), base.gen->domain.lo[0]);
    spec.domain.hi.assign(static_cast<std::size_t>(dim), base.gen->domain.hi[0]);
    config.gen = spec;
    const std::vector<Point> points = acquire_points(config);
    run_value(config, points);
  }
  return rows;
}

namespace {

constexpr const char* kReportColumns =
    "algorithm,n,dim,k,metric,partitions,workers,seed,iterations,distance_evaluations,"
    "pruning_evaluations,node_visits,resolve_distance_evaluations,wall_seconds,wcss,"
    "lloyd_distance_evaluations,lloyd_wall_seconds,speedup_vs_lloyd";

template <typename T>
void append_optional(std::ostringstream& out, const std::optional<T>& value) {
  out << ',';
  if (value) out << *value;
}

}  // namespace

std::string report_to_csv(std::span<const ReportRow> rows) {
  std::ostringstream out;
  out << kReportColumns << '\n';
  for (const ReportRow& row : rows) {
    out << row.algorithm << ',' << row.n << ',' << row.dimensionality << ',' << row.k << ','
        << row.metric << ',' << row.partitions << ',' << row.workers << ',' << row.seed << ','
        << row.iterations << ',' << row.distance_evaluations << ',' << row.pruning_evaluations
        << ',' << row.node_visits << ',' << row.resolve_distance_evaluations << ','
        << row.wall_seconds << ',' << row.wcss;
    append_optional(out, row.lloyd_distance_evaluations);
    append_optional(out, row.lloyd_wall_seconds);
    append_optional(out, row.speedup_vs_lloyd);
    out << '\n';
  }
  return out.str();
}

nlohmann::json report_to_json(std::span<const ReportRow> rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const ReportRow& row : rows) {
    nlohmann::json j{
        {"algorithm", row.algorithm},
        {"n", row.n},
        {"dim", row.dimensionality},
        {"k", row.k},
        {"metric", row.metric},
        {"partitions", row.partitions},
        {"workers", row.workers},
        {"seed", row.seed},
        {"iterations", row.iterations},
        {"distance_evaluations", row.distance_evaluations},
        {"pruning_evaluations", row.pruning_evaluations},
        {"node_visits", row.node_visits},
        {"resolve_distance_evaluations", row.resolve_distance_evaluations},
        {"wall_seconds", row.wall_seconds},
        {"wcss", row.wcss},
        {"lloyd_distance_evaluations", nullptr},
        {"lloyd_wall_seconds", nullptr},
        {"speedup_vs_lloyd", nullptr},
    };
    if (row.lloyd_distance_evaluations) {
      j["lloyd_distance_evaluations"] = *row.lloyd_distance_evaluations;
    }
    if (row.lloyd_wall_seconds) j["lloyd_wall_seconds"] = *row.lloyd_wall_seconds;
    if (row.speedup_vs_lloyd) j["speedup_vs_lloyd"] = *row.speedup_vs_lloyd;
    out.push_back(std::move(j));
  }
  return out;
}

void save_report(std::span<const ReportRow> rows, const std::string& path, OutputFormat format) {
  std::ofstream ofs(path);
  if (!ofs) throw std::runtime_error(path + ": cannot open for writing");
  if (format == OutputFormat::Csv) {
    ofs << report_to_csv(rows);
  } else {
    ofs << report_to_json(rows).dump(2) << '\n';
  }
  if (!ofs) throw std::runtime_error(path + ": write failed");
}

}  // namespace kdkm
