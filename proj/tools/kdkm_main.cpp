#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kdkm/estimate.hpp"
#include "kdkm/experiment.hpp"
#include "kdkm/io.hpp"

namespace {

struct GenFlags {
  std::uint64_t n = 100000;
  std::size_t dim = 3;
  std::size_t clumps = 8;
  double stddev_low = 0.5;
  double stddev_high = 2.0;
  double domain_lo = -100.0;
  double domain_hi = 100.0;
};

kdkm::GenSpec to_gen_spec(const GenFlags& flags, std::uint64_t seed) {
  kdkm::GenSpec spec;
  spec.n = flags.n;
  spec.dimensionality = flags.dim;
  spec.n_clumps = flags.clumps;
  spec.stddev_low = flags.stddev_low;
  spec.stddev_high = flags.stddev_high;
  spec.domain.lo.assign(flags.dim, flags.domain_lo);
  spec.domain.hi.assign(flags.dim, flags.domain_hi);
  spec.rng_seed = seed;
  return spec;
}

void add_gen_flags(CLI::App* cmd, GenFlags& flags, const std::string& prefix) {
  cmd->add_option("--" + prefix + "n", flags.n, "points to generate");
  cmd->add_option("--" + prefix + "dim", flags.dim, "dimensionality");
  cmd->add_option("--" + prefix + "clumps", flags.clumps, "number of Gaussian clumps");
  cmd->add_option("--" + prefix + "stddev-low", flags.stddev_low, "lower clump stddev bound");
  cmd->add_option("--" + prefix + "stddev-high", flags.stddev_high, "upper clump stddev bound");
  cmd->add_option("--" + prefix + "domain-lo", flags.domain_lo, "domain lower bound per axis");
  cmd->add_option("--" + prefix + "domain-hi", flags.domain_hi, "domain upper bound per axis");
}

struct RunFlags {
  std::string algorithm = "filter";
  int k = 8;
  std::string metric = "euclidean";
  int partitions = 4;
  unsigned workers = 4;
  double epsilon = 1e-9;
  int max_iterations = 1000;
  std::uint64_t seed = 1;
  int leaf_capacity = 1;
  bool shuffle = false;
  std::string input;
  std::string output;
  std::string format = "json";
  GenFlags gen;
};

void add_run_flags(CLI::App* cmd, RunFlags& flags) {
  cmd->add_option("--algorithm", flags.algorithm, "lloyd, filter, or two_level");
  cmd->add_option("--k", flags.k, "number of clusters");
  cmd->add_option("--metric", flags.metric, "euclidean, manhattan, or chebyshev");
  cmd->add_option("--partitions", flags.partitions, "shards for two_level");
  cmd->add_option("--workers", flags.workers, "thread pool cap");
  cmd->add_option("--epsilon", flags.epsilon, "convergence threshold on centroid movement");
  cmd->add_option("--max-iters", flags.max_iterations, "iteration cap");
  cmd->add_option("--seed", flags.seed, "seed for initialization and generation");
  cmd->add_option("--leaf-capacity", flags.leaf_capacity, "points per tree leaf");
  cmd->add_flag("--shuffle", flags.shuffle, "shuffle before partitioning");
  cmd->add_option("--input", flags.input, "dataset file (csv or binary)");
  cmd->add_option("--output", flags.output, "where to write results");
  cmd->add_option("--format", flags.format, "output format: csv or json");
  add_gen_flags(cmd, flags.gen, "gen-");
}

kdkm::ExperimentConfig to_config(const RunFlags& flags) {
  kdkm::ExperimentConfig config;
  config.algorithm = kdkm::algorithm_from_string(flags.algorithm);
  config.k = flags.k;
  config.metric = kdkm::metric_from_string(flags.metric);
  config.partitions = flags.partitions;
  config.workers = flags.workers;
  config.epsilon = flags.epsilon;
  config.max_iterations = flags.max_iterations;
  config.seed = flags.seed;
  config.leaf_capacity = flags.leaf_capacity;
  config.shuffle = flags.shuffle;
  config.input_path = flags.input;
  if (flags.input.empty()) config.gen = to_gen_spec(flags.gen, flags.seed);
  return config;
}

void print_summary(const kdkm::ReportRow& row) {
  std::cout << "algorithm=" << row.algorithm << " n=" << row.n << " dim=" << row.dimensionality
            << " k=" << row.k << " iterations=" << row.iterations
            << " distance_evaluations=" << row.distance_evaluations
            << " wall_seconds=" << row.wall_seconds << " wcss=" << row.wcss << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kd-tree accelerated k-means clustering toolkit"};
  app.require_subcommand(1);

  auto* generate = app.add_subcommand("generate", "write a synthetic Gaussian-clump dataset");
  GenFlags gen_flags;
  std::uint64_t gen_seed = 1;
  std::string gen_output;
  std::string gen_format = "csv";
  std::string gen_truth;
  add_gen_flags(generate, gen_flags, "");
  generate->add_option("--seed", gen_seed, "generator seed");
  generate->add_option("--output", gen_output, "dataset path")->required();
  generate->add_option("--format", gen_format, "dataset format: csv or binary");
  generate->add_option("--truth", gen_truth, "also write clump means and labels here (json)");
  generate->callback([&] {
    const kdkm::GenSpec spec = to_gen_spec(gen_flags, gen_seed);
    const kdkm::GeneratedDataset data = kdkm::generate(spec);
    kdkm::save_dataset(gen_output, data.points, kdkm::dataset_format_from_string(gen_format),
                       "generated: n=" + std::to_string(spec.n) +
                           " dim=" + std::to_string(spec.dimensionality) +
                           " clumps=" + std::to_string(spec.n_clumps) +
                           " seed=" + std::to_string(spec.rng_seed));
    if (!gen_truth.empty()) kdkm::save_ground_truth(data.truth, gen_truth);
    std::cout << "wrote " << data.points.size() << " points of dimension "
              << spec.dimensionality << " to " << gen_output << '\n';
  });

  auto* cluster = app.add_subcommand("cluster", "run one clustering job");
  RunFlags cluster_flags;
  add_run_flags(cluster, cluster_flags);
  cluster->callback([&] {
    const kdkm::ExperimentConfig config = to_config(cluster_flags);
    const std::vector<kdkm::Point> points = kdkm::acquire_points(config);
    const kdkm::ClusteringResult result = kdkm::run_single(points, config);
    if (!cluster_flags.output.empty()) {
      if (kdkm::output_format_from_string(cluster_flags.format) == kdkm::OutputFormat::Json) {
        kdkm::save_result_json(result, kdkm::config_echo(config), cluster_flags.output);
      } else {
        kdkm::save_result_csv(result, cluster_flags.output);
      }
    }
    print_summary(kdkm::make_report_row(points, config, result));
  });

  auto* sweep = app.add_subcommand("sweep", "run a k or dimensionality sweep with baselines");
  RunFlags sweep_flags;
  std::string sweep_mode = "k";
  std::vector<int> k_values;
  std::vector<int> dim_values;
  bool no_baseline = false;
  add_run_flags(sweep, sweep_flags);
  sweep->add_option("--mode", sweep_mode, "sweep axis: k or dim");
  sweep->add_option("--k-values", k_values, "cluster counts to sweep")->delimiter(',');
  sweep->add_option("--dim-values", dim_values, "dimensionalities to sweep")->delimiter(',');
  sweep->add_flag("--no-baseline", no_baseline, "skip the paired full-scan baseline");
  sweep->callback([&] {
    kdkm::SweepSettings settings;
    if (sweep_mode == "k") {
      settings.mode = kdkm::SweepSettings::Mode::K;
    } else if (sweep_mode == "dim") {
      settings.mode = kdkm::SweepSettings::Mode::Dimension;
    } else {
      throw CLI::ValidationError("--mode", "expected 'k' or 'dim'");
    }
    if (!k_values.empty()) settings.k_values = k_values;
    if (!dim_values.empty()) settings.dim_values = dim_values;
    settings.with_baseline = !no_baseline;
    const std::vector<kdkm::ReportRow> rows =
        kdkm::run_sweep(to_config(sweep_flags), settings);
    if (sweep_flags.output.empty()) {
      std::cout << kdkm::report_to_csv(rows);
    } else {
      kdkm::save_report(rows, sweep_flags.output,
                        kdkm::output_format_from_string(sweep_flags.format));
      std::cout << "wrote " << rows.size() << " rows to " << sweep_flags.output << '\n';
    }
  });

  auto* estimate = app.add_subcommand("estimate-mem", "worst-case candidate storage bound");
  std::uint64_t est_n = 0;
  std::uint64_t est_k = 0;
  double bytes_per_entry = 1.0;
  estimate->add_option("--n", est_n, "point count")->required()->check(CLI::Range(2ull, ~0ull));
  estimate->add_option("--k", est_k, "cluster count")->required()->check(CLI::Range(2ull, ~0ull));
  estimate->add_option("--bytes-per-entry", bytes_per_entry,
                       "entry width; 1 counts entries, 0.125 reads entries as bits");
  estimate->callback([&] {
    std::cout << kdkm::estimate_worst_case_bytes(est_n, est_k, bytes_per_entry) << '\n';
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
