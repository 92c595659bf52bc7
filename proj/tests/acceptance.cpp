// Acceptance gate: one line per criterion, nonzero exit on any hard failure.
// Criterion 9 is a machine-dependent scaling observation and never fails the
// run; it reports [SOFT-FAIL] instead.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "kdkm/baseline.hpp"
#include "kdkm/datagen.hpp"
#include "kdkm/estimate.hpp"
#include "kdkm/filtering.hpp"
#include "kdkm/geometry.hpp"
#include "kdkm/kdtree.hpp"
#include "kdkm/rng.hpp"
#include "kdkm/twolevel.hpp"

using namespace kdkm;

namespace {

struct Outcome {
  bool pass = false;
  bool soft = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::vector<Point> random_points(std::mt19937_64& rng, std::size_t n, std::size_t dim,
                                 double lo, double hi) {
  std::vector<Point> points(n, Point(dim));
  for (auto& p : points) {
    for (auto& c : p) c = uniform_in(rng, lo, hi);
  }
  return points;
}

std::vector<int> brute_assign(std::span<const Point> points, std::span<const Point> centroids,
                              Metric metric) {
  std::vector<int> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    int best = 0;
    double best_d = comparable_distance(points[i], centroids[0], metric);
    for (std::size_t j = 1; j < centroids.size(); ++j) {
      const double d = comparable_distance(points[i], centroids[j], metric);
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(j);
      }
    }
    out[i] = best;
  }
  return out;
}

double wcss_of(std::span<const Point> points, const std::vector<Point>& centroids) {
  const auto assignments = brute_assign(points, centroids, Metric::Euclidean);
  return within_cluster_sum_of_squares(points, centroids, assignments);
}

// Shared dataset for criteria 3, 4 and 9: well-separated clumps, large
// enough that a full scan is visibly more work than the filtered traversal.
const GeneratedDataset& benchmark_dataset() {
  static const GeneratedDataset dataset = [] {
    GenSpec spec;
    spec.n = 100000;
    spec.dimensionality = 15;
    spec.n_clumps = 8;
    spec.stddev_low = 0.5;
    spec.stddev_high = 1.5;
    spec.domain.lo.assign(15, -100.0);
    spec.domain.hi.assign(15, 100.0);
    spec.rng_seed = 42;
    return generate(spec);
  }();
  return dataset;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

// --- criterion 1 -----------------------------------------------------------
// Filtered clustering must reproduce the full-scan trajectory: same centroid
// sequence within 1e-9 per coordinate, same final assignments, epsilon 0.
Outcome criterion_oracle_equivalence() {
  const auto start = std::chrono::steady_clock::now();
  const int trials = 200;
  double max_drift = 0.0;
  for (int t = 0; t < trials; ++t) {
    std::mt19937_64 rng(900 + t);
    const std::size_t n = 20 + uniform_below(rng, 181);
    const std::size_t dim = 1 + uniform_below(rng, 5);
    const int k = 1 + static_cast<int>(uniform_below(rng, 8));
    const auto points = random_points(rng, n, dim, -50.0, 50.0);
    const auto tree = KdTree::build(points);
    const CandidateSet init = lloyd_init(points, k, 900 + t);

    CandidateSet filtered = init;
    LloydState lloyd{init, {}};
    Counters fc, lc;
    for (int it = 0; it < 500; ++it) {
      filter_pass(tree, filtered, Metric::Euclidean, fc);
      const double fm = update_step(filtered, Metric::Euclidean);
      const double lm = lloyd_iterate(points, lloyd, Metric::Euclidean, 1, lc);
      for (int j = 0; j < k; ++j) {
        for (std::size_t d = 0; d < dim; ++d) {
          const double drift = std::abs(filtered.candidates[j].position[d] -
                                        lloyd.centroids.candidates[j].position[d]);
          max_drift = std::max(max_drift, drift);
        }
      }
      if (max_drift > 1e-9) {
        return {false, false,
                "trial " + std::to_string(t) + " drifted " + fmt(max_drift) + " at iteration " +
                    std::to_string(it)};
      }
      if (fm == 0.0 && lm == 0.0) break;
    }

    FilterConfig config;
    config.epsilon = 0.0;
    const ClusteringResult run = run_filtering(tree, init, config);
    if (run.assignments != lloyd.assignments) {
      return {false, false, "trial " + std::to_string(t) + ": final assignments differ"};
    }
  }
  const double elapsed = seconds_since(start);
  const bool in_time = elapsed < 10.0;
  return {in_time, false,
          std::to_string(trials) + "/" + std::to_string(trials) + " instances, max drift " +
              fmt(max_drift) + ", " + fmt(elapsed) + "s" + (in_time ? "" : " (over 10s budget)")};
}

// --- criterion 2 -----------------------------------------------------------
// Whenever is_farther says a candidate loses everywhere in a cell, an 11^m
// grid over the cell must contain no point strictly closer to it.
Outcome criterion_pruning_soundness() {
  const int trials = 600;
  int positives = 0;
  int violations = 0;
  constexpr Metric metrics[] = {Metric::Euclidean, Metric::Manhattan, Metric::Chebyshev};
  for (int t = 0; t < trials; ++t) {
    std::mt19937_64 rng(2200 + t);
    const std::size_t m = 1 + uniform_below(rng, 4);
    const Metric metric = metrics[t % 3];
    BoundingBox cell;
    cell.lo.resize(m);
    cell.hi.resize(m);
    for (std::size_t d = 0; d < m; ++d) {
      const double a = uniform_in(rng, -10.0, 10.0);
      const double b = uniform_in(rng, -10.0, 10.0);
      cell.lo[d] = std::min(a, b);
      cell.hi[d] = std::max(a, b);
    }
    Point z(m), z_star(m);
    for (std::size_t d = 0; d < m; ++d) {
      z[d] = uniform_in(rng, -30.0, 30.0);
      z_star[d] = uniform_in(rng, -30.0, 30.0);
    }
    if (!is_farther(z, z_star, cell, metric)) continue;
    ++positives;

    std::vector<std::size_t> steps(m, 0);
    Point p(m);
    for (;;) {
      for (std::size_t d = 0; d < m; ++d) {
        p[d] = cell.lo[d] + (cell.hi[d] - cell.lo[d]) * static_cast<double>(steps[d]) / 10.0;
      }
      if (comparable_distance(z, p, metric) < comparable_distance(z_star, p, metric)) {
        ++violations;
        break;
      }
      std::size_t d = 0;
      while (d < m && ++steps[d] == 11) steps[d++] = 0;
      if (d == m) break;
    }
  }
  return {violations == 0 && positives >= 100, false,
          std::to_string(positives) + " prunes over " + std::to_string(trials) + " triples, " +
              std::to_string(violations) + " grid violations"};
}

// --- criterion 3 -----------------------------------------------------------
// On well-separated clumps the traversal must stay under half the full-scan
// distance work per iteration and beat the full scan on wall time.
Outcome criterion_pruning_effectiveness() {
  const auto& data = benchmark_dataset();
  const std::span<const Point> points(data.points);
  const std::size_t n = points.size();
  const int k = 8;
  const CandidateSet init = lloyd_init(points, k, 42);
  FilterConfig config;

  const auto f_start = std::chrono::steady_clock::now();
  const KdTree tree = KdTree::build(points);
  const ClusteringResult filtered = run_filtering(tree, init, config);
  const double filter_wall = seconds_since(f_start);

  const auto l_start = std::chrono::steady_clock::now();
  const ClusteringResult lloyd = run_lloyd(points, init, config, 1);
  const double lloyd_wall = seconds_since(l_start);

  const std::uint64_t budget = n * static_cast<std::uint64_t>(k) / 2;
  std::uint64_t worst_iteration = 0;
  for (const std::uint64_t e : filtered.metrics.distance_evaluations_per_iteration) {
    worst_iteration = std::max(worst_iteration, e);
  }
  const bool evals_ok = worst_iteration < budget;
  const bool wall_ok = filter_wall < lloyd_wall;
  const double eval_ratio =
      static_cast<double>(worst_iteration) / (static_cast<double>(n) * k);
  const double speedup = lloyd_wall / filter_wall;

  std::string detail = "worst iteration " + std::to_string(worst_iteration) + " of " +
                       std::to_string(n * static_cast<std::uint64_t>(k)) + " full-scan evals (" +
                       fmt(eval_ratio * 100.0) + "%), wall " + fmt(filter_wall) + "s vs " +
                       fmt(lloyd_wall) + "s full scan (" + fmt(speedup) + "x)";
  detail +=
      "; context: published FPGA accelerations of this algorithm family report "
      "8.5x/210x/330x, which are hardware figures, not targets here";
  return {evals_ok && wall_ok, false, detail};
}

// --- criterion 4 -----------------------------------------------------------
// The refinement after the merge must be short (no longer than the slowest
// shard in at least 90% of seeded trials) and must always land on a
// configuration one more full assignment pass cannot change.
Outcome criterion_second_level_short() {
  const auto& data = benchmark_dataset();
  const std::span<const Point> points(data.points);
  const int trials = 20;
  int short_refines = 0;
  for (int t = 0; t < trials; ++t) {
    TwoLevelConfig config;
    config.partitions = 4;
    config.k = 8;
    config.filter_config.epsilon = 0.0;
    config.rng_seed = 1000 + t;
    config.shuffle = true;
    const ClusteringResult result = run_two_level(points, config);

    const int max_level1 =
        *std::max_element(result.iterations_level1.begin(), result.iterations_level1.end());
    if (result.iterations <= max_level1) ++short_refines;

    LloydState extra{CandidateSet::from_positions(result.centroids), {}};
    Counters counters;
    lloyd_iterate(points, extra, Metric::Euclidean, 4, counters);
    if (extra.assignments != result.assignments) {
      return {false, false,
              "seed " + std::to_string(config.rng_seed) +
                  ": one more assignment pass moved points off the returned clustering"};
    }
  }
  const bool pass = short_refines >= 18;
  return {pass, false,
          std::to_string(short_refines) + "/" + std::to_string(trials) +
              " trials kept the refinement within the slowest shard's iterations; every result "
              "was a fixed point"};
}

// --- criterion 5 -----------------------------------------------------------
// Degenerate reduction and determinism: one partition reproduces the
// single-level run bitwise, worker count never changes a result, and equal
// seeds replay equal outputs.
Outcome criterion_reduction_determinism() {
  std::mt19937_64 rng(512);
  GenSpec spec;
  spec.n = 6000;
  spec.dimensionality = 3;
  spec.n_clumps = 5;
  spec.stddev_low = 0.8;
  spec.stddev_high = 2.0;
  spec.domain.lo.assign(3, -80.0);
  spec.domain.hi.assign(3, 80.0);
  spec.rng_seed = 512;
  const auto data = generate(spec);
  const std::span<const Point> points(data.points);

  TwoLevelConfig single_partition;
  single_partition.partitions = 1;
  single_partition.k = 5;
  single_partition.filter_config.epsilon = 0.0;
  single_partition.rng_seed = 512;
  const ClusteringResult reduced = run_two_level(points, single_partition);

  const KdTree tree = KdTree::build(points);
  FilterConfig fc;
  fc.epsilon = 0.0;
  const ClusteringResult direct = run_filtering(tree, lloyd_init(points, 5, 512), fc);
  if (reduced.centroids != direct.centroids || reduced.assignments != direct.assignments) {
    return {false, false, "one-partition run diverged from the single-level run"};
  }

  TwoLevelConfig config;
  config.partitions = 4;
  config.k = 5;
  config.rng_seed = 77;
  config.shuffle = true;
  config.workers = 4;
  const ClusteringResult four = run_two_level(points, config);
  config.workers = 1;
  const ClusteringResult one = run_two_level(points, config);
  const auto same = [](const ClusteringResult& a, const ClusteringResult& b) {
    return a.centroids == b.centroids && a.assignments == b.assignments &&
           a.iterations == b.iterations && a.iterations_level1 == b.iterations_level1 &&
           a.metrics.counters.distance_evaluations == b.metrics.counters.distance_evaluations &&
           a.metrics.counters.pruning_evaluations == b.metrics.counters.pruning_evaluations &&
           a.metrics.counters.node_visits == b.metrics.counters.node_visits;
  };
  if (!same(four, one)) {
    return {false, false, "worker count changed the result"};
  }
  config.workers = 4;
  const ClusteringResult replay = run_two_level(points, config);
  if (!same(four, replay)) {
    return {false, false, "same seed failed to replay the same output"};
  }
  return {true, false,
          "one-partition run bitwise-equal to single-level; workers 1 == workers 4; seed replay "
          "identical"};
}

// --- criterion 6 -----------------------------------------------------------
// Worst-case candidate storage: (n-1) * k * log2(k) entries; read as bits it
// must land within 2% of 122 MiB for n=100000, k=1024.
Outcome criterion_storage_arithmetic() {
  const std::uint64_t entries = (100000ull - 1ull) * 1024ull * 10ull;
  const double computed = estimate_worst_case_bytes(100000, 1024);
  if (computed != static_cast<double>(entries)) {
    return {false, false, "entry count mismatch: " + fmt(computed)};
  }
  const double mib = estimate_worst_case_bytes(100000, 1024, 1.0 / 8.0) / (1024.0 * 1024.0);
  const double rel = std::abs(mib - 122.0) / 122.0;
  return {rel <= 0.02, false,
          std::to_string(entries) + " entries; as bits = " + fmt(mib) + " MiB, " +
              fmt(rel * 100.0) + "% from 122"};
}

// --- criterion 7 -----------------------------------------------------------
// Every traversal must hand out each point exactly once: counts sum to n and
// accumulated coordinate mass matches the raw sum within 1e-6.
Outcome criterion_conservation() {
  constexpr Metric metrics[] = {Metric::Euclidean, Metric::Manhattan, Metric::Chebyshev};
  int passes_checked = 0;
  for (int t = 0; t < 12; ++t) {
    std::mt19937_64 rng(3100 + t);
    const std::size_t n = 50 + uniform_below(rng, 1951);
    const std::size_t dim = 1 + uniform_below(rng, 6);
    const int k = 1 + static_cast<int>(uniform_below(rng, 16));
    const Metric metric = metrics[t % 3];
    auto points = random_points(rng, n, dim, -30.0, 30.0);
    for (int dup = 0; dup < 8; ++dup) points[n - 1 - dup] = points[dup];

    Point total(dim, 0.0);
    for (const auto& p : points) {
      for (std::size_t d = 0; d < dim; ++d) total[d] += p[d];
    }
    const KdTree tree = KdTree::build(points, 1 + static_cast<int>(uniform_below(rng, 3)));
    CandidateSet zs = lloyd_init(points, k, 3100 + t);
    Counters counters;
    for (int it = 0; it < 8; ++it) {
      filter_pass(tree, zs, metric, counters);
      ++passes_checked;
      std::int64_t count = 0;
      Point mass(dim, 0.0);
      for (const auto& z : zs.candidates) {
        count += z.acc_count;
        for (std::size_t d = 0; d < dim; ++d) mass[d] += z.acc_wgt_cent[d];
      }
      if (count != static_cast<std::int64_t>(n)) {
        return {false, false,
                "dataset " + std::to_string(t) + ": counts sum to " + std::to_string(count) +
                    " of " + std::to_string(n)};
      }
      for (std::size_t d = 0; d < dim; ++d) {
        if (std::abs(mass[d] - total[d]) > 1e-6) {
          return {false, false,
                  "dataset " + std::to_string(t) + ": mass drifted " +
                      fmt(std::abs(mass[d] - total[d]))};
        }
      }
      if (update_step(zs, metric) == 0.0) break;
    }
  }
  return {true, false,
          std::to_string(passes_checked) + " traversals conserved counts exactly and mass within "
          "1e-6"};
}

// --- criterion 8 -----------------------------------------------------------
// The within-cluster sum of squares must be non-increasing per iteration for
// both the full scan and the filtered run (1e-6 relative slack).
Outcome criterion_objective_monotone() {
  int sequences = 0;
  for (int t = 0; t < 10; ++t) {
    std::mt19937_64 rng(4400 + t);
    const std::size_t n = 200 + uniform_below(rng, 1801);
    const std::size_t dim = 2 + uniform_below(rng, 4);
    const int k = 2 + static_cast<int>(uniform_below(rng, 9));
    const auto points = random_points(rng, n, dim, -40.0, 40.0);
    const std::span<const Point> span(points);
    const KdTree tree = KdTree::build(points);
    const CandidateSet init = lloyd_init(points, k, 4400 + t);

    CandidateSet filtered = init;
    LloydState lloyd{init, {}};
    Counters fc, lc;
    double filtered_prev = wcss_of(span, filtered.positions());
    double lloyd_prev = filtered_prev;
    for (int it = 0; it < 60; ++it) {
      filter_pass(tree, filtered, Metric::Euclidean, fc);
      const double fm = update_step(filtered, Metric::Euclidean);
      const double lm = lloyd_iterate(span, lloyd, Metric::Euclidean, 1, lc);
      const double filtered_now = wcss_of(span, filtered.positions());
      const double lloyd_now = wcss_of(span, lloyd.centroids.positions());
      if (filtered_now > filtered_prev * (1.0 + 1e-6)) {
        return {false, false,
                "filtered objective rose from " + fmt(filtered_prev) + " to " + fmt(filtered_now) +
                    " on dataset " + std::to_string(t)};
      }
      if (lloyd_now > lloyd_prev * (1.0 + 1e-6)) {
        return {false, false,
                "full-scan objective rose from " + fmt(lloyd_prev) + " to " + fmt(lloyd_now) +
                    " on dataset " + std::to_string(t)};
      }
      filtered_prev = filtered_now;
      lloyd_prev = lloyd_now;
      if (fm == 0.0 && lm == 0.0) break;
    }
    ++sequences;
  }
  return {true, false,
          std::to_string(sequences) + " paired iteration sequences stayed non-increasing"};
}

// --- criterion 9 -----------------------------------------------------------
// Scaling observation, machine-dependent and soft: with four workers the
// two-level run should not be slower than with one.
Outcome criterion_worker_scaling() {
  const auto& data = benchmark_dataset();
  const std::span<const Point> points(data.points);
  TwoLevelConfig config;
  config.partitions = 4;
  config.k = 8;
  config.rng_seed = 7;
  config.shuffle = true;

  config.workers = 4;
  auto start = std::chrono::steady_clock::now();
  run_two_level(points, config);
  const double wall4 = seconds_since(start);

  config.workers = 1;
  start = std::chrono::steady_clock::now();
  run_two_level(points, config);
  const double wall1 = seconds_since(start);

  const bool pass = wall4 <= wall1;
  return {pass, !pass,
          "4 workers " + fmt(wall4) + "s vs 1 worker " + fmt(wall1) + "s on n=100000 (" +
              std::to_string(std::thread::hardware_concurrency()) +
              " hardware threads); machine-dependent, never fatal"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {"full-scan trajectory equivalence", criterion_oracle_equivalence},
      {"pruning soundness vs grid oracle", criterion_pruning_soundness},
      {"pruning effectiveness on clumped data", criterion_pruning_effectiveness},
      {"short second-level refinement, fixed-point results", criterion_second_level_short},
      {"reduction and determinism", criterion_reduction_determinism},
      {"worst-case storage arithmetic", criterion_storage_arithmetic},
      {"count and mass conservation", criterion_conservation},
      {"non-increasing objective", criterion_objective_monotone},
      {"worker scaling (soft)", criterion_worker_scaling},
  };

  int failures = 0;
  int index = 0;
  for (const auto& criterion : criteria) {
    ++index;
    Outcome outcome;
    try {
      outcome = criterion.run();
    } catch (const std::exception& e) {
      outcome = {false, false, std::string("exception: ") + e.what()};
    }
    const char* tag = outcome.pass ? "[PASS]" : (outcome.soft ? "[SOFT-FAIL]" : "[FAIL]");
    std::printf("%s %d. %s — %s\n", tag, index, criterion.name, outcome.detail.c_str());
    std::fflush(stdout);
    if (!outcome.pass && !outcome.soft) ++failures;
  }
  if (failures > 0) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all hard criteria passed\n");
  return 0;
}
