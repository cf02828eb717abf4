#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "cbn/core.hpp"
#include "cbn/discovery.hpp"
#include "cbn/rng.hpp"

namespace cbn {

/// A sampled unordered pair with its gold classification. For unconfounded
/// pairs, h_true names the generating member of the pairwise family
/// (x causes y / y causes x / no arc); confounded pairs carry no label since
/// the three-structure family does not model them.
struct PairSample {
  int x = 0;
  int y = 0;
  PairClass cls;
  std::optional<PairHypothesis> h_true;
};

/// Uniform sample of `count` distinct variable pairs, classified against the
/// gold structure.
std::vector<PairSample> sample_pairs(const NetworkStructure& gold, int count, Rng& rng);

enum class Metric { kSErr, kOPErr, kMPErr };
enum class Category { kRelatedUnconfounded, kUnrelatedUnconfounded };

/// Grid of dataset compositions to evaluate, with per-cell replication.
/// Cell seeds are derived by hashing (seed, x, y, m, n, replication), so
/// results do not depend on scheduling.
struct GridSpec {
  std::vector<long long> m_grid{0, 50, 100, 300, 500};
  std::vector<long long> n_grid{0, 50, 100, 300, 500};
  int replications = 3;
  std::uint64_t seed = 0;
  int workers = 1;
};

/// One aggregated table entry: the mean over pairs of a metric at (m, n),
/// averaged over replications, plus the std-dev across replications.
struct TableCell {
  long long m = 0;
  long long n = 0;
  Metric metric = Metric::kSErr;
  Category category = Category::kRelatedUnconfounded;
  double mean = 0.0;
  double stddev = 0.0;
};

/// For every unconfounded pair, grid cell and replication: generate the
/// mixed dataset, score the pairwise family, and evaluate the three error
/// metrics against exact inference on the gold network. Aggregates by
/// category. Deterministic for a fixed GridSpec regardless of worker count.
std::vector<TableCell> run_grid(const CausalNetwork& gold, std::span<const PairSample> pairs,
                                const GridSpec& grid);

/// Writes one CSV per (metric, category): header `n\m,<m values>`, one row
/// per n, cells formatted `mean (stddev)`.
void emit_tables(std::span<const TableCell> cells, const std::filesystem::path& directory);

/// Full experiment description, loadable from a JSON file.
struct ExperimentConfig {
  std::filesystem::path network_path;
  int pair_sample_size = 100;
  GridSpec grid;
  std::filesystem::path output_dir = ".";
};

ExperimentConfig load_config(const std::filesystem::path& path);

/// Loads the gold network, samples pairs, runs the grid and writes the six
/// CSV tables into the output directory.
std::vector<TableCell> run_experiment(const ExperimentConfig& config);

}  // namespace cbn
