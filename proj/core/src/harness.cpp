#include "cbn/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "cbn/metrics.hpp"
#include "cbn/netio.hpp"
#include "cbn/sampler.hpp"

namespace cbn {

namespace {

struct CellValues {
  double serr = 0.0;
  double operr = 0.0;
  double mperr = 0.0;
};

std::uint64_t cell_seed(const GridSpec& grid, const PairSample& pair, long long m, long long n,
                        int replication) {
  std::uint64_t s = grid.seed;
  s = hash_combine(s, static_cast<std::uint64_t>(pair.x));
  s = hash_combine(s, static_cast<std::uint64_t>(pair.y));
  s = hash_combine(s, static_cast<std::uint64_t>(m));
  s = hash_combine(s, static_cast<std::uint64_t>(n));
  s = hash_combine(s, static_cast<std::uint64_t>(replication));
  return s;
}

CellValues evaluate_cell(const CausalNetwork& gold, const GoldPairDistributions& gold_dists,
                         const PairSample& pair, long long m, long long n,
                         std::uint64_t seed) {
  const Dataset data = generate_mix(gold, MixSpec{pair.x, pair.y, m, n, seed});
  const HypothesisSet family =
      pairwise_family(gold.structure.variable(pair.x), gold.structure.variable(pair.y));
  const AveragedPredictor predictor(data, family);

  CellValues out;
  out.serr = serr(predictor.posterior(), static_cast<int>(*pair.h_true));
  const PairPredictor predict = [&](int x_state, EvidenceMode mode) {
    return predictor.predict(/*target=*/1, Evidence{0, x_state, mode});
  };
  out.operr = operr(gold_dists, predict);
  out.mperr = mperr(gold_dists, predict);
  return out;
}

const char* metric_name(Metric m) {
  switch (m) {
    case Metric::kSErr: return "serr";
    case Metric::kOPErr: return "operr";
    default: return "mperr";
  }
}

const char* category_name(Category c) {
  return c == Category::kRelatedUnconfounded ? "related" : "unrelated";
}

}  // namespace

std::vector<PairSample> sample_pairs(const NetworkStructure& gold, int count, Rng& rng) {
  const int n = gold.num_variables();
  std::vector<std::pair<int, int>> all;
  all.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y) all.emplace_back(x, y);
  if (count < 0 || static_cast<std::size_t>(count) > all.size())
    throw Error("cannot sample " + std::to_string(count) + " of " + std::to_string(all.size()) +
                " pairs");

  // Partial Fisher-Yates: the first `count` entries become the sample.
  for (int i = 0; i < count; ++i) {
    int pick = i + rng.below(static_cast<int>(all.size()) - i);
    std::swap(all[i], all[pick]);
  }

  std::vector<PairSample> result;
  result.reserve(count);
  for (int i = 0; i < count; ++i) {
    PairSample sample;
    sample.x = all[i].first;
    sample.y = all[i].second;
    if (rng.below(2) == 1) std::swap(sample.x, sample.y);  // unordered pair, random roles
    sample.cls = classify_pair(gold, sample.x, sample.y);
    if (!sample.cls.confounded) {
      if (!sample.cls.causally_related) {
        sample.h_true = PairHypothesis::kNoArc;
      } else {
        auto anc_y = ancestors(gold, sample.y);
        const bool x_causes_y =
            std::find(anc_y.begin(), anc_y.end(), sample.x) != anc_y.end();
        sample.h_true = x_causes_y ? PairHypothesis::kXCausesY : PairHypothesis::kYCausesX;
      }
    }
    result.push_back(sample);
  }
  return result;
}

std::vector<TableCell> run_grid(const CausalNetwork& gold, std::span<const PairSample> pairs,
                                const GridSpec& grid) {
  if (grid.m_grid.empty() || grid.n_grid.empty()) throw Error("empty (m, n) grid");
  if (grid.replications < 1) throw Error("need at least one replication");
  for (long long m : grid.m_grid)
    if (m < 0 || m % 2 != 0) throw Error("every m must be even and nonnegative");

  std::vector<const PairSample*> active;
  for (const PairSample& p : pairs)
    if (p.h_true) active.push_back(&p);

  const std::size_t mg = grid.m_grid.size(), ng = grid.n_grid.size();
  const std::size_t reps = static_cast<std::size_t>(grid.replications);
  const std::size_t per_pair = mg * ng * reps;
  std::vector<CellValues> values(active.size() * per_pair);

  auto run_pair = [&](std::size_t pi) {
    const PairSample& pair = *active[pi];
    const GoldPairDistributions gold_dists = gold_pair_distributions(gold, pair.x, pair.y);
    std::size_t slot = pi * per_pair;
    for (long long m : grid.m_grid)
      for (long long n : grid.n_grid)
        for (int rep = 0; rep < grid.replications; ++rep)
          values[slot++] =
              evaluate_cell(gold, gold_dists, pair, m, n, cell_seed(grid, pair, m, n, rep));
  };

  if (grid.workers > 1 && active.size() > 1) {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const int count = std::min<int>(grid.workers, static_cast<int>(active.size()));
    // Exceptions from workers must not escape a thread; remember the first.
    std::atomic<bool> failed{false};
    std::string message;
    std::mutex message_mutex;
    for (int w = 0; w < count; ++w)
      pool.emplace_back([&] {
        for (std::size_t pi = next++; pi < active.size(); pi = next++) {
          if (failed) return;
          try {
            run_pair(pi);
          } catch (const std::exception& e) {
            std::lock_guard lock(message_mutex);
            failed = true;
            message = e.what();
          }
        }
      });
    for (auto& t : pool) t.join();
    if (failed) throw Error(message);
  } else {
    for (std::size_t pi = 0; pi < active.size(); ++pi) run_pair(pi);
  }

  std::vector<TableCell> cells;
  for (Category category : {Category::kRelatedUnconfounded, Category::kUnrelatedUnconfounded}) {
    std::vector<std::size_t> members;
    for (std::size_t pi = 0; pi < active.size(); ++pi) {
      const bool related = active[pi]->cls.causally_related;
      if (related == (category == Category::kRelatedUnconfounded)) members.push_back(pi);
    }
    if (members.empty()) continue;
    for (Metric metric : {Metric::kSErr, Metric::kOPErr, Metric::kMPErr}) {
      for (std::size_t mi = 0; mi < mg; ++mi) {
        for (std::size_t ni = 0; ni < ng; ++ni) {
          std::vector<double> rep_means(reps, 0.0);
          for (std::size_t rep = 0; rep < reps; ++rep) {
            double total = 0.0;
            for (std::size_t pi : members) {
              const CellValues& v = values[pi * per_pair + (mi * ng + ni) * reps + rep];
              total += metric == Metric::kSErr    ? v.serr
                       : metric == Metric::kOPErr ? v.operr
                                                  : v.mperr;
            }
            rep_means[rep] = total / static_cast<double>(members.size());
          }
          double mean = 0.0;
          for (double v : rep_means) mean += v;
          mean /= static_cast<double>(reps);
          double variance = 0.0;
          if (reps > 1) {
            for (double v : rep_means) variance += (v - mean) * (v - mean);
            variance /= static_cast<double>(reps - 1);
          }
          cells.push_back(TableCell{grid.m_grid[mi], grid.n_grid[ni], metric, category, mean,
                                    std::sqrt(variance)});
        }
      }
    }
  }
  return cells;
}

void emit_tables(std::span<const TableCell> cells, const std::filesystem::path& directory) {
  if (cells.empty()) throw Error("no table cells to write");
  std::filesystem::create_directories(directory);

  std::map<std::pair<Metric, Category>,
           std::map<long long, std::map<long long, const TableCell*>>>
      tables;  // (metric, category) -> n -> m -> cell
  std::map<long long, bool> m_values;
  for (const TableCell& cell : cells) {
    tables[{cell.metric, cell.category}][cell.n][cell.m] = &cell;
    m_values[cell.m] = true;
  }

  for (const auto& [key, rows] : tables) {
    const std::filesystem::path file =
        directory / (std::string(metric_name(key.first)) + "_" + category_name(key.second) +
                     ".csv");
    std::ofstream out(file);
    if (!out) throw Error("cannot write '" + file.string() + "'");
    out << "n\\m";
    for (const auto& [m, _] : m_values) out << "," << m;
    out << "\n";
    for (const auto& [n, row] : rows) {
      out << n;
      for (const auto& [m, _] : m_values) {
        auto it = row.find(m);
        char buf[64];
        if (it != row.end())
          std::snprintf(buf, sizeof(buf), "%.6f (%.6f)", it->second->mean, it->second->stddev);
        else
          std::snprintf(buf, sizeof(buf), "-");
        out << "," << buf;
      }
      out << "\n";
    }
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file '" + path.string() + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const nlohmann::json::exception& e) {
    throw Error("invalid config file '" + path.string() + "': " + e.what());
  }

  ExperimentConfig config;
  try {
    if (doc.contains("network")) config.network_path = doc["network"].get<std::string>();
    if (doc.contains("pairs")) config.pair_sample_size = doc["pairs"].get<int>();
    if (doc.contains("m_grid")) config.grid.m_grid = doc["m_grid"].get<std::vector<long long>>();
    if (doc.contains("n_grid")) config.grid.n_grid = doc["n_grid"].get<std::vector<long long>>();
    if (doc.contains("replications")) config.grid.replications = doc["replications"].get<int>();
    if (doc.contains("seed")) config.grid.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("workers")) config.grid.workers = doc["workers"].get<int>();
    if (doc.contains("output_dir")) config.output_dir = doc["output_dir"].get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error("invalid config value in '" + path.string() + "': " + e.what());
  }
  return config;
}

std::vector<TableCell> run_experiment(const ExperimentConfig& config) {
  if (config.network_path.empty()) throw Error("config is missing the gold network path");
  const CausalNetwork gold = load_network(config.network_path);
  Rng rng(hash_combine(config.grid.seed, 0x70616972ULL));  // pair-sampling stream
  const std::vector<PairSample> pairs = sample_pairs(gold.structure, config.pair_sample_size, rng);
  const std::vector<TableCell> cells = run_grid(gold, pairs, config.grid);
  emit_tables(cells, config.output_dir);
  return cells;
}

}  // namespace cbn
