#include "cbn/scoring.hpp"

#include <cmath>

namespace cbn {

namespace {

// Dataset column for each structure variable, with matching state lists.
std::vector<int> map_columns(const Dataset& dataset, const NetworkStructure& structure) {
  std::vector<int> columns(structure.num_variables());
  for (int i = 0; i < structure.num_variables(); ++i) {
    const Variable& var = structure.variable(i);
    auto col = dataset.find(var.name);
    if (!col) throw Error("dataset is missing variable '" + var.name + "'");
    if (dataset.variables[*col].states != var.states)
      throw Error("state list mismatch for variable '" + var.name + "'");
    columns[i] = *col;
  }
  return columns;
}

// Joint parent state of structure variable i under a dataset case.
int parent_state(const NetworkStructure& structure, std::span<const int> columns, int i,
                 const CaseRecord& record) {
  int j = 0;
  for (int p : structure.parents(i)) j = j * structure.arity(p) + record.values[columns[p]];
  return j;
}

template <typename T>
std::vector<std::vector<std::vector<T>>> make_table(const NetworkStructure& structure, T fill) {
  std::vector<std::vector<std::vector<T>>> table(structure.num_variables());
  for (int i = 0; i < structure.num_variables(); ++i)
    table[i].assign(structure.parent_state_count(i), std::vector<T>(structure.arity(i), fill));
  return table;
}

template <typename A, typename B>
void check_same_shape(const A& a, const B& b) {
  bool ok = a.size() == b.size();
  for (std::size_t i = 0; ok && i < a.size(); ++i) {
    ok = a[i].size() == b[i].size();
    for (std::size_t j = 0; ok && j < a[i].size(); ++j) ok = a[i][j].size() == b[i][j].size();
  }
  if (!ok) throw Error("count and prior tables have different shapes");
}

}  // namespace

double DirichletPrior::alpha_row_total(int i, int j) const {
  double total = 0.0;
  for (double a : alpha.at(i).at(j)) total += a;
  return total;
}

long long SufficientStats::row_total(int i, int j) const {
  long long total = 0;
  for (long long n : counts.at(i).at(j)) total += n;
  return total;
}

SufficientStats tally_counts(const Dataset& dataset, const NetworkStructure& structure) {
  auto columns = map_columns(dataset, structure);
  SufficientStats stats{make_table<long long>(structure, 0)};
  for (const CaseRecord& record : dataset.cases) {
    for (int i = 0; i < structure.num_variables(); ++i) {
      if (record.manipulated[columns[i]]) continue;
      int j = parent_state(structure, columns, i, record);
      ++stats.counts[i][j][record.values[columns[i]]];
    }
  }
  return stats;
}

DirichletPrior default_prior(const NetworkStructure& structure) {
  DirichletPrior prior{make_table<double>(structure, 0.0)};
  for (int i = 0; i < structure.num_variables(); ++i) {
    const double a = 1.0 / (static_cast<double>(structure.parent_state_count(i)) *
                            static_cast<double>(structure.arity(i)));
    for (auto& row : prior.alpha[i])
      for (double& cell : row) cell = a;
  }
  return prior;
}

double log_marginal_likelihood(const SufficientStats& stats, const DirichletPrior& prior) {
  check_same_shape(stats.counts, prior.alpha);
  double total = 0.0;
  for (std::size_t i = 0; i < stats.counts.size(); ++i) {
    for (std::size_t j = 0; j < stats.counts[i].size(); ++j) {
      double alpha_ij = 0.0;
      long long n_ij = 0;
      for (std::size_t k = 0; k < stats.counts[i][j].size(); ++k) {
        const double a = prior.alpha[i][j][k];
        const long long n = stats.counts[i][j][k];
        alpha_ij += a;
        n_ij += n;
        if (n > 0) total += std::lgamma(a + static_cast<double>(n)) - std::lgamma(a);
      }
      if (n_ij > 0) total += std::lgamma(alpha_ij) - std::lgamma(alpha_ij + static_cast<double>(n_ij));
    }
  }
  return total;
}

StructureScore log_joint_score(double structure_log_prior, double log_marginal) {
  return StructureScore{structure_log_prior, log_marginal, structure_log_prior + log_marginal};
}

CausalNetwork posterior_params(const SufficientStats& stats, const DirichletPrior& prior,
                               const NetworkStructure& structure) {
  check_same_shape(stats.counts, prior.alpha);
  if (static_cast<int>(stats.counts.size()) != structure.num_variables())
    throw Error("sufficient statistics do not match the structure");
  std::vector<Cpt> cpts(structure.num_variables());
  for (int i = 0; i < structure.num_variables(); ++i) {
    const int q = structure.parent_state_count(i);
    const int r = structure.arity(i);
    cpts[i].assign(q, CptRow(r, 0.0));
    for (int j = 0; j < q; ++j) {
      const double denom =
          prior.alpha_row_total(i, j) + static_cast<double>(stats.row_total(i, j));
      for (int k = 0; k < r; ++k)
        cpts[i][j][k] =
            (prior.alpha[i][j][k] + static_cast<double>(stats.counts[i][j][k])) / denom;
    }
  }
  return CausalNetwork{structure, std::move(cpts)};
}

double prequential_log_score(const Dataset& dataset, const NetworkStructure& structure,
                             const DirichletPrior& prior) {
  auto columns = map_columns(dataset, structure);
  auto running = make_table<long long>(structure, 0);
  check_same_shape(running, prior.alpha);
  double total = 0.0;
  for (const CaseRecord& record : dataset.cases) {
    // Score this case against counts from strictly earlier cases only.
    for (int i = 0; i < structure.num_variables(); ++i) {
      if (record.manipulated[columns[i]]) continue;
      const int j = parent_state(structure, columns, i, record);
      const int k = record.values[columns[i]];
      double alpha_ij = 0.0;
      long long n_ij = 0;
      for (std::size_t s = 0; s < running[i][j].size(); ++s) {
        alpha_ij += prior.alpha[i][j][s];
        n_ij += running[i][j][s];
      }
      total += std::log((prior.alpha[i][j][k] + static_cast<double>(running[i][j][k])) /
                        (alpha_ij + static_cast<double>(n_ij)));
    }
    for (int i = 0; i < structure.num_variables(); ++i) {
      if (record.manipulated[columns[i]]) continue;
      ++running[i][parent_state(structure, columns, i, record)][record.values[columns[i]]];
    }
  }
  return total;
}

}  // namespace cbn
