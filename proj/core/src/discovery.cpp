#include "cbn/discovery.hpp"

#include <algorithm>
#include <cmath>

namespace cbn {

namespace {

void check_family(const HypothesisSet& family) {
  if (family.hypotheses.empty()) throw Error("hypothesis set is empty");
  const auto& vars = family.hypotheses.front().structure.variables();
  double prior_mass = 0.0;
  for (std::size_t a = 0; a < family.hypotheses.size(); ++a) {
    const Hypothesis& h = family.hypotheses[a];
    if (h.structure.variables() != vars)
      throw Error("hypotheses do not share one variable list");
    prior_mass += std::exp(h.log_prior);
    for (std::size_t b = a + 1; b < family.hypotheses.size(); ++b)
      if (h.structure == family.hypotheses[b].structure)
        throw Error("duplicate structure in hypothesis set");
  }
  if (prior_mass > 1.0 + 1e-9) throw Error("structure priors exceed total mass 1");
}

std::vector<double> normalized_posterior(const std::vector<StructureScore>& scores) {
  double best = scores.front().log_joint;
  for (const StructureScore& s : scores) best = std::max(best, s.log_joint);
  std::vector<double> posterior(scores.size());
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    posterior[i] = std::exp(scores[i].log_joint - best);
    total += posterior[i];
  }
  for (double& p : posterior) p /= total;
  return posterior;
}

bool acyclic_mask(int n, const std::vector<std::pair<int, int>>& pairs, unsigned mask) {
  // DFS over the arcs selected by the mask.
  std::vector<std::vector<int>> children(n);
  for (std::size_t b = 0; b < pairs.size(); ++b)
    if (mask >> b & 1u) children[pairs[b].first].push_back(pairs[b].second);
  std::vector<int> color(n, 0);
  std::vector<int> stack;
  for (int start = 0; start < n; ++start) {
    if (color[start] != 0) continue;
    stack.push_back(start);
    while (!stack.empty()) {
      int v = stack.back();
      if (color[v] == 0) {
        color[v] = 1;
        for (int c : children[v]) {
          if (color[c] == 1) return false;
          if (color[c] == 0) stack.push_back(c);
        }
      } else {
        color[v] = 2;
        stack.pop_back();
      }
    }
  }
  return true;
}

}  // namespace

HypothesisSet pairwise_family(const Variable& x, const Variable& y) {
  const double log_third = std::log(1.0 / 3.0);
  std::vector<Variable> vars{x, y};
  HypothesisSet family;
  family.hypotheses.push_back(
      {NetworkStructure(vars, {{}, {0}}), log_third, x.name + "->" + y.name});
  family.hypotheses.push_back(
      {NetworkStructure(vars, {{1}, {}}), log_third, y.name + "->" + x.name});
  family.hypotheses.push_back({NetworkStructure(vars, {{}, {}}), log_third, "no arc"});
  return family;
}

std::vector<NetworkStructure> enumerate_dags(std::span<const Variable> variables) {
  const int n = static_cast<int>(variables.size());
  if (n < 1) throw Error("need at least one variable");
  if (n > 5) throw Error("exhaustive DAG enumeration is limited to 5 variables");

  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) pairs.emplace_back(i, j);

  std::vector<Variable> vars(variables.begin(), variables.end());
  std::vector<NetworkStructure> result;
  for (unsigned mask = 0; mask < (1u << pairs.size()); ++mask) {
    if (!acyclic_mask(n, pairs, mask)) continue;
    std::vector<std::vector<int>> parents(n);
    for (std::size_t b = 0; b < pairs.size(); ++b)
      if (mask >> b & 1u) parents[pairs[b].second].push_back(pairs[b].first);
    result.emplace_back(vars, std::move(parents));
  }
  return result;
}

HypothesisSet uniform_family(std::vector<NetworkStructure> structures) {
  if (structures.empty()) throw Error("hypothesis set is empty");
  const double log_prior = -std::log(static_cast<double>(structures.size()));
  HypothesisSet family;
  family.hypotheses.reserve(structures.size());
  for (std::size_t i = 0; i < structures.size(); ++i)
    family.hypotheses.push_back(
        {std::move(structures[i]), log_prior, "S" + std::to_string(i)});
  return family;
}

HypothesisPosterior structure_posterior(const Dataset& dataset, const HypothesisSet& family,
                                        const PriorRule& prior_rule) {
  check_family(family);
  HypothesisPosterior result;
  result.scores.reserve(family.hypotheses.size());
  for (const Hypothesis& h : family.hypotheses) {
    const SufficientStats stats = tally_counts(dataset, h.structure);
    const double lml = log_marginal_likelihood(stats, prior_rule(h.structure));
    result.scores.push_back(log_joint_score(h.log_prior, lml));
  }
  result.posterior = normalized_posterior(result.scores);
  return result;
}

double arc_probability(const Dataset& dataset, const HypothesisSet& family, int x, int y,
                       const PriorRule& prior_rule) {
  const HypothesisPosterior post = structure_posterior(dataset, family, prior_rule);
  double total = 0.0;
  for (std::size_t i = 0; i < family.hypotheses.size(); ++i)
    if (family.hypotheses[i].structure.has_arc(x, y)) total += post.posterior[i];
  return total;
}

AveragedPredictor::AveragedPredictor(const Dataset& dataset, const HypothesisSet& family,
                                     const PriorRule& prior_rule) {
  check_family(family);
  posterior_.scores.reserve(family.hypotheses.size());
  fitted_.reserve(family.hypotheses.size());
  for (const Hypothesis& h : family.hypotheses) {
    const SufficientStats stats = tally_counts(dataset, h.structure);
    const DirichletPrior prior = prior_rule(h.structure);
    posterior_.scores.push_back(
        log_joint_score(h.log_prior, log_marginal_likelihood(stats, prior)));
    fitted_.push_back(posterior_params(stats, prior, h.structure));
  }
  posterior_.posterior = normalized_posterior(posterior_.scores);
}

std::vector<double> AveragedPredictor::predict(int target, const Evidence& given) const {
  if (target == given.variable) throw Error("prediction target coincides with the evidence");
  std::vector<double> mixture;
  for (std::size_t i = 0; i < fitted_.size(); ++i) {
    const std::vector<double> conditional =
        query(fitted_[i], Query{{target}, {given}});
    if (mixture.empty()) mixture.assign(conditional.size(), 0.0);
    for (std::size_t k = 0; k < conditional.size(); ++k)
      mixture[k] += posterior_.posterior[i] * conditional[k];
  }
  return mixture;
}

std::vector<double> averaged_predict(const Dataset& dataset, const HypothesisSet& family,
                                     int target, const Evidence& given,
                                     const PriorRule& prior_rule) {
  return AveragedPredictor(dataset, family, prior_rule).predict(target, given);
}

NetworkStructure augment_intent(const NetworkStructure& structure, int target) {
  if (target < 0 || target >= structure.num_variables()) throw Error("unknown target variable");
  const std::string name = "M_" + structure.variable(target).name;
  if (structure.find(name)) throw Error("variable '" + name + "' already exists");

  Variable intent{name, {"0"}};
  for (int k = 1; k <= structure.arity(target); ++k)
    intent.states.push_back(std::to_string(k));

  std::vector<Variable> vars = structure.variables();
  vars.push_back(std::move(intent));
  std::vector<std::vector<int>> parents;
  parents.reserve(vars.size());
  for (int i = 0; i < structure.num_variables(); ++i) parents.push_back(structure.parents(i));
  parents[target].push_back(structure.num_variables());  // the new intent variable
  parents.push_back({});
  return NetworkStructure(std::move(vars), std::move(parents));
}

}  // namespace cbn
