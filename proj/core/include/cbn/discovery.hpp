#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cbn/core.hpp"
#include "cbn/dataio.hpp"
#include "cbn/inference.hpp"
#include "cbn/scoring.hpp"

namespace cbn {

/// One candidate causal structure with its log prior probability.
struct Hypothesis {
  NetworkStructure structure;
  double log_prior = 0.0;
  std::string label;
};

/// A finite family of candidate structures over one shared variable list.
/// Priors must exponentiate to at most 1 in total; structures with zero
/// prior are excluded rather than listed.
struct HypothesisSet {
  std::vector<Hypothesis> hypotheses;
};

/// All distributions of prior mass among scored structures go through this
/// signature; default_prior is the shipped rule.
using PriorRule = std::function<DirichletPrior(const NetworkStructure&)>;

/// Indices of the pairwise hypotheses inside pairwise_family.
enum class PairHypothesis { kXCausesY = 0, kYCausesX = 1, kNoArc = 2 };

/// The three-structure family over a variable pair: x -> y, y -> x, and no
/// arc, each with prior 1/3.
HypothesisSet pairwise_family(const Variable& x, const Variable& y);

/// Every DAG over the given variables (at most 5), uniform order.
std::vector<NetworkStructure> enumerate_dags(std::span<const Variable> variables);

/// Wraps structures into a HypothesisSet with prior 1/|structures| each.
HypothesisSet uniform_family(std::vector<NetworkStructure> structures);

/// Per-hypothesis joint scores and the normalized posterior over the family.
struct HypothesisPosterior {
  std::vector<StructureScore> scores;
  std::vector<double> posterior;
};

HypothesisPosterior structure_posterior(const Dataset& dataset, const HypothesisSet& family,
                                        const PriorRule& prior_rule = default_prior);

/// Posterior probability that the direct arc x -> y is present: the total
/// posterior mass of family members containing it. x and y index the
/// family's shared variable list.
double arc_probability(const Dataset& dataset, const HypothesisSet& family, int x, int y,
                       const PriorRule& prior_rule = default_prior);

/// Scores and fits every family member once, for repeated model-averaged
/// predictions from the same dataset.
class AveragedPredictor {
 public:
  AveragedPredictor(const Dataset& dataset, const HypothesisSet& family,
                    const PriorRule& prior_rule = default_prior);

  const HypothesisPosterior& posterior() const { return posterior_; }

  /// Posterior-weighted mixture of the per-structure conditional
  /// distributions of `target` given the evidence. Indices refer to the
  /// family's variable list.
  std::vector<double> predict(int target, const Evidence& given) const;

 private:
  std::vector<CausalNetwork> fitted_;
  HypothesisPosterior posterior_;
};

/// One-call form of AveragedPredictor::predict.
std::vector<double> averaged_predict(const Dataset& dataset, const HypothesisSet& family,
                                     int target, const Evidence& given,
                                     const PriorRule& prior_rule = default_prior);

/// Adds an experimenter-intent variable M_<target> with states 0..r (state
/// "0" meaning "observe") and the arc M_<target> -> target. Everything else
/// is unchanged; the new variable is appended to the variable list and to
/// the target's parent list.
NetworkStructure augment_intent(const NetworkStructure& structure, int target);

}  // namespace cbn
