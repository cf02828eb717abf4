#pragma once

#include <functional>
#include <span>
#include <vector>

#include "cbn/core.hpp"
#include "cbn/discovery.hpp"
#include "cbn/inference.hpp"

namespace cbn {

/// Learned conditional of Y for one state of X, under observation or
/// manipulation of X.
using PairPredictor = std::function<std::vector<double>(int x_state, EvidenceMode mode)>;

/// Structure error: one minus the posterior assigned to the true hypothesis.
double serr(const HypothesisPosterior& posterior, int true_index);

/// Gold-side distributions for one ordered pair (x, y), computed by exact
/// inference: the marginal of x, and the conditional of y for every state of
/// x under observation and under manipulation.
struct GoldPairDistributions {
  std::vector<double> x_marginal;
  std::vector<std::vector<double>> y_given_x;
  std::vector<std::vector<double>> y_given_do_x;
};

GoldPairDistributions gold_pair_distributions(const CausalNetwork& gold, int x, int y);

/// Expected absolute error of predicting an observed state of y from an
/// observed state of x, weighted by the gold marginal of x and averaged over
/// the states of y. States of x with zero gold probability contribute 0.
double operr(const GoldPairDistributions& gold, const PairPredictor& predictor);
double operr(const CausalNetwork& gold, int x, int y, const PairPredictor& predictor);

/// Same comparison under manipulation of x, weighting every manipulated
/// state of x equally.
double mperr(const GoldPairDistributions& gold, const PairPredictor& predictor);
double mperr(const CausalNetwork& gold, int x, int y, const PairPredictor& predictor);

/// Arithmetic mean over per-pair metric values; rejects an empty list.
double aggregate(std::span<const double> values);

}  // namespace cbn
