#include "cbn/metrics.hpp"

#include <cmath>

namespace cbn {

double serr(const HypothesisPosterior& posterior, int true_index) {
  if (true_index < 0 || true_index >= static_cast<int>(posterior.posterior.size()))
    throw Error("true hypothesis index is outside the hypothesis set");
  return 1.0 - posterior.posterior[true_index];
}

GoldPairDistributions gold_pair_distributions(const CausalNetwork& gold, int x, int y) {
  if (x == y) throw Error("pair metrics need two distinct variables");
  GoldPairDistributions result;
  result.x_marginal = marginal(gold, x);
  const int r_x = gold.structure.arity(x);
  result.y_given_x.resize(r_x);
  result.y_given_do_x.resize(r_x);
  for (int xs = 0; xs < r_x; ++xs) {
    if (result.x_marginal[xs] > 0.0)
      result.y_given_x[xs] = query(gold, Query{{y}, {{x, xs, EvidenceMode::kObserved}}});
    result.y_given_do_x[xs] = query(gold, Query{{y}, {{x, xs, EvidenceMode::kManipulated}}});
  }
  return result;
}

double operr(const GoldPairDistributions& gold, const PairPredictor& predictor) {
  double total = 0.0;
  for (std::size_t xs = 0; xs < gold.x_marginal.size(); ++xs) {
    const double px = gold.x_marginal[xs];
    if (px <= 0.0) continue;
    const std::vector<double>& truth = gold.y_given_x[xs];
    const std::vector<double> estimate = predictor(static_cast<int>(xs), EvidenceMode::kObserved);
    if (estimate.size() != truth.size()) throw Error("prediction has wrong arity");
    double mean_abs = 0.0;
    for (std::size_t ys = 0; ys < truth.size(); ++ys)
      mean_abs += std::abs(truth[ys] - estimate[ys]);
    total += px * mean_abs / static_cast<double>(truth.size());
  }
  return total;
}

double mperr(const GoldPairDistributions& gold, const PairPredictor& predictor) {
  double total = 0.0;
  const double weight = 1.0 / static_cast<double>(gold.x_marginal.size());
  for (std::size_t xs = 0; xs < gold.x_marginal.size(); ++xs) {
    const std::vector<double>& truth = gold.y_given_do_x[xs];
    const std::vector<double> estimate =
        predictor(static_cast<int>(xs), EvidenceMode::kManipulated);
    if (estimate.size() != truth.size()) throw Error("prediction has wrong arity");
    double mean_abs = 0.0;
    for (std::size_t ys = 0; ys < truth.size(); ++ys)
      mean_abs += std::abs(truth[ys] - estimate[ys]);
    total += weight * mean_abs / static_cast<double>(truth.size());
  }
  return total;
}

double operr(const CausalNetwork& gold, int x, int y, const PairPredictor& predictor) {
  return operr(gold_pair_distributions(gold, x, y), predictor);
}

double mperr(const CausalNetwork& gold, int x, int y, const PairPredictor& predictor) {
  return mperr(gold_pair_distributions(gold, x, y), predictor);
}

double aggregate(std::span<const double> values) {
  if (values.empty()) throw Error("cannot aggregate an empty list");
  double total = 0.0;
  for (double v : values) total += v;
  return total / static_cast<double>(values.size());
}

}  // namespace cbn
