#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cbn/metrics.hpp"
#include "test_util.hpp"

using namespace cbn;

namespace {

Variable binary(const std::string& name) { return Variable{name, {"F", "T"}}; }

CausalNetwork gold_pair() {
  NetworkStructure s({binary("X"), binary("Y")}, {{}, {0}});
  return CausalNetwork{s, {{{0.4, 0.6}}, {{0.2, 0.8}, {0.2, 0.8}}}};
}

HypothesisPosterior posterior_of(std::vector<double> p) {
  HypothesisPosterior post;
  post.posterior = std::move(p);
  post.scores.resize(post.posterior.size());
  return post;
}

}  // namespace

TEST_SUITE_BEGIN("metrics");

TEST_CASE("structure error complements the true-hypothesis posterior") {
  CHECK(serr(posterior_of({1.0 / 3, 1.0 / 3, 1.0 / 3}), 0) == doctest::Approx(0.667).epsilon(1e-3));
  CHECK(serr(posterior_of({0.0, 1.0, 0.0}), 1) == 0.0);
  CHECK(serr(posterior_of({0.2, 0.5, 0.3}), 1) == doctest::Approx(0.5));
  CHECK_THROWS_AS((void)serr(posterior_of({0.5, 0.5}), 7), Error);
}

TEST_CASE("perfect prediction has zero error in both metrics") {
  CausalNetwork gold = gold_pair();
  auto dists = gold_pair_distributions(gold, 0, 1);
  PairPredictor perfect = [&](int xs, EvidenceMode mode) {
    return mode == EvidenceMode::kObserved ? dists.y_given_x[xs] : dists.y_given_do_x[xs];
  };
  CHECK(operr(gold, 0, 1, perfect) == doctest::Approx(0.0));
  CHECK(mperr(gold, 0, 1, perfect) == doctest::Approx(0.0));
}

TEST_CASE("a constant 0.2 gap in a binary target scores 0.2") {
  // Gold has P(Y=T | X=x) = 0.8 for both x; the estimate says 0.6. Both
  // states of Y are off by 0.2, so the state-average is 0.2 for every x.
  CausalNetwork gold = gold_pair();
  PairPredictor off = [](int, EvidenceMode) { return std::vector<double>{0.4, 0.6}; };
  CHECK(operr(gold, 0, 1, off) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(mperr(gold, 0, 1, off) == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("errors are bounded by one") {
  Rng rng(246);
  for (int trial = 0; trial < 20; ++trial) {
    CausalNetwork net = testutil::random_network(rng, 3, 0.6, 3);
    const int x = 0, y = 2;
    PairPredictor adversarial = [&](int, EvidenceMode) {
      std::vector<double> dist(net.structure.arity(y), 0.0);
      dist[0] = 1.0;
      return dist;
    };
    const double o = operr(net, x, y, adversarial);
    const double m = mperr(net, x, y, adversarial);
    CHECK(o >= 0.0);
    CHECK(o <= 1.0);
    CHECK(m >= 0.0);
    CHECK(m <= 1.0);
  }
}

TEST_CASE("metrics ignore zero-probability gold states of x") {
  CausalNetwork gold = gold_pair();
  gold.cpts[0][0] = {0.0, 1.0};  // X is never F
  PairPredictor wild = [](int xs, EvidenceMode) {
    // Deliberately terrible for X=F, exact for X=T.
    return xs == 0 ? std::vector<double>{1.0, 0.0} : std::vector<double>{0.2, 0.8};
  };
  CHECK(operr(gold, 0, 1, wild) == doctest::Approx(0.0));
}

TEST_CASE("d-separated pair with an exact marginal estimate scores zero") {
  NetworkStructure s({binary("X"), binary("Y")}, {{}, {}});
  CausalNetwork gold{s, {{{0.3, 0.7}}, {{0.45, 0.55}}}};
  PairPredictor exact_marginal = [](int, EvidenceMode) {
    return std::vector<double>{0.45, 0.55};
  };
  CHECK(operr(gold, 0, 1, exact_marginal) == doctest::Approx(0.0));
  CHECK(mperr(gold, 0, 1, exact_marginal) == doctest::Approx(0.0));
}

TEST_CASE("state iteration order cannot matter") {
  // Same network with both Y states relabeled/swapped everywhere; metric
  // values must be identical.
  CausalNetwork gold = gold_pair();
  CausalNetwork swapped = gold;
  swapped.structure = NetworkStructure(
      {binary("X"), Variable{"Y", {"T", "F"}}}, {{}, {0}});
  swapped.cpts[1] = {{0.8, 0.2}, {0.8, 0.2}};
  PairPredictor estimate = [](int, EvidenceMode) { return std::vector<double>{0.35, 0.65}; };
  PairPredictor estimate_swapped = [](int, EvidenceMode) {
    return std::vector<double>{0.65, 0.35};
  };
  CHECK(operr(gold, 0, 1, estimate) ==
        doctest::Approx(operr(swapped, 0, 1, estimate_swapped)).epsilon(1e-12));
  CHECK(mperr(gold, 0, 1, estimate) ==
        doctest::Approx(mperr(swapped, 0, 1, estimate_swapped)).epsilon(1e-12));
}

TEST_CASE("aggregate is the arithmetic mean") {
  std::vector<double> one{0.5};
  std::vector<double> two{0.0, 1.0};
  CHECK(aggregate(one) == doctest::Approx(0.5));
  CHECK(aggregate(two) == doctest::Approx(0.5));
  std::vector<double> zero_data(29, 1.0 - 1.0 / 3.0);
  CHECK(aggregate(zero_data) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK_THROWS_AS((void)aggregate(std::vector<double>{}), Error);
}

TEST_SUITE_END();
