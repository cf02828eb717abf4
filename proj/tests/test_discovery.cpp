#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cbn/discovery.hpp"
#include "cbn/netio.hpp"
#include "cbn/sampler.hpp"
#include "test_util.hpp"

using namespace cbn;

namespace {

Variable binary(const std::string& name) { return Variable{name, {"F", "T"}}; }

// X -> Y with a strong mechanism; the workhorse data generator here.
CausalNetwork strong_pair() {
  NetworkStructure s({binary("X"), binary("Y")}, {{}, {0}});
  return CausalNetwork{s, {{{0.5, 0.5}}, {{0.9, 0.1}, {0.1, 0.9}}}};
}

Dataset empty_pair_dataset() {
  Dataset d;
  d.variables = {binary("X"), binary("Y")};
  return d;
}

}  // namespace

TEST_SUITE_BEGIN("discovery");

TEST_CASE("DAG enumeration matches the known counts") {
  std::vector<Variable> vars;
  const std::vector<std::size_t> expected{1, 3, 25, 543};
  for (int n = 1; n <= 4; ++n) {
    vars.push_back(binary("V" + std::to_string(n)));
    auto dags = enumerate_dags(vars);
    CHECK(dags.size() == expected[n - 1]);
    for (std::size_t a = 0; a < dags.size(); ++a) {
      CHECK(dags[a].is_acyclic());
      for (std::size_t b = a + 1; b < dags.size(); ++b) CHECK_FALSE(dags[a] == dags[b]);
    }
  }
  vars.push_back(binary("V5"));
  vars.push_back(binary("V6"));
  CHECK_THROWS_AS((void)enumerate_dags(vars), Error);
}

TEST_CASE("empty data gives the uniform pairwise posterior") {
  auto family = pairwise_family(binary("X"), binary("Y"));
  auto post = structure_posterior(empty_pair_dataset(), family);
  for (double p : post.posterior) CHECK(p == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  double sum = 0.0;
  for (double p : post.posterior) sum += p;
  CHECK(std::abs(sum - 1.0) <= 1e-9);
}

TEST_CASE("observational data cannot separate the two arc directions") {
  Rng rng(11);
  auto family = pairwise_family(binary("X"), binary("Y"));
  for (int trial = 0; trial < 10; ++trial) {
    Dataset d = generate_mix(strong_pair(), MixSpec{0, 1, 0, 40 + 40 * trial, 100 + trial});
    auto post = structure_posterior(d, family);
    CHECK(std::abs(post.posterior[0] - post.posterior[1]) <= 1e-9);
  }
}

TEST_CASE("experimental data identifies the generating direction") {
  auto family = pairwise_family(binary("X"), binary("Y"));
  Dataset d = generate_mix(strong_pair(), MixSpec{0, 1, 500, 0, 42});
  auto post = structure_posterior(d, family);
  CHECK(post.posterior[static_cast<int>(PairHypothesis::kXCausesY)] > 0.95);
}

TEST_CASE("posteriors are invariant to a constant shift of all log priors") {
  Dataset d = generate_mix(strong_pair(), MixSpec{0, 1, 20, 20, 7});
  auto family = pairwise_family(binary("X"), binary("Y"));
  auto before = structure_posterior(d, family);
  for (Hypothesis& h : family.hypotheses) h.log_prior -= 2.5;  // no longer sums to 1; fine
  auto after = structure_posterior(d, family);
  for (std::size_t i = 0; i < before.posterior.size(); ++i)
    CHECK(after.posterior[i] == doctest::Approx(before.posterior[i]).epsilon(1e-12));
}

TEST_CASE("swapping variable roles swaps the directed posteriors") {
  Dataset d = generate_mix(strong_pair(), MixSpec{0, 1, 30, 20, 99});
  Dataset swapped;
  swapped.variables = {d.variables[1], d.variables[0]};
  for (const CaseRecord& c : d.cases)
    swapped.cases.push_back({{c.values[1], c.values[0]}, {c.manipulated[1], c.manipulated[0]}});

  auto post = structure_posterior(d, pairwise_family(binary("X"), binary("Y")));
  auto post_swapped = structure_posterior(swapped, pairwise_family(binary("Y"), binary("X")));
  CHECK(post.posterior[0] == doctest::Approx(post_swapped.posterior[1]).epsilon(1e-12));
  CHECK(post.posterior[1] == doctest::Approx(post_swapped.posterior[0]).epsilon(1e-12));
  CHECK(post.posterior[2] == doctest::Approx(post_swapped.posterior[2]).epsilon(1e-12));
}

TEST_CASE("arc probability sums posterior mass over structures with the arc") {
  SUBCASE("pairwise, empty data") {
    auto family = pairwise_family(binary("X"), binary("Y"));
    CHECK(arc_probability(empty_pair_dataset(), family, 0, 1) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  }
  SUBCASE("posterior concentrated away from the arc") {
    auto family = pairwise_family(binary("X"), binary("Y"));
    // Independent data in bulk: almost all mass on the no-arc structure.
    NetworkStructure indep({binary("X"), binary("Y")}, {{}, {}});
    CausalNetwork net{indep, {{{0.5, 0.5}}, {{0.5, 0.5}}}};
    Dataset d = generate_mix(net, MixSpec{0, 1, 0, 4000, 13});
    CHECK(arc_probability(d, family, 0, 1) < 0.05);
  }
  SUBCASE("three-variable family matches the direct sum") {
    std::vector<Variable> vars{binary("A"), binary("B"), binary("C")};
    auto family = uniform_family(enumerate_dags(vars));
    REQUIRE(family.hypotheses.size() == 25);
    Rng rng(1234);
    Dataset d = testutil::random_dataset(rng, vars, 40, 0.2);
    auto post = structure_posterior(d, family);
    double expected = 0.0;
    for (std::size_t i = 0; i < family.hypotheses.size(); ++i)
      if (family.hypotheses[i].structure.has_arc(0, 2)) expected += post.posterior[i];
    CHECK(arc_probability(d, family, 0, 2) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(expected > 0.0);
  }
}

TEST_CASE("model averaging over a single disconnected structure is its marginal") {
  HypothesisSet only_h3;
  only_h3.hypotheses.push_back(
      {NetworkStructure({binary("X"), binary("Y")}, {{}, {}}), 0.0, "no arc"});
  Dataset d = generate_mix(strong_pair(), MixSpec{0, 1, 0, 25, 3});
  AveragedPredictor predictor(d, only_h3);
  const CausalNetwork fitted =
      posterior_params(tally_counts(d, only_h3.hypotheses[0].structure),
                       default_prior(only_h3.hypotheses[0].structure),
                       only_h3.hypotheses[0].structure);
  auto expected = marginal(fitted, 1);
  for (auto mode : {EvidenceMode::kObserved, EvidenceMode::kManipulated}) {
    auto got = predictor.predict(1, Evidence{0, 1, mode});
    CHECK(got[0] == doctest::Approx(expected[0]).epsilon(1e-12));
    CHECK(got[1] == doctest::Approx(expected[1]).epsilon(1e-12));
  }
}

TEST_CASE("under y->x, manipulating x leaves y at its marginal") {
  HypothesisSet only_h2;
  only_h2.hypotheses.push_back(
      {NetworkStructure({binary("X"), binary("Y")}, {{1}, {}}), 0.0, "Y->X"});
  Dataset d = generate_mix(strong_pair(), MixSpec{0, 1, 10, 25, 4});
  AveragedPredictor predictor(d, only_h2);
  const auto& s = only_h2.hypotheses[0].structure;
  const CausalNetwork fitted = posterior_params(tally_counts(d, s), default_prior(s), s);
  auto expected = marginal(fitted, 1);
  auto got = predictor.predict(1, Evidence{0, 0, EvidenceMode::kManipulated});
  CHECK(got[0] == doctest::Approx(expected[0]).epsilon(1e-12));
  CHECK(got[1] == doctest::Approx(expected[1]).epsilon(1e-12));
}

TEST_CASE("empty data predicts uniformly under the default prior") {
  auto family = pairwise_family(binary("X"), binary("Y"));
  for (auto mode : {EvidenceMode::kObserved, EvidenceMode::kManipulated}) {
    auto dist = averaged_predict(empty_pair_dataset(), family, 1, Evidence{0, 1, mode});
    CHECK(dist[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(dist[1] == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("averaged prediction is a convex combination of per-structure ones") {
  Rng rng(71);
  auto family = pairwise_family(binary("X"), binary("Y"));
  for (int trial = 0; trial < 15; ++trial) {
    Dataset d = generate_mix(strong_pair(),
                             MixSpec{0, 1, 2 * rng.below(20), rng.below(40), 500u + trial});
    AveragedPredictor predictor(d, family);
    for (auto mode : {EvidenceMode::kObserved, EvidenceMode::kManipulated}) {
      const Evidence given{0, rng.below(2), mode};
      auto mixed = predictor.predict(1, given);
      std::vector<double> lo(mixed.size(), 1.0), hi(mixed.size(), 0.0);
      for (const Hypothesis& h : family.hypotheses) {
        HypothesisSet single;
        single.hypotheses.push_back({h.structure, 0.0, h.label});
        auto part = averaged_predict(d, single, 1, given);
        for (std::size_t k = 0; k < part.size(); ++k) {
          lo[k] = std::min(lo[k], part[k]);
          hi[k] = std::max(hi[k], part[k]);
        }
      }
      for (std::size_t k = 0; k < mixed.size(); ++k) {
        CHECK(mixed[k] >= lo[k] - 1e-12);
        CHECK(mixed[k] <= hi[k] + 1e-12);
      }
    }
  }
}

TEST_CASE("posterior certainty grows with experimental data on a gold pair") {
  CausalNetwork alarm = load_network(std::string(CBN_DATA_DIR) + "/alarm.cbn");
  const int x = alarm.structure.index_of("LVFAILURE");
  const int y = alarm.structure.index_of("HISTORY");
  auto family =
      pairwise_family(alarm.structure.variable(x), alarm.structure.variable(y));
  double mean_small = 0.0, mean_large = 0.0;
  const int seeds = 20;
  for (int seed = 0; seed < seeds; ++seed) {
    auto at = [&](long long m) {
      Dataset d = generate_mix(alarm, MixSpec{x, y, m, 0, 9000u + seed});
      return structure_posterior(d, family)
          .posterior[static_cast<int>(PairHypothesis::kXCausesY)];
    };
    mean_small += at(50);
    mean_large += at(500);
  }
  CHECK(mean_large / seeds > mean_small / seeds);
}

TEST_CASE("intent augmentation adds one observe state and one arc") {
  NetworkStructure s({binary("X"), binary("Y")}, {{}, {0}});
  NetworkStructure augmented = augment_intent(s, 0);
  REQUIRE(augmented.num_variables() == 3);
  const int m = augmented.index_of("M_X");
  CHECK(augmented.variable(m).states == std::vector<std::string>{"0", "1", "2"});
  CHECK(augmented.has_arc(m, 0));
  CHECK(augmented.has_arc(0, 1));
  CHECK(augmented.parents(m).empty());
  CHECK_THROWS_AS((void)augment_intent(augmented, 0), Error);
}

TEST_CASE("recording intent recovers the deterministic-manipulation posterior") {
  // The same simulated experiment, encoded once with manipulation flags and
  // once as purely observational data over (X, Y, M_X).
  CausalNetwork net = strong_pair();
  auto flags_family = pairwise_family(binary("X"), binary("Y"));
  HypothesisSet augmented_family;
  for (const Hypothesis& h : flags_family.hypotheses)
    augmented_family.hypotheses.push_back(
        {augment_intent(h.structure, 0), h.log_prior, h.label + " + intent"});

  Variable intent{"M_X", {"0", "1", "2"}};
  for (int seed = 0; seed < 5; ++seed) {
    Rng rng(4000u + seed);
    Dataset flagged;
    flagged.variables = {binary("X"), binary("Y")};
    Dataset recorded;
    recorded.variables = {binary("X"), binary("Y"), intent};
    for (int c = 0; c < 500; ++c) {
      const bool experimental = c % 2 == 0;
      CaseRecord full = experimental ? draw_manipulated_case(net, 0, rng)
                                     : draw_case(net, {}, rng);
      flagged.cases.push_back(full);
      const int m_state = experimental ? full.values[0] + 1 : 0;
      recorded.cases.push_back(
          {{full.values[0], full.values[1], m_state}, {false, false, false}});
    }
    auto direct = structure_posterior(flagged, flags_family);
    auto via_intent = structure_posterior(recorded, augmented_family);
    for (std::size_t i = 0; i < direct.posterior.size(); ++i)
      CHECK(std::abs(direct.posterior[i] - via_intent.posterior[i]) <= 0.05);
  }
}

TEST_CASE("ill-formed hypothesis sets are rejected") {
  auto family = pairwise_family(binary("X"), binary("Y"));
  SUBCASE("duplicate structures") {
    family.hypotheses.push_back(family.hypotheses.front());
    CHECK_THROWS_AS((void)structure_posterior(empty_pair_dataset(), family), Error);
  }
  SUBCASE("prior mass above one") {
    for (Hypothesis& h : family.hypotheses) h.log_prior = 0.0;
    CHECK_THROWS_AS((void)structure_posterior(empty_pair_dataset(), family), Error);
  }
  SUBCASE("mixed variable lists") {
    family.hypotheses[2] =
        {NetworkStructure({binary("X"), binary("Z")}, {{}, {}}), std::log(1.0 / 3), "bad"};
    CHECK_THROWS_AS((void)structure_posterior(empty_pair_dataset(), family), Error);
  }
}

TEST_SUITE_END();
