#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "cbn/dataio.hpp"
#include "cbn/sampler.hpp"
#include "test_util.hpp"

using namespace cbn;

namespace {

Variable binary(const std::string& name) { return Variable{name, {"F", "T"}}; }

// Upper-tail p-value of a chi-square statistic.
double chi_square_p(double statistic, int dof) {
  return boost::math::gamma_q(dof / 2.0, statistic / 2.0);
}

// Goodness of fit between empirical joint counts and the exact joint of a
// network; cells with zero probability must stay empty and are dropped.
double joint_fit_p(const CausalNetwork& net, const std::vector<long long>& counts,
                   long long draws) {
  const std::vector<double> expected = testutil::joint_table(net);
  double statistic = 0.0;
  int cells = 0;
  for (std::size_t idx = 0; idx < expected.size(); ++idx) {
    if (expected[idx] == 0.0) {
      REQUIRE(counts[idx] == 0);
      continue;
    }
    const double e = expected[idx] * static_cast<double>(draws);
    const double d = static_cast<double>(counts[idx]) - e;
    statistic += d * d / e;
    ++cells;
  }
  return chi_square_p(statistic, cells - 1);
}

}  // namespace

TEST_SUITE_BEGIN("sampler");

TEST_CASE("a deterministic network yields its unique case") {
  NetworkStructure s({binary("A"), binary("B")}, {{}, {0}});
  CausalNetwork net{s, {{{0.0, 1.0}}, {{1.0, 0.0}, {0.0, 1.0}}}};
  Rng rng(1);
  for (int i = 0; i < 5; ++i) {
    CaseRecord c = draw_case(net, {}, rng);
    CHECK(c.values == std::vector<int>{1, 1});
    CHECK(c.manipulated == std::vector<bool>{false, false});
  }
}

TEST_CASE("manipulated cells are flagged and fixed") {
  NetworkStructure s({binary("A"), binary("B")}, {{}, {0}});
  CausalNetwork net{s, {{{0.9, 0.1}}, {{0.9, 0.1}, {0.1, 0.9}}}};
  Rng rng(2);
  Manipulation m{0, 1};
  CaseRecord c = draw_case(net, std::span<const Manipulation>(&m, 1), rng);
  CHECK(c.values[0] == 1);
  CHECK(c.manipulated == std::vector<bool>{true, false});

  CaseRecord u = draw_manipulated_case(net, 1, rng);
  CHECK(u.manipulated == std::vector<bool>{false, true});
}

TEST_CASE("binary root frequencies land near the mechanism") {
  NetworkStructure s({binary("A")}, {{}});
  CausalNetwork net{s, {{{0.3, 0.7}}}};
  Rng rng(3);
  int hits = 0;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) hits += draw_case(net, {}, rng).values[0];
  CHECK(std::abs(hits / static_cast<double>(draws) - 0.7) < 0.02);
}

TEST_CASE("manipulation states are drawn uniformly") {
  const int draws = 10000;
  SUBCASE("binary target") {
    NetworkStructure s({binary("A"), binary("B")}, {{}, {0}});
    CausalNetwork net{s, {{{0.9, 0.1}}, {{0.9, 0.1}, {0.1, 0.9}}}};
    Rng rng(4);
    int manip_true = 0;
    for (int i = 0; i < draws; ++i) manip_true += draw_manipulated_case(net, 0, rng).values[0];
    CHECK(std::abs(manip_true / static_cast<double>(draws) - 0.5) < 0.02);
  }
  SUBCASE("four-state target") {
    Variable wide{"W", {"a", "b", "c", "d"}};
    NetworkStructure s({wide}, {{}});
    CausalNetwork net{s, {{{0.97, 0.01, 0.01, 0.01}}}};
    Rng rng(5);
    std::vector<int> hits(4, 0);
    for (int i = 0; i < draws; ++i) ++hits[draw_manipulated_case(net, 0, rng).values[0]];
    for (int k = 0; k < 4; ++k)
      CHECK(std::abs(hits[k] / static_cast<double>(draws) - 0.25) < 0.02);
  }
}

TEST_CASE("sampled joints fit the exact joint, with and without surgery") {
  Rng rng(6);
  const long long draws = 10000;
  for (int trial = 0; trial < 6; ++trial) {
    CausalNetwork net = testutil::random_network(rng, 4, 0.5, 2);
    std::vector<Manipulation> manipulations;
    if (trial % 2 == 1)
      manipulations.push_back({rng.below(4), rng.below(2)});

    CausalNetwork reference = surgery(net, manipulations);
    std::vector<long long> counts(testutil::joint_size(net.structure), 0);
    Rng stream(1000 + trial);
    for (long long i = 0; i < draws; ++i) {
      CaseRecord c = draw_case(net, manipulations, stream);
      std::size_t idx = 0;
      for (int v = 0; v < net.structure.num_variables(); ++v)
        idx = idx * static_cast<std::size_t>(net.structure.arity(v)) +
              static_cast<std::size_t>(c.values[v]);
      ++counts[idx];
    }
    CHECK(joint_fit_p(reference, counts, draws) > 0.001);
  }
}

TEST_CASE("mix composition follows the recipe") {
  CausalNetwork alarm_small{
      NetworkStructure({binary("X"), binary("Y")}, {{}, {0}}),
      {{{0.5, 0.5}}, {{0.8, 0.2}, {0.3, 0.7}}}};
  SUBCASE("zero cases") {
    Dataset d = generate_mix(alarm_small, MixSpec{0, 1, 0, 0, 9});
    CHECK(d.cases.empty());
    CHECK(d.variables[0].name == "X");
  }
  SUBCASE("four experimental plus three observational") {
    Dataset d = generate_mix(alarm_small, MixSpec{0, 1, 4, 3, 9});
    REQUIRE(d.cases.size() == 7);
    int x_manip = 0, y_manip = 0, observational = 0;
    for (const CaseRecord& c : d.cases) {
      if (c.manipulated[0]) ++x_manip;
      else if (c.manipulated[1]) ++y_manip;
      else ++observational;
      CHECK_FALSE((c.manipulated[0] && c.manipulated[1]));
    }
    CHECK(x_manip == 2);
    CHECK(y_manip == 2);
    CHECK(observational == 3);
  }
}

TEST_CASE("identical seeds give byte-identical datasets") {
  Rng rng(7);
  CausalNetwork net = testutil::random_network(rng, 5, 0.5, 3);
  MixSpec spec{1, 3, 10, 5, 123456};
  Dataset a = generate_mix(net, spec);
  Dataset b = generate_mix(net, spec);
  CHECK(write_dataset(a) == write_dataset(b));
  spec.seed = 654321;
  Dataset c = generate_mix(net, spec);
  CHECK(write_dataset(a) != write_dataset(c));
}

TEST_CASE("mix rejects bad specs") {
  CausalNetwork net{NetworkStructure({binary("X"), binary("Y")}, {{}, {}}),
                    {{{0.5, 0.5}}, {{0.5, 0.5}}}};
  CHECK_THROWS_AS((void)generate_mix(net, MixSpec{0, 0, 2, 0, 1}), Error);
  CHECK_THROWS_AS((void)generate_mix(net, MixSpec{0, 1, 3, 0, 1}), Error);
  CHECK_THROWS_AS((void)generate_mix(net, MixSpec{0, 7, 2, 0, 1}), Error);
}

TEST_SUITE_END();
