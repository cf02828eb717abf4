#include <benchmark/benchmark.h>

#include "cbn/netio.hpp"
#include "cbn/sampler.hpp"
#include "cbn/scoring.hpp"

namespace {

const cbn::CausalNetwork& alarm() {
  static cbn::CausalNetwork net = cbn::load_network(std::string(CBN_DATA_DIR) + "/alarm.cbn");
  return net;
}

cbn::Dataset mixed_cases(long long m, long long n) {
  const int x = alarm().structure.index_of("VENTALV");
  const int y = alarm().structure.index_of("HR");
  return cbn::generate_mix(alarm(), cbn::MixSpec{x, y, m, n, 7});
}

void BM_TallyCounts(benchmark::State& state) {
  const cbn::Dataset data = mixed_cases(state.range(0), state.range(0));
  const cbn::NetworkStructure structure({data.variables[0], data.variables[1]}, {{}, {0}});
  for (auto _ : state)
    benchmark::DoNotOptimize(cbn::tally_counts(data, structure));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(data.cases.size()));
}
BENCHMARK(BM_TallyCounts)->Arg(100)->Arg(1000);

void BM_LogMarginalLikelihood(benchmark::State& state) {
  const cbn::Dataset data = mixed_cases(state.range(0), state.range(0));
  const cbn::NetworkStructure structure({data.variables[0], data.variables[1]}, {{}, {0}});
  const cbn::SufficientStats stats = cbn::tally_counts(data, structure);
  const cbn::DirichletPrior prior = cbn::default_prior(structure);
  for (auto _ : state)
    benchmark::DoNotOptimize(cbn::log_marginal_likelihood(stats, prior));
}
BENCHMARK(BM_LogMarginalLikelihood)->Arg(100)->Arg(1000);

void BM_PrequentialScore(benchmark::State& state) {
  const cbn::Dataset data = mixed_cases(state.range(0), state.range(0));
  const cbn::NetworkStructure structure({data.variables[0], data.variables[1]}, {{}, {0}});
  const cbn::DirichletPrior prior = cbn::default_prior(structure);
  for (auto _ : state)
    benchmark::DoNotOptimize(cbn::prequential_log_score(data, structure, prior));
}
BENCHMARK(BM_PrequentialScore)->Arg(1000);

}  // namespace
