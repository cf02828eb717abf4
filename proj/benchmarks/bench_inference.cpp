#include <benchmark/benchmark.h>

#include "cbn/inference.hpp"
#include "cbn/netio.hpp"

namespace {

const cbn::CausalNetwork& alarm() {
  static cbn::CausalNetwork net = cbn::load_network(std::string(CBN_DATA_DIR) + "/alarm.cbn");
  return net;
}

void BM_Marginal(benchmark::State& state) {
  const int bp = alarm().structure.index_of("BP");
  for (auto _ : state)
    benchmark::DoNotOptimize(cbn::marginal(alarm(), bp));
}
BENCHMARK(BM_Marginal);

void BM_ConditionalQuery(benchmark::State& state) {
  const int bp = alarm().structure.index_of("BP");
  const int minvolset = alarm().structure.index_of("MINVOLSET");
  const cbn::Query q{{bp}, {{minvolset, 0, cbn::EvidenceMode::kObserved}}};
  for (auto _ : state)
    benchmark::DoNotOptimize(cbn::query(alarm(), q));
}
BENCHMARK(BM_ConditionalQuery);

void BM_ManipulatedQuery(benchmark::State& state) {
  const int sao2 = alarm().structure.index_of("SAO2");
  const int venttube = alarm().structure.index_of("VENTTUBE");
  const cbn::Query q{{sao2}, {{venttube, 0, cbn::EvidenceMode::kManipulated}}};
  for (auto _ : state)
    benchmark::DoNotOptimize(cbn::query(alarm(), q));
}
BENCHMARK(BM_ManipulatedQuery);

}  // namespace
