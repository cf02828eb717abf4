#include <benchmark/benchmark.h>

#include "cbn/netio.hpp"
#include "cbn/sampler.hpp"

namespace {

const cbn::CausalNetwork& alarm() {
  static cbn::CausalNetwork net = cbn::load_network(std::string(CBN_DATA_DIR) + "/alarm.cbn");
  return net;
}

void BM_DrawCase(benchmark::State& state) {
  cbn::Rng rng(1);
  for (auto _ : state)
    benchmark::DoNotOptimize(cbn::draw_case(alarm(), {}, rng));
}
BENCHMARK(BM_DrawCase);

void BM_GenerateMix(benchmark::State& state) {
  const int x = alarm().structure.index_of("VENTALV");
  const int y = alarm().structure.index_of("HR");
  const cbn::MixSpec spec{x, y, state.range(0), state.range(0), 3};
  for (auto _ : state)
    benchmark::DoNotOptimize(cbn::generate_mix(alarm(), spec));
  state.SetItemsProcessed(state.iterations() * 2 * state.range(0));
}
BENCHMARK(BM_GenerateMix)->Arg(100)->Arg(500);

}  // namespace
