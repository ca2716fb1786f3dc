#include <benchmark/benchmark.h>

#include "gaussalign/igw.hpp"
#include "gaussalign/synthetic.hpp"
#include "gaussalign/transport.hpp"

namespace {

using namespace gaussalign;

void BM_IgwRgdDistance(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const Gaussian g1 = random_gaussian(d, 0.1, 1.0, 11);
  const Gaussian g2 = random_gaussian(d, 0.1, 1.0, 13);
  for (auto _ : state) {
    IgwRgdResult res = igw_distance_rgd(g1, g2);
    benchmark::DoNotOptimize(res.distance);
  }
  state.SetComplexityN(d);
}
BENCHMARK(BM_IgwRgdDistance)->RangeMultiplier(2)->Range(8, 128)->Complexity();

void BM_IgwBounds(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const Gaussian g1 = random_gaussian(d, 0.1, 1.0, 17);
  const Gaussian g2 = random_gaussian(d, 0.1, 1.0, 19);
  for (auto _ : state) {
    IgwBounds b = igw_bounds(g1, g2);
    benchmark::DoNotOptimize(b.upper);
  }
}
BENCHMARK(BM_IgwBounds)->RangeMultiplier(2)->Range(8, 256);

void BM_BwDistance(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const Gaussian g1 = random_gaussian(d, 0.1, 1.0, 23);
  const Gaussian g2 = random_gaussian(d, 0.1, 1.0, 29);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bw_distance(g1, g2));
  }
}
BENCHMARK(BM_BwDistance)->RangeMultiplier(2)->Range(8, 256);

}  // namespace
