#include <benchmark/benchmark.h>

#include "gaussalign/multimarginal.hpp"
#include "gaussalign/synthetic.hpp"

namespace {

using namespace gaussalign;

// The scaling setup of the CLI bench-mmot subcommand: d = 3 marginals with
// covariance A Aᵀ + 0.1 I, sweeping the marginal count p.
void BM_MultimarginalOt(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  const std::vector<Gaussian> gs = random_covariance_ensemble(p, 3, 0.1, 31);
  for (auto _ : state) {
    MultiCoupling mc = mm_ot_solve(gs);
    benchmark::DoNotOptimize(mc.cost);
  }
  state.SetComplexityN(p);
}
BENCHMARK(BM_MultimarginalOt)->Arg(3)->Arg(5)->Arg(10)->Arg(25)->Arg(50)->Complexity()
    ->Unit(benchmark::kMillisecond);

void BM_MultimarginalIgw(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  const std::vector<Gaussian> gs = random_covariance_ensemble(p, 8, 0.1, 37);
  for (auto _ : state) {
    MultiCoupling mc = mm_igw_closed_form(gs);
    benchmark::DoNotOptimize(mc.cost);
  }
}
BENCHMARK(BM_MultimarginalIgw)->Arg(3)->Arg(10)->Arg(25)->Unit(benchmark::kMillisecond);

}  // namespace
