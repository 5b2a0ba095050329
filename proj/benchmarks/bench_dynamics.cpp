#include <benchmark/benchmark.h>

#include "feplab/coupling.hpp"
#include "feplab/dynamics.hpp"
#include "feplab/exact.hpp"
#include "feplab/experiment.hpp"
#include "feplab/height.hpp"
#include "feplab/mapping.hpp"
#include "feplab/statistic.hpp"

namespace {

using namespace feplab;

void BM_FepEvents(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int k = 3 * n / 4;
  const FepConfiguration start = clustered_configuration(n, k);
  Rng rng = make_rng(7);
  double horizon = 50.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_fep(start, horizon, rng));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(horizon * k));
}
BENCHMARK(BM_FepEvents)->Arg(64)->Arg(256);

void BM_SsepEvents(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  Rng rng = make_rng(7);
  const SsepConfiguration start = sample_uniform_ssep(k, k / 3, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        run_ssep_with_current(TaggedSsepState{0, start}, 50.0, rng));
  }
}
BENCHMARK(BM_SsepEvents)->Arg(48)->Arg(192);

void BM_CoupledTriple(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const int p = k / 3;
  Rng rng = make_rng(11);
  const SsepConfiguration word = sample_uniform_ssep(k, p, rng);
  // Anchor offset p guarantees the brackets clear any (k,p) profile.
  const CoupledTriple triple{psi(p, word),
                             psi(0, sample_uniform_ssep(k, p, rng)),
                             psi(-p, word)};
  for (auto _ : state) {
    Rng run_rng = make_rng(13);
    benchmark::DoNotOptimize(run_monotone_coupled(triple, 25.0, run_rng));
  }
}
BENCHMARK(BM_CoupledTriple)->Arg(48)->Arg(192);

void BM_FluctuationStatistic(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng = make_rng(3);
  const FepConfiguration eta = sample_pi_fep(n, 3 * n / 4, rng);
  for (auto _ : state) benchmark::DoNotOptimize(fluctuation_statistic(eta));
}
BENCHMARK(BM_FluctuationStatistic)->Arg(256);

void BM_Uniformization(benchmark::State& state) {
  const auto model = build_fep_generator(8, 5);
  DistributionVector mu0(model.states.size(), 0.0);
  mu0[0] = 1.0;
  for (auto _ : state)
    benchmark::DoNotOptimize(distribution_at(model.generator, mu0, 5.0));
}
BENCHMARK(BM_Uniformization);

}  // namespace

BENCHMARK_MAIN();
