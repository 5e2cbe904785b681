#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "ucp/cart.hpp"
#include "ucp/dataset.hpp"
#include "ucp/evaluation.hpp"
#include "ucp/locality.hpp"
#include "ucp/svr.hpp"

namespace {

struct Data {
  std::vector<ucp::FeatureVector> x;
  std::vector<double> y;
};

Data random_data(std::size_t n) {
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(0, 1);
  Data d;
  for (std::size_t i = 0; i < n; ++i) {
    ucp::FeatureVector f;
    for (auto& v : f) v = u(rng);
    d.x.push_back(f);
    d.y.push_back(15 + 6 * f[1] + 3 * f[3] + u(rng));
  }
  return d;
}

void BM_SvrFit(benchmark::State& state) {
  const auto d = random_data(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ucp::regress::svr_fit(d.x, d.y));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SvrFit)->RangeMultiplier(2)->Range(16, 512)->Complexity();

void BM_CartFit(benchmark::State& state) {
  const auto d = random_data(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ucp::regress::cart_fit(d.x, d.y));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CartFit)->RangeMultiplier(2)->Range(16, 1024)->Complexity();

void BM_SelectK(benchmark::State& state) {
  const auto d = ucp::generate_synthetic(3, static_cast<std::size_t>(state.range(0)));
  const auto pts = ucp::locality::env_points(d);
  for (auto _ : state) benchmark::DoNotOptimize(ucp::locality::select_k(pts, 2, 10, 42));
}
BENCHMARK(BM_SelectK)->Arg(110)->Arg(440);

void BM_LoocvEnsemble(benchmark::State& state) {
  const auto d = ucp::generate_synthetic(5, static_cast<std::size_t>(state.range(0)));
  ucp::eval::LoocvConfig cfg;
  cfg.threads = 1;
  cfg.record_ids = false;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ucp::eval::loocv_run(d, ucp::locality::FactorLevels{8}, ucp::ModelKind::Ensemble, cfg));
  }
}
BENCHMARK(BM_LoocvEnsemble)->Arg(55)->Arg(110)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
