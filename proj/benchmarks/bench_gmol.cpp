#include <benchmark/benchmark.h>

#include "gmol/distribution.hpp"
#include "gmol/fit.hpp"
#include "gmol/properties.hpp"
#include "gmol/regression.hpp"
#include "gmol/simulate.hpp"

namespace {

const gmol::GmolParams kTheta(0.2, 0.6, 0.5, 0.8);

void BM_Pdf(benchmark::State& state) {
  double x = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gmol::pdf(x, kTheta));
    x = x < 100.0 ? x * 1.01 : 0.1;
  }
}
BENCHMARK(BM_Pdf);

void BM_Quantile(benchmark::State& state) {
  double u = 0.001;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gmol::quantile(u, kTheta));
    u = u < 0.99 ? u + 0.001 : 0.001;
  }
}
BENCHMARK(BM_Quantile);

void BM_LoglikIid(benchmark::State& state) {
  const gmol::IidSample s(gmol::sample(static_cast<int>(state.range(0)), kTheta, 1));
  for (auto _ : state) benchmark::DoNotOptimize(gmol::loglik_iid(kTheta, s));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LoglikIid)->Arg(300)->Arg(10000);

void BM_FitGmol(benchmark::State& state) {
  const gmol::IidSample s(gmol::sample(static_cast<int>(state.range(0)), kTheta, 2));
  for (auto _ : state) benchmark::DoNotOptimize(gmol::fit_mle(s, gmol::SubModel::GMOL, kTheta));
}
BENCHMARK(BM_FitGmol)->Arg(50)->Arg(300)->Unit(benchmark::kMillisecond);

void BM_FitRegression(benchmark::State& state) {
  gmol::RegParams z;
  z.alpha = 0.5;
  z.lambda = 0.3;
  z.eta1 = Eigen::Vector2d(0.6, 0.8);
  z.eta2 = Eigen::Vector2d(0.2, 0.4);
  const gmol::CensoredDesign d = gmol::simulate_censored_design(z, 500, 15.0, 3);
  for (auto _ : state) benchmark::DoNotOptimize(gmol::fit_regression(d, gmol::SubModel::GMOL, z));
}
BENCHMARK(BM_FitRegression)->Unit(benchmark::kMillisecond);

void BM_MixtureRep(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(gmol::mixture_rep(kTheta));
}
BENCHMARK(BM_MixtureRep)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
