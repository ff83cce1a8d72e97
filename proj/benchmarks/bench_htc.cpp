#include <benchmark/benchmark.h>

#include <random>

#include "htc/baselines.hpp"
#include "htc/hierarchy.hpp"
#include "htc/metrics.hpp"
#include "htc/wasserstein.hpp"

namespace {

htc::PointCloud cloud(std::size_t n, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  htc::PointCloud pc;
  pc.coords.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < pc.coords.size(); ++i) pc.coords.data()[i] = u(rng);
  return pc;
}

void BM_RunHtc(benchmark::State& state) {
  const auto dm = htc::euclidean_matrix(cloud(static_cast<std::size_t>(state.range(0)), 3, 1));
  const auto grid = htc::build_filtration_grid(dm);
  for (auto _ : state) benchmark::DoNotOptimize(htc::run_htc(dm, grid));
  state.counters["M"] = static_cast<double>(grid.steps);
}
BENCHMARK(BM_RunHtc)->RangeMultiplier(2)->Range(64, 1024)->Unit(benchmark::kMillisecond);

void BM_RunHtcExact(benchmark::State& state) {
  const auto dm = htc::euclidean_matrix(cloud(static_cast<std::size_t>(state.range(0)), 3, 2));
  const auto grid = htc::build_exact_grid(dm);
  for (auto _ : state) benchmark::DoNotOptimize(htc::run_htc(dm, grid));
}
BENCHMARK(BM_RunHtcExact)->RangeMultiplier(2)->Range(64, 512)->Unit(benchmark::kMillisecond);

void BM_Fermat(benchmark::State& state) {
  const auto pc = cloud(static_cast<std::size_t>(state.range(0)), 3, 3);
  for (auto _ : state) benchmark::DoNotOptimize(htc::fermat_matrix(pc, 2.0));
}
BENCHMARK(BM_Fermat)->RangeMultiplier(2)->Range(64, 1024)->Unit(benchmark::kMillisecond);

void BM_WassersteinP1(benchmark::State& state) {
  const auto side = static_cast<Eigen::Index>(state.range(0));
  const htc::GridDistribution a{Eigen::MatrixXd::Random(side, side).cwiseAbs(), 1.0};
  const htc::GridDistribution b{Eigen::MatrixXd::Random(side, side).cwiseAbs(), 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(htc::wasserstein_grid(a, b));
}
BENCHMARK(BM_WassersteinP1)->DenseRange(8, 32, 8)->Unit(benchmark::kMillisecond);

void BM_WassersteinP2(benchmark::State& state) {
  const auto side = static_cast<Eigen::Index>(state.range(0));
  const htc::GridDistribution a{Eigen::MatrixXd::Random(side, side).cwiseAbs(), 1.0};
  const htc::GridDistribution b{Eigen::MatrixXd::Random(side, side).cwiseAbs(), 1.0};
  htc::WassersteinOptions opts;
  opts.p = 2;
  for (auto _ : state) benchmark::DoNotOptimize(htc::wasserstein_grid(a, b, opts));
}
BENCHMARK(BM_WassersteinP2)->DenseRange(5, 10, 5)->Unit(benchmark::kMillisecond);

void BM_KMeans(benchmark::State& state) {
  const auto pc = cloud(static_cast<std::size_t>(state.range(0)), 5, 4);
  for (auto _ : state) benchmark::DoNotOptimize(htc::kmeans(pc, 8, 7));
}
BENCHMARK(BM_KMeans)->RangeMultiplier(4)->Range(256, 4096)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
