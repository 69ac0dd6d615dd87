#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "picardnet/calculus.hpp"
#include "picardnet/compiler.hpp"
#include "picardnet/mlp.hpp"
#include "picardnet/network.hpp"
#include "picardnet/problems.hpp"
#include "picardnet/random_field.hpp"

namespace {

picardnet::Network random_net(std::mt19937_64& rng, const std::vector<int>& widths) {
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  std::vector<picardnet::Layer> layers;
  for (size_t i = 1; i < widths.size(); ++i) {
    picardnet::Layer l{picardnet::Matrix(widths[i], widths[i - 1]),
                       picardnet::Vector(static_cast<size_t>(widths[i]), 0.0)};
    for (double& v : l.w.a) v = u(rng);
    for (double& v : l.b) v = u(rng);
    layers.push_back(std::move(l));
  }
  return picardnet::Network(std::move(layers));
}

void BM_Realize(benchmark::State& state) {
  const int width = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  const picardnet::Network net = random_net(rng, {8, width, width, 1});
  picardnet::Vector x(8, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(picardnet::realize(net, x));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Realize)->Arg(16)->Arg(64)->Arg(256)->Complexity();

void BM_MlpEstimate(benchmark::State& state) {
  picardnet::Problem p = picardnet::make_transport_problem(4, 1.0);
  picardnet::MlpConfig cfg;
  cfg.n = static_cast<int>(state.range(0));
  cfg.m = static_cast<int>(state.range(0));
  cfg.t = 0.0;
  cfg.seed = 7;
  const picardnet::Vector x(4, 0.25);
  for (auto _ : state) benchmark::DoNotOptimize(picardnet::mlp_estimate(p, cfg, x));
}
BENCHMARK(BM_MlpEstimate)->Arg(1)->Arg(2)->Arg(3)->Arg(4);

void BM_Compile(benchmark::State& state) {
  picardnet::Problem p = picardnet::make_sine_problem(2, 1.0, 0.2);
  picardnet::MlpConfig cfg;
  cfg.n = static_cast<int>(state.range(0));
  cfg.m = static_cast<int>(state.range(0));
  cfg.t = 0.0;
  cfg.seed = 7;
  picardnet::RandomRealization omega(cfg.seed);
  for (auto _ : state) benchmark::DoNotOptimize(picardnet::compile_mlp(p, cfg, omega));
}
BENCHMARK(BM_Compile)->Arg(1)->Arg(2);

void BM_StreamDerive(benchmark::State& state) {
  picardnet::RandomRealization omega(42);
  std::vector<int64_t> path = {0, 3, 5, 2};
  for (auto _ : state) {
    benchmark::DoNotOptimize(omega.gaussian_vector(path, 8));
    path.back() = (path.back() + 1) & 1023;
  }
}
BENCHMARK(BM_StreamDerive);

}  // namespace

BENCHMARK_MAIN();
