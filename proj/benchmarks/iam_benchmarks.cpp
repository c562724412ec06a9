#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "iam/choice.hpp"
#include "iam/io.hpp"
#include "iam/markets.hpp"
#include "iam/policy.hpp"
#include "iam/results.hpp"
#include "iam/scenario.hpp"

namespace {

const iam::ModelInstance& shipped() {
  static const auto instance = iam::build_model(iam::load_dataset(IAM_DATA_DIR));
  return instance;
}

iam::ScenarioConfig scenario(const char* name) {
  return iam::load_scenario(std::string(IAM_SCENARIO_DIR) + "/" + name + ".cfg");
}

void BM_LogitShares(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.5, 50.0);
  std::vector<double> costs(n), weights(n);
  for (std::size_t i = 0; i < n; ++i) {
    costs[i] = u(rng);
    weights[i] = u(rng) / 50.0;
  }
  for (auto _ : state) benchmark::DoNotOptimize(iam::logit_shares(costs, weights, -6.0));
}
BENCHMARK(BM_LogitShares)->Arg(2)->Arg(8)->Arg(32);

void BM_SolvePeriod(benchmark::State& state) {
  const auto model = iam::apply_scenario(shipped(), scenario("nz2050"));
  const auto start = iam::initial_state(model);
  for (auto _ : state) benchmark::DoNotOptimize(iam::solve_period(model, start, static_cast<double>(state.range(0))));
}
BENCHMARK(BM_SolvePeriod)->Arg(0)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_RunScenario(benchmark::State& state) {
  const auto s = scenario("nz2050");
  for (auto _ : state) benchmark::DoNotOptimize(iam::run_scenario(shipped(), s));
}
BENCHMARK(BM_RunScenario)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
