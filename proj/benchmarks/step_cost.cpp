// Microbenchmarks for the per-step building blocks: update rules, trace
// maintenance, and action selection at wander-1K dimensions.

#include <benchmark/benchmark.h>

#include "tabrl/catalog.hpp"
#include "tabrl/learning.hpp"
#include "tabrl/selection.hpp"

namespace {

using namespace tabrl;

constexpr int kStates = 1024;
constexpr int kActions = 9;

LearningParams default_params() {
  LearningParams p;
  p.r_max = 10.0;
  return p;
}

int next_state(int s, int a) {
  const auto mix = static_cast<std::uint32_t>(s) * 1103515245u +
                   static_cast<std::uint32_t>(a) * 2654435761u + 12345u;
  return static_cast<int>(mix % kStates);
}

void BM_QLearningUpdate(benchmark::State& state) {
  const LearningParams p = default_params();
  QTable q(kStates, kActions);
  int s = 0;
  int a = 0;
  for (auto _ : state) {
    const int s2 = next_state(s, a);
    benchmark::DoNotOptimize(q_learning_update(q, s, a, 0.25, s2, p));
    s = s2;
    a = (a + 1) % kActions;
  }
}
BENCHMARK(BM_QLearningUpdate);

void BM_SarsaLambdaReduced(benchmark::State& state) {
  const LearningParams p = default_params();
  QTable q(kStates, kActions);
  TraceRegister traces = TraceRegister::reduced(TraceRule::replacing, p);
  int s = 0;
  int a = 0;
  for (auto _ : state) {
    const int s2 = next_state(s, a);
    const int a2 = (a + 1) % kActions;
    benchmark::DoNotOptimize(
        sarsa_lambda_update(q, traces, s, a, 0.25, s2, a2, p));
    s = s2;
    a = a2;
  }
}
BENCHMARK(BM_SarsaLambdaReduced);

void BM_ToslReduced(benchmark::State& state) {
  const LearningParams p = default_params();
  QTable q(kStates, kActions);
  TraceRegister traces = TraceRegister::reduced(TraceRule::dutch, p);
  ToslCarry carry;
  int s = 0;
  int a = 0;
  for (auto _ : state) {
    const int s2 = next_state(s, a);
    const int a2 = (a + 1) % kActions;
    benchmark::DoNotOptimize(
        tosl_update(q, traces, carry, s, a, 0.25, s2, a2, p));
    s = s2;
    a = a2;
  }
}
BENCHMARK(BM_ToslReduced);

void BM_ToslFullTraces(benchmark::State& state) {
  const LearningParams p = default_params();
  QTable q(kStates, kActions);
  TraceRegister traces = TraceRegister::full(TraceRule::dutch);
  ToslCarry carry;
  int s = 0;
  int a = 0;
  // Populate the register the way a long run would.
  for (int k = 0; k < 20000; ++k) {
    const int s2 = next_state(s, a);
    const int a2 = (k * 7) % kActions;
    tosl_update(q, traces, carry, s, a, 0.25, s2, a2, p);
    s = s2;
    a = a2;
  }
  for (auto _ : state) {
    const int s2 = next_state(s, a);
    const int a2 = (a + 1) % kActions;
    benchmark::DoNotOptimize(
        tosl_update(q, traces, carry, s, a, 0.25, s2, a2, p));
    s = s2;
    a = a2;
  }
  state.counters["live_traces"] = static_cast<double>(traces.size());
}
BENCHMARK(BM_ToslFullTraces);

void BM_SoftmaxSelect(benchmark::State& state) {
  const TaskSpec task = catalog_task("wander-1K");
  const StateCodec codec(task.inputs);
  const LearningParams p = default_params();
  QTable q(kStates, kActions);
  Rng fill(3);
  for (double& v : q.data()) v = fill.uniform() * 10.0 - 5.0;
  SelectionConfig config;
  config.strategy = SelectionStrategy::softmax;
  Rng rng(7);
  int s = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(softmax_select(q, s, config, p, 1.0, rng));
    s = next_state(s, 0);
  }
}
BENCHMARK(BM_SoftmaxSelect);

void BM_QBiasSelect(benchmark::State& state) {
  const TaskSpec task = catalog_task("wander-1K");
  const StateCodec codec(task.inputs);
  const LearningParams p = default_params();
  QTable q(kStates, kActions);
  Rng fill(3);
  for (double& v : q.data()) v = fill.uniform() * 10.0 - 5.0;
  SelectionConfig config;
  config.strategy = SelectionStrategy::qbiassr;
  Rng rng(7);
  int s = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(qbiassr_select(q, codec, s, config, p, 1.0, rng));
    s = next_state(s, 0);
  }
}
BENCHMARK(BM_QBiasSelect);

void BM_ComputeBias(benchmark::State& state) {
  const TaskSpec task = catalog_task("wander-1K");
  const StateCodec codec(task.inputs);
  QTable q(kStates, kActions);
  Rng fill(3);
  for (double& v : q.data()) v = fill.uniform();
  int s = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(compute_bias(q, codec, s));
    s = next_state(s, 0);
  }
}
BENCHMARK(BM_ComputeBias);

}  // namespace

BENCHMARK_MAIN();
