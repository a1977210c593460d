#include <doctest.h>

#include <cmath>

#include "tabrl/catalog.hpp"
#include "tabrl/experiment.hpp"

using namespace tabrl;

namespace {

// Single-state model where every action self-loops with a fixed reward.
TaskSpec constant_reward_task(double reward) {
  SampleModel model("const", 1, 2);
  model.record(0, 0, 0, reward);
  model.record(0, 1, 0, reward);
  return make_sample_model_task("const", std::make_shared<SampleModel>(model),
                                {InputVariable("only", 1)},
                                ActionSpace({InputVariable("act", 2)}));
}

}  // namespace

TEST_CASE("config validation names the offending field") {
  ExperimentConfig config;
  config.params.alpha = 1.5;
  CHECK_THROWS_WITH_AS(config.validate(),
                       doctest::Contains("alpha"), std::invalid_argument);
  config.params.alpha = 0.1;
  config.steps = 0;
  CHECK_THROWS_WITH_AS(config.validate(), doctest::Contains("steps"),
                       std::invalid_argument);
}

TEST_CASE("one-step curve carries the first reward") {
  TaskSpec task = constant_reward_task(2.5);
  const StateCodec codec(task.inputs);
  ExperimentConfig config;
  config.task = "const";
  config.algorithm = AlgorithmId::q;
  config.selection = SelectionStrategy::softmax;
  config.steps = 1;
  const RunOutcome out = run_learning_process(task, codec, config, 9);
  REQUIRE(out.curve.rewards.size() == 1);
  CHECK(out.curve.rewards[0] == 2.5);
  CHECK(out.curve.cumulative_avg[0] == 2.5);
  CHECK(out.curve.final_average() == 2.5);
}

TEST_CASE("constant-reward environment pins the whole curve") {
  TaskSpec task = constant_reward_task(-0.75);
  const StateCodec codec(task.inputs);
  ExperimentConfig config;
  config.algorithm = AlgorithmId::tosl;
  config.steps = 200;
  const RunOutcome out = run_learning_process(task, codec, config, 4);
  for (const double v : out.curve.cumulative_avg) {
    CHECK(v == doctest::Approx(-0.75).epsilon(1e-12));
  }
}

TEST_CASE("identical config and seed reproduce bit-identical results") {
  const TaskSpec task = catalog_task("wander-simple");
  const StateCodec codec(task.inputs);
  for (const AlgorithmId algorithm :
       {AlgorithmId::q, AlgorithmId::sarsa, AlgorithmId::sarsa_lambda,
        AlgorithmId::tosl}) {
    for (const SelectionStrategy selection :
         {SelectionStrategy::epsilon_greedy, SelectionStrategy::softmax,
          SelectionStrategy::qbiassr}) {
      ExperimentConfig config;
      config.algorithm = algorithm;
      config.selection = selection;
      config.steps = 300;
      const RunOutcome a = run_learning_process(task, codec, config, 123);
      const RunOutcome b = run_learning_process(task, codec, config, 123);
      CHECK(a.q == b.q);
      CHECK(a.curve.rewards == b.curve.rewards);
      CHECK(a.curve.actions == b.curve.actions);
    }
  }
}

TEST_CASE("step accounting is exact across episode boundaries") {
  TaskSpec task = catalog_task("3D-arm-1K");
  task.episode_limit = 25;  // force frequent episode ends
  const StateCodec codec(task.inputs);
  ExperimentConfig config;
  config.algorithm = AlgorithmId::tosl;
  config.selection = SelectionStrategy::qbiassr;
  config.steps = 500;
  const RunOutcome out = run_learning_process(task, codec, config, 11);
  CHECK(out.curve.rewards.size() == 500);
  CHECK(out.curve.episode_avgs.size() >= 500 / 25 - 1);

  SUBCASE("cumulative average recomputes exactly from the reward log") {
    double sum = 0.0;
    for (std::size_t k = 0; k < out.curve.rewards.size(); ++k) {
      sum += out.curve.rewards[k];
      CHECK(out.curve.cumulative_avg[k] ==
            sum / static_cast<double>(k + 1));
    }
  }
}

TEST_CASE("repetition batches") {
  const TaskSpec task = catalog_task("wander-simple");
  const StateCodec codec(task.inputs);
  ExperimentConfig config;
  config.steps = 120;
  config.algorithm = AlgorithmId::sarsa_lambda;

  SUBCASE("a single repetition's mean curve is its own curve") {
    config.repetitions = 1;
    const RepetitionSet reps = run_repetitions(task, codec, config);
    CHECK(reps.mean_curve == reps.curves[0].cumulative_avg);
  }

  SUBCASE("mean curve is the pointwise average") {
    config.repetitions = 3;
    const RepetitionSet reps = run_repetitions(task, codec, config);
    for (std::size_t k = 0; k < reps.mean_curve.size(); ++k) {
      const double expected = (reps.curves[0].cumulative_avg[k] +
                               reps.curves[1].cumulative_avg[k] +
                               reps.curves[2].cumulative_avg[k]) /
                              3.0;
      CHECK(reps.mean_curve[k] == doctest::Approx(expected).epsilon(1e-15));
    }
    CHECK(reps.final_averages.size() == 3);
  }

  SUBCASE("parallel and serial execution agree exactly") {
    config.repetitions = 8;
    config.threads = 1;
    const RepetitionSet serial = run_repetitions(task, codec, config);
    config.threads = 4;
    const RepetitionSet parallel = run_repetitions(task, codec, config);
    CHECK(serial.mean_curve == parallel.mean_curve);
    for (int r = 0; r < 8; ++r) {
      CHECK(serial.curves[r].rewards == parallel.curves[r].rewards);
      CHECK(serial.tables[r] == parallel.tables[r]);
    }
  }

  SUBCASE("seeds are base plus repetition index") {
    config.repetitions = 2;
    config.base_seed = 77;
    const RepetitionSet reps = run_repetitions(task, codec, config);
    const RunOutcome direct = run_learning_process(task, codec, config, 78);
    CHECK(reps.curves[1].rewards == direct.curve.rewards);
  }
}

TEST_CASE("q values stay inside the r_max/(1-gamma) bound") {
  for (const char* name : {"wander-simple", "2D-navigation-1K"}) {
    const TaskSpec task = catalog_task(name);
    const StateCodec codec(task.inputs);
    const double bound = task.r_max / (1.0 - 0.9) + 1e-9;
    for (const AlgorithmId algorithm :
         {AlgorithmId::q, AlgorithmId::sarsa, AlgorithmId::sarsa_lambda,
          AlgorithmId::tosl}) {
      ExperimentConfig config;
      config.algorithm = algorithm;
      config.steps = 1500;
      const RunOutcome out = run_learning_process(task, codec, config, 21);
      double max_abs = 0.0;
      for (const double v : out.q.data()) {
        max_abs = std::max(max_abs, std::fabs(v));
      }
      CHECK(max_abs <= bound);
    }
  }
}

TEST_CASE("uniform exploration builds a model deterministically") {
  const TaskSpec task = catalog_task("wander-simple");
  const StateCodec codec(task.inputs);
  const SampleModel a = explore_uniform(task, codec, 500, 3);
  const SampleModel b = explore_uniform(task, codec, 500, 3);
  CHECK(a.visited_pairs() == b.visited_pairs());
  std::int64_t total = 0;
  for (const auto& [s, act] : a.visited_pairs()) total += a.total_count(s, act);
  CHECK(total == 500);
}

TEST_CASE("step-cost benchmark smoke") {
  const TaskSpec task = catalog_task("wander-simple");
  ExperimentConfig config;
  config.algorithm = AlgorithmId::q;
  config.selection = SelectionStrategy::softmax;
  const StepCostResult cost = benchmark_step_cost(task, config, 100, 1000);
  CHECK(cost.seconds_per_step >= 0.0);
  CHECK(cost.measured_steps >= 1000);
  CHECK_THROWS_AS(benchmark_step_cost(task, config, 100, 10),
                  std::invalid_argument);
}

TEST_CASE("algorithm and selection ids round-trip") {
  for (const char* id : {"q", "sarsa", "sarsa_lambda", "tosl"}) {
    CHECK(to_string(algorithm_from_string(id)) == id);
  }
  for (const char* id : {"epsilon_greedy", "softmax", "qbiassr"}) {
    CHECK(to_string(selection_strategy_from_string(id)) == id);
  }
  CHECK_THROWS_AS(algorithm_from_string("dyna"), std::invalid_argument);
  CHECK_THROWS_AS(selection_strategy_from_string("ucb"),
                  std::invalid_argument);
}
