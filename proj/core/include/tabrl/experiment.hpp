#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tabrl/env.hpp"
#include "tabrl/learning.hpp"
#include "tabrl/qtable.hpp"
#include "tabrl/sample_model.hpp"
#include "tabrl/selection.hpp"

namespace tabrl {

enum class AlgorithmId {
  q,
  sarsa,
  sarsa_lambda,
  tosl,
  none,  // benchmark baseline: no update
};

AlgorithmId algorithm_from_string(const std::string& id);
std::string to_string(AlgorithmId a);

/// Full description of an experiment: what to learn, how to select
/// actions, for how long, how often, and where results go.
struct ExperimentConfig {
  std::string task = "wander-simple";  // catalog name or task-file path
  AlgorithmId algorithm = AlgorithmId::tosl;
  SelectionStrategy selection = SelectionStrategy::softmax;

  LearningParams params;
  double epsilon = 0.1;
  double base_temperature = 1.0;
  bool normalize = true;
  std::optional<bool> lrle;          // default: on for qbiassr only
  bool reduced_traces = true;
  std::optional<double> r_max;       // default: task r_max * reward_scale
  double reward_scale = 1.0;
  std::optional<int> episode_limit;  // default: task limit

  int steps = 3600;
  int repetitions = 1;
  std::uint64_t base_seed = 1;
  int threads = 0;  // 0 = hardware concurrency

  std::string model_path;  // replay through a sample-model file
  HolePolicy hole_policy = HolePolicy::self_loop;

  std::string out_dir;
  bool save_qtables = false;

  bool lrle_effective() const {
    return lrle.value_or(selection == SelectionStrategy::qbiassr);
  }
  SelectionConfig selection_config() const;
  void validate() const;
};

/// Per-step cumulative-average reward series plus per-episode summaries.
struct LearningCurve {
  std::vector<double> rewards;         // raw reward log, one per step
  std::vector<double> cumulative_avg;  // running mean over steps
  std::vector<int> actions;            // executed action per step
  std::vector<double> episode_avgs;    // mean reward of each finished episode

  double final_average() const {
    return cumulative_avg.empty() ? 0.0 : cumulative_avg.back();
  }
};

struct RunOutcome {
  QTable q;
  LearningCurve curve;
};

/// Applies config overrides (reward scale, r_max, episode limit) to a
/// resolved task.
TaskSpec apply_overrides(TaskSpec task, const ExperimentConfig& config);

/// One seeded learning process: exactly `config.steps` environment steps;
/// episode ends restart the environment and clear traces, carry, and
/// loop-evasion buffers without touching the Q table. Bit-reproducible
/// for a given (task, config, seed).
RunOutcome run_learning_process(const TaskSpec& task, const StateCodec& codec,
                                const ExperimentConfig& config,
                                std::uint64_t seed);

/// Same loop with a caller-supplied environment instance.
RunOutcome run_learning_process_on(Environment& env, const TaskSpec& task,
                                   const StateCodec& codec,
                                   const ExperimentConfig& config,
                                   const LearningParams& params,
                                   std::uint64_t seed);

struct RepetitionSet {
  std::vector<LearningCurve> curves;   // ordered by repetition index
  std::vector<QTable> tables;
  std::vector<double> final_averages;
  std::vector<double> mean_curve;      // pointwise mean of cumulative_avg
};

/// Runs `config.repetitions` processes with seeds base_seed + index,
/// possibly in parallel; results are ordered by index either way.
RepetitionSet run_repetitions(const TaskSpec& task, const StateCodec& codec,
                              const ExperimentConfig& config);

/// Uniform-random exploration of a task, logging every transition into a
/// sample model (the offline-model construction path).
SampleModel explore_uniform(const TaskSpec& task, const StateCodec& codec,
                            int steps, std::uint64_t seed);

struct StepCostResult {
  double seconds_per_step = 0.0;  // baseline-corrected CPU time
  double baseline_seconds_per_step = 0.0;
  int measured_steps = 0;
};

/// Mean CPU cost of one learning step (selection + update) at the task's
/// dimensions. Environment stepping is replaced by a synthetic no-op
/// transition generator, and a no-update/no-selection pass of the same
/// loop is subtracted as harness overhead.
StepCostResult benchmark_step_cost(const TaskSpec& task,
                                   const ExperimentConfig& config,
                                   int warmup_steps, int measured_steps);

}  // namespace tabrl
