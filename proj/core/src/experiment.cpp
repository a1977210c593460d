#include "tabrl/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ctime>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "tabrl/catalog.hpp"

namespace tabrl {

AlgorithmId algorithm_from_string(const std::string& id) {
  if (id == "q") return AlgorithmId::q;
  if (id == "sarsa") return AlgorithmId::sarsa;
  if (id == "sarsa_lambda") return AlgorithmId::sarsa_lambda;
  if (id == "tosl") return AlgorithmId::tosl;
  if (id == "none") return AlgorithmId::none;
  throw std::invalid_argument("unknown algorithm '" + id +
                              "' (expected q, sarsa, sarsa_lambda, tosl)");
}

std::string to_string(AlgorithmId a) {
  switch (a) {
    case AlgorithmId::q: return "q";
    case AlgorithmId::sarsa: return "sarsa";
    case AlgorithmId::sarsa_lambda: return "sarsa_lambda";
    case AlgorithmId::tosl: return "tosl";
    case AlgorithmId::none: return "none";
  }
  return "?";
}

SelectionConfig ExperimentConfig::selection_config() const {
  SelectionConfig sc;
  sc.strategy = selection;
  sc.epsilon = epsilon;
  sc.base_temperature = base_temperature;
  sc.normalize = normalize;
  sc.lrle_enabled = lrle_effective();
  return sc;
}

void ExperimentConfig::validate() const {
  params.validate();
  selection_config().validate();
  if (steps < 1) throw std::invalid_argument("config: steps must be >= 1");
  if (repetitions < 1) {
    throw std::invalid_argument("config: repetitions must be >= 1");
  }
  if (!(reward_scale > 0.0)) {
    throw std::invalid_argument("config: reward_scale must be positive");
  }
  if (r_max && !(*r_max > 0.0)) {
    throw std::invalid_argument("config: r_max must be positive");
  }
  if (episode_limit && *episode_limit < 0) {
    throw std::invalid_argument("config: episode_limit must be >= 0");
  }
  if (threads < 0) throw std::invalid_argument("config: threads must be >= 0");
}

TaskSpec apply_overrides(TaskSpec task, const ExperimentConfig& config) {
  task.reward_scale = config.reward_scale;
  task.r_max = config.r_max.value_or(task.r_max * config.reward_scale);
  if (config.episode_limit) task.episode_limit = *config.episode_limit;
  task.hole_policy = config.hole_policy;
  return task;
}

namespace {

bool uses_next_action(AlgorithmId a) {
  return a == AlgorithmId::sarsa || a == AlgorithmId::sarsa_lambda ||
         a == AlgorithmId::tosl;
}

struct Learner {
  AlgorithmId algorithm;
  LearningParams params;
  QTable q;
  TraceRegister traces;
  ToslCarry carry;

  Learner(AlgorithmId algorithm, const LearningParams& params, int n_states,
          int n_actions, bool reduced)
      : algorithm(algorithm),
        params(params),
        q(n_states, n_actions),
        traces(algorithm == AlgorithmId::tosl ? TraceRule::dutch
                                              : TraceRule::replacing,
               reduced ? std::optional<int>(retr_capacity(params) + 1)
                       : std::nullopt) {}

  void update(int s, int a, double r, int s_next, int a_next, bool terminal) {
    switch (algorithm) {
      case AlgorithmId::q:
        q_learning_update(q, s, a, r, s_next, params, terminal);
        break;
      case AlgorithmId::sarsa:
        sarsa_update(q, s, a, r, s_next, a_next, params, terminal);
        break;
      case AlgorithmId::sarsa_lambda:
        sarsa_lambda_update(q, traces, s, a, r, s_next, a_next, params,
                            terminal);
        break;
      case AlgorithmId::tosl:
        tosl_update(q, traces, carry, s, a, r, s_next, a_next, params,
                    terminal);
        break;
      case AlgorithmId::none:
        break;
    }
  }

  void episode_reset() {
    traces.clear();
    carry.reset();
  }
};

LearningParams scaled_params(const TaskSpec& task,
                             const ExperimentConfig& config) {
  LearningParams p = config.params;
  p.r_max = task.r_max;
  return p;
}

}  // namespace

RunOutcome run_learning_process(const TaskSpec& task, const StateCodec& codec,
                                const ExperimentConfig& config,
                                std::uint64_t seed) {
  config.validate();
  const LearningParams params = scaled_params(task, config);
  const std::unique_ptr<Environment> env = make_environment(task);
  return run_learning_process_on(*env, task, codec, config, params, seed);
}

RunOutcome run_learning_process_on(Environment& env, const TaskSpec& task,
                                   const StateCodec& codec,
                                   const ExperimentConfig& config,
                                   const LearningParams& params,
                                   std::uint64_t seed) {
  Rng rng(seed);
  Learner learner(config.algorithm, params, codec.n_states(),
                  task.n_actions(), config.reduced_traces);
  ActionSelector selector(config.selection_config(), params, codec.n_states());

  LearningCurve curve;
  curve.rewards.reserve(config.steps);
  curve.cumulative_avg.reserve(config.steps);

  Observation obs = env.reset();
  int s = codec.encode(obs.values);
  const bool on_policy = uses_next_action(config.algorithm);

  int a = on_policy ? selector.select(learner.q, codec, s, 0.0, rng) : 0;
  double reward_sum = 0.0;
  double episode_sum = 0.0;
  int episode_len = 0;
  double last_reward = 0.0;  // reward entering the current state; 0 at episode start

  for (int k = 0; k < config.steps; ++k) {
    if (!on_policy) {
      a = selector.select(learner.q, codec, s, last_reward, rng);
    }
    obs = env.step(a, rng);
    const int s_next = codec.encode(obs.values);
    const double r = obs.reward;
    const bool done = obs.episode_done;

    int a_next = 0;
    if (on_policy && !done) {
      a_next = selector.select(learner.q, codec, s_next, r, rng);
    }
    learner.update(s, a, r, s_next, a_next, done);

    reward_sum += r;
    curve.rewards.push_back(r);
    curve.cumulative_avg.push_back(reward_sum / static_cast<double>(k + 1));
    curve.actions.push_back(a);
    episode_sum += r;
    ++episode_len;

    if (done) {
      curve.episode_avgs.push_back(episode_sum /
                                   static_cast<double>(episode_len));
      episode_sum = 0.0;
      episode_len = 0;
      last_reward = 0.0;
      learner.episode_reset();
      selector.episode_reset();
      obs = env.reset();
      s = codec.encode(obs.values);
      if (on_policy) a = selector.select(learner.q, codec, s, 0.0, rng);
    } else {
      s = s_next;
      last_reward = r;
      if (on_policy) a = a_next;
    }
  }

  return {std::move(learner.q), std::move(curve)};
}

RepetitionSet run_repetitions(const TaskSpec& task, const StateCodec& codec,
                              const ExperimentConfig& config) {
  config.validate();
  RepetitionSet set;
  set.curves.resize(config.repetitions);
  set.tables.resize(config.repetitions);

  const int n_threads =
      config.threads > 0
          ? config.threads
          : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  const int workers = std::min(n_threads, config.repetitions);

  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::string error_message;
  std::mutex error_mutex;

  auto work = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= config.repetitions || failed.load()) return;
      try {
        RunOutcome outcome = run_learning_process(
            task, codec, config, config.base_seed + static_cast<std::uint64_t>(i));
        set.curves[i] = std::move(outcome.curve);
        set.tables[i] = std::move(outcome.q);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        error_message = e.what();
        failed.store(true);
        return;
      }
    }
  };

  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failed.load()) throw std::runtime_error(error_message);

  set.final_averages.reserve(config.repetitions);
  for (const auto& c : set.curves) {
    set.final_averages.push_back(c.final_average());
  }
  set.mean_curve.assign(static_cast<std::size_t>(config.steps), 0.0);
  for (const auto& c : set.curves) {
    for (std::size_t k = 0; k < set.mean_curve.size(); ++k) {
      set.mean_curve[k] += c.cumulative_avg[k];
    }
  }
  for (double& v : set.mean_curve) v /= config.repetitions;
  return set;
}

SampleModel explore_uniform(const TaskSpec& task, const StateCodec& codec,
                            int steps, std::uint64_t seed) {
  if (steps < 1) {
    throw std::invalid_argument("explore_uniform: steps must be >= 1");
  }
  Rng rng(seed);
  SampleModel model(task.name, codec.n_states(), task.n_actions());
  const std::unique_ptr<Environment> env = make_environment(task);
  Observation obs = env->reset();
  int s = codec.encode(obs.values);
  for (int k = 0; k < steps; ++k) {
    const int a = rng.uniform_int(task.n_actions());
    obs = env->step(a, rng);
    const int s_next = codec.encode(obs.values);
    model.record(s, a, s_next, obs.reward);
    if (obs.episode_done) {
      obs = env->reset();
      s = codec.encode(obs.values);
    } else {
      s = s_next;
    }
  }
  return model;
}

namespace {

double cpu_seconds() {
  timespec ts{};
  clock_gettime(CLOCK_PROCESS_CPUTIME_ID, &ts);
  return static_cast<double>(ts.tv_sec) + 1e-9 * static_cast<double>(ts.tv_nsec);
}

// Cheap deterministic state walk standing in for an environment.
struct NoopTransitions {
  int n_states;
  int next(int s, int a) const {
    const std::uint32_t mix = static_cast<std::uint32_t>(s) * 1103515245u +
                              static_cast<std::uint32_t>(a) * 2654435761u +
                              12345u;
    return static_cast<int>(mix % static_cast<std::uint32_t>(n_states));
  }
  double reward(int s) const {
    return static_cast<double>((s & 7) - 3) * 0.25;
  }
};

}  // namespace

StepCostResult benchmark_step_cost(const TaskSpec& task,
                                   const ExperimentConfig& config,
                                   int warmup_steps, int measured_steps) {
  if (measured_steps < 1000) {
    throw std::invalid_argument(
        "benchmark_step_cost: need at least 1000 measured steps");
  }
  const StateCodec codec(task.inputs);
  const LearningParams params = scaled_params(task, config);
  const NoopTransitions env{codec.n_states()};

  // The process CPU clock can tick coarsely (10 ms on some kernels), so a
  // pass repeats blocks of `measured_steps` until enough clock time has
  // accumulated for the quantization error to be negligible.
  constexpr double kMinPassSeconds = 0.4;
  constexpr int kMaxBlocks = 500;

  // Returns mean seconds per step and the number of steps timed.
  auto run_pass = [&](bool active, double* out_per_step, int* out_steps) {
    Rng rng(config.base_seed);
    Learner learner(active ? config.algorithm : AlgorithmId::none, params,
                    codec.n_states(), task.n_actions(), config.reduced_traces);
    ActionSelector selector(config.selection_config(), params,
                            codec.n_states());
    const bool on_policy = active && uses_next_action(config.algorithm);

    int s = 0;
    double last_r = 0.0;
    int a = on_policy ? selector.select(learner.q, codec, s, 0.0, rng) : 0;

    auto run_block = [&](int steps_to_run) {
      for (int k = 0; k < steps_to_run; ++k) {
        if (!on_policy) {
          a = active ? selector.select(learner.q, codec, s, last_r, rng)
                     : k % task.n_actions();
        }
        const int s_next = env.next(s, a);
        const double r = env.reward(s_next);
        if (on_policy) {
          const int a_next = selector.select(learner.q, codec, s_next, r, rng);
          learner.update(s, a, r, s_next, a_next, false);
          a = a_next;
        } else if (active) {
          learner.update(s, a, r, s_next, 0, false);
        }
        s = s_next;
        last_r = r;
      }
    };

    if (warmup_steps > 0) run_block(warmup_steps);

    const double t0 = cpu_seconds();
    double elapsed = 0.0;
    int steps_done = 0;
    for (int block = 0; block < kMaxBlocks; ++block) {
      run_block(measured_steps);
      steps_done += measured_steps;
      elapsed = cpu_seconds() - t0;
      if (elapsed >= kMinPassSeconds) break;
    }
    *out_per_step = elapsed / steps_done;
    *out_steps = steps_done;
  };

  double active_per_step = 0.0;
  double baseline_per_step = 0.0;
  int active_steps = 0;
  int baseline_steps = 0;
  run_pass(true, &active_per_step, &active_steps);
  run_pass(false, &baseline_per_step, &baseline_steps);

  StepCostResult result;
  result.measured_steps = active_steps;
  result.baseline_seconds_per_step = baseline_per_step;
  result.seconds_per_step =
      std::max(0.0, active_per_step - baseline_per_step);
  return result;
}

}  // namespace tabrl
