#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "tabrl/env.hpp"
#include "tabrl/rng.hpp"

namespace tabrl {

struct Transition {
  int state;
  int action;
  int next_state;
  double reward;
};

/// Raised when a never-visited (state, action) pair is queried under
/// HolePolicy::error.
class ModelHoleError : public std::runtime_error {
 public:
  ModelHoleError(int state, int action)
      : std::runtime_error("sample model hole at state " +
                           std::to_string(state) + ", action " +
                           std::to_string(action)) {}
};

/// Tabular Markov model estimated from logged experience: per (s, a) the
/// observed successor counts and per-successor mean rewards. Immutable
/// once built; shareable read-only.
class SampleModel {
 public:
  struct Outcome {
    int next_state;
    std::int64_t count;
    double mean_reward;
  };

  SampleModel(std::string task_name, int n_states, int n_actions);

  const std::string& task_name() const { return task_name_; }
  int n_states() const { return n_states_; }
  int n_actions() const { return n_actions_; }

  void record(int s, int a, int s_next, double reward);

  /// Merges a pre-aggregated observation batch (used by deserialization).
  void record_aggregate(int s, int a, int s_next, std::int64_t count,
                        double mean_reward);

  bool visited(int s, int a) const;
  std::span<const Outcome> outcomes(int s, int a) const;

  /// T(s, a, s') = count / total count of the pair; 0 if unrecorded.
  double probability(int s, int a, int s_next) const;
  double mean_reward(int s, int a, int s_next) const;

  /// Draws a successor from T(s, a, .). The hole policy decides what an
  /// unvisited pair yields: a zero-reward self-transition or an error.
  std::pair<int, double> sample(int s, int a, Rng& rng,
                                HolePolicy policy) const;

  /// Lowest state index with any recorded outgoing transition.
  int initial_state() const;

  std::int64_t total_count(int s, int a) const;

  /// Every recorded (s, a) pair in ascending order, for serialization and
  /// sweeps.
  std::vector<std::pair<int, int>> visited_pairs() const;

 private:
  std::uint64_t key(int s, int a) const {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(s)) << 32) |
           static_cast<std::uint32_t>(a);
  }
  void check(int s, int a) const;

  std::string task_name_;
  int n_states_;
  int n_actions_;
  std::unordered_map<std::uint64_t, std::vector<Outcome>> table_;
};

/// Accumulates a transition log into a model (counts and running means).
SampleModel build_sample_model(std::string task_name, int n_states,
                               int n_actions,
                               std::span<const Transition> log);

/// Plays a sample model back as an environment. Non-episodic: the model
/// carries no termination information.
class SampleModelEnv : public Environment {
 public:
  explicit SampleModelEnv(TaskSpec task);

  Observation reset() override;
  Observation step(int action, Rng& rng) override;

  int state() const { return state_; }

 private:
  TaskSpec task_;
  StateCodec codec_;
  int state_ = 0;
};

}  // namespace tabrl
