#pragma once

#include <deque>
#include <span>
#include <string>
#include <vector>

#include "tabrl/learning.hpp"
#include "tabrl/qtable.hpp"
#include "tabrl/rng.hpp"
#include "tabrl/statespace.hpp"

namespace tabrl {

enum class SelectionStrategy {
  epsilon_greedy,
  softmax,
  qbiassr,  // softmax over the sibling-biased row
};

struct SelectionConfig {
  SelectionStrategy strategy = SelectionStrategy::softmax;
  double epsilon = 0.1;            // epsilon-greedy only
  double base_temperature = 1.0;   // Boltzmann temperature
  bool normalize = true;           // scale rows to the [-100, 100] range
  bool lrle_enabled = false;       // loop-evasion temperature control

  void validate() const;
};

/// Scale a Q row so the theoretical value bound R_max / (1 - gamma) maps
/// to 100. Keeps action selection independent of the absolute reward scale.
std::vector<double> normalize_q_row(std::span<const double> row,
                                    const LearningParams& params);

/// Boltzmann distribution over a row at the given temperature, computed
/// with max-subtraction so large values cannot overflow.
std::vector<double> softmax_probs(std::span<const double> row,
                                  double temperature);

/// Sibling-average bias vector for state s: for each input variable the
/// Q rows of the sibling set are averaged elementwise, and the per-variable
/// vectors are averaged in turn. Pure; O(sum_i cardinality(i) * n_actions).
std::vector<double> compute_bias(const QTable& q, const StateCodec& codec,
                                 int s);

/// Adds the bias of state s onto an existing buffer of size n_actions.
void accumulate_bias(const QTable& q, const StateCodec& codec, int s,
                     std::span<double> bias);

/// Detects low-reward state cycles and raises the softmax temperature to
/// push selection away from them; any step outside the loop conditions
/// snaps the temperature back to base.
class LrleState {
 public:
  static constexpr double kTemperatureStep = 0.25;
  static constexpr double kTemperatureCap = 100.0;

  LrleState(const LearningParams& params, int n_states,
            double base_temperature = 1.0);

  /// Called once per step before action selection with the state about to
  /// be acted in and the most recent reward. Returns the temperature to
  /// use for this selection.
  double step(int state, double reward);

  double current_temperature() const { return temperature_; }
  int buffer_size() const { return buffer_size_; }

  /// Episode boundary: buffers emptied, temperature back to base.
  void reset();

 private:
  int buffer_size_;
  double base_temperature_;
  double temperature_;
  std::deque<int> seq_;
  std::deque<double> rew_;
  std::vector<int> occurrences_;  // per-state count within seq_
  int unique_states_ = 0;
};

int epsilon_greedy_select(const QTable& q, int s, const SelectionConfig& config,
                          Rng& rng);

/// Softmax over the (optionally normalized) row at the given temperature.
int softmax_select(const QTable& q, int s, const SelectionConfig& config,
                   const LearningParams& params, double temperature, Rng& rng);

/// Softmax over normalized Q(s) plus the sibling bias of the normalized
/// table.
int qbiassr_select(const QTable& q, const StateCodec& codec, int s,
                   const SelectionConfig& config, const LearningParams& params,
                   double temperature, Rng& rng);

/// Per-run selection front end: owns the loop-evasion state and dispatches
/// on the configured strategy.
class ActionSelector {
 public:
  ActionSelector(SelectionConfig config, const LearningParams& params,
                 int n_states);

  /// reward is the one obtained on the transition into `state` (0 at the
  /// first selection of an episode).
  int select(const QTable& q, const StateCodec& codec, int state,
             double reward, Rng& rng);

  void episode_reset();

  const LrleState& lrle() const { return lrle_; }
  const SelectionConfig& config() const { return config_; }

 private:
  SelectionConfig config_;
  LearningParams params_;
  LrleState lrle_;
};

SelectionStrategy selection_strategy_from_string(const std::string& id);
std::string to_string(SelectionStrategy s);

}  // namespace tabrl
