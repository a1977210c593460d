#include "tabrl/selection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tabrl {

void SelectionConfig::validate() const {
  if (epsilon < 0.0 || epsilon > 1.0) {
    throw std::invalid_argument("SelectionConfig: epsilon must be in [0, 1]");
  }
  if (!(base_temperature > 0.0)) {
    throw std::invalid_argument(
        "SelectionConfig: base_temperature must be positive");
  }
}

std::vector<double> normalize_q_row(std::span<const double> row,
                                    const LearningParams& params) {
  if (!(params.r_max > 0.0)) {
    throw std::invalid_argument("normalize_q_row: r_max must be positive");
  }
  const double scale = 100.0 * (1.0 - params.gamma) / params.r_max;
  std::vector<double> out(row.size());
  for (std::size_t i = 0; i < row.size(); ++i) out[i] = row[i] * scale;
  return out;
}

std::vector<double> softmax_probs(std::span<const double> row,
                                  double temperature) {
  if (!(temperature > 0.0)) {
    throw std::invalid_argument("softmax_probs: temperature must be positive");
  }
  if (row.empty()) {
    throw std::invalid_argument("softmax_probs: empty row");
  }
  double max_v = row[0];
  for (const double v : row) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("softmax_probs: non-finite entry");
    }
    max_v = std::max(max_v, v);
  }
  std::vector<double> probs(row.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < row.size(); ++i) {
    probs[i] = std::exp((row[i] - max_v) / temperature);
    sum += probs[i];
  }
  for (double& p : probs) p /= sum;
  return probs;
}

std::vector<double> compute_bias(const QTable& q, const StateCodec& codec,
                                 int s) {
  std::vector<double> bias(static_cast<std::size_t>(q.n_actions()), 0.0);
  accumulate_bias(q, codec, s, bias);
  return bias;
}

void accumulate_bias(const QTable& q, const StateCodec& codec, int s,
                     std::span<double> bias) {
  const int n_actions = q.n_actions();
  const int n_vars = codec.n_variables();
  const double inv_vars = 1.0 / n_vars;
  for (int i = 0; i < n_vars; ++i) {
    const int card = codec.variable(i).cardinality;
    const double weight = inv_vars / card;
    if (const int* row = codec.sibling_row(s, i)) {
      for (int l = 0; l < card; ++l) {
        const double* qs = q.row(row[l]).data();
        for (int a = 0; a < n_actions; ++a) bias[a] += weight * qs[a];
      }
    } else {
      for (const int sibling : codec.sibling_set(s, i)) {
        const double* qs = q.row(sibling).data();
        for (int a = 0; a < n_actions; ++a) bias[a] += weight * qs[a];
      }
    }
  }
}

LrleState::LrleState(const LearningParams& params, int n_states,
                     double base_temperature)
    : base_temperature_(base_temperature),
      temperature_(base_temperature),
      occurrences_(static_cast<std::size_t>(n_states), 0) {
  const int retr_size = retr_capacity(params) + 1;
  if (n_states >= 16) {
    buffer_size_ = std::clamp(retr_size, 4, n_states / 4);
  } else {
    buffer_size_ = std::max(2, n_states - 1);
  }
}

double LrleState::step(int state, double reward) {
  seq_.push_back(state);
  if (occurrences_[state]++ == 0) ++unique_states_;
  if (static_cast<int>(seq_.size()) > buffer_size_) {
    const int oldest = seq_.front();
    seq_.pop_front();
    if (--occurrences_[oldest] == 0) --unique_states_;
  }
  rew_.push_back(reward);
  if (static_cast<int>(rew_.size()) > buffer_size_) rew_.pop_front();

  const bool revisited = occurrences_[state] >= 2;

  double mean = 0.0;
  for (const double r : rew_) mean += r;
  mean /= static_cast<double>(rew_.size());
  const bool low_reward = mean < 0.0;

  const double redundancy = static_cast<double>(seq_.size()) /
                            static_cast<double>(unique_states_);
  const bool looping = redundancy > 2.0;

  if (revisited && low_reward && looping) {
    temperature_ =
        std::min(temperature_ + kTemperatureStep * redundancy, kTemperatureCap);
  } else {
    temperature_ = base_temperature_;
  }
  return temperature_;
}

void LrleState::reset() {
  for (const int s : seq_) occurrences_[s] = 0;
  unique_states_ = 0;
  seq_.clear();
  rew_.clear();
  temperature_ = base_temperature_;
}

namespace {

// In-place Boltzmann weights with max-subtraction; entries are finite by
// construction on the selection hot path.
void softmax_in_place(std::span<double> values, double temperature) {
  double max_v = values[0];
  for (const double v : values) max_v = std::max(max_v, v);
  double sum = 0.0;
  for (double& v : values) {
    v = std::exp((v - max_v) / temperature);
    sum += v;
  }
  for (double& v : values) v /= sum;
}

double normalize_scale(const SelectionConfig& config,
                       const LearningParams& params) {
  return config.normalize ? 100.0 * (1.0 - params.gamma) / params.r_max : 1.0;
}

}  // namespace

int epsilon_greedy_select(const QTable& q, int s, const SelectionConfig& config,
                          Rng& rng) {
  if (rng.uniform() < config.epsilon) {
    return rng.uniform_int(q.n_actions());
  }
  return q.greedy_action(s);
}

int softmax_select(const QTable& q, int s, const SelectionConfig& config,
                   const LearningParams& params, double temperature, Rng& rng) {
  const auto row = q.row(s);
  std::vector<double> values(row.begin(), row.end());
  const double scale = normalize_scale(config, params);
  if (scale != 1.0) {
    for (double& v : values) v *= scale;
  }
  softmax_in_place(values, temperature);
  return rng.categorical(values);
}

int qbiassr_select(const QTable& q, const StateCodec& codec, int s,
                   const SelectionConfig& config, const LearningParams& params,
                   double temperature, Rng& rng) {
  // The bias is linear in Q, so biasing the normalized table equals
  // normalizing the biased row; one pass over the raw table suffices.
  std::vector<double> values(static_cast<std::size_t>(q.n_actions()), 0.0);
  accumulate_bias(q, codec, s, values);
  const double* row = q.row(s).data();
  for (int a = 0; a < q.n_actions(); ++a) values[a] += row[a];
  const double scale = normalize_scale(config, params);
  if (scale != 1.0) {
    for (double& v : values) v *= scale;
  }
  softmax_in_place(values, temperature);
  return rng.categorical(values);
}

ActionSelector::ActionSelector(SelectionConfig config,
                               const LearningParams& params, int n_states)
    : config_(config),
      params_(params),
      lrle_(params, n_states, config.base_temperature) {
  config_.validate();
}

int ActionSelector::select(const QTable& q, const StateCodec& codec, int state,
                           double reward, Rng& rng) {
  double temperature = config_.base_temperature;
  if (config_.lrle_enabled) {
    temperature = lrle_.step(state, reward);
  }
  switch (config_.strategy) {
    case SelectionStrategy::epsilon_greedy:
      return epsilon_greedy_select(q, state, config_, rng);
    case SelectionStrategy::softmax:
      return softmax_select(q, state, config_, params_, temperature, rng);
    case SelectionStrategy::qbiassr:
      return qbiassr_select(q, codec, state, config_, params_, temperature,
                            rng);
  }
  throw std::logic_error("ActionSelector: unknown strategy");
}

void ActionSelector::episode_reset() { lrle_.reset(); }

SelectionStrategy selection_strategy_from_string(const std::string& id) {
  if (id == "epsilon_greedy") return SelectionStrategy::epsilon_greedy;
  if (id == "softmax") return SelectionStrategy::softmax;
  if (id == "qbiassr") return SelectionStrategy::qbiassr;
  throw std::invalid_argument("unknown selection strategy '" + id +
                              "' (expected epsilon_greedy, softmax, qbiassr)");
}

std::string to_string(SelectionStrategy s) {
  switch (s) {
    case SelectionStrategy::epsilon_greedy: return "epsilon_greedy";
    case SelectionStrategy::softmax: return "softmax";
    case SelectionStrategy::qbiassr: return "qbiassr";
  }
  return "?";
}

}  // namespace tabrl
