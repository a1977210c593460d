#include "tabrl/sample_model.hpp"

#include <algorithm>
#include <cmath>

namespace tabrl {

SampleModel::SampleModel(std::string task_name, int n_states, int n_actions)
    : task_name_(std::move(task_name)),
      n_states_(n_states),
      n_actions_(n_actions) {
  if (n_states < 1 || n_actions < 1) {
    throw std::invalid_argument("SampleModel: dimensions must be positive");
  }
}

void SampleModel::check(int s, int a) const {
  if (s < 0 || s >= n_states_ || a < 0 || a >= n_actions_) {
    throw std::out_of_range("SampleModel: index out of range");
  }
}

void SampleModel::record(int s, int a, int s_next, double reward) {
  record_aggregate(s, a, s_next, 1, reward);
}

void SampleModel::record_aggregate(int s, int a, int s_next,
                                   std::int64_t count, double mean_reward) {
  check(s, a);
  if (s_next < 0 || s_next >= n_states_) {
    throw std::out_of_range("SampleModel: next state out of range");
  }
  if (count < 1) throw std::invalid_argument("SampleModel: count must be >= 1");
  if (!std::isfinite(mean_reward)) {
    throw std::invalid_argument("SampleModel: reward not finite");
  }
  auto& outcomes = table_[key(s, a)];
  for (auto& o : outcomes) {
    if (o.next_state == s_next) {
      const double total = static_cast<double>(o.count + count);
      o.mean_reward += (mean_reward - o.mean_reward) *
                       (static_cast<double>(count) / total);
      o.count += count;
      return;
    }
  }
  outcomes.push_back({s_next, count, mean_reward});
  std::sort(outcomes.begin(), outcomes.end(),
            [](const Outcome& a_, const Outcome& b_) {
              return a_.next_state < b_.next_state;
            });
}

bool SampleModel::visited(int s, int a) const {
  check(s, a);
  return table_.contains(key(s, a));
}

std::span<const SampleModel::Outcome> SampleModel::outcomes(int s,
                                                            int a) const {
  check(s, a);
  const auto it = table_.find(key(s, a));
  if (it == table_.end()) return {};
  return it->second;
}

std::int64_t SampleModel::total_count(int s, int a) const {
  std::int64_t total = 0;
  for (const auto& o : outcomes(s, a)) total += o.count;
  return total;
}

double SampleModel::probability(int s, int a, int s_next) const {
  const auto outs = outcomes(s, a);
  std::int64_t total = 0;
  std::int64_t hits = 0;
  for (const auto& o : outs) {
    total += o.count;
    if (o.next_state == s_next) hits = o.count;
  }
  if (total == 0) return 0.0;
  return static_cast<double>(hits) / static_cast<double>(total);
}

double SampleModel::mean_reward(int s, int a, int s_next) const {
  for (const auto& o : outcomes(s, a)) {
    if (o.next_state == s_next) return o.mean_reward;
  }
  return 0.0;
}

std::pair<int, double> SampleModel::sample(int s, int a, Rng& rng,
                                           HolePolicy policy) const {
  const auto outs = outcomes(s, a);
  if (outs.empty()) {
    if (policy == HolePolicy::error) throw ModelHoleError(s, a);
    return {s, 0.0};
  }
  std::int64_t total = 0;
  for (const auto& o : outs) total += o.count;
  const double u = rng.uniform() * static_cast<double>(total);
  double cum = 0.0;
  for (const auto& o : outs) {
    cum += static_cast<double>(o.count);
    if (u < cum) return {o.next_state, o.mean_reward};
  }
  return {outs.back().next_state, outs.back().mean_reward};
}

int SampleModel::initial_state() const {
  int best = 0;
  bool found = false;
  for (const auto& kv : table_) {
    const int s = static_cast<int>(kv.first >> 32);
    if (!found || s < best) {
      best = s;
      found = true;
    }
  }
  return best;
}

std::vector<std::pair<int, int>> SampleModel::visited_pairs() const {
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(table_.size());
  for (const auto& kv : table_) {
    pairs.emplace_back(static_cast<int>(kv.first >> 32),
                       static_cast<int>(kv.first & 0xffffffffu));
  }
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

SampleModel build_sample_model(std::string task_name, int n_states,
                               int n_actions,
                               std::span<const Transition> log) {
  if (log.empty()) {
    throw std::invalid_argument("build_sample_model: empty transition log");
  }
  SampleModel model(std::move(task_name), n_states, n_actions);
  for (const auto& t : log) {
    model.record(t.state, t.action, t.next_state, t.reward);
  }
  return model;
}

SampleModelEnv::SampleModelEnv(TaskSpec task)
    : task_(std::move(task)), codec_(task_.inputs) {
  if (!task_.model) {
    throw std::invalid_argument("SampleModelEnv: task has no model");
  }
  if (task_.model->n_states() != codec_.n_states() ||
      task_.model->n_actions() != task_.actions.n_actions()) {
    throw std::invalid_argument(
        "SampleModelEnv: model dimensions do not match the task");
  }
  state_ = task_.model->initial_state();
}

Observation SampleModelEnv::reset() {
  state_ = task_.model->initial_state();
  Observation obs;
  obs.values = codec_.decode(state_);
  return obs;
}

Observation SampleModelEnv::step(int action, Rng& rng) {
  const auto [next, reward] =
      task_.model->sample(state_, action, rng, task_.hole_policy);
  state_ = next;
  Observation obs;
  obs.values = codec_.decode(state_);
  obs.reward = reward * task_.reward_scale;
  obs.episode_done = false;
  return obs;
}

}  // namespace tabrl
