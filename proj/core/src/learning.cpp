#include "tabrl/learning.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tabrl {

namespace {

void check_open_unit(double v, const char* name) {
  if (!(v > 0.0 && v < 1.0)) {
    throw std::invalid_argument(std::string("LearningParams: ") + name +
                                " must lie in (0, 1), got " +
                                std::to_string(v));
  }
}

void check_indices(const QTable& q, int s, int a, int s_next, double reward) {
  if (s < 0 || s >= q.n_states() || s_next < 0 || s_next >= q.n_states()) {
    throw std::out_of_range("update: state index out of range");
  }
  if (a < 0 || a >= q.n_actions()) {
    throw std::out_of_range("update: action index out of range");
  }
  if (!std::isfinite(reward)) {
    throw std::invalid_argument("update: reward is not finite");
  }
}

}  // namespace

void LearningParams::validate() const {
  check_open_unit(alpha, "alpha");
  check_open_unit(gamma, "gamma");
  check_open_unit(lambda, "lambda");
  check_open_unit(trace_threshold, "trace_threshold");
  if (!(r_max > 0.0)) {
    throw std::invalid_argument("LearningParams: r_max must be positive");
  }
}

int retr_capacity(const LearningParams& params) {
  const double gl = params.gamma * params.lambda;
  if (gl <= 0.0) return 0;
  if (!(gl < 1.0) || !(params.trace_threshold > 0.0) ||
      !(params.trace_threshold < 1.0)) {
    throw std::invalid_argument("retr_capacity: need gamma*lambda in (0,1) "
                                "and trace_threshold in (0,1)");
  }
  return static_cast<int>(
      std::floor(std::log(params.trace_threshold) / std::log(gl)));
}

TraceRegister::TraceRegister(TraceRule rule, std::optional<int> capacity)
    : rule_(rule), capacity_(capacity) {
  if (capacity_ && *capacity_ < 1) {
    throw std::invalid_argument("TraceRegister: capacity must be >= 1");
  }
}

TraceRegister TraceRegister::reduced(TraceRule rule,
                                     const LearningParams& params) {
  return TraceRegister(rule, retr_capacity(params) + 1);
}

TraceRegister TraceRegister::full(TraceRule rule) {
  return TraceRegister(rule, std::nullopt);
}

void TraceRegister::decay_all(double factor) {
  // Entries that stay registered long enough decay into the subnormal
  // range, where multiplies stall the FPU; flush them to zero well below
  // any magnitude that could still matter.
  constexpr double kFlushFloor = 1e-300;
  for (std::size_t i = live_begin_; i < slots_.size(); ++i) {
    if (!slots_[i].alive) continue;
    double& v = slots_[i].entry.value;
    v *= factor;
    if (v < kFlushFloor && v > -kFlushFloor) v = 0.0;
  }
}

void TraceRegister::touch(int state, int action, double alpha) {
  const std::uint64_t k = key(state, action);
  const auto it = lookup_.find(k);
  double updated;
  if (it != lookup_.end()) {
    Slot& old_slot = slots_[it->second];
    updated = rule_ == TraceRule::replacing
                  ? 1.0
                  : (1.0 - alpha) * old_slot.entry.value + alpha;
    old_slot.alive = false;
    --live_count_;
    it->second = slots_.size();
  } else {
    updated = rule_ == TraceRule::replacing ? 1.0 : alpha;
    lookup_.emplace(k, slots_.size());
  }
  slots_.push_back({{state, action, updated}, true});
  ++live_count_;

  if (capacity_ && live_count_ > static_cast<std::size_t>(*capacity_)) {
    while (!slots_[live_begin_].alive) ++live_begin_;
    Slot& oldest = slots_[live_begin_];
    oldest.alive = false;
    lookup_.erase(key(oldest.entry.state, oldest.entry.action));
    --live_count_;
    ++live_begin_;
  }
  compact_if_sparse();
}

void TraceRegister::compact_if_sparse() {
  if (slots_.size() - live_begin_ <= 2 * live_count_ + 16) return;
  std::vector<Slot> packed;
  packed.reserve(live_count_);
  for (std::size_t i = live_begin_; i < slots_.size(); ++i) {
    if (slots_[i].alive) packed.push_back(slots_[i]);
  }
  slots_ = std::move(packed);
  live_begin_ = 0;
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    lookup_[key(slots_[i].entry.state, slots_[i].entry.action)] = i;
  }
}

double TraceRegister::value(int state, int action) const {
  const auto it = lookup_.find(key(state, action));
  return it == lookup_.end() ? 0.0 : slots_[it->second].entry.value;
}

std::vector<TraceRegister::Entry> TraceRegister::snapshot() const {
  std::vector<Entry> out;
  out.reserve(live_count_);
  for_each([&out](int s, int a, double v) { out.push_back({s, a, v}); });
  return out;
}

void TraceRegister::clear() {
  slots_.clear();
  lookup_.clear();
  live_begin_ = 0;
  live_count_ = 0;
}

double q_learning_update(QTable& q, int s, int a, double reward, int s_next,
                         const LearningParams& params, bool next_is_terminal) {
  check_indices(q, s, a, s_next, reward);
  const double bootstrap = next_is_terminal ? 0.0 : q.value_of(s_next);
  const double delta = reward + params.gamma * bootstrap - q.at(s, a);
  q.at(s, a) += params.alpha * delta;
  return delta;
}

double sarsa_update(QTable& q, int s, int a, double reward, int s_next,
                    int a_next, const LearningParams& params,
                    bool next_is_terminal) {
  check_indices(q, s, a, s_next, reward);
  const double bootstrap = next_is_terminal ? 0.0 : q.at(s_next, a_next);
  const double delta = reward + params.gamma * bootstrap - q.at(s, a);
  q.at(s, a) += params.alpha * delta;
  return delta;
}

double sarsa_lambda_update(QTable& q, TraceRegister& traces, int s, int a,
                           double reward, int s_next, int a_next,
                           const LearningParams& params,
                           bool next_is_terminal) {
  if (traces.rule() != TraceRule::replacing) {
    throw std::invalid_argument(
        "sarsa_lambda_update: register must use replacing traces");
  }
  check_indices(q, s, a, s_next, reward);
  const double bootstrap = next_is_terminal ? 0.0 : q.at(s_next, a_next);
  const double delta = reward + params.gamma * bootstrap - q.at(s, a);

  traces.decay_all(params.gamma * params.lambda);
  traces.touch(s, a, params.alpha);
  const double scaled = params.alpha * delta;
  traces.for_each([&q, scaled](int x, int b, double trace) {
    q.at(x, b) += scaled * trace;
  });
  return delta;
}

double tosl_update(QTable& q, TraceRegister& traces, ToslCarry& carry, int s,
                   int a, double reward, int s_next, int a_next,
                   const LearningParams& params, bool next_is_terminal) {
  if (traces.rule() != TraceRule::dutch) {
    throw std::invalid_argument("tosl_update: register must use dutch traces");
  }
  check_indices(q, s, a, s_next, reward);
  const double q_sa = q.at(s, a);
  const double q_next = next_is_terminal ? 0.0 : q.at(s_next, a_next);
  const double delta = reward + params.gamma * q_next - q_sa;
  const double correction = q_sa - carry.q_old;

  traces.decay_all(params.gamma * params.lambda);
  traces.touch(s, a, params.alpha);
  const double step = delta + correction;
  traces.for_each([&q, step](int x, int b, double trace) {
    q.at(x, b) += step * trace;
  });
  q.at(s, a) -= params.alpha * correction;
  carry.q_old = q_next;
  return delta;
}

}  // namespace tabrl
