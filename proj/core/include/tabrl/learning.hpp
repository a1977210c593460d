#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_map>
#include <vector>

#include "tabrl/qtable.hpp"

namespace tabrl {

/// Shared learning-rule parameters. Defaults are the common settings that
/// work across the bundled tasks without per-task tuning.
struct LearningParams {
  double alpha = 0.1;             // learning rate, (0, 1)
  double gamma = 0.9;             // discount, (0, 1)
  double lambda = 0.9;            // trace factor, (0, 1)
  double trace_threshold = 0.01;  // minimum trace magnitude kept, (0, 1)
  double r_max = 10.0;            // largest |reward| of the task, > 0

  void validate() const;
};

/// Number of past steps a trace survives before dropping below the
/// threshold: floor(log(threshold) / log(gamma * lambda)). The register
/// keeps this many recent pairs besides the current one.
int retr_capacity(const LearningParams& params);

enum class TraceRule {
  replacing,  // trace set to 1 on visit
  dutch,      // alpha folded in: e <- (1 - alpha) * decayed + alpha
};

/// Record of recently visited (state, action) pairs with decaying trace
/// magnitudes, ordered oldest-to-newest. A bounded register evicts the
/// least recent entry when the capacity is exceeded; with replacing traces
/// the decay is deterministic, so recency order and magnitude order
/// coincide and capacity eviction implements the magnitude threshold
/// exactly.
///
/// Storage is an append-only slot vector: re-touching a pair tombstones
/// its old slot and appends a fresh one, so a touch is O(1) amortized
/// (dead slots are compacted once they outnumber live ones).
class TraceRegister {
 public:
  struct Entry {
    int state;
    int action;
    double value;
  };

  /// capacity == nullopt means a full (unbounded) register.
  TraceRegister(TraceRule rule, std::optional<int> capacity);

  /// Bounded register sized from the params: retr_capacity(params) past
  /// pairs plus the current one.
  static TraceRegister reduced(TraceRule rule, const LearningParams& params);
  static TraceRegister full(TraceRule rule);

  TraceRule rule() const { return rule_; }
  bool bounded() const { return capacity_.has_value(); }
  std::size_t size() const { return live_count_; }
  std::optional<int> capacity() const { return capacity_; }

  /// Multiplies every registered magnitude by factor (one decay step).
  void decay_all(double factor);

  /// Visit of (s, a): replacing sets the trace to 1; dutch applies
  /// (1 - alpha) * current + alpha, treating an absent trace as 0. The
  /// pair becomes the most recent entry; the oldest entry is evicted if
  /// the capacity is exceeded.
  void touch(int state, int action, double alpha);

  /// Trace magnitude of a pair, 0 if not registered.
  double value(int state, int action) const;

  /// Applies fn(state, action, trace) to every live entry, oldest first.
  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t i = live_begin_; i < slots_.size(); ++i) {
      const Slot& slot = slots_[i];
      if (slot.alive) fn(slot.entry.state, slot.entry.action, slot.entry.value);
    }
  }

  /// Live entries oldest-to-newest (copies; for inspection and tests).
  std::vector<Entry> snapshot() const;

  void clear();

 private:
  struct Slot {
    Entry entry;
    bool alive;
  };

  std::uint64_t key(int state, int action) const {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(state))
            << 32) |
           static_cast<std::uint32_t>(action);
  }
  void compact_if_sparse();

  TraceRule rule_;
  std::optional<int> capacity_;
  std::vector<Slot> slots_;  // append-only between compactions
  std::size_t live_begin_ = 0;
  std::size_t live_count_ = 0;
  std::unordered_map<std::uint64_t, std::size_t> lookup_;  // key -> slot
};

/// Per-episode carry of the true online update (the previous step's
/// Q(s', a'), read before that step's mutation). Reset at episode start.
struct ToslCarry {
  double q_old = 0.0;
  void reset() { q_old = 0.0; }
};

/// One-step Q-learning: delta = r + gamma * max_b Q(s', b) - Q(s, a).
/// Updates Q(s, a) by alpha * delta and returns delta. When
/// next_is_terminal, the bootstrap term is dropped.
double q_learning_update(QTable& q, int s, int a, double reward, int s_next,
                         const LearningParams& params,
                         bool next_is_terminal = false);

/// One-step SARSA: delta = r + gamma * Q(s', a') - Q(s, a).
double sarsa_update(QTable& q, int s, int a, double reward, int s_next,
                    int a_next, const LearningParams& params,
                    bool next_is_terminal = false);

/// SARSA(lambda) with replacing traces: every registered trace decays by
/// gamma * lambda, the current pair's trace is set to 1, and every
/// registered pair receives alpha * delta * e(x, b).
double sarsa_lambda_update(QTable& q, TraceRegister& traces, int s, int a,
                           double reward, int s_next, int a_next,
                           const LearningParams& params,
                           bool next_is_terminal = false);

/// True online SARSA(lambda) with dutch traces. Requires a dutch-rule
/// register and a per-episode carry.
double tosl_update(QTable& q, TraceRegister& traces, ToslCarry& carry, int s,
                   int a, double reward, int s_next, int a_next,
                   const LearningParams& params,
                   bool next_is_terminal = false);

}  // namespace tabrl
