#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tabrl {

/// One discretized input variable of a factored state space.
struct InputVariable {
  std::string name;
  int cardinality = 0;  // number of discretization levels, >= 1
  std::vector<std::string> level_labels;  // optional; size == cardinality

  InputVariable() = default;
  InputVariable(std::string name, int cardinality,
                std::vector<std::string> labels = {});
};

/// Composite action space built from output variables (mixed-radix packing
/// of the per-variable levels; the first variable is the most significant
/// digit).
class ActionSpace {
 public:
  ActionSpace() = default;
  explicit ActionSpace(std::vector<InputVariable> output_variables);

  int n_actions() const { return n_actions_; }
  const std::vector<InputVariable>& variables() const { return variables_; }

  int encode(const std::vector<int>& levels) const;
  std::vector<int> decode(int action) const;

 private:
  std::vector<InputVariable> variables_;
  std::vector<std::int64_t> radices_;
  int n_actions_ = 1;
};

/// Bijection between tuples of input-variable levels and dense state
/// indices, plus the sibling-set structure used for bias computation.
///
/// The sibling set SS(s, i) holds every state that agrees with s on all
/// variables except possibly variable i; it always contains s and has
/// exactly cardinality(i) members, in ascending index order.
class StateCodec {
 public:
  /// Total sibling-index entries above which sets are computed per query
  /// instead of being fully tabulated (64 Mi entries by default).
  static constexpr std::int64_t kDefaultSiblingBudget = 64ll << 20;

  explicit StateCodec(std::vector<InputVariable> variables,
                      std::int64_t sibling_budget = kDefaultSiblingBudget);

  int n_states() const { return n_states_; }
  int n_variables() const { return static_cast<int>(variables_.size()); }
  const std::vector<InputVariable>& variables() const { return variables_; }
  const InputVariable& variable(int i) const { return variables_.at(i); }

  /// Mixed-radix place value of variable i.
  std::int64_t radix(int i) const { return radices_.at(i); }

  int encode(const std::vector<int>& levels) const;
  std::vector<int> decode(int state) const;

  /// Level of variable i in state s, without materializing the full tuple.
  int level_of(int state, int i) const;

  /// Sibling set SS(s, i), ascending. O(cardinality(i)) when not tabulated.
  std::vector<int> sibling_set(int state, int i) const;

  /// Tabulated row view when precomputed, nullptr otherwise.
  const int* sibling_row(int state, int i) const;

  bool siblings_precomputed() const { return !sibling_index_.empty(); }

 private:
  void check_state(int state) const;
  void check_variable(int i) const;

  std::vector<InputVariable> variables_;
  std::vector<std::int64_t> radices_;
  int n_states_ = 1;
  // Flat tabulation: for state s and variable i, the row starts at
  // sibling_index_[(s * n_variables + i) stride table] via offsets_.
  std::vector<int> sibling_index_;
  std::vector<std::int64_t> offsets_;  // per-variable offset of row start
  std::int64_t row_stride_ = 0;        // sum of cardinalities
};

/// Builds a codec after validating the variable list.
StateCodec build_codec(std::vector<InputVariable> variables,
                       std::int64_t sibling_budget =
                           StateCodec::kDefaultSiblingBudget);

}  // namespace tabrl
