#pragma once

#include <span>
#include <vector>

namespace tabrl {

/// Dense |S| x |A| action-value table, zero-initialized.
class QTable {
 public:
  QTable() = default;
  QTable(int n_states, int n_actions);

  int n_states() const { return n_states_; }
  int n_actions() const { return n_actions_; }

  double at(int s, int a) const { return values_[index(s, a)]; }
  double& at(int s, int a) { return values_[index(s, a)]; }

  std::span<const double> row(int s) const {
    return {values_.data() + static_cast<std::size_t>(s) * n_actions_,
            static_cast<std::size_t>(n_actions_)};
  }

  /// V(s) = max_a Q(s, a).
  double value_of(int s) const;

  /// Argmax over the row; ties broken by the lowest action index.
  int greedy_action(int s) const;

  std::span<const double> data() const { return values_; }
  std::span<double> data() { return values_; }

  bool operator==(const QTable& other) const = default;

 private:
  std::size_t index(int s, int a) const {
    return static_cast<std::size_t>(s) * n_actions_ + a;
  }

  int n_states_ = 0;
  int n_actions_ = 0;
  std::vector<double> values_;
};

}  // namespace tabrl
