#include "tabrl/qtable.hpp"

#include <stdexcept>

namespace tabrl {

QTable::QTable(int n_states, int n_actions)
    : n_states_(n_states), n_actions_(n_actions) {
  if (n_states < 1 || n_actions < 1) {
    throw std::invalid_argument("QTable: dimensions must be positive");
  }
  values_.assign(static_cast<std::size_t>(n_states) * n_actions, 0.0);
}

double QTable::value_of(int s) const {
  const auto r = row(s);
  double best = r[0];
  for (std::size_t a = 1; a < r.size(); ++a) {
    if (r[a] > best) best = r[a];
  }
  return best;
}

int QTable::greedy_action(int s) const {
  const auto r = row(s);
  int best = 0;
  for (std::size_t a = 1; a < r.size(); ++a) {
    if (r[a] > r[best]) best = static_cast<int>(a);
  }
  return best;
}

}  // namespace tabrl
