#pragma once

#include "tabrl/qtable.hpp"
#include "tabrl/sample_model.hpp"

namespace tabrl {

struct ValueIterationResult {
  QTable q;
  int iterations = 0;
  double residual = 0.0;  // max |Q - Bellman(Q)| at termination
};

/// Dynamic-programming fixed point of the model: iterates
/// Q(s,a) = sum_s' T(s,a,s') (R(s,a,s') + gamma * max_b Q(s',b))
/// until the max-norm change drops below `tolerance`. Unvisited pairs
/// follow the hole policy (zero-reward self-transition) or raise.
ValueIterationResult value_iteration(const SampleModel& model, double gamma,
                                     double tolerance = 1e-10,
                                     HolePolicy policy = HolePolicy::self_loop,
                                     int max_iterations = 1000000);

}  // namespace tabrl
