#include "tabrl/value_iteration.hpp"

#include <cmath>
#include <stdexcept>

namespace tabrl {

ValueIterationResult value_iteration(const SampleModel& model, double gamma,
                                     double tolerance, HolePolicy policy,
                                     int max_iterations) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw std::invalid_argument("value_iteration: gamma must be in (0, 1)");
  }
  const int n_states = model.n_states();
  const int n_actions = model.n_actions();

  QTable q(n_states, n_actions);
  std::vector<double> v(static_cast<std::size_t>(n_states), 0.0);

  ValueIterationResult result;
  for (int iter = 0; iter < max_iterations; ++iter) {
    for (int s = 0; s < n_states; ++s) v[s] = q.value_of(s);

    double max_change = 0.0;
    for (int s = 0; s < n_states; ++s) {
      for (int a = 0; a < n_actions; ++a) {
        double backed_up;
        const auto outs = model.outcomes(s, a);
        if (outs.empty()) {
          if (policy == HolePolicy::error) throw ModelHoleError(s, a);
          backed_up = gamma * v[s];  // zero-reward self-transition
        } else {
          std::int64_t total = 0;
          for (const auto& o : outs) total += o.count;
          backed_up = 0.0;
          for (const auto& o : outs) {
            const double t =
                static_cast<double>(o.count) / static_cast<double>(total);
            backed_up += t * (o.mean_reward + gamma * v[o.next_state]);
          }
        }
        max_change = std::max(max_change, std::fabs(backed_up - q.at(s, a)));
        q.at(s, a) = backed_up;
      }
    }
    result.iterations = iter + 1;
    result.residual = max_change;
    if (max_change < tolerance) {
      result.q = std::move(q);
      return result;
    }
  }
  throw std::runtime_error(
      "value_iteration: did not converge within the iteration cap");
}

}  // namespace tabrl
