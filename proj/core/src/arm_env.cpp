#include "tabrl/arm_env.hpp"

#include <cmath>
#include <stdexcept>

namespace tabrl {

namespace {
constexpr double kGoalBonus = 100.0;
}

ArmEnv::ArmEnv(TaskSpec task) : task_(std::move(task)) {
  const auto& arm = task_.arm;
  const std::size_t n = arm.joint_levels.size();
  if (n < 2 || n > 3) {
    throw std::invalid_argument("ArmEnv: need 2 or 3 joints");
  }
  if (arm.object_cell.size() != n || arm.object_bins.size() != n ||
      arm.start_levels.size() != n) {
    throw std::invalid_argument("ArmEnv: axis count mismatch");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (arm.joint_levels[i] < 2) {
      throw std::invalid_argument("ArmEnv: joint range too small");
    }
    if (arm.object_cell[i] < 0 || arm.object_cell[i] >= arm.joint_levels[i] ||
        arm.start_levels[i] < 0 || arm.start_levels[i] >= arm.joint_levels[i]) {
      throw std::invalid_argument("ArmEnv: cell outside the lattice");
    }
  }
  reset();
}

Observation ArmEnv::reset() {
  joints_ = task_.arm.start_levels;
  steps_in_episode_ = 0;
  return observe();
}

double ArmEnv::distance_to_object() const {
  double sum = 0.0;
  for (std::size_t i = 0; i < joints_.size(); ++i) {
    const double d = joints_[i] - task_.arm.object_cell[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

int ArmEnv::object_bin(int axis) const {
  const int bins = task_.arm.object_bins[axis];
  const int extent = task_.arm.joint_levels[axis];
  int bin = task_.arm.object_cell[axis] * bins / extent;
  if (bin >= bins) bin = bins - 1;
  return bin;
}

Observation ArmEnv::observe() const {
  Observation obs;
  obs.values.reserve(2 * joints_.size());
  for (const int level : joints_) obs.values.push_back(level);
  for (std::size_t i = 0; i < joints_.size(); ++i) {
    obs.values.push_back(object_bin(static_cast<int>(i)));
  }
  return obs;
}

Observation ArmEnv::step(int action, Rng&) {
  const std::vector<int> levels = task_.actions.decode(action);
  const double d_before = distance_to_object();
  for (std::size_t i = 0; i < joints_.size(); ++i) {
    const int delta = levels[i] - 1;  // levels {0,1,2} -> {-1,0,+1}
    const int moved = joints_[i] + delta;
    if (moved >= 0 && moved < task_.arm.joint_levels[i]) {
      joints_[i] = moved;
    }
  }
  const double d_after = distance_to_object();

  double reward = d_before - d_after;
  bool done = false;
  if (d_after == 0.0) {
    reward += kGoalBonus;
    done = true;
  }

  ++steps_in_episode_;
  if (task_.episode_limit > 0 && steps_in_episode_ >= task_.episode_limit) {
    done = true;
  }

  Observation obs = observe();
  obs.reward = reward * task_.reward_scale;
  obs.episode_done = done;
  return obs;
}

}  // namespace tabrl
