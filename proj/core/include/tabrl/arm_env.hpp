#pragma once

#include "tabrl/env.hpp"

namespace tabrl {

/// Articulated reacher on an integer lattice: each joint drives one lattice
/// axis, so the joint configuration is the gripper cell. Actions are
/// per-joint increments in {-1, 0, +1}; a joint at its range end clamps
/// (no movement on that axis). Reward is the change in Euclidean distance
/// to the fixed object cell, +100 on reaching it exactly (episode ends).
class ArmEnv : public Environment {
 public:
  explicit ArmEnv(TaskSpec task);

  Observation reset() override;
  Observation step(int action, Rng& rng) override;

  const std::vector<int>& joints() const { return joints_; }
  Observation observe() const;

 private:
  double distance_to_object() const;
  int object_bin(int axis) const;

  TaskSpec task_;
  std::vector<int> joints_;
  int steps_in_episode_ = 0;
};

}  // namespace tabrl
