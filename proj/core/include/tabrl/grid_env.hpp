#pragma once

#include "tabrl/env.hpp"

namespace tabrl {

/// Differential-drive robot on an occupancy grid. Actions are pairs of
/// wheel-speed levels; equal speeds translate along the heading, opposite
/// speeds turn in place, mixed speeds turn and then translate. Observations
/// are heading-relative proximity readings (plus the discretized pose for
/// navigation tasks).
///
/// Rewards, wander: +1 for a forward advance, -10 for a frontal collision,
/// -2 for any other collision, 0 otherwise; never episodic.
/// Rewards, navigation: collision penalties plus the change in Manhattan
/// distance to the target, +100 on arrival (episode ends).
class GridEnv : public Environment {
 public:
  explicit GridEnv(TaskSpec task);

  Observation reset() override;
  Observation step(int action, Rng& rng) override;

  // Exposed for tests.
  int x() const { return x_; }
  int y() const { return y_; }
  int heading() const { return heading_; }
  void set_pose(int x, int y, int heading);
  Observation observe() const;

 private:
  int sensor_level(SensorDir dir) const;
  int pose_bin(int coord, int extent) const;
  int manhattan_to_goal() const;

  TaskSpec task_;
  bool navigation_;
  int x_ = 0;
  int y_ = 0;
  int heading_ = 0;  // 0=N, 1=E, 2=S, 3=W
  int steps_in_episode_ = 0;
};

}  // namespace tabrl
