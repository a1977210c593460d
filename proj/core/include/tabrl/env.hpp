#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tabrl/rng.hpp"
#include "tabrl/statespace.hpp"

namespace tabrl {

/// What an environment hands back after a step: the discretized
/// input-variable levels, the reward, and whether the episode ended.
struct Observation {
  std::vector<int> values;
  double reward = 0.0;
  bool episode_done = false;
};

enum class EnvKind { grid_wander, grid_nav, arm_lattice, sample_model };

enum class HolePolicy { self_loop, error };

/// Occupancy grid parsed from text: '#' obstacle, '.' free, 'R' start,
/// 'G' target. The border must be walled.
struct GridMap {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> cells;  // row-major, 1 = obstacle
  int start_x = 0;
  int start_y = 0;
  std::optional<std::pair<int, int>> goal;

  bool obstacle(int x, int y) const {
    if (x < 0 || y < 0 || x >= width || y >= height) return true;
    return cells[static_cast<std::size_t>(y) * width + x] != 0;
  }

  static GridMap parse(const std::string& text);
};

/// Relative sensing directions, clockwise from straight ahead.
enum class SensorDir {
  front = 0,
  front_right = 1,
  right = 2,
  back_right = 3,
  back = 4,
  back_left = 5,
  left = 6,
  front_left = 7,
};

struct GridTaskConfig {
  GridMap map;
  std::vector<SensorDir> sensors;
  int sensor_levels = 4;
  int wheel_levels = 3;  // speeds -m..m for odd counts, 0..n-1 for even
  int pose_bins = 0;     // grid_nav: X/Y discretization
  bool heading_in_state = true;
};

struct ArmTaskConfig {
  std::vector<int> joint_levels;   // lattice extent per axis (2 or 3 joints)
  std::vector<int> object_cell;    // fixed object position on the lattice
  std::vector<int> object_bins;    // observation bins per object axis
  std::vector<int> start_levels;   // initial joint levels
};

class SampleModel;

/// Everything needed to instantiate a task: the factored observation
/// space, the action space, reward bounds, and the kind-specific geometry.
struct TaskSpec {
  std::string name;
  EnvKind kind = EnvKind::grid_wander;
  std::vector<InputVariable> inputs;
  ActionSpace actions;
  double r_max = 10.0;
  int episode_limit = 0;  // 0 = non-episodic
  double reward_scale = 1.0;

  GridTaskConfig grid;
  ArmTaskConfig arm;
  std::shared_ptr<const SampleModel> model;
  HolePolicy hole_policy = HolePolicy::self_loop;

  int n_states() const;
  int n_actions() const { return actions.n_actions(); }
};

/// Step contract. Environments are deterministic functions of
/// (internal state, action); the rng parameter is consumed only by
/// sample-model playback.
class Environment {
 public:
  virtual ~Environment() = default;

  /// Start (or restart) an episode; reward and episode_done are unset.
  virtual Observation reset() = 0;

  virtual Observation step(int action, Rng& rng) = 0;
};

std::unique_ptr<Environment> make_environment(const TaskSpec& task);

}  // namespace tabrl
