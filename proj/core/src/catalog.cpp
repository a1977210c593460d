#include "tabrl/catalog.hpp"

#include <stdexcept>

#include "tabrl/arm_env.hpp"
#include "tabrl/grid_env.hpp"

namespace tabrl {

namespace {

const char* kWanderSimpleMap =
    "######\n"
    "#R...#\n"
    "#....#\n"
    "#....#\n"
    "#....#\n"
    "######\n";

const char* kWander1kMap =
    "####################\n"
    "#R.................#\n"
    "#..................#\n"
    "#..................#\n"
    "#......##..........#\n"
    "#......##..........#\n"
    "#..................#\n"
    "#..................#\n"
    "#.............#....#\n"
    "#.............#....#\n"
    "#....#.............#\n"
    "#....#.............#\n"
    "#..................#\n"
    "#..........##......#\n"
    "#..........##......#\n"
    "#...#..............#\n"
    "#...#..............#\n"
    "#..................#\n"
    "#..................#\n"
    "####################\n";

const char* kWander4kMap =
    "########################\n"
    "#R.....................#\n"
    "#......................#\n"
    "#......................#\n"
    "#.....##...............#\n"
    "#.....##..........#....#\n"
    "#..................#...#\n"
    "#......................#\n"
    "#..................##..#\n"
    "#...#..................#\n"
    "#...#..................#\n"
    "#...........##.........#\n"
    "#...........##.........#\n"
    "#......................#\n"
    "#..................#...#\n"
    "#.......#..........#...#\n"
    "#.......#..............#\n"
    "#......................#\n"
    "#......................#\n"
    "#....##................#\n"
    "#......................#\n"
    "#..............#.......#\n"
    "#..............#.......#\n"
    "########################\n";

const char* kNav1kMap =
    "############\n"
    "#R.........#\n"
    "#..........#\n"
    "#...##.....#\n"
    "#...##.....#\n"
    "#..........#\n"
    "#.......#..#\n"
    "#.......#..#\n"
    "#..G....#..#\n"
    "#..........#\n"
    "#..........#\n"
    "############\n";

ActionSpace wheel_actions(int levels) {
  return ActionSpace({InputVariable("wheel_left", levels),
                      InputVariable("wheel_right", levels)});
}

}  // namespace

std::string sensor_name(SensorDir dir) {
  switch (dir) {
    case SensorDir::front: return "prox_front";
    case SensorDir::front_right: return "prox_front_right";
    case SensorDir::right: return "prox_right";
    case SensorDir::back_right: return "prox_back_right";
    case SensorDir::back: return "prox_back";
    case SensorDir::back_left: return "prox_back_left";
    case SensorDir::left: return "prox_left";
    case SensorDir::front_left: return "prox_front_left";
  }
  return "prox";
}

SensorDir sensor_from_string(const std::string& name) {
  for (int d = 0; d < 8; ++d) {
    const auto dir = static_cast<SensorDir>(d);
    if (sensor_name(dir) == name || sensor_name(dir) == "prox_" + name) {
      return dir;
    }
  }
  throw std::invalid_argument("unknown sensor direction '" + name + "'");
}

TaskSpec make_wander_task(std::string name, GridMap map,
                          std::vector<SensorDir> sensors, int sensor_levels,
                          int wheel_levels, bool heading_in_state) {
  TaskSpec task;
  task.name = std::move(name);
  task.kind = EnvKind::grid_wander;
  for (const SensorDir dir : sensors) {
    task.inputs.emplace_back(sensor_name(dir), sensor_levels);
  }
  if (heading_in_state) task.inputs.emplace_back("heading", 4);
  task.actions = wheel_actions(wheel_levels);
  task.r_max = 10.0;
  task.episode_limit = 0;
  task.grid = {std::move(map), std::move(sensors), sensor_levels, wheel_levels,
               0, heading_in_state};
  return task;
}

TaskSpec make_nav_task(std::string name, GridMap map,
                       std::vector<SensorDir> sensors, int sensor_levels,
                       int wheel_levels, int pose_bins, int episode_limit) {
  TaskSpec task;
  task.name = std::move(name);
  task.kind = EnvKind::grid_nav;
  for (const SensorDir dir : sensors) {
    task.inputs.emplace_back(sensor_name(dir), sensor_levels);
  }
  task.inputs.emplace_back("pos_x", pose_bins);
  task.inputs.emplace_back("pos_y", pose_bins);
  task.inputs.emplace_back("heading", 4);
  task.actions = wheel_actions(wheel_levels);
  task.r_max = 100.0;
  task.episode_limit = episode_limit;
  task.grid = {std::move(map), std::move(sensors), sensor_levels, wheel_levels,
               pose_bins, false};
  return task;
}

TaskSpec make_arm_task(std::string name, std::vector<int> joint_levels,
                       std::vector<int> object_cell,
                       std::vector<int> object_bins,
                       std::vector<int> start_levels, int episode_limit) {
  static const char* kAxis[3] = {"x", "y", "z"};
  TaskSpec task;
  task.name = std::move(name);
  task.kind = EnvKind::arm_lattice;
  const std::size_t n = joint_levels.size();
  if (n < 2 || n > 3 || object_cell.size() != n || object_bins.size() != n ||
      start_levels.size() != n) {
    throw std::invalid_argument("make_arm_task: inconsistent axis counts");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (joint_levels[i] < 2 || object_bins[i] < 1) {
      throw std::invalid_argument("make_arm_task: axis " + std::to_string(i) +
                                  " is too small");
    }
    if (object_cell[i] < 0 || object_cell[i] >= joint_levels[i] ||
        start_levels[i] < 0 || start_levels[i] >= joint_levels[i]) {
      throw std::invalid_argument("make_arm_task: cell outside the lattice");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    task.inputs.emplace_back(std::string("grip_") + kAxis[i], joint_levels[i]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    task.inputs.emplace_back(std::string("obj_") + kAxis[i], object_bins[i]);
  }
  std::vector<InputVariable> joints;
  for (std::size_t i = 0; i < n; ++i) {
    joints.emplace_back(std::string("joint_") + kAxis[i], 3);
  }
  task.actions = ActionSpace(std::move(joints));
  task.r_max = 100.0;
  task.episode_limit = episode_limit;
  task.arm = {std::move(joint_levels), std::move(object_cell),
              std::move(object_bins), std::move(start_levels)};
  return task;
}

TaskSpec make_sample_model_task(std::string name,
                                std::shared_ptr<const SampleModel> model,
                                std::vector<InputVariable> inputs,
                                ActionSpace actions) {
  TaskSpec task;
  task.name = std::move(name);
  task.kind = EnvKind::sample_model;
  task.inputs = std::move(inputs);
  task.actions = std::move(actions);
  task.model = std::move(model);
  task.r_max = 10.0;
  task.episode_limit = 0;
  return task;
}

TaskSpec with_sample_model(const TaskSpec& task,
                           std::shared_ptr<const SampleModel> model) {
  TaskSpec out = task;
  out.kind = EnvKind::sample_model;
  out.model = std::move(model);
  return out;
}

TaskSpec catalog_task(const std::string& name) {
  if (name == "wander-simple") {
    return make_wander_task(name, GridMap::parse(kWanderSimpleMap),
                            {SensorDir::front, SensorDir::left}, 2, 2, false);
  }
  if (name == "wander-1K") {
    return make_wander_task(name, GridMap::parse(kWander1kMap),
                            {SensorDir::front, SensorDir::left,
                             SensorDir::right, SensorDir::back},
                            4, 3, true);
  }
  if (name == "wander-4K") {
    return make_wander_task(name, GridMap::parse(kWander4kMap),
                            {SensorDir::front, SensorDir::front_left,
                             SensorDir::front_right, SensorDir::left,
                             SensorDir::right},
                            4, 5, true);
  }
  if (name == "2D-navigation-1K") {
    return make_nav_task(name, GridMap::parse(kNav1kMap),
                         {SensorDir::front, SensorDir::left}, 4, 3, 4, 300);
  }
  if (name == "3D-arm-1K") {
    return make_arm_task(name, {16, 16}, {12, 5}, {2, 2}, {2, 2}, 150);
  }
  if (name == "3D-arm-4K") {
    return make_arm_task(name, {8, 8, 8}, {6, 2, 5}, {2, 2, 2}, {1, 1, 1},
                         150);
  }
  throw std::invalid_argument("unknown catalog task '" + name + "'");
}

std::vector<std::string> catalog_names() {
  return {"wander-simple", "wander-1K",  "wander-4K",
          "3D-arm-1K",     "3D-arm-4K",  "2D-navigation-1K"};
}

int TaskSpec::n_states() const {
  int n = 1;
  for (const auto& v : inputs) n *= v.cardinality;
  return n;
}

std::unique_ptr<Environment> make_environment(const TaskSpec& task) {
  switch (task.kind) {
    case EnvKind::grid_wander:
    case EnvKind::grid_nav:
      return std::make_unique<GridEnv>(task);
    case EnvKind::arm_lattice:
      return std::make_unique<ArmEnv>(task);
    case EnvKind::sample_model:
      return std::make_unique<SampleModelEnv>(task);
  }
  throw std::invalid_argument("make_environment: unhandled task kind");
}

}  // namespace tabrl
