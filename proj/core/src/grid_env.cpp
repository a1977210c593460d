#include "tabrl/grid_env.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace tabrl {

namespace {

// 8-way direction vectors, clockwise from north. Headings use the even
// entries.
constexpr int kDx[8] = {0, 1, 1, 1, 0, -1, -1, -1};
constexpr int kDy[8] = {-1, -1, 0, 1, 1, 1, 0, -1};

constexpr double kAdvanceReward = 1.0;
constexpr double kFrontalCollision = -10.0;
constexpr double kSideCollision = -2.0;
constexpr double kGoalBonus = 100.0;

}  // namespace

GridMap GridMap::parse(const std::string& text) {
  GridMap map;
  std::vector<std::string> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) {
      line.pop_back();
    }
    if (!line.empty()) rows.push_back(line);
  }
  if (rows.size() < 3) throw std::invalid_argument("grid map: too few rows");
  map.height = static_cast<int>(rows.size());
  map.width = static_cast<int>(rows[0].size());
  map.cells.assign(static_cast<std::size_t>(map.width) * map.height, 0);
  bool has_start = false;
  for (int y = 0; y < map.height; ++y) {
    if (static_cast<int>(rows[y].size()) != map.width) {
      throw std::invalid_argument("grid map: ragged rows");
    }
    for (int x = 0; x < map.width; ++x) {
      const char c = rows[y][static_cast<std::size_t>(x)];
      switch (c) {
        case '#':
          map.cells[static_cast<std::size_t>(y) * map.width + x] = 1;
          break;
        case '.':
          break;
        case 'R':
          map.start_x = x;
          map.start_y = y;
          has_start = true;
          break;
        case 'G':
          map.goal = {x, y};
          break;
        default:
          throw std::invalid_argument(std::string("grid map: bad cell '") + c +
                                      "'");
      }
    }
  }
  if (!has_start) throw std::invalid_argument("grid map: missing 'R' start");
  for (int x = 0; x < map.width; ++x) {
    if (!map.obstacle(x, 0) || !map.obstacle(x, map.height - 1)) {
      throw std::invalid_argument("grid map: border must be walled");
    }
  }
  for (int y = 0; y < map.height; ++y) {
    if (!map.obstacle(0, y) || !map.obstacle(map.width - 1, y)) {
      throw std::invalid_argument("grid map: border must be walled");
    }
  }
  if (map.obstacle(map.start_x, map.start_y)) {
    throw std::invalid_argument("grid map: start lies on an obstacle");
  }
  if (map.goal && map.obstacle(map.goal->first, map.goal->second)) {
    throw std::invalid_argument("grid map: target lies on an obstacle");
  }
  return map;
}

GridEnv::GridEnv(TaskSpec task)
    : task_(std::move(task)), navigation_(task_.kind == EnvKind::grid_nav) {
  if (navigation_ && !task_.grid.map.goal) {
    throw std::invalid_argument("grid_nav task needs a 'G' target cell");
  }
  reset();
}

void GridEnv::set_pose(int x, int y, int heading) {
  if (task_.grid.map.obstacle(x, y)) {
    throw std::invalid_argument("GridEnv: pose on an obstacle");
  }
  x_ = x;
  y_ = y;
  heading_ = ((heading % 4) + 4) % 4;
}

Observation GridEnv::reset() {
  x_ = task_.grid.map.start_x;
  y_ = task_.grid.map.start_y;
  heading_ = 0;
  steps_in_episode_ = 0;
  return observe();
}

int GridEnv::sensor_level(SensorDir dir) const {
  const int abs_dir = (heading_ * 2 + static_cast<int>(dir)) % 8;
  int free_cells = 0;
  int cx = x_;
  int cy = y_;
  const int cap = task_.grid.sensor_levels - 1;
  while (free_cells < cap) {
    cx += kDx[abs_dir];
    cy += kDy[abs_dir];
    if (task_.grid.map.obstacle(cx, cy)) break;
    ++free_cells;
  }
  return free_cells;
}

int GridEnv::pose_bin(int coord, int extent) const {
  // Interior coordinates only (the border is walled), binned evenly.
  const int interior = extent - 2;
  const int bins = task_.grid.pose_bins;
  int bin = (coord - 1) * bins / interior;
  if (bin >= bins) bin = bins - 1;
  return bin;
}

int GridEnv::manhattan_to_goal() const {
  return std::abs(x_ - task_.grid.map.goal->first) +
         std::abs(y_ - task_.grid.map.goal->second);
}

Observation GridEnv::observe() const {
  Observation obs;
  obs.values.reserve(task_.inputs.size());
  for (const SensorDir dir : task_.grid.sensors) {
    obs.values.push_back(sensor_level(dir));
  }
  if (navigation_) {
    obs.values.push_back(pose_bin(x_, task_.grid.map.width));
    obs.values.push_back(pose_bin(y_, task_.grid.map.height));
    obs.values.push_back(heading_);
  } else if (task_.grid.heading_in_state) {
    obs.values.push_back(heading_);
  }
  return obs;
}

Observation GridEnv::step(int action, Rng&) {
  const std::vector<int> levels = task_.actions.decode(action);
  const int n_levels = task_.grid.wheel_levels;
  // Odd level counts are centered speed sets (-m..m); even counts start
  // at zero.
  const int offset = (n_levels % 2 == 1) ? n_levels / 2 : 0;
  const int left = levels.at(0) - offset;
  const int right = levels.at(1) - offset;

  const int d_before = navigation_ ? manhattan_to_goal() : 0;

  const int spin = right - left;
  if (spin > 0) {
    heading_ = (heading_ + 3) % 4;  // left turn
  } else if (spin < 0) {
    heading_ = (heading_ + 1) % 4;
  }

  const int translate = (left + right) / 2;  // toward zero
  const int dir = translate >= 0 ? heading_ * 2 : (heading_ * 2 + 4) % 8;
  int remaining = std::abs(translate);
  int moved = 0;
  bool collided = false;
  while (remaining > 0) {
    const int nx = x_ + kDx[dir];
    const int ny = y_ + kDy[dir];
    if (task_.grid.map.obstacle(nx, ny)) {
      collided = true;
      break;
    }
    x_ = nx;
    y_ = ny;
    ++moved;
    --remaining;
  }

  double reward = 0.0;
  bool done = false;
  if (navigation_) {
    if (collided) {
      reward += translate > 0 ? kFrontalCollision : kSideCollision;
    }
    const int d_after = manhattan_to_goal();
    reward += static_cast<double>(d_before - d_after);
    if (d_after == 0) {
      reward += kGoalBonus;
      done = true;
    }
  } else {
    if (collided) {
      reward = translate > 0 ? kFrontalCollision : kSideCollision;
    } else if (translate > 0 && moved > 0) {
      reward = kAdvanceReward;
    }
  }

  ++steps_in_episode_;
  if (navigation_ && task_.episode_limit > 0 &&
      steps_in_episode_ >= task_.episode_limit) {
    done = true;
  }

  Observation obs = observe();
  obs.reward = reward * task_.reward_scale;
  obs.episode_done = done;
  return obs;
}

}  // namespace tabrl
