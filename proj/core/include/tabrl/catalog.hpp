#pragma once

#include <memory>
#include <string>
#include <vector>

#include "tabrl/env.hpp"
#include "tabrl/sample_model.hpp"

namespace tabrl {

/// Built-in task by name. Available: wander-simple (4 states / 4 actions),
/// wander-1K (1024/9), wander-4K (4096/25), 3D-arm-1K (1024/9),
/// 3D-arm-4K (4096/27), 2D-navigation-1K (1024/9).
TaskSpec catalog_task(const std::string& name);

std::vector<std::string> catalog_names();

/// Assembly helpers shared by the catalog and task-definition files.
TaskSpec make_wander_task(std::string name, GridMap map,
                          std::vector<SensorDir> sensors, int sensor_levels,
                          int wheel_levels, bool heading_in_state);
TaskSpec make_nav_task(std::string name, GridMap map,
                       std::vector<SensorDir> sensors, int sensor_levels,
                       int wheel_levels, int pose_bins, int episode_limit);
TaskSpec make_arm_task(std::string name, std::vector<int> joint_levels,
                       std::vector<int> object_cell,
                       std::vector<int> object_bins,
                       std::vector<int> start_levels, int episode_limit);
TaskSpec make_sample_model_task(std::string name,
                                std::shared_ptr<const SampleModel> model,
                                std::vector<InputVariable> inputs,
                                ActionSpace actions);

/// Swaps a task's environment for playback through a sample model while
/// keeping its state/action structure.
TaskSpec with_sample_model(const TaskSpec& task,
                           std::shared_ptr<const SampleModel> model);

std::string sensor_name(SensorDir dir);
SensorDir sensor_from_string(const std::string& name);

}  // namespace tabrl
