#include "tabrl/io.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tabrl/catalog.hpp"

namespace tabrl::io {

namespace fs = std::filesystem;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt4(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& source, int line,
                       const std::string& message) {
  if (line <= 0) throw ConfigError(source + ": " + message);
  throw ConfigError(source + ":" + std::to_string(line) + ": " + message);
}

double parse_double(const std::string& value, const std::string& source,
                    int line, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    fail(source, line, key + ": expected a number, got '" + value + "'");
  }
}

long long parse_int(const std::string& value, const std::string& source,
                    int line, const std::string& key) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    fail(source, line, key + ": expected an integer, got '" + value + "'");
  }
}

bool parse_bool(const std::string& value, const std::string& source, int line,
                const std::string& key) {
  if (value == "true" || value == "yes" || value == "1") return true;
  if (value == "false" || value == "no" || value == "0") return false;
  fail(source, line, key + ": expected true/false, got '" + value + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(trim(item));
  return parts;
}

std::vector<int> parse_int_list(const std::string& value,
                                const std::string& source, int line,
                                const std::string& key) {
  std::vector<int> out;
  for (const auto& part : split(value, ',')) {
    out.push_back(static_cast<int>(parse_int(part, source, line, key)));
  }
  return out;
}

void check_range(bool ok, const std::string& source, int line,
                 const std::string& key, const std::string& range,
                 const std::string& value) {
  if (!ok) fail(source, line, key + " must lie in " + range + ", got " + value);
}

void set_key(ExperimentConfig& c, const KvEntry& e, const std::string& source) {
  const std::string& k = e.key;
  const std::string& v = e.value;
  const int line = e.line;
  if (k == "task") {
    c.task = v;
  } else if (k == "algorithm") {
    try {
      c.algorithm = algorithm_from_string(v);
    } catch (const std::exception& ex) {
      fail(source, line, ex.what());
    }
  } else if (k == "selection") {
    try {
      c.selection = selection_strategy_from_string(v);
    } catch (const std::exception& ex) {
      fail(source, line, ex.what());
    }
  } else if (k == "alpha") {
    const double d = parse_double(v, source, line, k);
    check_range(d > 0.0 && d < 1.0, source, line, k, "(0, 1)", v);
    c.params.alpha = d;
  } else if (k == "gamma") {
    const double d = parse_double(v, source, line, k);
    check_range(d > 0.0 && d < 1.0, source, line, k, "(0, 1)", v);
    c.params.gamma = d;
  } else if (k == "lambda") {
    const double d = parse_double(v, source, line, k);
    check_range(d > 0.0 && d < 1.0, source, line, k, "(0, 1)", v);
    c.params.lambda = d;
  } else if (k == "trace_threshold") {
    const double d = parse_double(v, source, line, k);
    check_range(d > 0.0 && d < 1.0, source, line, k, "(0, 1)", v);
    c.params.trace_threshold = d;
  } else if (k == "r_max") {
    if (v == "auto") {
      c.r_max.reset();
    } else {
      const double d = parse_double(v, source, line, k);
      check_range(d > 0.0, source, line, k, "(0, inf)", v);
      c.r_max = d;
    }
  } else if (k == "epsilon") {
    const double d = parse_double(v, source, line, k);
    check_range(d >= 0.0 && d <= 1.0, source, line, k, "[0, 1]", v);
    c.epsilon = d;
  } else if (k == "temperature") {
    const double d = parse_double(v, source, line, k);
    check_range(d > 0.0, source, line, k, "(0, inf)", v);
    c.base_temperature = d;
  } else if (k == "normalize") {
    c.normalize = parse_bool(v, source, line, k);
  } else if (k == "lrle") {
    if (v == "auto") {
      c.lrle.reset();
    } else {
      c.lrle = parse_bool(v, source, line, k);
    }
  } else if (k == "traces") {
    if (v == "reduced") {
      c.reduced_traces = true;
    } else if (v == "full") {
      c.reduced_traces = false;
    } else {
      fail(source, line, "traces: expected reduced or full, got '" + v + "'");
    }
  } else if (k == "steps") {
    const long long n = parse_int(v, source, line, k);
    check_range(n >= 1, source, line, k, "[1, inf)", v);
    c.steps = static_cast<int>(n);
  } else if (k == "episode_limit") {
    if (v == "auto") {
      c.episode_limit.reset();
    } else {
      const long long n = parse_int(v, source, line, k);
      check_range(n >= 0, source, line, k, "[0, inf)", v);
      c.episode_limit = static_cast<int>(n);
    }
  } else if (k == "repetitions") {
    const long long n = parse_int(v, source, line, k);
    check_range(n >= 1, source, line, k, "[1, inf)", v);
    c.repetitions = static_cast<int>(n);
  } else if (k == "seed") {
    try {
      c.base_seed = std::stoull(v);
    } catch (...) {
      fail(source, line, "seed: expected an unsigned integer, got '" + v + "'");
    }
  } else if (k == "reward_scale") {
    const double d = parse_double(v, source, line, k);
    check_range(d > 0.0, source, line, k, "(0, inf)", v);
    c.reward_scale = d;
  } else if (k == "model") {
    c.model_path = v;
  } else if (k == "hole_policy") {
    if (v == "self_loop") {
      c.hole_policy = HolePolicy::self_loop;
    } else if (v == "error") {
      c.hole_policy = HolePolicy::error;
    } else {
      fail(source, line,
           "hole_policy: expected self_loop or error, got '" + v + "'");
    }
  } else if (k == "threads") {
    const long long n = parse_int(v, source, line, k);
    check_range(n >= 0, source, line, k, "[0, inf)", v);
    c.threads = static_cast<int>(n);
  } else if (k == "out_dir") {
    c.out_dir = v;
  } else if (k == "save_qtables") {
    c.save_qtables = parse_bool(v, source, line, k);
  } else {
    fail(source, line, "unknown config key '" + k + "'");
  }
}

}  // namespace

std::vector<KvEntry> parse_kv_lines(const std::string& text,
                                    const std::string& source) {
  std::vector<KvEntry> entries;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      fail(source, line_no, "expected 'key = value', got '" + line + "'");
    }
    KvEntry e;
    e.key = trim(line.substr(0, eq));
    e.value = trim(line.substr(eq + 1));
    e.line = line_no;
    if (e.key.empty()) fail(source, line_no, "empty key");
    entries.push_back(std::move(e));
  }
  return entries;
}

ExperimentConfig parse_config(const std::string& text,
                              const std::string& source) {
  ExperimentConfig config;
  for (const auto& entry : parse_kv_lines(text, source)) {
    set_key(config, entry, source);
  }
  try {
    config.validate();
  } catch (const std::exception& e) {
    throw ConfigError(source + ": " + e.what());
  }
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  return parse_config(read_text_file(path), path);
}

void set_config_key(ExperimentConfig& config, const std::string& key,
                    const std::string& value) {
  set_key(config, {key, value, 0}, "override");
}

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "task = " << c.task << "\n";
  out << "algorithm = " << to_string(c.algorithm) << "\n";
  out << "selection = " << to_string(c.selection) << "\n";
  out << "alpha = " << fmt(c.params.alpha) << "\n";
  out << "gamma = " << fmt(c.params.gamma) << "\n";
  out << "lambda = " << fmt(c.params.lambda) << "\n";
  out << "trace_threshold = " << fmt(c.params.trace_threshold) << "\n";
  out << "r_max = " << (c.r_max ? fmt(*c.r_max) : "auto") << "\n";
  out << "epsilon = " << fmt(c.epsilon) << "\n";
  out << "temperature = " << fmt(c.base_temperature) << "\n";
  out << "normalize = " << (c.normalize ? "true" : "false") << "\n";
  out << "lrle = "
      << (c.lrle ? (*c.lrle ? "true" : "false") : std::string("auto")) << "\n";
  out << "traces = " << (c.reduced_traces ? "reduced" : "full") << "\n";
  out << "steps = " << c.steps << "\n";
  out << "episode_limit = "
      << (c.episode_limit ? std::to_string(*c.episode_limit)
                          : std::string("auto"))
      << "\n";
  out << "repetitions = " << c.repetitions << "\n";
  out << "seed = " << c.base_seed << "\n";
  out << "reward_scale = " << fmt(c.reward_scale) << "\n";
  if (!c.model_path.empty()) out << "model = " << c.model_path << "\n";
  out << "hole_policy = "
      << (c.hole_policy == HolePolicy::self_loop ? "self_loop" : "error")
      << "\n";
  out << "threads = " << c.threads << "\n";
  if (!c.out_dir.empty()) out << "out_dir = " << c.out_dir << "\n";
  out << "save_qtables = " << (c.save_qtables ? "true" : "false") << "\n";
  return out.str();
}

// ---- task files -------------------------------------------------------

namespace {

struct TaskFileData {
  std::string name = "task";
  std::string kind;
  std::string map_path;
  std::vector<std::string> sensors;
  int sensor_levels = 4;
  int wheel_levels = 3;
  bool heading_in_state = true;
  int pose_bins = 4;
  int episode_limit = -1;
  double r_max = -1.0;
  std::vector<int> joint_levels;
  std::vector<int> object_cell;
  std::vector<int> object_bins;
  std::vector<int> start_levels;
  std::string model_path;
  std::vector<InputVariable> inputs;
  std::vector<InputVariable> outputs;
};

InputVariable parse_variable(const std::string& value,
                             const std::string& source, int line,
                             const std::string& key) {
  const auto parts = split(value, ':');
  if (parts.size() != 2 || parts[0].empty()) {
    fail(source, line, key + ": expected 'name:cardinality', got '" + value +
                           "'");
  }
  const int card =
      static_cast<int>(parse_int(parts[1], source, line, key));
  check_range(card >= 1, source, line, key + " cardinality", "[1, inf)",
              parts[1]);
  return InputVariable(parts[0], card);
}

void validate_declared_variables(const std::vector<InputVariable>& declared,
                                 const std::vector<InputVariable>& derived,
                                 const std::string& source, const char* what) {
  if (declared.empty()) return;
  auto mismatch = [&](const std::string& detail) {
    throw ConfigError(source + ": declared " + std::string(what) +
                      " variables do not match the task geometry (" + detail +
                      ")");
  };
  if (declared.size() != derived.size()) {
    mismatch("expected " + std::to_string(derived.size()) + " variables, got " +
             std::to_string(declared.size()));
  }
  for (std::size_t i = 0; i < declared.size(); ++i) {
    if (declared[i].name != derived[i].name) {
      mismatch("variable " + std::to_string(i) + " is '" + derived[i].name +
               "', file says '" + declared[i].name + "'");
    }
    if (declared[i].cardinality != derived[i].cardinality) {
      mismatch("variable '" + derived[i].name + "' has cardinality " +
               std::to_string(derived[i].cardinality) + ", file says " +
               std::to_string(declared[i].cardinality));
    }
  }
}

}  // namespace

TaskSpec parse_task(const std::string& text, const std::string& source) {
  TaskFileData d;
  for (const auto& e : parse_kv_lines(text, source)) {
    const std::string& k = e.key;
    const std::string& v = e.value;
    if (k == "name") {
      d.name = v;
    } else if (k == "kind") {
      d.kind = v;
    } else if (k == "map") {
      d.map_path = v;
    } else if (k == "sensors") {
      d.sensors = split(v, ',');
    } else if (k == "sensor_levels") {
      d.sensor_levels = static_cast<int>(parse_int(v, source, e.line, k));
    } else if (k == "wheel_levels") {
      d.wheel_levels = static_cast<int>(parse_int(v, source, e.line, k));
    } else if (k == "heading_in_state") {
      d.heading_in_state = parse_bool(v, source, e.line, k);
    } else if (k == "pose_bins") {
      d.pose_bins = static_cast<int>(parse_int(v, source, e.line, k));
    } else if (k == "episode_limit") {
      d.episode_limit = static_cast<int>(parse_int(v, source, e.line, k));
    } else if (k == "r_max") {
      d.r_max = parse_double(v, source, e.line, k);
    } else if (k == "joint_levels") {
      d.joint_levels = parse_int_list(v, source, e.line, k);
    } else if (k == "object_cell") {
      d.object_cell = parse_int_list(v, source, e.line, k);
    } else if (k == "object_bins") {
      d.object_bins = parse_int_list(v, source, e.line, k);
    } else if (k == "start_levels") {
      d.start_levels = parse_int_list(v, source, e.line, k);
    } else if (k == "model") {
      d.model_path = v;
    } else if (k == "input") {
      d.inputs.push_back(parse_variable(v, source, e.line, k));
    } else if (k == "output") {
      d.outputs.push_back(parse_variable(v, source, e.line, k));
    } else {
      fail(source, e.line, "unknown task key '" + k + "'");
    }
  }

  const fs::path base = fs::path(source).parent_path();
  auto resolve = [&](const std::string& p) {
    const fs::path path(p);
    return path.is_absolute() || base.empty() ? path.string()
                                              : (base / path).string();
  };

  TaskSpec task;
  if (d.kind == "grid_wander" || d.kind == "grid_nav") {
    if (d.map_path.empty()) {
      throw ConfigError(source + ": " + d.kind + " task needs a 'map' file");
    }
    std::vector<SensorDir> sensors;
    for (const auto& s : d.sensors) {
      try {
        sensors.push_back(sensor_from_string(s));
      } catch (const std::exception& ex) {
        throw ConfigError(source + ": " + ex.what());
      }
    }
    if (sensors.empty()) sensors = {SensorDir::front, SensorDir::left};
    GridMap map = load_grid_map(resolve(d.map_path));
    if (d.kind == "grid_wander") {
      task = make_wander_task(d.name, std::move(map), std::move(sensors),
                              d.sensor_levels, d.wheel_levels,
                              d.heading_in_state);
    } else {
      task = make_nav_task(d.name, std::move(map), std::move(sensors),
                           d.sensor_levels, d.wheel_levels, d.pose_bins,
                           d.episode_limit > 0 ? d.episode_limit : 300);
    }
  } else if (d.kind == "arm_lattice") {
    if (d.start_levels.empty()) {
      d.start_levels.assign(d.joint_levels.size(), 0);
    }
    try {
      task = make_arm_task(d.name, d.joint_levels, d.object_cell,
                           d.object_bins, d.start_levels,
                           d.episode_limit > 0 ? d.episode_limit : 150);
    } catch (const std::exception& ex) {
      throw ConfigError(source + ": " + ex.what());
    }
  } else if (d.kind == "sample_model") {
    if (d.inputs.empty() || d.outputs.empty()) {
      throw ConfigError(source +
                        ": sample_model tasks must list input/output "
                        "variables explicitly");
    }
    if (d.model_path.empty()) {
      throw ConfigError(source + ": sample_model task needs a 'model' file");
    }
    auto model = std::make_shared<SampleModel>(
        load_sample_model(resolve(d.model_path)));
    task = make_sample_model_task(d.name, std::move(model), d.inputs,
                                  ActionSpace(d.outputs));
    if (task.model->n_states() != task.n_states() ||
        task.model->n_actions() != task.n_actions()) {
      throw ConfigError(source + ": model dimensions (" +
                        std::to_string(task.model->n_states()) + "x" +
                        std::to_string(task.model->n_actions()) +
                        ") do not match the declared variables");
    }
  } else if (d.kind.empty()) {
    throw ConfigError(source + ": missing 'kind'");
  } else {
    throw ConfigError(source + ": unknown kind '" + d.kind +
                      "' (expected grid_wander, grid_nav, arm_lattice, "
                      "sample_model)");
  }

  if (d.r_max > 0.0) task.r_max = d.r_max;
  if (d.episode_limit >= 0 && task.kind != EnvKind::grid_wander) {
    task.episode_limit = d.episode_limit;
  }
  if (task.kind != EnvKind::sample_model) {
    validate_declared_variables(d.inputs, task.inputs, source, "input");
    validate_declared_variables(d.outputs, task.actions.variables(), source,
                                "output");
  }
  return task;
}

TaskSpec load_task_file(const std::string& path) {
  return parse_task(read_text_file(path), path);
}

TaskSpec resolve_task(const ExperimentConfig& config) {
  TaskSpec task;
  const bool looks_like_file =
      config.task.find('/') != std::string::npos ||
      config.task.find(".task") != std::string::npos || fs::exists(config.task);
  if (looks_like_file && fs::exists(config.task)) {
    task = load_task_file(config.task);
  } else {
    try {
      task = catalog_task(config.task);
    } catch (const std::exception& e) {
      throw ConfigError(std::string("task: ") + e.what() +
                        (looks_like_file ? " (and no such file)" : ""));
    }
  }

  if (!config.model_path.empty()) {
    auto model =
        std::make_shared<SampleModel>(load_sample_model(config.model_path));
    if (model->n_states() != task.n_states() ||
        model->n_actions() != task.n_actions()) {
      throw ConfigError("model '" + config.model_path + "' has dimensions " +
                        std::to_string(model->n_states()) + "x" +
                        std::to_string(model->n_actions()) +
                        " but task '" + task.name + "' needs " +
                        std::to_string(task.n_states()) + "x" +
                        std::to_string(task.n_actions()));
    }
    task = with_sample_model(task, std::move(model));
  }
  return apply_overrides(std::move(task), config);
}

GridMap load_grid_map(const std::string& path) {
  try {
    return GridMap::parse(read_text_file(path));
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

// ---- persistence ------------------------------------------------------

void save_qtable(const std::string& path, const QTable& q,
                 const std::string& task_name) {
  std::ostringstream out;
  out << q.n_states() << "," << q.n_actions() << "," << task_name << "\n";
  for (int s = 0; s < q.n_states(); ++s) {
    const auto row = q.row(s);
    for (int a = 0; a < q.n_actions(); ++a) {
      if (a > 0) out << ",";
      out << fmt(row[a]);
    }
    out << "\n";
  }
  write_text_file(path, out.str());
}

LoadedQTable load_qtable(const std::string& path) {
  std::istringstream in(read_text_file(path));
  std::string header;
  if (!std::getline(in, header)) {
    throw ConfigError(path + ": empty Q-table file");
  }
  const auto fields = split(header, ',');
  if (fields.size() != 3) {
    throw ConfigError(path + ": header must be 'n_states,n_actions,task'");
  }
  LoadedQTable loaded;
  const int n_states =
      static_cast<int>(parse_int(fields[0], path, 1, "n_states"));
  const int n_actions =
      static_cast<int>(parse_int(fields[1], path, 1, "n_actions"));
  loaded.task_name = fields[2];
  loaded.q = QTable(n_states, n_actions);
  std::string line;
  for (int s = 0; s < n_states; ++s) {
    if (!std::getline(in, line)) {
      throw ConfigError(path + ": expected " + std::to_string(n_states) +
                        " rows, file ends at " + std::to_string(s));
    }
    const auto values = split(line, ',');
    if (static_cast<int>(values.size()) != n_actions) {
      throw ConfigError(path + ": row " + std::to_string(s) + " has " +
                        std::to_string(values.size()) + " values, expected " +
                        std::to_string(n_actions));
    }
    for (int a = 0; a < n_actions; ++a) {
      loaded.q.at(s, a) = parse_double(values[a], path, s + 2, "q value");
    }
  }
  return loaded;
}

void save_sample_model(const std::string& path, const SampleModel& model) {
  std::ostringstream out;
  out << model.task_name() << " " << model.n_states() << " "
      << model.n_actions() << "\n";
  for (const auto& [s, a] : model.visited_pairs()) {
    for (const auto& o : model.outcomes(s, a)) {
      out << s << " " << a << " " << o.next_state << " " << o.count << " "
          << fmt(o.mean_reward) << "\n";
    }
  }
  write_text_file(path, out.str());
}

SampleModel load_sample_model(const std::string& path) {
  std::istringstream in(read_text_file(path));
  std::string header;
  if (!std::getline(in, header)) {
    throw ConfigError(path + ": empty sample-model file");
  }
  std::istringstream hs(header);
  std::string task_name;
  int n_states = 0;
  int n_actions = 0;
  if (!(hs >> task_name >> n_states >> n_actions)) {
    throw ConfigError(path + ": header must be 'task n_states n_actions'");
  }
  SampleModel model(task_name, n_states, n_actions);
  std::string line;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    std::istringstream ls(t);
    int s, a, s_next;
    long long count;
    double mean_reward;
    if (!(ls >> s >> a >> s_next >> count >> mean_reward) || count < 1) {
      throw ConfigError(path + ":" + std::to_string(line_no) +
                        ": expected 's a s_next count mean_reward'");
    }
    try {
      model.record_aggregate(s, a, s_next, count, mean_reward);
    } catch (const std::exception& e) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return model;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  const fs::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

// ---- results ----------------------------------------------------------

void write_curve_csv(const std::string& path, const RepetitionSet& reps) {
  std::ostringstream out;
  out << "step,mean";
  for (std::size_t r = 0; r < reps.curves.size(); ++r) out << ",rep" << r;
  out << "\n";
  const std::size_t steps = reps.mean_curve.size();
  for (std::size_t k = 0; k < steps; ++k) {
    out << (k + 1) << "," << fmt(reps.mean_curve[k]);
    for (const auto& c : reps.curves) out << "," << fmt(c.cumulative_avg[k]);
    out << "\n";
  }
  write_text_file(path, out.str());
}

void write_methods_csv(const std::string& path,
                       const std::vector<std::string>& labels,
                       const std::vector<std::vector<double>>& mean_curves) {
  std::ostringstream out;
  out << "step";
  for (const auto& label : labels) out << "," << label;
  out << "\n";
  const std::size_t steps = mean_curves.empty() ? 0 : mean_curves[0].size();
  for (std::size_t k = 0; k < steps; ++k) {
    out << (k + 1);
    for (const auto& curve : mean_curves) out << "," << fmt(curve[k]);
    out << "\n";
  }
  write_text_file(path, out.str());
}

void write_anova_csv(const std::string& path, const AnovaResult& anova) {
  std::ostringstream out;
  out << "source,sum_of_squares,df,mean_square,f,p_value\n";
  out << "between_groups," << fmt(anova.ss_between) << "," << anova.df_between
      << "," << fmt(anova.ms_between) << "," << fmt(anova.f) << ","
      << fmt(anova.p) << "\n";
  out << "within_groups," << fmt(anova.ss_within) << "," << anova.df_within
      << "," << fmt(anova.ms_within) << ",,\n";
  out << "total," << fmt(anova.ss_total) << ","
      << (anova.df_between + anova.df_within) << ",,,\n";
  write_text_file(path, out.str());
}

void write_tukey_csv(const std::string& path, const TukeyResult& tukey,
                     const std::vector<std::string>& labels) {
  std::ostringstream out;
  out << "pair,q_statistic,p_value,inference\n";
  for (const auto& pair : tukey.pairs) {
    out << labels[pair.group_a] << " vs " << labels[pair.group_b] << ","
        << fmt(pair.q_statistic) << "," << fmt(pair.p) << "," << pair.inference
        << "\n";
  }
  write_text_file(path, out.str());
}

namespace {

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

}  // namespace

std::string format_anova_table(const AnovaResult& anova,
                               const std::string& task) {
  std::ostringstream out;
  out << pad("task", 18) << pad("source", 16) << pad("sum of squares", 16)
      << pad("df", 6) << pad("mean square", 13) << pad("F", 10) << "p-value\n";
  out << pad(task, 18) << pad("between groups", 16)
      << pad(fmt4(anova.ss_between), 16) << pad(std::to_string(anova.df_between), 6)
      << pad(fmt4(anova.ms_between), 13) << pad(fmt4(anova.f), 10)
      << fmt4(anova.p) << "\n";
  out << pad("", 18) << pad("within groups", 16) << pad(fmt4(anova.ss_within), 16)
      << pad(std::to_string(anova.df_within), 6) << pad(fmt4(anova.ms_within), 13)
      << "\n";
  out << pad("", 18) << pad("total", 16) << pad(fmt4(anova.ss_total), 16)
      << pad(std::to_string(anova.df_between + anova.df_within), 6) << "\n";
  return out.str();
}

std::string format_tukey_table(const TukeyResult& tukey,
                               const std::vector<std::string>& labels,
                               const std::string& task) {
  std::ostringstream out;
  out << pad("task", 18) << pad("pair", 34) << pad("HSD Q statistic", 17)
      << pad("HSD p-value", 13) << "HSD inference\n";
  bool first = true;
  for (const auto& pair : tukey.pairs) {
    out << pad(first ? task : "", 18)
        << pad(labels[pair.group_a] + " vs " + labels[pair.group_b], 34)
        << pad(fmt4(pair.q_statistic), 17) << pad(fmt4(pair.p), 13)
        << pair.inference << "\n";
    first = false;
  }
  return out.str();
}

// ---- orchestration ----------------------------------------------------

std::string method_label(const ExperimentConfig& config) {
  return to_string(config.algorithm) + "+" + to_string(config.selection);
}

std::string effective_out_dir(const ExperimentConfig& config) {
  if (!config.out_dir.empty()) return config.out_dir;
  if (const char* env = std::getenv("TABRL_OUT_DIR"); env && *env) return env;
  return ".";
}

namespace {

nlohmann::ordered_json config_json(const ExperimentConfig& c) {
  nlohmann::ordered_json j;
  for (const auto& e :
       parse_kv_lines(serialize_config(c), "serialized config")) {
    j[e.key] = e.value;
  }
  return j;
}

}  // namespace

RunReport execute_run(const ExperimentConfig& config) {
  config.validate();
  const TaskSpec task = resolve_task(config);
  const StateCodec codec(task.inputs);

  const auto t0 = std::chrono::steady_clock::now();
  const RepetitionSet reps = run_repetitions(task, codec, config);
  const auto t1 = std::chrono::steady_clock::now();

  RunReport report;
  report.config = config;
  report.task_name = task.name;
  report.n_states = task.n_states();
  report.n_actions = task.n_actions();
  report.final_averages = reps.final_averages;
  double mean = 0.0;
  for (const double v : reps.final_averages) mean += v;
  report.mean_final_average = mean / static_cast<double>(config.repetitions);
  report.wall_seconds = std::chrono::duration<double>(t1 - t0).count();

  const fs::path dir(effective_out_dir(config));
  report.curve_csv_path = (dir / "curve.csv").string();
  write_curve_csv(report.curve_csv_path, reps);

  if (config.save_qtables) {
    for (int r = 0; r < config.repetitions; ++r) {
      const std::string path =
          (dir / ("qtable_rep" + std::to_string(r) + ".csv")).string();
      save_qtable(path, reps.tables[r], task.name);
      report.qtable_paths.push_back(path);
    }
  }

  nlohmann::ordered_json summary;
  summary["task"] = {{"name", task.name},
                     {"n_states", report.n_states},
                     {"n_actions", report.n_actions}};
  summary["config"] = config_json(config);
  summary["seeds"] = nlohmann::json::array();
  summary["final_averages"] = report.final_averages;
  summary["mean_final_average"] = report.mean_final_average;
  for (int r = 0; r < config.repetitions; ++r) {
    summary["seeds"].push_back(config.base_seed + static_cast<std::uint64_t>(r));
  }
  bool episodic = false;
  for (const auto& c : reps.curves) {
    if (!c.episode_avgs.empty()) episodic = true;
  }
  if (episodic) {
    summary["episode_avgs"] = nlohmann::json::array();
    for (const auto& c : reps.curves) summary["episode_avgs"].push_back(c.episode_avgs);
  }
  summary["outputs"] = {{"curve_csv", report.curve_csv_path}};
  if (!report.qtable_paths.empty()) {
    summary["outputs"]["qtables"] = report.qtable_paths;
  }
  summary["wall_seconds"] = report.wall_seconds;
  report.summary_json_path = (dir / "summary.json").string();
  write_text_file(report.summary_json_path, summary.dump(2) + "\n");
  return report;
}

CompareReport execute_compare(const std::vector<ExperimentConfig>& configs) {
  if (configs.size() < 2) {
    throw ConfigError("compare needs at least 2 method configs");
  }
  for (const auto& c : configs) c.validate();
  for (std::size_t i = 1; i < configs.size(); ++i) {
    if (configs[i].task != configs[0].task) {
      throw ConfigError("compare: configs disagree on task ('" +
                        configs[0].task + "' vs '" + configs[i].task + "')");
    }
    if (configs[i].steps != configs[0].steps) {
      throw ConfigError("compare: configs disagree on steps");
    }
    if (configs[i].repetitions != configs[0].repetitions) {
      throw ConfigError("compare: configs disagree on repetitions");
    }
  }

  CompareReport report;
  std::vector<std::vector<double>> mean_curves;
  for (const auto& config : configs) {
    const TaskSpec task = resolve_task(config);
    const StateCodec codec(task.inputs);
    RepetitionSet reps = run_repetitions(task, codec, config);
    report.labels.push_back(method_label(config));
    report.final_averages.push_back(std::move(reps.final_averages));
    mean_curves.push_back(std::move(reps.mean_curve));
  }

  report.anova = one_way_anova(report.final_averages);
  report.tukey = tukey_hsd(report.final_averages);

  const TaskSpec task = resolve_task(configs[0]);
  const fs::path dir(effective_out_dir(configs[0]));
  report.curves_csv_path = (dir / "compare_curves.csv").string();
  write_methods_csv(report.curves_csv_path, report.labels, mean_curves);
  report.anova_csv_path = (dir / "anova.csv").string();
  write_anova_csv(report.anova_csv_path, report.anova);
  report.tukey_csv_path = (dir / "tukey.csv").string();
  write_tukey_csv(report.tukey_csv_path, report.tukey, report.labels);

  report.text = format_anova_table(report.anova, task.name) + "\n" +
                format_tukey_table(report.tukey, report.labels, task.name);
  report.report_path = (dir / "report.txt").string();
  write_text_file(report.report_path, report.text);
  return report;
}

}  // namespace tabrl::io
