#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace tabrl::cli {

struct RunOptions {
  std::string config_path;
  std::vector<std::string> overrides;  // key=value
  std::string task;
  std::string algorithm;
  std::string selection;
  int steps = -1;
  int repetitions = -1;
  std::int64_t seed = -1;
  std::string out_dir;
  bool save_qtables = false;
};

struct CompareOptions {
  std::vector<std::string> config_paths;
  std::vector<std::string> overrides;  // applied to every method
  std::string out_dir;
};

struct OracleOptions {
  std::string model_path;
  std::string out_path;
  double gamma = 0.9;
  double residual = 1e-10;
  std::string hole_policy = "self_loop";
};

struct GenModelOptions {
  std::string task;
  int steps = 10000;
  std::int64_t seed = 1;
  std::string out_path;
};

struct BenchOptions {
  std::string task = "wander-1K";
  int warmup = 2000;
  int measure = 20000;
  std::string out_csv;
};

int cmd_run(const RunOptions& options);
int cmd_compare(const CompareOptions& options);
int cmd_oracle(const OracleOptions& options);
int cmd_gen_model(const GenModelOptions& options);
int cmd_bench(const BenchOptions& options);

}  // namespace tabrl::cli
