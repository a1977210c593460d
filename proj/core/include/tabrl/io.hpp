#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "tabrl/env.hpp"
#include "tabrl/experiment.hpp"
#include "tabrl/qtable.hpp"
#include "tabrl/sample_model.hpp"
#include "tabrl/stats.hpp"

namespace tabrl::io {

/// Bad configuration or file contents; the CLI maps this to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---- flat key-value text -------------------------------------------------

struct KvEntry {
  std::string key;
  std::string value;
  int line = 0;
};

/// Parses `key = value` lines; '#' starts a comment. Repeated keys are
/// preserved in order.
std::vector<KvEntry> parse_kv_lines(const std::string& text,
                                    const std::string& source);

// ---- experiment configs ---------------------------------------------------

ExperimentConfig parse_config(const std::string& text,
                              const std::string& source);
ExperimentConfig load_config(const std::string& path);

/// Applies one `key=value` override with the same validation as the file
/// parser; errors name the field and its legal range.
void set_config_key(ExperimentConfig& config, const std::string& key,
                    const std::string& value);

/// Round-trips through parse_config to an equivalent config.
std::string serialize_config(const ExperimentConfig& config);

// ---- tasks ----------------------------------------------------------------

TaskSpec parse_task(const std::string& text, const std::string& source);
TaskSpec load_task_file(const std::string& path);

/// Resolves config.task (catalog name or task file), attaches a sample
/// model when model_path is set, and applies config overrides.
TaskSpec resolve_task(const ExperimentConfig& config);

GridMap load_grid_map(const std::string& path);

// ---- persistence ----------------------------------------------------------

void save_qtable(const std::string& path, const QTable& q,
                 const std::string& task_name);
struct LoadedQTable {
  QTable q;
  std::string task_name;
};
LoadedQTable load_qtable(const std::string& path);

void save_sample_model(const std::string& path, const SampleModel& model);
SampleModel load_sample_model(const std::string& path);

// ---- results --------------------------------------------------------------

void write_curve_csv(const std::string& path, const RepetitionSet& reps);

void write_methods_csv(const std::string& path,
                       const std::vector<std::string>& labels,
                       const std::vector<std::vector<double>>& mean_curves);

void write_anova_csv(const std::string& path, const AnovaResult& anova);
void write_tukey_csv(const std::string& path, const TukeyResult& tukey,
                     const std::vector<std::string>& labels);

std::string format_anova_table(const AnovaResult& anova,
                               const std::string& task);
std::string format_tukey_table(const TukeyResult& tukey,
                               const std::vector<std::string>& labels,
                               const std::string& task);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// ---- orchestration --------------------------------------------------------

std::string method_label(const ExperimentConfig& config);

struct RunReport {
  ExperimentConfig config;
  std::string task_name;
  int n_states = 0;
  int n_actions = 0;
  std::vector<double> final_averages;
  double mean_final_average = 0.0;
  std::string curve_csv_path;
  std::string summary_json_path;
  std::vector<std::string> qtable_paths;
  double wall_seconds = 0.0;
};

/// Runs the configured repetitions and writes curve CSV, summary JSON and
/// (optionally) per-repetition Q tables under the output directory.
RunReport execute_run(const ExperimentConfig& config);

struct CompareReport {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> final_averages;  // per method
  AnovaResult anova;
  TukeyResult tukey;
  std::string curves_csv_path;
  std::string anova_csv_path;
  std::string tukey_csv_path;
  std::string report_path;
  std::string text;  // human-readable tables
};

/// Runs every method config (same task/steps/repetitions required) and
/// compares final average rewards with ANOVA + Tukey.
CompareReport execute_compare(const std::vector<ExperimentConfig>& configs);

/// Default output directory: config value, else $TABRL_OUT_DIR, else ".".
std::string effective_out_dir(const ExperimentConfig& config);

}  // namespace tabrl::io
