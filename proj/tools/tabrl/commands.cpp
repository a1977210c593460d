#include "commands.hpp"

#include <cstdio>
#include <iostream>

#include "tabrl/catalog.hpp"
#include "tabrl/experiment.hpp"
#include "tabrl/io.hpp"
#include "tabrl/value_iteration.hpp"

namespace tabrl::cli {

namespace {

void apply_override_arg(ExperimentConfig& config, const std::string& arg) {
  const std::size_t eq = arg.find('=');
  if (eq == std::string::npos) {
    throw io::ConfigError("--override expects key=value, got '" + arg + "'");
  }
  io::set_config_key(config, arg.substr(0, eq), arg.substr(eq + 1));
}

ExperimentConfig assemble_config(const RunOptions& options) {
  ExperimentConfig config;
  if (!options.config_path.empty()) {
    config = io::load_config(options.config_path);
  }
  if (!options.task.empty()) config.task = options.task;
  if (!options.algorithm.empty()) {
    config.algorithm = algorithm_from_string(options.algorithm);
  }
  if (!options.selection.empty()) {
    config.selection = selection_strategy_from_string(options.selection);
  }
  if (options.steps >= 0) config.steps = options.steps;
  if (options.repetitions >= 0) config.repetitions = options.repetitions;
  if (options.seed >= 0) {
    config.base_seed = static_cast<std::uint64_t>(options.seed);
  }
  if (!options.out_dir.empty()) config.out_dir = options.out_dir;
  if (options.save_qtables) config.save_qtables = true;
  for (const auto& o : options.overrides) apply_override_arg(config, o);
  config.validate();
  return config;
}

std::string fmt_ms(double seconds) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3g", seconds);
  return buf;
}

}  // namespace

int cmd_run(const RunOptions& options) {
  const ExperimentConfig config = assemble_config(options);
  const io::RunReport report = io::execute_run(config);

  std::cout << "task " << report.task_name << " (" << report.n_states
            << " states x " << report.n_actions << " actions)\n";
  std::cout << "method " << io::method_label(config) << " | steps "
            << config.steps << " | repetitions " << config.repetitions
            << " | seed " << config.base_seed << "\n";
  std::cout << "mean final average reward: " << report.mean_final_average
            << "\n";
  std::cout << "wrote " << report.curve_csv_path << ", "
            << report.summary_json_path;
  if (!report.qtable_paths.empty()) {
    std::cout << " and " << report.qtable_paths.size() << " Q-table files";
  }
  std::cout << "\nwall time " << fmt_ms(report.wall_seconds) << " s\n";
  return 0;
}

int cmd_compare(const CompareOptions& options) {
  std::vector<ExperimentConfig> configs;
  for (const auto& path : options.config_paths) {
    ExperimentConfig config = io::load_config(path);
    if (!options.out_dir.empty()) config.out_dir = options.out_dir;
    for (const auto& o : options.overrides) apply_override_arg(config, o);
    config.validate();
    configs.push_back(std::move(config));
  }
  const io::CompareReport report = io::execute_compare(configs);
  std::cout << report.text << "\n";
  std::cout << "wrote " << report.curves_csv_path << ", "
            << report.anova_csv_path << ", " << report.tukey_csv_path << ", "
            << report.report_path << "\n";
  return 0;
}

int cmd_oracle(const OracleOptions& options) {
  const SampleModel model = io::load_sample_model(options.model_path);
  HolePolicy policy;
  if (options.hole_policy == "self_loop") {
    policy = HolePolicy::self_loop;
  } else if (options.hole_policy == "error") {
    policy = HolePolicy::error;
  } else {
    throw io::ConfigError("--hole-policy expects self_loop or error");
  }
  const ValueIterationResult result =
      value_iteration(model, options.gamma, options.residual, policy);
  const std::string out = options.out_path.empty()
                              ? options.model_path + ".qstar"
                              : options.out_path;
  io::save_qtable(out, result.q, model.task_name());
  std::cout << "value iteration: " << result.iterations
            << " sweeps, residual " << result.residual << "\n";
  std::cout << "wrote " << out << "\n";
  return 0;
}

int cmd_gen_model(const GenModelOptions& options) {
  if (options.out_path.empty()) {
    throw io::ConfigError("gen-model needs --out");
  }
  ExperimentConfig probe;
  probe.task = options.task;
  const TaskSpec task = io::resolve_task(probe);
  const StateCodec codec(task.inputs);
  const SampleModel model =
      explore_uniform(task, codec, options.steps,
                      static_cast<std::uint64_t>(options.seed));
  io::save_sample_model(options.out_path, model);
  std::cout << "explored " << options.steps << " steps of " << task.name
            << ", " << model.visited_pairs().size()
            << " state-action pairs recorded\n";
  std::cout << "wrote " << options.out_path << "\n";
  return 0;
}

int cmd_bench(const BenchOptions& options) {
  struct Row {
    const char* label;
    AlgorithmId algorithm;
    SelectionStrategy selection;
    bool reduced;
  };
  const Row rows[] = {
      {"q+softmax", AlgorithmId::q, SelectionStrategy::softmax, true},
      {"sarsa+softmax", AlgorithmId::sarsa, SelectionStrategy::softmax, true},
      {"sarsa_lambda+softmax", AlgorithmId::sarsa_lambda,
       SelectionStrategy::softmax, true},
      {"tosl+softmax", AlgorithmId::tosl, SelectionStrategy::softmax, true},
      {"tosl+qbiassr", AlgorithmId::tosl, SelectionStrategy::qbiassr, true},
      {"tosl+softmax", AlgorithmId::tosl, SelectionStrategy::softmax, false},
  };

  ExperimentConfig base;
  base.task = options.task;
  const TaskSpec task = io::resolve_task(base);

  std::printf("%-22s %-10s %-22s %s\n", "method", "traces",
              "avg CPU time per step", "total (3600 steps)");
  std::string csv = "method,traces,seconds_per_step,seconds_3600_steps\n";
  for (const Row& row : rows) {
    ExperimentConfig config = base;
    config.algorithm = row.algorithm;
    config.selection = row.selection;
    config.reduced_traces = row.reduced;
    const StepCostResult cost =
        benchmark_step_cost(task, config, options.warmup, options.measure);
    std::printf("%-22s %-10s %-22.3e %.4f\n", row.label,
                row.reduced ? "reduced" : "full", cost.seconds_per_step,
                cost.seconds_per_step * 3600.0);
    char line[160];
    std::snprintf(line, sizeof(line), "%s,%s,%.6e,%.6f\n", row.label,
                  row.reduced ? "reduced" : "full", cost.seconds_per_step,
                  cost.seconds_per_step * 3600.0);
    csv += line;
  }
  if (!options.out_csv.empty()) {
    io::write_text_file(options.out_csv, csv);
    std::cout << "wrote " << options.out_csv << "\n";
  }
  return 0;
}

}  // namespace tabrl::cli
