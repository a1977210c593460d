#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "tabrl/io.hpp"

int main(int argc, char** argv) {
  CLI::App app{"tabrl - tabular reinforcement learning engine and benchmark "
               "harness"};
  app.require_subcommand(1);

  tabrl::cli::RunOptions run_options;
  CLI::App* run = app.add_subcommand(
      "run", "Run a seeded learning experiment and write curves");
  run->add_option("--config", run_options.config_path,
                  "Config file (key = value lines)");
  run->add_option("--task", run_options.task,
                  "Catalog task name or task-definition file");
  run->add_option("--algorithm", run_options.algorithm,
                  "q | sarsa | sarsa_lambda | tosl");
  run->add_option("--selection", run_options.selection,
                  "epsilon_greedy | softmax | qbiassr");
  run->add_option("--steps", run_options.steps, "Learning steps per process");
  run->add_option("--repetitions", run_options.repetitions,
                  "Independent repetitions");
  run->add_option("--seed", run_options.seed, "Base seed");
  run->add_option("--out-dir", run_options.out_dir, "Output directory");
  run->add_flag("--save-qtables", run_options.save_qtables,
                "Write one Q-table file per repetition");
  run->add_option("--override", run_options.overrides,
                  "Extra key=value config overrides");

  tabrl::cli::CompareOptions compare_options;
  CLI::App* compare = app.add_subcommand(
      "compare",
      "Run two or more method configs on one task and compare with "
      "ANOVA + Tukey HSD");
  compare->add_option("configs", compare_options.config_paths,
                      "Method config files (>= 2)")
      ->required()
      ->expected(2, -1);
  compare->add_option("--out-dir", compare_options.out_dir,
                      "Output directory");
  compare->add_option("--override", compare_options.overrides,
                      "key=value overrides applied to every method");

  tabrl::cli::OracleOptions oracle_options;
  CLI::App* oracle = app.add_subcommand(
      "oracle", "Solve a sample model with value iteration and write Q*");
  oracle->add_option("model", oracle_options.model_path, "Sample-model file")
      ->required();
  oracle->add_option("--out", oracle_options.out_path,
                     "Output Q-table file (default <model>.qstar)");
  oracle->add_option("--gamma", oracle_options.gamma, "Discount rate");
  oracle->add_option("--residual", oracle_options.residual,
                     "Termination residual");
  oracle->add_option("--hole-policy", oracle_options.hole_policy,
                     "self_loop | error");

  tabrl::cli::GenModelOptions gen_options;
  CLI::App* gen = app.add_subcommand(
      "gen-model",
      "Explore a task with uniform-random actions and write a sample model");
  gen->add_option("--task", gen_options.task, "Catalog task or task file")
      ->required();
  gen->add_option("--steps", gen_options.steps, "Exploration steps");
  gen->add_option("--seed", gen_options.seed, "Seed");
  gen->add_option("--out", gen_options.out_path, "Output model file")
      ->required();

  tabrl::cli::BenchOptions bench_options;
  CLI::App* bench = app.add_subcommand(
      "bench", "Measure per-step CPU cost of the method combinations");
  bench->add_option("--task", bench_options.task,
                    "Task whose dimensions to benchmark");
  bench->add_option("--warmup", bench_options.warmup, "Warmup steps");
  bench->add_option("--measure", bench_options.measure, "Measured steps");
  bench->add_option("--out", bench_options.out_csv, "Optional CSV output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (run->parsed()) return tabrl::cli::cmd_run(run_options);
    if (compare->parsed()) return tabrl::cli::cmd_compare(compare_options);
    if (oracle->parsed()) return tabrl::cli::cmd_oracle(oracle_options);
    if (gen->parsed()) return tabrl::cli::cmd_gen_model(gen_options);
    if (bench->parsed()) return tabrl::cli::cmd_bench(bench_options);
  } catch (const tabrl::io::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
