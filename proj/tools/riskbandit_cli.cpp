// Copyright 2026 The riskbandit Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end over the riskbandit C API.
//
//   riskbandit run --config exp.json [--out DIR] [--algo NAME] [--env JSON|@FILE]
//                  [--alpha A] [--T N]... [--seed S] [--reps R] [--jobs J]
//   riskbandit evaluate TRAJ.csv... [--config exp.json] [--out FILE]
//   riskbandit summarize DIR [--out FILE]
//
// Exit status: 0 on success, 2 on a configuration error, 3 on any other failure.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "riskbandit/riskbandit.h"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct Failure {
  int code;
  std::string message;
};

void check(rb_status status) {
  if (status == RB_OK) return;
  const bool config = status == RB_ERR_CONFIG || status == RB_ERR_INVALID_ARGUMENT;
  throw Failure{config ? kExitConfig : kExitRuntime,
                std::string(rb_status_string(status)) + ": " + rb_last_error()};
}

// Loading a config or applying a flag override only fails on bad input.
void check_config(rb_status status) {
  if (status == RB_OK) return;
  throw Failure{kExitConfig, std::string(rb_status_string(status)) + ": " + rb_last_error()};
}

struct ConfigDeleter {
  void operator()(rb_config* cfg) const { rb_config_destroy(cfg); }
};
using ConfigPtr = std::unique_ptr<rb_config, ConfigDeleter>;

ConfigPtr load_config(const std::string& path) {
  if (path.empty()) return ConfigPtr(rb_config_new());
  rb_config* raw = nullptr;
  check_config(rb_config_from_file(path.c_str(), &raw));
  return ConfigPtr(raw);
}

std::string take_string(char* text) {
  std::string out(text ? text : "");
  rb_string_free(text);
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kExitConfig, "cannot read " + path};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text << '\n';
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out || !(out << text << '\n')) throw Failure{kExitRuntime, "cannot write " + out_path};
}

std::size_t jobs_default() {
  if (const char* env = std::getenv("RISKBANDIT_JOBS")) {
    char* end = nullptr;
    const unsigned long value = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && value > 0) return value;
  }
  return 1;
}

struct RunOptions {
  std::string config;
  std::string out;
  std::string algo;
  std::string env;
  std::optional<double> alpha;
  std::vector<std::uint64_t> horizons;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> reps;
  std::size_t jobs = 1;
};

void run_command(const RunOptions& opt) {
  ConfigPtr cfg = load_config(opt.config);
  if (!opt.out.empty()) check_config(rb_config_set_output_dir(cfg.get(), opt.out.c_str()));
  if (!opt.algo.empty()) check_config(rb_config_set_algorithm(cfg.get(), opt.algo.c_str()));
  if (!opt.env.empty()) {
    const std::string text = opt.env.front() == '@' ? read_text_file(opt.env.substr(1)) : opt.env;
    check_config(rb_config_set_environment(cfg.get(), text.c_str()));
  }
  if (opt.alpha) check_config(rb_config_set_alpha(cfg.get(), *opt.alpha));
  if (!opt.horizons.empty()) {
    std::vector<uint64_t> hs(opt.horizons.begin(), opt.horizons.end());
    check_config(rb_config_set_horizons(cfg.get(), hs.data(), hs.size()));
  }
  if (opt.seed) check_config(rb_config_set_seed(cfg.get(), *opt.seed));
  if (opt.reps) check_config(rb_config_set_replications(cfg.get(), *opt.reps));

  char* summary = nullptr;
  check(rb_experiment_run(cfg.get(), opt.jobs, &summary));
  std::cout << take_string(summary) << '\n';
}

void evaluate_command(const std::vector<std::string>& files, const std::string& config,
                      const std::string& out) {
  ConfigPtr cfg;
  if (!config.empty()) cfg = load_config(config);
  std::vector<const char*> paths;
  paths.reserve(files.size());
  for (const auto& f : files) paths.push_back(f.c_str());
  char* metrics = nullptr;
  check(rb_evaluate(paths.data(), paths.size(), cfg.get(), &metrics));
  emit(take_string(metrics), out);
}

void summarize_command(const std::string& dir, const std::string& out) {
  char* summary = nullptr;
  check(rb_summarize(dir.c_str(), &summary));
  emit(take_string(summary), out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Risk-averse stochastic convex bandit experiments"};
  app.set_version_flag("--version", std::string(rb_version()));
  app.require_subcommand(1);

  RunOptions run;
  run.jobs = jobs_default();
  auto* run_cmd = app.add_subcommand("run", "Run an experiment and write trajectories, metrics and a summary");
  run_cmd->add_option("--config", run.config, "Experiment config (JSON)");
  run_cmd->add_option("--out", run.out, "Output directory");
  run_cmd->add_option("--algo", run.algo, "descent, trisect1d or ellipsoid");
  run_cmd->add_option("--env", run.env, "Environment descriptor as JSON, or @FILE");
  run_cmd->add_option("--alpha", run.alpha, "CVaR level in (0, 1]");
  run_cmd->add_option("--T", run.horizons, "Horizon (repeatable)");
  run_cmd->add_option("--seed", run.seed, "Master seed");
  run_cmd->add_option("--reps", run.reps, "Replications per horizon");
  run_cmd->add_option("--jobs", run.jobs, "Worker threads (default: RISKBANDIT_JOBS or 1)")
      ->check(CLI::PositiveNumber);

  std::vector<std::string> eval_files;
  std::string eval_config;
  std::string eval_out;
  auto* eval_cmd = app.add_subcommand("evaluate", "Recompute metrics for trajectory CSV files");
  eval_cmd->add_option("files", eval_files, "Trajectory CSV files")->required();
  eval_cmd->add_option("--config", eval_config, "Config the trajectories must match");
  eval_cmd->add_option("--out", eval_out, "Write the metrics JSON here instead of stdout");

  std::string summary_dir;
  std::string summary_out;
  auto* sum_cmd = app.add_subcommand("summarize", "Aggregate metrics_*.json files in a directory");
  sum_cmd->add_option("dir", summary_dir, "Result directory")->required();
  sum_cmd->add_option("--out", summary_out, "Write the summary JSON here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run_cmd) run_command(run);
    if (*eval_cmd) evaluate_command(eval_files, eval_config, eval_out);
    if (*sum_cmd) summarize_command(summary_dir, summary_out);
  } catch (const Failure& f) {
    std::cerr << "riskbandit: " << f.message << '\n';
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "riskbandit: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
