// Copyright 2026 The riskbandit Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "core/descent.hpp"
#include "core/ellipsoid_dd.hpp"
#include "core/errors.hpp"
#include "core/json_fields.hpp"
#include "core/metrics.hpp"
#include "core/rng.hpp"
#include "core/trisect1d.hpp"

namespace riskbandit {
namespace fs = std::filesystem;
namespace jf = json_fields;

namespace {

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open for reading");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path, 0, e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path, "cannot open for writing");
  out << text;
  out.flush();
  if (!out) throw IoError(path, "write failed");
}

std::optional<double> optional_number(const nlohmann::json& doc, const std::string& key,
                                      const std::string& path) {
  if (!doc.contains(key) || doc.at(key).is_null()) return std::nullopt;
  return jf::number(doc, key, path);
}

std::string run_stem(std::uint64_t horizon, std::uint64_t rep) {
  return "T" + std::to_string(horizon) + "_rep" + std::to_string(rep);
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double std_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

nlohmann::json trisect_event_json(const TrisectEvent& e) {
  return {{"event", "round_end"},   {"epoch", e.epoch}, {"round", e.round},
          {"case", case_name(e.kind)}, {"discard", e.kind == TrisectCase::Case3
                                                      ? "none"
                                                      : (e.discard_left ? "left" : "right")},
          {"l", e.l},                {"r", e.r},         {"gamma", e.gamma},
          {"plays", e.plays_used}};
}

nlohmann::json ellipsoid_event_json(const EllipsoidEvent& e) {
  return {{"event", e.kind},
          {"epoch", e.epoch},
          {"round", e.round},
          {"gamma", e.gamma},
          {"gamma_hat", e.gamma_hat},
          {"case", e.pyramid_case},
          {"pyramids", e.pyramid_count},
          {"log_volume", e.log_volume},
          {"depth_clamped", e.depth_clamped},
          {"plays", e.plays_used}};
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("", "config must be a JSON object");
  ExperimentConfig cfg;

  const auto& algo = jf::require(doc, "algorithm", "");
  cfg.algorithm.name = jf::string(algo, "name", "algorithm");
  const auto& name = cfg.algorithm.name;
  if (name != "descent" && name != "trisect1d" && name != "ellipsoid") {
    throw ConfigError("algorithm.name", "unknown algorithm '" + name + "'");
  }
  cfg.algorithm.eta = optional_number(algo, "eta", "algorithm");
  cfg.algorithm.delta = optional_number(algo, "delta", "algorithm");
  cfg.algorithm.c1 = jf::number_or(algo, "c1", "algorithm", cfg.algorithm.c1);
  cfg.algorithm.c2 = jf::number_or(algo, "c2", "algorithm", cfg.algorithm.c2);
  cfg.algorithm.kappa = jf::number_or(algo, "kappa", "algorithm", cfg.algorithm.kappa);
  cfg.algorithm.delta_coefficient = optional_number(algo, "delta_coefficient", "algorithm");

  if (cfg.algorithm.eta && !(*cfg.algorithm.eta >= 0.0)) {
    throw ConfigError("algorithm.eta", "must be >= 0");
  }
  if (cfg.algorithm.delta && !(*cfg.algorithm.delta > 0.0 && *cfg.algorithm.delta < 1.0)) {
    throw ConfigError("algorithm.delta", "must lie in (0, 1)");
  }
  if (!(cfg.algorithm.kappa > 0.0)) throw ConfigError("algorithm.kappa", "must be positive");
  if (!(cfg.algorithm.c1 >= 1.0)) throw ConfigError("algorithm.c1", "must be at least 1");
  if (!(cfg.algorithm.c2 > 0.0)) throw ConfigError("algorithm.c2", "must be positive");
  if (cfg.algorithm.delta_coefficient && !(*cfg.algorithm.delta_coefficient >= 0.0)) {
    throw ConfigError("algorithm.delta_coefficient", "must be >= 0");
  }

  const LossEnvironment env =
      LossEnvironment::from_json(jf::require(doc, "environment", ""), "environment");
  cfg.environment = env.to_json();
  cfg.risk = risk_from_json(jf::require(doc, "risk", ""), "risk");

  const auto& horizons = jf::require(doc, "horizons", "");
  if (!horizons.is_array() || horizons.empty()) {
    throw ConfigError("horizons", "expected a nonempty array of positive integers");
  }
  for (std::size_t i = 0; i < horizons.size(); ++i) {
    const std::string path = "horizons[" + std::to_string(i) + "]";
    const std::uint64_t t = jf::as_unsigned(horizons[i], path);
    if (t < 1) throw ConfigError(path, "horizon must be positive");
    if (!cfg.horizons.empty() && t <= cfg.horizons.back()) {
      throw ConfigError(path, "horizons must be strictly increasing");
    }
    cfg.horizons.push_back(t);
  }

  if (doc.contains("seeds")) {
    const auto& seeds = doc.at("seeds");
    if (seeds.contains("master")) cfg.master_seed = jf::as_unsigned(seeds.at("master"), "seeds.master");
    if (seeds.contains("replications")) {
      cfg.replications = jf::as_unsigned(seeds.at("replications"), "seeds.replications");
    }
  }
  if (cfg.replications < 1) throw ConfigError("seeds.replications", "must be at least 1");

  if (doc.contains("output_dir")) {
    if (!doc.at("output_dir").is_string()) throw ConfigError("output_dir", "expected a string");
    cfg.output_dir = doc.at("output_dir").get<std::string>();
  }
  if (doc.contains("comparator_grid_resolution")) {
    cfg.comparator_grid_resolution = static_cast<std::size_t>(
        jf::as_unsigned(doc.at("comparator_grid_resolution"), "comparator_grid_resolution"));
    if (cfg.comparator_grid_resolution < 1) {
      throw ConfigError("comparator_grid_resolution", "must be at least 1");
    }
  }
  if (doc.contains("event_log")) {
    if (!doc.at("event_log").is_boolean()) throw ConfigError("event_log", "expected a boolean");
    cfg.event_log = doc.at("event_log").get<bool>();
  }

  // Cross-field compatibility.
  const double d = static_cast<double>(env.dim());
  if (name == "trisect1d" && env.dim() != 1) {
    throw ConfigError("algorithm.name", "trisect1d needs a one-dimensional environment");
  }
  if (name == "descent") {
    if (env.feasible_set().inradius_about_origin() < 1.0 - 1e-12) {
      throw ConfigError("environment.set",
                        "descent needs the unit ball about the origin inside the feasible set");
    }
    if (!(cfg.algorithm.eta && cfg.algorithm.delta) && cfg.horizons.front() < 16) {
      throw ConfigError("horizons[0]", "default descent parameters need T >= 16");
    }
  }
  if (name == "ellipsoid" && !(cfg.algorithm.c2 < d)) {
    throw ConfigError("algorithm.c2", "must be below the dimension");
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  return from_json(read_json_file(path));
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json algo{{"name", algorithm.name},
                      {"c1", algorithm.c1},
                      {"c2", algorithm.c2},
                      {"kappa", algorithm.kappa}};
  if (algorithm.eta) algo["eta"] = *algorithm.eta;
  if (algorithm.delta) algo["delta"] = *algorithm.delta;
  if (algorithm.delta_coefficient) algo["delta_coefficient"] = *algorithm.delta_coefficient;
  return {{"algorithm", algo},
          {"environment", environment},
          {"risk", risk_to_json(risk)},
          {"horizons", horizons},
          {"seeds", {{"master", master_seed}, {"replications", replications}}},
          {"output_dir", output_dir},
          {"comparator_grid_resolution", comparator_grid_resolution},
          {"event_log", event_log}};
}

std::string ExperimentConfig::hash() const {
  nlohmann::json doc = to_json();
  doc.erase("output_dir");
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(doc.dump())));
  return buf;
}

LossEnvironment ExperimentConfig::make_environment() const {
  return LossEnvironment::from_json(environment, "environment");
}

Trajectory run_single(const ExperimentConfig& config, std::uint64_t horizon,
                      std::uint64_t replication, std::vector<nlohmann::json>* events) {
  const LossEnvironment env = config.make_environment();
  RngStream algorithm =
      RngStream::derive(config.master_seed, replication, horizon, StreamPurpose::Algorithm);
  RngStream nature =
      RngStream::derive(config.master_seed, replication, horizon, StreamPurpose::Nature);
  const auto& algo = config.algorithm;

  Trajectory traj;
  if (algo.name == "descent") {
    DescentParams params{};
    if (!(algo.eta && algo.delta)) {
      params = default_parameters(horizon, env.dim(), config.risk, env.feasible_diameter());
    }
    if (algo.eta) params.eta = *algo.eta;
    if (algo.delta) params.delta = *algo.delta;
    traj = run_descent(env, config.risk, horizon, params, algorithm, nature);
  } else if (algo.name == "trisect1d") {
    std::vector<TrisectEvent> log;
    traj = run_trisect(env, config.risk, horizon, algo.kappa, nature, events ? &log : nullptr);
    if (events) {
      for (const auto& e : log) events->push_back(trisect_event_json(e));
    }
  } else {
    EllipsoidParams params{algo.c1, algo.c2, algo.kappa, algo.delta_coefficient};
    EllipsoidDiagnostics diag;
    traj = run_ellipsoid(env, config.risk, horizon, params, nature, events ? &diag : nullptr);
    if (events) {
      for (const auto& e : diag.events) events->push_back(ellipsoid_event_json(e));
    }
  }
  traj.set_seed(SeedInfo{config.master_seed, replication, horizon});
  traj.set_config_hash(config.hash());
  return traj;
}

nlohmann::json compute_metrics(const Trajectory& traj, const LossEnvironment& env,
                               std::size_t comparator_grid_resolution) {
  const RiskSpec& risk = traj.risk();
  nlohmann::json doc;
  doc["algo"] = traj.algorithm();
  doc["env"] = traj.environment();
  doc["risk"] = risk_to_json(risk);
  if (risk.is_cvar()) {
    doc["alpha"] = risk.alpha();
  } else {
    doc["mu"] = risk.mu();
  }
  doc["T"] = traj.horizon();
  doc["length"] = traj.length();
  if (traj.seed()) {
    doc["seed"] = {{"master", traj.seed()->master},
                   {"replication", traj.seed()->replication},
                   {"horizon", traj.seed()->horizon}};
  } else {
    doc["seed"] = nullptr;
  }
  doc["config_hash"] = traj.config_hash();
  doc["pseudo_regret"] = pseudo_regret(traj, env, risk);
  doc["comparator_grid_resolution"] = comparator_grid_resolution;
  try {
    doc["realized_regret"] = realized_regret(traj, env, risk, comparator_grid_resolution);
  } catch (const UnsupportedMetricError&) {
    doc["realized_regret"] = nullptr;
  }
  return doc;
}

nlohmann::json run_experiment(const ExperimentConfig& config, std::size_t jobs) {
  const fs::path out_dir(config.output_dir);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError(config.output_dir, "cannot create output directory: " + ec.message());
  const LossEnvironment env = config.make_environment();

  struct Task {
    std::uint64_t horizon;
    std::uint64_t rep;
  };
  std::vector<Task> tasks;
  for (auto t : config.horizons) {
    for (std::uint64_t r = 0; r < config.replications; ++r) tasks.push_back({t, r});
  }
  std::vector<nlohmann::json> results(tasks.size());
  std::vector<std::exception_ptr> failures(tasks.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&]() {
    for (std::size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1)) {
      try {
        const Task& task = tasks[i];
        const std::string stem = run_stem(task.horizon, task.rep);
        std::vector<nlohmann::json> events;
        const Trajectory traj =
            run_single(config, task.horizon, task.rep, config.event_log ? &events : nullptr);
        traj.write_csv_file((out_dir / ("traj_" + stem + ".csv")).string());
        results[i] = compute_metrics(traj, env, config.comparator_grid_resolution);
        write_text_file((out_dir / ("metrics_" + stem + ".json")).string(),
                        results[i].dump(2) + "\n");
        if (config.event_log) {
          std::string lines;
          for (const auto& e : events) lines += e.dump() + "\n";
          write_text_file((out_dir / ("events_" + stem + ".jsonl")).string(), lines);
        }
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };

  const std::size_t workers = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(tasks.size(), 1));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  nlohmann::json summary = summarize_metrics(results);
  summary["config_hash"] = config.hash();
  write_text_file((out_dir / "summary.json").string(), summary.dump(2) + "\n");
  return summary;
}

nlohmann::json evaluate_files(const std::vector<std::string>& paths,
                              const std::optional<ExperimentConfig>& config,
                              std::size_t comparator_grid_resolution) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& path : paths) {
    const Trajectory traj = Trajectory::read_csv_file(path);
    if (traj.empty()) throw DomainError(path + ": trajectory has no rows");
    std::size_t resolution = comparator_grid_resolution;
    if (config) {
      if (traj.environment() != config->environment) {
        throw IntegrityError(path + ": environment descriptor differs from the config");
      }
      if (!(traj.risk() == config->risk)) {
        throw IntegrityError(path + ": risk specification differs from the config");
      }
      if (traj.config_hash() != config->hash()) {
        throw IntegrityError(path + ": config hash " + traj.config_hash() +
                             " differs from the config's " + config->hash());
      }
      resolution = config->comparator_grid_resolution;
    }
    LossEnvironment env = [&] {
      try {
        return LossEnvironment::from_json(traj.environment(), "environment");
      } catch (const ConfigError& e) {
        throw IntegrityError(path + ": unusable environment header: " + e.what());
      }
    }();
    out.push_back(compute_metrics(traj, env, resolution));
  }
  return out;
}

std::optional<double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) return std::nullopt;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) return std::nullopt;
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  const double mx = mean_of(lx);
  const double my = mean_of(ly);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  if (!(sxx > 0.0)) return std::nullopt;
  return sxy / sxx;
}

nlohmann::json summarize_metrics(const std::vector<nlohmann::json>& metrics) {
  std::map<std::uint64_t, std::vector<double>> pseudo;
  std::map<std::uint64_t, std::vector<double>> realized;
  std::string algo;
  for (const auto& m : metrics) {
    const auto t = m.at("T").get<std::uint64_t>();
    pseudo[t].push_back(m.at("pseudo_regret").get<double>());
    if (m.contains("realized_regret") && m.at("realized_regret").is_number()) {
      realized[t].push_back(m.at("realized_regret").get<double>());
    }
    if (algo.empty()) algo = m.value("algo", "");
  }
  nlohmann::json rows = nlohmann::json::array();
  std::vector<double> ts, means;
  for (const auto& [t, values] : pseudo) {
    nlohmann::json row{{"T", t},
                       {"replications", values.size()},
                       {"pseudo_regret", {{"mean", mean_of(values)}, {"std", std_of(values)}}}};
    const auto it = realized.find(t);
    if (it != realized.end() && !it->second.empty()) {
      row["realized_regret"] = {{"mean", mean_of(it->second)}, {"std", std_of(it->second)}};
    } else {
      row["realized_regret"] = nullptr;
    }
    rows.push_back(row);
    ts.push_back(static_cast<double>(t));
    means.push_back(mean_of(values));
  }
  nlohmann::json summary{{"algorithm", algo}, {"horizons", rows}};
  const auto slope = loglog_slope(ts, means);
  summary["pseudo_regret_loglog_slope"] = slope ? nlohmann::json(*slope) : nlohmann::json(nullptr);
  return summary;
}

nlohmann::json summarize_directory(const std::string& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw IoError(dir, "not a directory");
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("metrics_", 0) == 0 && entry.path().extension() == ".json") {
      files.push_back(entry.path().string());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw IoError(dir, "no metrics_*.json files found");
  std::vector<nlohmann::json> metrics;
  for (const auto& f : files) metrics.push_back(read_json_file(f));
  return summarize_metrics(metrics);
}

std::size_t default_jobs() {
  const char* env = std::getenv("RISKBANDIT_JOBS");
  if (!env || !*env) return 1;
  char* end = nullptr;
  const unsigned long v = std::strtoul(env, &end, 10);
  if (end == env || *end != '\0' || v == 0) return 1;
  return static_cast<std::size_t>(v);
}

}  // namespace riskbandit
