// Copyright 2026 The riskbandit Authors
// SPDX-License-Identifier: Apache-2.0

#include "riskbandit/riskbandit.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "core/environments.hpp"
#include "core/errors.hpp"
#include "core/harness.hpp"
#include "core/risk_measures.hpp"
#include "core/trajectory.hpp"

struct rb_environment {
  riskbandit::LossEnvironment env;
};

struct rb_config {
  nlohmann::json doc = nlohmann::json::object();
};

struct rb_trajectory {
  riskbandit::Trajectory traj;
};

namespace {

thread_local std::string g_last_error;

rb_status status_for(riskbandit::ErrorKind kind) {
  using riskbandit::ErrorKind;
  switch (kind) {
    case ErrorKind::Domain:
      return RB_ERR_DOMAIN;
    case ErrorKind::Config:
      return RB_ERR_CONFIG;
    case ErrorKind::Parse:
      return RB_ERR_PARSE;
    case ErrorKind::Integrity:
      return RB_ERR_INTEGRITY;
    case ErrorKind::UnsupportedMetric:
      return RB_ERR_UNSUPPORTED;
    case ErrorKind::Numerical:
      return RB_ERR_NUMERICAL;
    case ErrorKind::Io:
      return RB_ERR_IO;
    case ErrorKind::InvariantViolation:
      return RB_ERR_INTERNAL;
    case ErrorKind::DegenerateRun:
      return RB_ERR_DEGENERATE_RUN;
  }
  return RB_ERR_INTERNAL;
}

rb_status fail(rb_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <typename F>
rb_status guarded(F&& body) {
  g_last_error.clear();
  try {
    body();
    return RB_OK;
  } catch (const riskbandit::Error& e) {
    return fail(status_for(e.kind()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(RB_ERR_CONFIG, std::string("json: ") + e.what());
  } catch (const std::bad_alloc&) {
    return fail(RB_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(RB_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(RB_ERR_INTERNAL, "unknown error");
  }
}

char* copy_string(const std::string& text) {
  char* out = static_cast<char*>(std::malloc(text.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

nlohmann::json parse_json_arg(const char* text, const char* what) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw riskbandit::ConfigError(what, std::string("malformed JSON: ") + e.what());
  }
}

#define RB_REQUIRE(cond, msg) \
  if (!(cond)) return fail(RB_ERR_INVALID_ARGUMENT, msg)

}  // namespace

extern "C" {

RB_API const char* rb_version(void) { return "0.1.0"; }

RB_API const char* rb_status_string(rb_status status) {
  switch (status) {
    case RB_OK:
      return "ok";
    case RB_ERR_DOMAIN:
      return "domain error";
    case RB_ERR_CONFIG:
      return "config error";
    case RB_ERR_PARSE:
      return "parse error";
    case RB_ERR_INTEGRITY:
      return "integrity error";
    case RB_ERR_UNSUPPORTED:
      return "unsupported metric";
    case RB_ERR_NUMERICAL:
      return "numerical error";
    case RB_ERR_IO:
      return "i/o error";
    case RB_ERR_INTERNAL:
      return "internal error";
    case RB_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case RB_ERR_DEGENERATE_RUN:
      return "degenerate run";
  }
  return "unknown status";
}

RB_API const char* rb_last_error(void) { return g_last_error.c_str(); }

RB_API void rb_string_free(char* text) { std::free(text); }

RB_API rb_status rb_empirical_cvar(const double* samples, size_t count, double alpha,
                                   double* out) {
  RB_REQUIRE(out && (samples || count == 0), "null pointer argument");
  return guarded([&] { *out = riskbandit::empirical_cvar({samples, count}, alpha); });
}

RB_API rb_status rb_exact_cvar_discrete(const double* values, const double* probs, size_t count,
                                        double alpha, double* out) {
  RB_REQUIRE(out && values && probs, "null pointer argument");
  return guarded(
      [&] { *out = riskbandit::exact_cvar_discrete({values, count}, {probs, count}, alpha); });
}

RB_API rb_status rb_kusuoka_eval(const double* samples, size_t count, const double* mu,
                                 size_t levels, double* out) {
  RB_REQUIRE(out && mu && (samples || count == 0), "null pointer argument");
  return guarded([&] { *out = riskbandit::kusuoka_eval({samples, count}, {mu, levels}); });
}

RB_API rb_status rb_ci_sample_count(double horizon, double alpha, double gamma, double kappa,
                                    uint64_t* out) {
  RB_REQUIRE(out, "null pointer argument");
  return guarded([&] { *out = riskbandit::ci_sample_count(horizon, alpha, gamma, kappa); });
}

RB_API rb_status rb_kusuoka_ci_sample_count(double horizon, size_t levels, double gamma,
                                            double kappa, uint64_t* out) {
  RB_REQUIRE(out, "null pointer argument");
  return guarded(
      [&] { *out = riskbandit::kusuoka_ci_sample_count(horizon, levels, gamma, kappa); });
}

RB_API rb_status rb_environment_from_json(const char* json, rb_environment** out) {
  RB_REQUIRE(json && out, "null pointer argument");
  *out = nullptr;
  return guarded([&] {
    auto env = riskbandit::LossEnvironment::from_json(parse_json_arg(json, "environment"));
    *out = new rb_environment{std::move(env)};
  });
}

RB_API void rb_environment_destroy(rb_environment* env) { delete env; }

RB_API size_t rb_environment_dim(const rb_environment* env) { return env ? env->env.dim() : 0; }

RB_API rb_status rb_environment_ground_truth(const rb_environment* env, const double* x,
                                             size_t dim, const char* risk_json, double* out) {
  RB_REQUIRE(env && x && risk_json && out, "null pointer argument");
  RB_REQUIRE(dim == env->env.dim(), "point dimension does not match the environment");
  return guarded([&] {
    const auto risk = riskbandit::risk_from_json(parse_json_arg(risk_json, "risk"));
    const riskbandit::Vector point =
        Eigen::Map<const riskbandit::Vector>(x, static_cast<Eigen::Index>(dim));
    *out = env->env.ground_truth_risk(point, risk).value;
  });
}

RB_API rb_status rb_config_from_json(const char* json, rb_config** out) {
  RB_REQUIRE(json && out, "null pointer argument");
  *out = nullptr;
  return guarded([&] {
    auto doc = parse_json_arg(json, "config");
    if (!doc.is_object()) throw riskbandit::ConfigError("config", "must be a JSON object");
    *out = new rb_config{std::move(doc)};
  });
}

RB_API rb_status rb_config_from_file(const char* path, rb_config** out) {
  RB_REQUIRE(path && out, "null pointer argument");
  *out = nullptr;
  return guarded([&] {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw riskbandit::IoError(path, "cannot open config file");
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw riskbandit::ConfigError("config", std::string(path) + ": malformed JSON: " + e.what());
    }
    if (!doc.is_object()) throw riskbandit::ConfigError("config", "must be a JSON object");
    *out = new rb_config{std::move(doc)};
  });
}

RB_API rb_config* rb_config_new(void) { return new (std::nothrow) rb_config{}; }

RB_API void rb_config_destroy(rb_config* cfg) { delete cfg; }

RB_API rb_status rb_config_set_algorithm(rb_config* cfg, const char* name) {
  RB_REQUIRE(cfg && name, "null pointer argument");
  return guarded([&] {
    if (!cfg->doc.contains("algorithm") || !cfg->doc["algorithm"].is_object()) {
      cfg->doc["algorithm"] = nlohmann::json::object();
    }
    cfg->doc["algorithm"]["name"] = name;
  });
}

RB_API rb_status rb_config_set_environment(rb_config* cfg, const char* json) {
  RB_REQUIRE(cfg && json, "null pointer argument");
  return guarded([&] {
    auto doc = parse_json_arg(json, "environment");
    riskbandit::LossEnvironment::from_json(doc);
    cfg->doc["environment"] = std::move(doc);
  });
}

RB_API rb_status rb_config_set_alpha(rb_config* cfg, double alpha) {
  RB_REQUIRE(cfg, "null pointer argument");
  return guarded([&] {
    riskbandit::RiskSpec::cvar(alpha);
    cfg->doc["risk"] = {{"kind", "cvar"}, {"alpha", alpha}};
  });
}

RB_API rb_status rb_config_set_horizons(rb_config* cfg, const uint64_t* horizons, size_t count) {
  RB_REQUIRE(cfg && horizons && count > 0, "horizons must be a nonempty array");
  return guarded([&] { cfg->doc["horizons"] = std::vector<std::uint64_t>(horizons, horizons + count); });
}

RB_API rb_status rb_config_set_seed(rb_config* cfg, uint64_t master_seed) {
  RB_REQUIRE(cfg, "null pointer argument");
  return guarded([&] { cfg->doc["seeds"]["master"] = master_seed; });
}

RB_API rb_status rb_config_set_replications(rb_config* cfg, uint64_t replications) {
  RB_REQUIRE(cfg, "null pointer argument");
  return guarded([&] { cfg->doc["seeds"]["replications"] = replications; });
}

RB_API rb_status rb_config_set_output_dir(rb_config* cfg, const char* dir) {
  RB_REQUIRE(cfg && dir, "null pointer argument");
  return guarded([&] { cfg->doc["output_dir"] = dir; });
}

RB_API rb_status rb_config_to_json(const rb_config* cfg, char** out) {
  RB_REQUIRE(cfg && out, "null pointer argument");
  *out = nullptr;
  return guarded([&] {
    const auto parsed = riskbandit::ExperimentConfig::from_json(cfg->doc);
    *out = copy_string(parsed.to_json().dump(2));
  });
}

RB_API rb_status rb_run_single(const rb_config* cfg, uint64_t horizon, uint64_t replication,
                               rb_trajectory** out) {
  RB_REQUIRE(cfg && out, "null pointer argument");
  *out = nullptr;
  return guarded([&] {
    const auto parsed = riskbandit::ExperimentConfig::from_json(cfg->doc);
    *out = new rb_trajectory{riskbandit::run_single(parsed, horizon, replication)};
  });
}

RB_API void rb_trajectory_destroy(rb_trajectory* traj) { delete traj; }

RB_API size_t rb_trajectory_length(const rb_trajectory* traj) {
  return traj ? traj->traj.length() : 0;
}

RB_API size_t rb_trajectory_dim(const rb_trajectory* traj) { return traj ? traj->traj.dim() : 0; }

RB_API rb_status rb_trajectory_row(const rb_trajectory* traj, size_t index, double* point,
                                   size_t dim, double* loss) {
  RB_REQUIRE(traj && point && loss, "null pointer argument");
  RB_REQUIRE(dim == traj->traj.dim(), "point buffer dimension does not match the trajectory");
  RB_REQUIRE(index < traj->traj.length(), "row index out of range");
  return guarded([&] {
    const auto x = traj->traj.point(index);
    for (size_t j = 0; j < dim; ++j) point[j] = x[static_cast<Eigen::Index>(j)];
    *loss = traj->traj.loss(index);
  });
}

RB_API rb_status rb_trajectory_write_csv(const rb_trajectory* traj, const char* path) {
  RB_REQUIRE(traj && path, "null pointer argument");
  return guarded([&] { traj->traj.write_csv_file(path); });
}

RB_API rb_status rb_trajectory_read_csv(const char* path, rb_trajectory** out) {
  RB_REQUIRE(path && out, "null pointer argument");
  *out = nullptr;
  return guarded([&] { *out = new rb_trajectory{riskbandit::Trajectory::read_csv_file(path)}; });
}

RB_API rb_status rb_experiment_run(const rb_config* cfg, size_t jobs, char** summary_json) {
  RB_REQUIRE(cfg && summary_json, "null pointer argument");
  *summary_json = nullptr;
  return guarded([&] {
    const auto parsed = riskbandit::ExperimentConfig::from_json(cfg->doc);
    const auto summary =
        riskbandit::run_experiment(parsed, jobs == 0 ? riskbandit::default_jobs() : jobs);
    *summary_json = copy_string(summary.dump(2));
  });
}

RB_API rb_status rb_evaluate(const char* const* paths, size_t count, const rb_config* cfg,
                             char** metrics_json) {
  RB_REQUIRE(paths && metrics_json && count > 0, "at least one trajectory path is required");
  *metrics_json = nullptr;
  return guarded([&] {
    std::vector<std::string> files(paths, paths + count);
    std::optional<riskbandit::ExperimentConfig> parsed;
    if (cfg) parsed = riskbandit::ExperimentConfig::from_json(cfg->doc);
    *metrics_json = copy_string(riskbandit::evaluate_files(files, parsed).dump(2));
  });
}

RB_API rb_status rb_summarize(const char* dir, char** summary_json) {
  RB_REQUIRE(dir && summary_json, "null pointer argument");
  *summary_json = nullptr;
  return guarded([&] { *summary_json = copy_string(riskbandit::summarize_directory(dir).dump(2)); });
}

}  // extern "C"
