// Copyright 2026 The riskbandit Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "core/errors.hpp"
#include "core/harness.hpp"

namespace riskbandit {
namespace {

namespace fs = std::filesystem;

class HarnessTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / ("riskbandit_harness_" + std::string(info->name()));
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  nlohmann::json base_doc(const std::string& algo) const {
    nlohmann::json doc = nlohmann::json::parse(R"({
      "algorithm": {"name": "descent"},
      "environment": {"family": "quadratic_uniform",
                      "set": {"kind": "ball", "center": [0.0, 0.0], "radius": 1.0},
                      "x_star": [0.3, -0.2], "a": 0.3, "b": 0.05, "c": 0.2},
      "risk": {"kind": "cvar", "alpha": 0.5},
      "horizons": [512],
      "seeds": {"master": 5, "replications": 1}
    })");
    doc["algorithm"]["name"] = algo;
    if (algo == "ellipsoid") {
      doc["algorithm"]["c1"] = 1.0;
      doc["algorithm"]["c2"] = 1.0;
      doc["horizons"] = {2048};
    }
    if (algo == "trisect1d") {
      doc["environment"] = nlohmann::json::parse(R"({"family": "abs_noise",
        "set": {"kind": "interval", "lo": 0.0, "hi": 1.0},
        "x_star": 0.4, "g": 1.0, "b": 0.0, "c": 0.2})");
      doc["horizons"] = {4096};
    }
    doc["output_dir"] = dir_.string();
    return doc;
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
};

std::string config_error_field(const nlohmann::json& doc) {
  try {
    ExperimentConfig::from_json(doc);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<accepted>";
}

TEST_F(HarnessTest, OneHorizonOneReplicationWritesThreeFiles) {
  const auto cfg = ExperimentConfig::from_json(base_doc("descent"));
  run_experiment(cfg, 1);
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& entry : fs::directory_iterator(dir_)) ++files;
  EXPECT_EQ(files, 3u);
  EXPECT_TRUE(fs::exists(dir_ / "traj_T512_rep0.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "metrics_T512_rep0.json"));
  EXPECT_TRUE(fs::exists(dir_ / "summary.json"));
}

TEST_F(HarnessTest, EveryAlgorithmIsDeterministic) {
  for (const std::string algo : {"descent", "trisect1d", "ellipsoid"}) {
    auto doc = base_doc(algo);
    doc["seeds"]["replications"] = 2;
    const auto cfg = ExperimentConfig::from_json(doc);
    run_experiment(cfg, 2);
    const auto name = "traj_T" + std::to_string(cfg.horizons[0]) + "_rep1.csv";
    const std::string first = slurp(dir_ / name);
    fs::remove_all(dir_);
    run_experiment(cfg, 1);
    EXPECT_EQ(slurp(dir_ / name), first) << algo;
    EXPECT_FALSE(first.empty());
    fs::remove_all(dir_);
  }
}

TEST_F(HarnessTest, EvaluateReproducesStoredMetrics) {
  auto doc = base_doc("descent");
  doc["horizons"] = {256, 512};
  doc["seeds"]["replications"] = 2;
  const auto cfg = ExperimentConfig::from_json(doc);
  run_experiment(cfg, 2);
  for (const char* stem : {"T256_rep0", "T512_rep1"}) {
    const auto stored =
        nlohmann::json::parse(slurp(dir_ / (std::string("metrics_") + stem + ".json")));
    const auto again =
        evaluate_files({(dir_ / (std::string("traj_") + stem + ".csv")).string()}, cfg);
    ASSERT_EQ(again.size(), 1u);
    EXPECT_EQ(again[0], stored);
    EXPECT_EQ(again[0].at("pseudo_regret").get<double>(),
              stored.at("pseudo_regret").get<double>());
  }
}

TEST_F(HarnessTest, EvaluateDetectsMismatchedConfig) {
  const auto cfg = ExperimentConfig::from_json(base_doc("descent"));
  run_experiment(cfg, 1);
  auto other = base_doc("descent");
  other["environment"]["a"] = 0.25;
  EXPECT_THROW(evaluate_files({(dir_ / "traj_T512_rep0.csv").string()},
                              ExperimentConfig::from_json(other)),
               IntegrityError);
  other = base_doc("descent");
  other["seeds"]["master"] = 6;
  EXPECT_THROW(evaluate_files({(dir_ / "traj_T512_rep0.csv").string()},
                              ExperimentConfig::from_json(other)),
               IntegrityError);
}

TEST_F(HarnessTest, EvaluateEmptyTrajectoryIsDomainError) {
  fs::create_directories(dir_);
  const auto cfg = ExperimentConfig::from_json(base_doc("descent"));
  Trajectory empty("descent", cfg.environment, cfg.risk, 2, 10);
  const auto path = (dir_ / "empty.csv").string();
  empty.write_csv_file(path);
  EXPECT_THROW(evaluate_files({path}, std::nullopt), DomainError);
}

TEST_F(HarnessTest, SummaryAggregatesMetrics) {
  auto doc = base_doc("descent");
  doc["horizons"] = {256, 1024};
  doc["seeds"]["replications"] = 3;
  const auto cfg = ExperimentConfig::from_json(doc);
  const auto summary = run_experiment(cfg, 3);
  const auto from_disk = summarize_directory(dir_.string());
  EXPECT_EQ(from_disk.at("horizons"), summary.at("horizons"));
  EXPECT_EQ(from_disk.at("pseudo_regret_loglog_slope"), summary.at("pseudo_regret_loglog_slope"));
  EXPECT_EQ(summary.at("config_hash").get<std::string>(), cfg.hash());
  ASSERT_EQ(summary.at("horizons").size(), 2u);
  double mean = 0.0;
  for (int r = 0; r < 3; ++r) {
    mean += nlohmann::json::parse(
                slurp(dir_ / ("metrics_T1024_rep" + std::to_string(r) + ".json")))
                .at("pseudo_regret")
                .get<double>() /
            3.0;
  }
  const auto& row = summary.at("horizons")[1];
  EXPECT_EQ(row.at("T").get<std::uint64_t>(), 1024u);
  EXPECT_NEAR(row.at("pseudo_regret").at("mean").get<double>(), mean, 1e-15);
  const double m0 = summary.at("horizons")[0].at("pseudo_regret").at("mean").get<double>();
  EXPECT_NEAR(summary.at("pseudo_regret_loglog_slope").get<double>(),
              std::log(mean / m0) / std::log(4.0), 1e-12);
}

TEST(LogLogSlope, Cases) {
  EXPECT_NEAR(*loglog_slope({1, 2, 4, 8}, {1, 0.5, 0.25, 0.125}), -1.0, 1e-12);
  EXPECT_NEAR(*loglog_slope({10, 100}, {3, 30}), 1.0, 1e-12);
  EXPECT_FALSE(loglog_slope({1}, {1}).has_value());
  EXPECT_FALSE(loglog_slope({1, 2}, {1, 0}).has_value());
  EXPECT_FALSE(loglog_slope({2, 2}, {1, 3}).has_value());
}

TEST(ExperimentConfig, ErrorsCarryFieldPaths) {
  const auto base = nlohmann::json::parse(R"({
    "algorithm": {"name": "descent"},
    "environment": {"family": "quadratic_uniform",
                    "set": {"kind": "ball", "center": [0.0, 0.0], "radius": 1.0},
                    "x_star": [0.3, -0.2], "a": 0.3, "b": 0.05, "c": 0.2},
    "risk": {"kind": "cvar", "alpha": 0.5},
    "horizons": [64, 128],
    "seeds": {"master": 1, "replications": 2}
  })");
  EXPECT_EQ(config_error_field(base), "<accepted>");

  auto doc = base;
  doc["algorithm"]["name"] = "newton";
  EXPECT_EQ(config_error_field(doc), "algorithm.name");
  doc = base;
  doc["horizons"] = {128, 64};
  EXPECT_EQ(config_error_field(doc), "horizons[1]");
  doc = base;
  doc["seeds"]["replications"] = 0;
  EXPECT_EQ(config_error_field(doc), "seeds.replications");
  doc = base;
  doc["environment"]["a"] = -1.0;
  EXPECT_EQ(config_error_field(doc), "environment.a");
  doc = base;
  doc["algorithm"]["name"] = "trisect1d";
  EXPECT_EQ(config_error_field(doc), "algorithm.name");
  doc = base;
  doc["algorithm"]["kappa"] = 0.0;
  EXPECT_EQ(config_error_field(doc), "algorithm.kappa");
  EXPECT_EQ(config_error_field(nlohmann::json::array()), "");
}

TEST(ExperimentConfig, HashIgnoresOutputDirectory) {
  auto doc = nlohmann::json::parse(R"({
    "algorithm": {"name": "descent"},
    "environment": {"family": "quadratic_uniform",
                    "set": {"kind": "ball", "center": [0.0, 0.0], "radius": 1.0},
                    "x_star": [0.3, -0.2], "a": 0.3, "b": 0.05, "c": 0.2},
    "risk": {"kind": "cvar", "alpha": 0.5},
    "horizons": [64],
    "seeds": {"master": 1, "replications": 1},
    "output_dir": "a"
  })");
  const auto h1 = ExperimentConfig::from_json(doc).hash();
  doc["output_dir"] = "b";
  EXPECT_EQ(ExperimentConfig::from_json(doc).hash(), h1);
  doc["seeds"]["master"] = 2;
  EXPECT_NE(ExperimentConfig::from_json(doc).hash(), h1);
  EXPECT_EQ(h1.size(), 16u);
}

TEST(ExperimentConfig, CanonicalJsonRoundTrip) {
  const auto cfg = ExperimentConfig::from_json(nlohmann::json::parse(R"({
    "algorithm": {"name": "ellipsoid", "c1": 2, "c2": 0.5, "kappa": 0.1},
    "environment": {"family": "quadratic_uniform",
                    "set": {"kind": "ball", "center": [0.0, 0.0], "radius": 1.0},
                    "x_star": [0.3, -0.2], "a": 0.3, "b": 0.05, "c": 0.2},
    "risk": {"kind": "kusuoka", "mu": [0.5, 0.5]},
    "horizons": [64],
    "seeds": {"master": 1, "replications": 1}
  })"));
  const auto again = ExperimentConfig::from_json(cfg.to_json());
  EXPECT_EQ(again.to_json(), cfg.to_json());
  EXPECT_EQ(again.hash(), cfg.hash());
}

TEST(RunSingle, SeedsDeriveFromReplicationAndHorizon) {
  const auto cfg = ExperimentConfig::from_json(nlohmann::json::parse(R"({
    "algorithm": {"name": "descent"},
    "environment": {"family": "quadratic_uniform",
                    "set": {"kind": "ball", "center": [0.0, 0.0], "radius": 1.0},
                    "x_star": [0.3, -0.2], "a": 0.3, "b": 0.05, "c": 0.2},
    "risk": {"kind": "cvar", "alpha": 0.5},
    "horizons": [64, 128],
    "seeds": {"master": 1, "replications": 2}
  })"));
  const auto a = run_single(cfg, 64, 0);
  const auto b = run_single(cfg, 64, 1);
  ASSERT_TRUE(a.seed().has_value());
  EXPECT_EQ(a.seed()->replication, 0u);
  EXPECT_EQ(a.config_hash(), cfg.hash());
  EXPECT_NE(a.losses(), b.losses());
  EXPECT_EQ(run_single(cfg, 64, 1).losses(), b.losses());
}

}  // namespace
}  // namespace riskbandit
