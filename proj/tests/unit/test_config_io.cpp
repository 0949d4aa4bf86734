// Copyright 2026 The dualrope Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <json.hpp>
#include <random>
#include <string>

#include "../common/scenarios.hpp"
#include "dualrope/config.hpp"
#include "dualrope/errors.hpp"
#include "dualrope/io.hpp"

namespace dualrope {
namespace {

const char* kMinimal = R"(
litter:
  position_m: [1.0, 2.0, 0.0]
trajectory:
  type: straight
  start_m: [1.0, -2.0, 0.0]
)";

std::string error_of(const std::string& yaml) {
  try {
    parse_config(yaml);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

TEST(Config, MinimalUsesDefaults) {
  const ScenarioConfig cfg = parse_config(kMinimal);
  EXPECT_EQ(cfg.litter.position, Vec3(1.0, 2.0, 0.0));
  EXPECT_EQ(cfg.planner.litter, cfg.litter.position);
  EXPECT_DOUBLE_EQ(cfg.rope.length, 2.8);
  EXPECT_DOUBLE_EQ(cfg.rope.hook_length, 0.30);
  EXPECT_DOUBLE_EQ(cfg.planner.w, 1.0);
  EXPECT_EQ(cfg.seed, 0u);
}

TEST(Config, ShippedScenariosLoad) {
  for (const char* n : {"grass_field.yaml", "circular.yaml", "channel.yaml", "ablation.yaml"}) {
    EXPECT_NO_THROW(testing::load_named(n)) << n;
  }
  const ScenarioConfig grass = testing::load_named("grass_field.yaml");
  EXPECT_EQ(grass.litter.position, Vec3(-3.6, 7.0, 0.0));
  EXPECT_EQ(grass.trajectory.start, Vec3(-3.6, 3.0, 0.0));
  EXPECT_DOUBLE_EQ(grass.trajectory.speed, 0.5);
  EXPECT_DOUBLE_EQ(grass.trajectory.ascent_rate, 0.1);
  EXPECT_DOUBLE_EQ(testing::load_named("channel.yaml").trajectory.speed, 0.24);
}

TEST(Config, MissingLitterNamesField) {
  const std::string e = error_of("trajectory:\n  type: straight\n  start_m: [0, 0, 0]\n");
  EXPECT_NE(e.find("litter.position_m"), std::string::npos) << e;
  const std::string e2 =
      error_of("litter:\n  lateral_jitter_m: 0.1\ntrajectory:\n  type: hover\n  start_m: [0, 0, 0]\n");
  EXPECT_NE(e2.find("litter.position_m"), std::string::npos) << e2;
}

TEST(Config, BadSeedTypeReportsLine) {
  const std::string e = error_of(std::string(kMinimal) + "seed: banana\n");
  EXPECT_NE(e.find("seed"), std::string::npos) << e;
  EXPECT_NE(e.find("line 7"), std::string::npos) << e;
  EXPECT_FALSE(error_of(std::string(kMinimal) + "seed: -3\n").empty());
}

TEST(Config, UnknownKeyRejected) {
  const std::string e = error_of(std::string(kMinimal) + "servo:\n  k_c: 0.5\n");
  EXPECT_NE(e.find("servo.k_c"), std::string::npos) << e;
}

TEST(Config, OutOfRangeValueIsConfigError) {
  EXPECT_FALSE(error_of(std::string(kMinimal) + "sensor:\n  dropout_prob: 1.5\n").empty());
  EXPECT_FALSE(error_of(std::string(kMinimal) + "rope:\n  length_m: -1\n").empty());
}

TEST(Config, TrajectoryRequirements) {
  EXPECT_NE(error_of("litter:\n  position_m: [0,0,0]\ntrajectory:\n  type: circular\n  start_m: [1,0,0]\n")
                .find("center_m"),
            std::string::npos);
  EXPECT_NE(error_of("litter:\n  position_m: [0,0,0]\ntrajectory:\n  type: zigzag\n").find("type"),
            std::string::npos);
  EXPECT_FALSE(
      error_of("litter:\n  position_m: [0,0,0]\ntrajectory:\n  type: waypoints\n  waypoints:\n"
               "    - {t_s: 0, position_m: [0,0,0]}\n")
          .empty());
  const ScenarioConfig w = parse_config(
      "litter:\n  position_m: [0,0,0]\ntrajectory:\n  type: waypoints\n  waypoints:\n"
      "    - {t_s: 0, position_m: [0,0,0]}\n    - {t_s: 2, position_m: [1,0,0]}\n");
  EXPECT_EQ(w.trajectory.waypoints.size(), 2u);
}

TEST(Config, MalformedYamlHasLine) {
  const std::string e = error_of("litter: [1, 2\n");
  EXPECT_NE(e.find("line"), std::string::npos) << e;
}

TEST(Config, Fnv1a) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(Io, FmtDoubleRoundTrips) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int k = 0; k < 1000; ++k) {
    const double v = u(rng);
    EXPECT_EQ(std::stod(io::fmt_double(v)), v);
  }
}

TEST(Io, FrameRoundTripIsBitExact) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n(0.0, 1.0);
  RopePointCloud c;
  c.attach1 = Vec3(n(rng), n(rng), n(rng));
  c.attach2 = Vec3(n(rng), n(rng), n(rng));
  for (int i = 0; i < 50; ++i) c.points.push_back(Vec3(n(rng), n(rng), n(rng)) / 3.0);
  const double t = 1.0 / 3.0;
  const RecordedFrame f = io::parse_frame(io::frame_text(t, c));
  EXPECT_EQ(f.t, t);
  EXPECT_EQ(f.cloud.attach1, c.attach1);
  EXPECT_EQ(f.cloud.attach2, c.attach2);
  ASSERT_EQ(f.cloud.points.size(), c.points.size());
  for (std::size_t i = 0; i < c.points.size(); ++i) EXPECT_EQ(f.cloud.points[i], c.points[i]);
  EXPECT_EQ(io::frame_text(f.t, f.cloud), io::frame_text(t, c));
}

TEST(Io, FrameParseErrorsCarryLine) {
  try {
    io::parse_frame("kind,t_s,x_m,y_m,z_m\nA1,0,0,0,0\nA2,0,1,0,0\np,0,abc,0,0\n");
    FAIL() << "expected a ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 4);
  }
  EXPECT_THROW(io::parse_frame("kind,t_s,x_m,y_m,z_m\np,0,0,0,0\n"), ConfigError);
}

TEST(Io, FrameFileName) { EXPECT_EQ(io::frame_file_name(42), "frame_000042.csv"); }

TEST(Io, SummaryJsonIsValid) {
  ScenarioConfig cfg = testing::load_named("channel.yaml");
  const ScenarioRunLog log = run_scenario(cfg);
  const auto j = nlohmann::json::parse(io::summary_json(log, cfg));
  EXPECT_TRUE(j.contains("grasp"));
  const std::string csv = io::log_csv(log);
  std::size_t lines = 0;
  for (char ch : csv) lines += ch == '\n';
  EXPECT_EQ(lines, log.rows.size() + 1);
  const auto meta = nlohmann::json::parse(io::plan_metadata_json(log.plan, cfg));
  EXPECT_TRUE(meta.is_object());
}

TEST(Io, AblationTableColumns) {
  AblationResult r;
  r.table.push_back({0.0, 1, 3, 0.25});
  r.table.push_back({1.5, 4, 0, 1.0});
  const std::string csv = io::ablation_csv(r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "weight,successes,failures,rate");
  EXPECT_NE(io::ablation_text(r).find("1.5"), std::string::npos);
}

}  // namespace
}  // namespace dualrope
