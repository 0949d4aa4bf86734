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

// Quasi-static closed-loop simulator: drone tracking, synthetic rope sensor,
// litter drift under rotor downwash, the grasp predicate, the scenario loop
// and the seeded weight ablation.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dualrope/estimation.hpp"
#include "dualrope/planner.hpp"
#include "dualrope/rope_model.hpp"
#include "dualrope/servo.hpp"
#include "dualrope/types.hpp"

namespace dualrope {

// ---------------------------------------------------------------- drones

struct DroneModel {
  double omega = 8.0;  ///< natural frequency [rad/s]
  double zeta = 1.0;   ///< damping ratio
  double v_max = 3.0;  ///< [m/s]
  double a_max = 6.0;  ///< [m/s^2]

  void validate() const;
};

struct DroneState {
  Vec3 p = Vec3::Zero();
  Vec3 v = Vec3::Zero();
  double yaw = 0.0;
};

/// Advances a = omega^2 (r - p) - 2 zeta omega v over one step with the
/// reference moving linearly from `ref` to `ref_next`. Exact for the linear
/// model; when the commanded acceleration exceeds a_max the step falls back
/// to constant clamped acceleration. Speed is clamped to v_max and yaw
/// follows a first-order lag with time constant 1/omega.
DroneState drone_step(const DroneState& state, const Vec3& ref, const Vec3& ref_next,
                      double yaw_ref, const DroneModel& model, double dt);

// ---------------------------------------------------------------- sensor

struct SensorModel {
  int samples_per_frame = 60;
  double noise_sigma = 0.01;    ///< [m]
  double dropout_prob = 0.0;
  int outlier_count = 0;
  double outlier_offset = 0.5;  ///< distance of the outlier cluster from the plane [m]
  double gps_sigma = 0.01;      ///< attachment noise [m]
  double frame_rate = 15.0;     ///< [Hz]
  std::uint64_t seed = 0;

  void validate() const;
};

/// Noisy point cloud of the true rope. `attach1` anchors the true shape.
/// Deterministic in (model.seed, frame_index).
RopePointCloud sample_sensor(const TrueShape& truth, const Vec3& attach1, const Vec3& attach2,
                             const SensorModel& model, std::uint64_t frame_index);

// ---------------------------------------------------------------- litter

struct DownwashModel {
  bool enabled = false;
  double gain = 0.0;          ///< drift speed under a rotor [m/s]
  double decay_length = 0.1;  ///< [m]

  void validate() const;
};

/// Litter after one step of drift away from each robot's ground projection:
/// v = sum_i gain exp(-r_i / decay_length) u_i. The litter stays at its height.
Vec3 downwash_drift(const Vec3& litter, const std::vector<Vec3>& robots, double dt,
                    const DownwashModel& model);

// ---------------------------------------------------------------- grasp

struct GraspOutcome {
  bool passed = false;  ///< the rope plane swept across the litter
  bool success = false;
  double margin = 0.0;  ///< d_hook/2 - lateral offset [m]
  double time = 0.0;
  double lateral_offset = 0.0;
  double hook_height = 0.0;  ///< lowest rope point above the litter [m]
  double d_hook = 0.0;
};

/// Watches successive true rope states for the first time the rope plane
/// sweeps across the litter, then applies the grasp predicate there.
class GraspTracker {
 public:
  GraspTracker(const RopeSpec& rope, double contact_threshold);

  void observe(double t, const TrueShape& truth, const Vec3& attach1, const Vec3& litter);

  bool passed() const { return outcome_.passed; }
  /// NoPassError when no crossing was seen.
  GraspOutcome outcome() const;

 private:
  struct Sample {
    double t = 0.0;
    double side = 0.0;
    double lateral = 0.0;
    double height = 0.0;
    double a = 0.0;
  };
  RopeSpec rope_;
  double contact_threshold_;
  std::optional<Sample> last_;
  GraspOutcome outcome_;
};

// ---------------------------------------------------------------- scenario

struct TrajectorySpec {
  enum class Kind { kStraight, kCircular, kWaypoints, kHover };
  Kind kind = Kind::kStraight;
  Vec3 start = Vec3::Zero();
  Vec3 center = Vec3::Zero();  ///< circular only
  double speed = 0.5;
  double ascent_rate = 0.1;
  double ascent_duration = 3.0;
  double duration = 10.0;  ///< hover only
  std::vector<Waypoint> waypoints;
};

struct LitterConfig {
  Vec3 position = Vec3::Zero();
  double lateral_jitter = 0.0;  ///< uniform +/- range across the approach [m]
  DownwashModel downwash;
};

struct ScenarioConfig {
  std::string name = "scenario";
  RopeSpec rope;
  PlannerConfig planner;
  ServoConfig servo;
  EstimationConfig estimation;
  DroneModel drone;
  SensorModel sensor;
  TrajectorySpec trajectory;
  LitterConfig litter;
  double control_rate = 50.0;       ///< [Hz]
  double contact_threshold = 0.05;  ///< [m]
  bool servo_enabled = true;
  Vec3 drone2_bias = Vec3::Zero();  ///< constant tracking offset of robot 2 [m]
  std::uint64_t seed = 0;

  void validate() const;
};

HookTrajectory build_trajectory(const ScenarioConfig& cfg);

struct LogRow {
  double t = 0.0;
  int phase = 0;  ///< 0 cruise, 1 climb
  Vec3 hook_ref = Vec3::Zero();
  Vec3 hook_true = Vec3::Zero();
  ShapeVector s_true = ShapeVector::Zero();
  ShapeVector s_est = ShapeVector::Zero();
  ShapeVector s_ref = ShapeVector::Zero();
  bool estimate_valid = false;
  bool estimate_stale = false;
  bool frame = false;  ///< a sensor frame was processed at this step
  Vec3 robot1 = Vec3::Zero();
  Vec3 robot2 = Vec3::Zero();
  Vec3 command1 = Vec3::Zero();
  Vec3 command2 = Vec3::Zero();
  Vec3 correction1 = Vec3::Zero();
  Vec3 correction2 = Vec3::Zero();
  Vec3 v_rel = Vec3::Zero();
  Vec3 litter = Vec3::Zero();
  double d_ref = 0.0;
  double d_true = 0.0;
};

struct RecordedFrame {
  std::uint64_t index = 0;
  double t = 0.0;
  RopePointCloud cloud;
  EstimatedShape estimate;
};

struct RunSummary {
  GraspOutcome grasp;
  std::string grasp_error;         ///< set when the pass never happened
  double hook_rmse_cruise = 0.0;   ///< true lowest point vs hook reference [m]
  double hook_rmse = 0.0;
  double shape_error_cruise = 0.0; ///< mean normalised |e_s| over cruise frames
  double max_correction_sum = 0.0; ///< |c1 + c2| over the run
  int frames = 0;
  int stale_frames = 0;
  Vec3 litter_initial = Vec3::Zero();
};

struct ScenarioRunLog {
  PlannedTrajectory plan;
  std::vector<LogRow> rows;
  std::vector<RecordedFrame> frames;  ///< only when requested
  RunSummary summary;
};

struct RunOptions {
  bool record_frames = false;
};

/// Normalised shape error (e_a/|a_ref|, e_b/|b_ref|, e_psi).
Eigen::Vector3d normalized_shape_error(const ShapeVector& s, const ShapeVector& s_ref);

ScenarioRunLog run_scenario(const ScenarioConfig& cfg, const RunOptions& options = {});

// ---------------------------------------------------------------- ablation

struct AblationRun {
  double weight = 0.0;
  std::uint64_t seed = 0;
  GraspOutcome grasp;
  std::string error;
};

struct AblationRow {
  double weight = 0.0;
  int successes = 0;
  int failures = 0;
  double rate = 0.0;
};

struct AblationResult {
  std::vector<AblationRow> table;
  std::vector<AblationRun> runs;  ///< ordered by (weight index, seed)
};

/// n_runs scenarios per weight with seeds base_seed, base_seed + 1, ...
/// shared across weights. Runs execute on `threads` workers (0: hardware
/// concurrency); results do not depend on the thread count.
AblationResult run_ablation(const ScenarioConfig& base, const std::vector<double>& weights,
                            int n_runs, std::uint64_t base_seed, int threads = 0);

}  // namespace dualrope
