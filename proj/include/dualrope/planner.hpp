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

// Offline rope-shape planner.
//
// For every sample of a user-given hook (rope midpoint) trajectory the planner
// picks the robot separation d that minimises
//
//   J(d) = T(a(d), d) + w_gr(|p_hook - p_litter|) * (l_hook - d_hook(a(d)))
//
// on [d_min, d_max], where a(d) is eliminated through the rope length
// constraint, T is the endpoint tension and d_hook the ground width covered by
// the hooked section. The two robot trajectories follow from the symmetric
// parabola hung below them.

#pragma once

#include <optional>
#include <vector>

#include "dualrope/types.hpp"

namespace dualrope {

struct PlannerConfig {
  double w = 1.0;         ///< grasp weight scale
  double k_gr = 1.0;      ///< sigmoid steepness [1/m]
  double k_pos = 1.0;     ///< sigmoid centre distance [m]
  double d_min = 1.0;     ///< minimum robot separation [m]
  double h_min = 0.3;     ///< minimum robot height above the hook [m]
  double phi_max = 0.3490658503988659;  ///< 20 deg maximum roll [rad]
  double robot_mass = 2.0;              ///< [kg]
  double v_sep_max = 0.3;  ///< separation rate limit [m/s]; <= 0 disables it
  Vec3 litter = Vec3::Zero();

  void validate() const;
};

struct HookSample {
  double t = 0.0;
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
};

/// Uniformly sampled reference trajectory of the rope midpoint.
struct HookTrajectory {
  std::vector<HookSample> samples;
  double dt = 0.0;

  /// Strictly increasing time, uniform step, and velocities consistent with
  /// finite differences of the positions (5% where the velocity is non-zero).
  void validate() const;
};

/// Straight approach from `start` to `litter` at `speed`, then continued
/// forward motion while climbing at `ascent_rate` for `ascent_duration`.
HookTrajectory make_straight_trajectory(const Vec3& start, const Vec3& litter, double speed,
                                        double ascent_rate, double ascent_duration, double dt);

/// Circular arc about `center` from `start` to the angular position of
/// `litter` (shortest direction), then continued along the circle while
/// climbing.
HookTrajectory make_circular_trajectory(const Vec3& center, const Vec3& start,
                                        const Vec3& litter, double speed, double ascent_rate,
                                        double ascent_duration, double dt);

struct Waypoint {
  double t = 0.0;
  Vec3 position = Vec3::Zero();
};

/// Piecewise-linear interpolation of time-stamped waypoints.
HookTrajectory make_waypoint_trajectory(const std::vector<Waypoint>& waypoints, double dt);

/// w / (1 + exp(-k_gr (k_pos - dist))).
double grasp_weight(double dist, const PlannerConfig& cfg);

struct SeparationBounds {
  double by_height = 0.0;  ///< largest d keeping sag >= h_min
  double by_roll = 0.0;    ///< largest d keeping the robot roll <= phi_max
  double d_max = 0.0;
  int height_iterations = 0;
  int roll_iterations = 0;
};

/// Robot roll angle needed to hold the rope at separation d (quasi-static,
/// each robot carries half the rope weight plus its own).
double holding_roll(double d, const PlannerConfig& cfg, const RopeSpec& rope);

/// Upper separation bound. InfeasibleError when it falls below d_min.
SeparationBounds compute_d_max(const PlannerConfig& cfg, const RopeSpec& rope);

/// Planner objective after eliminating the curvature.
double reduced_objective(double d, double w_gr, const RopeSpec& rope);

/// Yaw keeping the parabola plane perpendicular to the horizontal motion.
/// Returns `previous` while the horizontal speed is below 1e-3 m/s.
double yaw_reference(const Vec3& velocity, double previous);

struct StepPlan {
  double a = 0.0;
  double d = 0.0;
  double w_gr = 0.0;
  double objective = 0.0;
  int evaluations = 0;
};

inline constexpr int kPlannerGridPoints = 200;
inline constexpr double kPlannerTolerance = 1e-6;

/// Optimal (a, d) for one hook sample. `d_max` comes from compute_d_max.
StepPlan plan_step(const Vec3& hook, const PlannerConfig& cfg, const RopeSpec& rope,
                   double d_max);

struct PlannedStep {
  double t = 0.0;
  Vec3 hook = Vec3::Zero();
  Vec3 robot1 = Vec3::Zero();
  Vec3 robot2 = Vec3::Zero();
  double yaw1 = 0.0;
  double yaw2 = 0.0;
  double a = 0.0;
  double b = 0.0;
  double d = 0.0;
  double d_unlimited = 0.0;  ///< optimum before rate limiting
  double psi = 0.0;
  double w_gr = 0.0;
  double litter_distance = 0.0;
};

struct PlannerStats {
  SeparationBounds bounds;
  long objective_evaluations = 0;
  int rate_limited_steps = 0;
  double max_length_residual = 0.0;
};

struct PlannedTrajectory {
  std::vector<PlannedStep> steps;
  PlannerStats stats;
  double dt = 0.0;
};

/// Robot positions for a symmetric shape hung from `hook`:
/// p = hook + z_atc e_z + R_z(psi) (sag e_z -/+ d/2 e_y). Robot 1 takes the
/// -d/2 side so that the attach-frame y axis points from robot 1 to robot 2.
std::pair<Vec3, Vec3> robot_positions(const Vec3& hook, double a, double d, double psi,
                                      const RopeSpec& rope);

PlannedTrajectory plan_trajectory(const HookTrajectory& traj, const PlannerConfig& cfg,
                                  const RopeSpec& rope);

}  // namespace dualrope
