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

#include "dualrope/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <tuple>

#include "dualrope/errors.hpp"
#include "dualrope/geometry.hpp"
#include "dualrope/numerics.hpp"

namespace dualrope {

namespace {

constexpr double kHoverSpeed = 1e-3;

// Distance from point p to the segment [a, b].
double distance_to_segment(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 ab = b - a;
  const double len2 = ab.squaredNorm();
  const double s = len2 > 0.0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
  return (p - (a + s * ab)).norm();
}

}  // namespace

void PlannerConfig::validate() const {
  if (!(w >= 0.0)) throw DomainError("planner: w must be >= 0");
  if (!(k_gr > 0.0)) throw DomainError("planner: k_gr must be > 0");
  if (!(k_pos > 0.0)) throw DomainError("planner: k_pos must be > 0");
  if (!(d_min > 0.0)) throw DomainError("planner: d_min must be > 0");
  if (!(h_min > 0.0)) throw DomainError("planner: h_min must be > 0");
  if (!(phi_max > 0.0 && phi_max < 0.5 * std::numbers::pi))
    throw DomainError("planner: phi_max must lie in (0, pi/2)");
  if (!(robot_mass > 0.0)) throw DomainError("planner: robot mass must be > 0");
  if (!litter.allFinite()) throw DomainError("planner: litter position must be finite");
}

void HookTrajectory::validate() const {
  if (samples.size() < 2) throw DomainError("hook trajectory needs at least two samples");
  if (!(dt > 0.0)) throw DomainError("hook trajectory dt must be > 0");
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const auto& s = samples[k];
    if (!s.position.allFinite() || !s.velocity.allFinite() || !std::isfinite(s.t))
      throw DomainError("hook trajectory contains non-finite values");
    if (k == 0) continue;
    const auto& p = samples[k - 1];
    if (!(s.t > p.t)) throw DomainError("hook trajectory time must be strictly increasing");
    if (std::abs((s.t - p.t) - dt) > 1e-9 * std::max(1.0, dt))
      throw DomainError("hook trajectory must be uniformly sampled");
    // The finite-difference velocity of a piecewise-smooth path lies (close to)
    // between the sampled velocities at both ends of the step.
    const Vec3 fd = (s.position - p.position) / (s.t - p.t);
    const double scale = std::max(p.velocity.norm(), s.velocity.norm());
    if (scale > 0.0 && distance_to_segment(fd, p.velocity, s.velocity) > 0.05 * scale)
      throw DomainError("hook trajectory velocity inconsistent with positions at t = " +
                        std::to_string(s.t));
  }
}

HookTrajectory make_straight_trajectory(const Vec3& start, const Vec3& litter, double speed,
                                        double ascent_rate, double ascent_duration, double dt) {
  if (!(speed > 0.0) || !(dt > 0.0) || ascent_duration < 0.0)
    throw DomainError("straight trajectory: speed and dt must be > 0");
  const Vec3 delta = litter - start;
  const double dist = delta.norm();
  if (!(dist > 0.0)) throw DomainError("straight trajectory: start coincides with litter");
  const Vec3 dir = delta / dist;
  const double t_cruise = dist / speed;
  const double t_end = t_cruise + ascent_duration;
  const auto n = static_cast<std::size_t>(std::floor(t_end / dt + 1e-9));

  HookTrajectory traj;
  traj.dt = dt;
  traj.samples.reserve(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = static_cast<double>(k) * dt;
    HookSample s;
    s.t = t;
    if (t < t_cruise) {
      s.position = start + dir * speed * t;
      s.velocity = dir * speed;
    } else {
      const double tau = t - t_cruise;
      s.position = litter + dir * speed * tau + Vec3(0.0, 0.0, ascent_rate * tau);
      s.velocity = dir * speed + Vec3(0.0, 0.0, ascent_rate);
    }
    traj.samples.push_back(s);
  }
  return traj;
}

HookTrajectory make_circular_trajectory(const Vec3& center, const Vec3& start,
                                        const Vec3& litter, double speed, double ascent_rate,
                                        double ascent_duration, double dt) {
  if (!(speed > 0.0) || !(dt > 0.0) || ascent_duration < 0.0)
    throw DomainError("circular trajectory: speed and dt must be > 0");
  const Eigen::Vector2d r0 = (start - center).head<2>();
  const Eigen::Vector2d r1 = (litter - center).head<2>();
  const double radius = r0.norm();
  if (!(radius > 0.0) || !(r1.norm() > 0.0))
    throw DomainError("circular trajectory: start and litter must differ from the centre");
  const double theta0 = std::atan2(r0.y(), r0.x());
  const double sweep = wrap_angle(std::atan2(r1.y(), r1.x()) - theta0);
  if (sweep == 0.0) throw DomainError("circular trajectory: litter at the start angle");
  const double dir = sweep > 0.0 ? 1.0 : -1.0;
  const double omega = dir * speed / radius;
  const double t_cruise = std::abs(sweep) / std::abs(omega);
  const double t_end = t_cruise + ascent_duration;
  const auto n = static_cast<std::size_t>(std::floor(t_end / dt + 1e-9));

  HookTrajectory traj;
  traj.dt = dt;
  traj.samples.reserve(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = static_cast<double>(k) * dt;
    const double theta = theta0 + omega * t;
    HookSample s;
    s.t = t;
    const double climb = t < t_cruise ? 0.0 : ascent_rate * (t - t_cruise);
    s.position = Vec3(center.x() + radius * std::cos(theta), center.y() + radius * std::sin(theta),
                      start.z() + climb);
    s.velocity = Vec3(-radius * omega * std::sin(theta), radius * omega * std::cos(theta),
                      t < t_cruise ? 0.0 : ascent_rate);
    traj.samples.push_back(s);
  }
  return traj;
}

HookTrajectory make_waypoint_trajectory(const std::vector<Waypoint>& waypoints, double dt) {
  if (waypoints.size() < 2) throw DomainError("waypoint trajectory needs at least two waypoints");
  if (!(dt > 0.0)) throw DomainError("waypoint trajectory: dt must be > 0");
  for (std::size_t i = 1; i < waypoints.size(); ++i) {
    if (!(waypoints[i].t > waypoints[i - 1].t))
      throw DomainError("waypoint times must be strictly increasing");
  }
  const double t0 = waypoints.front().t;
  const double span = waypoints.back().t - t0;
  const auto n = static_cast<std::size_t>(std::floor(span / dt + 1e-9));
  HookTrajectory traj;
  traj.dt = dt;
  std::size_t seg = 0;
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = t0 + static_cast<double>(k) * dt;
    while (seg + 2 < waypoints.size() && t >= waypoints[seg + 1].t) ++seg;
    const auto& a = waypoints[seg];
    const auto& b = waypoints[seg + 1];
    const Vec3 v = (b.position - a.position) / (b.t - a.t);
    traj.samples.push_back({t, a.position + v * (t - a.t), v});
  }
  return traj;
}

double grasp_weight(double dist, const PlannerConfig& cfg) {
  if (!(dist >= 0.0)) throw DomainError("grasp_weight: distance must be >= 0");
  return cfg.w / (1.0 + std::exp(-cfg.k_gr * (cfg.k_pos - dist)));
}

double holding_roll(double d, const PlannerConfig& cfg, const RopeSpec& rope) {
  const double a = solve_curvature_for_length(d, rope.length);
  const Tension t = endpoint_tension(a, d, rope);
  return std::atan(t.horizontal / (cfg.robot_mass * rope.gravity + t.vertical));
}

SeparationBounds compute_d_max(const PlannerConfig& cfg, const RopeSpec& rope) {
  cfg.validate();
  rope.validate();
  const double l = rope.length;
  const double lo = 1e-3 * l;
  const double tol = 1e-12 * l;
  SeparationBounds out;

  // Roll grows monotonically with d (the horizontal tension diverges as the
  // rope becomes taut).
  auto roll_ok = [&](double d) { return holding_roll(d, cfg, rope) <= cfg.phi_max; };
  out.by_roll = roll_ok(lo) ? numerics::bisect_last_true(roll_ok, lo, l, tol, &out.roll_iterations)
                            : 0.0;

  // Sag shrinks monotonically with d, from l/2 towards 0.
  auto height_ok = [&](double d) {
    return sag(solve_curvature_for_length(d, l), d) >= cfg.h_min;
  };
  out.by_height = height_ok(lo)
                      ? numerics::bisect_last_true(height_ok, lo, l, tol, &out.height_iterations)
                      : 0.0;

  out.d_max = std::min(out.by_height, out.by_roll);
  // A bound that binds exactly at d_min lands within the bisection tolerance.
  if (out.d_max < cfg.d_min && cfg.d_min - out.d_max <= 2.0 * tol) out.d_max = cfg.d_min;
  if (out.d_max < cfg.d_min)
    throw InfeasibleError("planner: d_max (" + std::to_string(out.d_max) +
                          " m) is below d_min (" + std::to_string(cfg.d_min) + " m)");
  return out;
}

double reduced_objective(double d, double w_gr, const RopeSpec& rope) {
  const double a = solve_curvature_for_length(d, rope.length);
  const double tension = endpoint_tension(a, d, rope).magnitude;
  const double unused_hook = rope.hook_length - solve_span_for_length(a, rope.hook_length);
  return tension + w_gr * unused_hook;
}

double yaw_reference(const Vec3& velocity, double previous) {
  if (std::hypot(velocity.x(), velocity.y()) < kHoverSpeed) return previous;
  return std::atan2(velocity.y(), velocity.x());
}

StepPlan plan_step(const Vec3& hook, const PlannerConfig& cfg, const RopeSpec& rope,
                   double d_max) {
  if (d_max < cfg.d_min) throw InfeasibleError("plan_step: empty separation interval");
  StepPlan out;
  out.w_gr = grasp_weight((hook - cfg.litter).norm(), cfg);
  const auto objective = [&](double d) { return reduced_objective(d, out.w_gr, rope); };
  const auto best = numerics::grid_then_golden(objective, cfg.d_min, d_max, kPlannerGridPoints,
                                               kPlannerTolerance);
  out.d = best.x;
  out.objective = best.fx;
  out.evaluations = best.evaluations;
  out.a = solve_curvature_for_length(out.d, rope.length);
  return out;
}

std::pair<Vec3, Vec3> robot_positions(const Vec3& hook, double a, double d, double psi,
                                      const RopeSpec& rope) {
  const Mat3 r = rot_z(psi);
  const Vec3 base = hook + Vec3(0.0, 0.0, rope.attach_offset + sag(a, d));
  const Vec3 half = r * Vec3(0.0, 0.5 * d, 0.0);
  return {base - half, base + half};
}

PlannedTrajectory plan_trajectory(const HookTrajectory& traj, const PlannerConfig& cfg,
                                  const RopeSpec& rope) {
  traj.validate();
  PlannedTrajectory out;
  out.dt = traj.dt;
  out.stats.bounds = compute_d_max(cfg, rope);
  const double d_max = out.stats.bounds.d_max;

  // Per-sample optimisation; independent across samples.
  std::vector<StepPlan> raw;
  raw.reserve(traj.samples.size());
  for (const auto& s : traj.samples) {
    raw.push_back(plan_step(s.position, cfg, rope, d_max));
    out.stats.objective_evaluations += raw.back().evaluations;
  }

  // Sequential filters: yaw hold and separation rate limiting.
  double yaw = 0.0;
  for (const auto& s : traj.samples) {
    if (std::hypot(s.velocity.x(), s.velocity.y()) >= kHoverSpeed) {
      yaw = yaw_reference(s.velocity, 0.0);
      break;
    }
  }
  const double max_step =
      cfg.v_sep_max > 0.0 ? cfg.v_sep_max * traj.dt : std::numeric_limits<double>::infinity();

  out.steps.reserve(raw.size());
  for (std::size_t k = 0; k < raw.size(); ++k) {
    const auto& s = traj.samples[k];
    PlannedStep step;
    step.t = s.t;
    step.hook = s.position;
    step.psi = yaw = yaw_reference(s.velocity, yaw);
    step.d_unlimited = raw[k].d;
    step.w_gr = raw[k].w_gr;
    step.litter_distance = (s.position - cfg.litter).norm();
    if (k == 0) {
      step.d = raw[k].d;
      step.a = raw[k].a;
    } else {
      const double prev = out.steps.back().d;
      step.d = std::clamp(raw[k].d, prev - max_step, prev + max_step);
      if (step.d != raw[k].d) {
        ++out.stats.rate_limited_steps;
        step.a = solve_curvature_for_length(step.d, rope.length);
      } else {
        step.a = raw[k].a;
      }
    }
    step.b = 0.0;
    std::tie(step.robot1, step.robot2) = robot_positions(step.hook, step.a, step.d, step.psi, rope);
    step.yaw1 = step.yaw2 = step.psi;
    out.stats.max_length_residual = std::max(
        out.stats.max_length_residual, std::abs(arc_length(step.a, step.d) - rope.length));
    out.steps.push_back(step);
  }
  return out;
}

}  // namespace dualrope
