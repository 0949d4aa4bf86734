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

#include "dualrope/sim.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include "dualrope/errors.hpp"
#include "dualrope/geometry.hpp"

namespace dualrope {

namespace {

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

constexpr std::uint64_t kSensorStream = 0x5e;
constexpr std::uint64_t kLitterStream = 0x117;
constexpr std::uint64_t kOutlierStream = 0x0b5;
constexpr double kOutlierSpread = 0.02;

double gaussian(std::mt19937_64& rng, double sigma) {
  if (!(sigma > 0.0)) return 0.0;
  return std::normal_distribution<double>(0.0, sigma)(rng);
}

Vec3 gaussian_vec(std::mt19937_64& rng, double sigma) {
  const double x = gaussian(rng, sigma);
  const double y = gaussian(rng, sigma);
  const double z = gaussian(rng, sigma);
  return {x, y, z};
}

Vec3 curve_point(const TrueShape& truth, const Vec3& attach1, double y) {
  return attach_frame_point(truth.shape, attach1, y);
}

}  // namespace

// ---------------------------------------------------------------- drones

void DroneModel::validate() const {
  if (!(omega > 0.0)) throw DomainError("drone omega must be > 0");
  if (!(zeta > 0.0)) throw DomainError("drone zeta must be > 0");
  if (!(v_max > 0.0)) throw DomainError("drone v_max must be > 0");
  if (!(a_max > 0.0)) throw DomainError("drone a_max must be > 0");
}

DroneState drone_step(const DroneState& state, const Vec3& ref, const Vec3& ref_next,
                      double yaw_ref, const DroneModel& model, double dt) {
  if (!(dt > 0.0)) throw DomainError("drone_step: dt must be > 0");
  const double w = model.omega;
  const double w2 = w * w;
  const double damp = 2.0 * model.zeta * w;
  DroneState next;
  const Vec3 accel = w2 * (ref - state.p) - damp * state.v;
  if (accel.norm() > model.a_max) {
    const Vec3 a = accel * (model.a_max / accel.norm());
    next.p = state.p + state.v * dt + 0.5 * a * dt * dt;
    next.v = state.v + a * dt;
  } else {
    // Per-axis state [p, v, r, r'] with the reference ramping over the step.
    Eigen::Matrix4d a = Eigen::Matrix4d::Zero();
    a(0, 1) = 1.0;
    a(1, 0) = -w2;
    a(1, 1) = -damp;
    a(1, 2) = w2;
    a(2, 3) = 1.0;
    const Eigen::Matrix4d phi = (a * dt).exp();
    const Vec3 rate = (ref_next - ref) / dt;
    for (int i = 0; i < 3; ++i) {
      const Eigen::Vector4d x(state.p(i), state.v(i), ref(i), rate(i));
      const Eigen::Vector4d y = phi * x;
      next.p(i) = y(0);
      next.v(i) = y(1);
    }
  }
  const double speed = next.v.norm();
  if (speed > model.v_max) next.v *= model.v_max / speed;
  const double blend = 1.0 - std::exp(-w * dt);
  next.yaw = wrap_angle(state.yaw + blend * wrap_angle(yaw_ref - state.yaw));
  return next;
}

// ---------------------------------------------------------------- sensor

void SensorModel::validate() const {
  if (samples_per_frame < 0) throw DomainError("sensor samples_per_frame must be >= 0");
  if (!(noise_sigma >= 0.0) || !(gps_sigma >= 0.0)) throw DomainError("sensor sigmas must be >= 0");
  if (!(dropout_prob >= 0.0 && dropout_prob <= 1.0))
    throw DomainError("sensor dropout_prob must lie in [0, 1]");
  if (outlier_count < 0) throw DomainError("sensor outlier_count must be >= 0");
  if (!(frame_rate > 0.0)) throw DomainError("sensor frame_rate must be > 0");
}

RopePointCloud sample_sensor(const TrueShape& truth, const Vec3& attach1, const Vec3& attach2,
                             const SensorModel& model, std::uint64_t frame_index) {
  auto rng = make_rng(model.seed, kSensorStream, frame_index);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  RopePointCloud cloud;
  if (!truth.degenerate) {
    const double a = truth.shape.a, b = truth.shape.b;
    const double total = arc_length_general(a, b, truth.y_end);
    cloud.points.reserve(static_cast<std::size_t>(model.samples_per_frame + model.outlier_count));
    for (int i = 0; i < model.samples_per_frame; ++i) {
      const double s = total * unit(rng);
      const Vec3 noise = gaussian_vec(rng, model.noise_sigma);
      const bool dropped = unit(rng) < model.dropout_prob;
      if (dropped) continue;
      const double y = std::min(solve_extent_for_length(a, b, s), truth.y_end);
      cloud.points.push_back(curve_point(truth, attach1, y) + noise);
    }
    if (model.outlier_count > 0) {
      // Own stream, so adding clutter leaves the rope and GPS draws untouched.
      auto orng = make_rng(model.seed, kOutlierStream, frame_index);
      const double y = truth.y_end * unit(orng);
      const Vec3 normal(std::cos(truth.shape.psi), std::sin(truth.shape.psi), 0.0);
      const Vec3 base = curve_point(truth, attach1, y) + model.outlier_offset * normal;
      for (int i = 0; i < model.outlier_count; ++i) {
        cloud.points.push_back(base + gaussian_vec(orng, kOutlierSpread));
      }
    }
  }
  cloud.attach1 = attach1 + gaussian_vec(rng, model.gps_sigma);
  cloud.attach2 = attach2 + gaussian_vec(rng, model.gps_sigma);
  return cloud;
}

// ---------------------------------------------------------------- litter

void DownwashModel::validate() const {
  if (!(gain >= 0.0)) throw DomainError("downwash gain must be >= 0");
  if (!(decay_length > 0.0)) throw DomainError("downwash decay length must be > 0");
}

Vec3 downwash_drift(const Vec3& litter, const std::vector<Vec3>& robots, double dt,
                    const DownwashModel& model) {
  Vec3 v = Vec3::Zero();
  for (const auto& r : robots) {
    const Vec3 diff(litter.x() - r.x(), litter.y() - r.y(), 0.0);
    const double dist = diff.norm();
    if (dist < 1e-9) continue;
    v += model.gain * std::exp(-dist / model.decay_length) * diff / dist;
  }
  return litter + dt * v;
}

// ---------------------------------------------------------------- grasp

GraspTracker::GraspTracker(const RopeSpec& rope, double contact_threshold)
    : rope_(rope), contact_threshold_(contact_threshold) {}

void GraspTracker::observe(double t, const TrueShape& truth, const Vec3& attach1,
                           const Vec3& litter) {
  if (outcome_.passed) return;
  if (truth.degenerate) {
    last_.reset();
    return;
  }
  const double psi = truth.shape.psi;
  const Vec3 lowest = lowest_point(truth.shape, attach1, truth.y_end);
  const Vec3 rel = litter - lowest;
  if (std::hypot(rel.x(), rel.y()) > rope_.length) {
    last_.reset();
    return;
  }
  Sample cur;
  cur.t = t;
  cur.side = Vec3(std::cos(psi), std::sin(psi), 0.0).dot(litter - attach1);
  cur.lateral = plane_axis(psi).dot(rel);
  cur.height = -rel.z();
  cur.a = std::max(truth.shape.a, 0.0);

  if (last_ && ((last_->side > 0.0 && cur.side <= 0.0) || (last_->side < 0.0 && cur.side >= 0.0))) {
    const double f = last_->side / (last_->side - cur.side);
    auto lerp = [f](double x0, double x1) { return x0 + f * (x1 - x0); };
    outcome_.passed = true;
    outcome_.time = lerp(last_->t, cur.t);
    outcome_.lateral_offset = std::abs(lerp(last_->lateral, cur.lateral));
    outcome_.hook_height = lerp(last_->height, cur.height);
    outcome_.d_hook = solve_span_for_length(lerp(last_->a, cur.a), rope_.hook_length);
    outcome_.margin = 0.5 * outcome_.d_hook - outcome_.lateral_offset;
    outcome_.success = outcome_.margin >= 0.0 && outcome_.hook_height <= contact_threshold_;
  }
  last_ = cur;
}

GraspOutcome GraspTracker::outcome() const {
  if (!outcome_.passed) throw NoPassError("grasp check: the rope never swept across the litter");
  return outcome_;
}

// ---------------------------------------------------------------- scenario

void ScenarioConfig::validate() const {
  rope.validate();
  planner.validate();
  servo.validate();
  estimation.validate();
  drone.validate();
  sensor.validate();
  litter.downwash.validate();
  if (!(control_rate > 0.0)) throw DomainError("control rate must be > 0");
  if (!(contact_threshold >= 0.0)) throw DomainError("contact threshold must be >= 0");
  if (!(litter.lateral_jitter >= 0.0)) throw DomainError("litter jitter must be >= 0");
  if (!drone2_bias.allFinite()) throw DomainError("drone2 bias must be finite");
}

HookTrajectory build_trajectory(const ScenarioConfig& cfg) {
  const double dt = 1.0 / cfg.control_rate;
  const auto& tr = cfg.trajectory;
  switch (tr.kind) {
    case TrajectorySpec::Kind::kStraight:
      return make_straight_trajectory(tr.start, cfg.litter.position, tr.speed, tr.ascent_rate,
                                      tr.ascent_duration, dt);
    case TrajectorySpec::Kind::kCircular:
      return make_circular_trajectory(tr.center, tr.start, cfg.litter.position, tr.speed,
                                      tr.ascent_rate, tr.ascent_duration, dt);
    case TrajectorySpec::Kind::kWaypoints:
      return make_waypoint_trajectory(tr.waypoints, dt);
    case TrajectorySpec::Kind::kHover:
      return make_waypoint_trajectory({{0.0, tr.start}, {tr.duration, tr.start}}, dt);
  }
  throw DomainError("unknown trajectory kind");
}

Eigen::Vector3d normalized_shape_error(const ShapeVector& s, const ShapeVector& s_ref) {
  Eigen::Vector3d e = shape_error(s, s_ref);
  for (int i = 0; i < 2; ++i) {
    if (std::abs(s_ref(i)) > 1e-12) e(i) /= std::abs(s_ref(i));
  }
  return e;
}

ScenarioRunLog run_scenario(const ScenarioConfig& cfg, const RunOptions& options) {
  cfg.validate();
  const HookTrajectory traj = build_trajectory(cfg);
  ScenarioRunLog log;
  log.plan = plan_trajectory(traj, cfg.planner, cfg.rope);
  const auto& steps = log.plan.steps;
  const double dt = traj.dt;
  const RopeSpec& rope = cfg.rope;

  SensorModel sensor = cfg.sensor;
  sensor.seed = cfg.seed;
  EstimationConfig est_cfg = cfg.estimation;
  est_cfg.seed = cfg.seed;
  ServoConfig servo_cfg = cfg.servo;
  servo_cfg.dt = 1.0 / sensor.frame_rate;

  // Litter placement: lateral jitter across the approach at the planned pass.
  Vec3 litter = cfg.litter.position;
  if (cfg.litter.lateral_jitter > 0.0) {
    auto rng = make_rng(cfg.seed, kLitterStream, 0);
    const double offset =
        std::uniform_real_distribution<double>(-1.0, 1.0)(rng) * cfg.litter.lateral_jitter;
    std::size_t nearest = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < steps.size(); ++k) {
      const Vec3 diff = steps[k].hook - litter;
      const double dist = std::hypot(diff.x(), diff.y());
      if (dist < best) {
        best = dist;
        nearest = k;
      }
    }
    litter += offset * plane_axis(steps[nearest].psi);
  }
  log.summary.litter_initial = litter;

  const Vec3 z_offset(0.0, 0.0, rope.attach_offset);
  DroneState drone1, drone2;
  drone1.p = steps.front().robot1;
  drone2.p = steps.front().robot2 + cfg.drone2_bias;
  drone1.yaw = steps.front().yaw1;
  drone2.yaw = steps.front().yaw2;

  ServoState servo;
  ShapeFilter filter;
  GraspTracker grasp(rope, cfg.contact_threshold);
  const double frame_period = 1.0 / sensor.frame_rate;
  double next_frame = 0.0;
  std::uint64_t frame_index = 0;

  double sq_cruise = 0.0, sq_all = 0.0, shape_cruise = 0.0;
  int n_cruise = 0, n_shape = 0;
  log.rows.reserve(steps.size());

  for (std::size_t k = 0; k < steps.size(); ++k) {
    const PlannedStep& step = steps[k];
    const double t = step.t;
    const Vec3 attach1 = drone1.p - z_offset;
    const Vec3 attach2 = drone2.p - z_offset;
    const TrueShape truth = rope_ground_truth(attach1, attach2, rope.length);

    LogRow row;
    row.t = t;
    row.phase = traj.samples[k].velocity.z() > 1e-12 ? 1 : 0;
    row.hook_ref = step.hook;
    row.hook_true = lowest_point(truth.shape, attach1, truth.y_end);
    row.s_true = truth.shape.vector();
    row.s_ref = reference_from_plan(step);
    row.d_ref = step.d;
    row.d_true = truth.y_end;

    if (t >= next_frame - 1e-9) {
      next_frame += frame_period;
      const RopePointCloud cloud = sample_sensor(truth, attach1, attach2, sensor, frame_index);
      const EstimatedShape est = estimate_shape(cloud, est_cfg, rope, filter);
      row.frame = true;
      row.estimate_stale = est.stale;
      ++log.summary.frames;
      if (est.stale) ++log.summary.stale_frames;
      if (cfg.servo_enabled && est.valid) {
        try {
          const Mat3 m = interaction_matrix(cloud.attach1, cloud.attach2, rope, servo_cfg);
          servo = servo_step(shape_error(est.shape.vector(), row.s_ref), servo, m, servo_cfg,
                             est.stale);
        } catch (const NumericError&) {
          // Near-taut or vertical rope: hold the current correction.
        }
      }
      if (est.valid && row.phase == 0) {
        shape_cruise += normalized_shape_error(est.shape.vector(), row.s_ref).norm();
        ++n_shape;
      }
      if (options.record_frames) log.frames.push_back({frame_index, t, cloud, est});
      ++frame_index;
    }
    if (filter.initialized) {
      row.estimate_valid = true;
      row.s_est = filter.state;
    }

    grasp.observe(t, truth, attach1, litter);

    row.robot1 = drone1.p;
    row.robot2 = drone2.p;
    row.correction1 = servo.correction1();
    row.correction2 = servo.correction2();
    row.command1 = step.robot1 + row.correction1;
    row.command2 = step.robot2 + row.correction2;
    row.v_rel = servo.velocity;
    row.litter = litter;
    log.summary.max_correction_sum =
        std::max(log.summary.max_correction_sum, (row.correction1 + row.correction2).norm());

    const double err2 = (row.hook_true - row.hook_ref).squaredNorm();
    sq_all += err2;
    if (row.phase == 0) {
      sq_cruise += err2;
      ++n_cruise;
    }
    log.rows.push_back(row);

    if (cfg.litter.downwash.enabled) {
      litter = downwash_drift(litter, {drone1.p, drone2.p}, dt, cfg.litter.downwash);
    }
    if (k + 1 < steps.size()) {
      const PlannedStep& next = steps[k + 1];
      drone1 = drone_step(drone1, row.command1, next.robot1 + row.correction1, step.yaw1,
                          cfg.drone, dt);
      drone2 = drone_step(drone2, row.command2 + cfg.drone2_bias,
                          next.robot2 + row.correction2 + cfg.drone2_bias, step.yaw2, cfg.drone,
                          dt);
    }
  }

  log.summary.hook_rmse = std::sqrt(sq_all / static_cast<double>(log.rows.size()));
  log.summary.hook_rmse_cruise = n_cruise > 0 ? std::sqrt(sq_cruise / n_cruise) : 0.0;
  log.summary.shape_error_cruise = n_shape > 0 ? shape_cruise / n_shape : 0.0;
  try {
    log.summary.grasp = grasp.outcome();
  } catch (const NoPassError& e) {
    log.summary.grasp_error = e.what();
  }
  return log;
}

// ---------------------------------------------------------------- ablation

AblationResult run_ablation(const ScenarioConfig& base, const std::vector<double>& weights,
                            int n_runs, std::uint64_t base_seed, int threads) {
  if (n_runs < 1) throw DomainError("ablation: n_runs must be >= 1");
  if (weights.empty()) throw DomainError("ablation: no weights given");
  base.validate();

  AblationResult result;
  const std::size_t total = weights.size() * static_cast<std::size_t>(n_runs);
  result.runs.resize(total);
  for (std::size_t i = 0; i < total; ++i) {
    result.runs[i].weight = weights[i / static_cast<std::size_t>(n_runs)];
    result.runs[i].seed = base_seed + i % static_cast<std::size_t>(n_runs);
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < total; i = next++) {
      AblationRun& run = result.runs[i];
      ScenarioConfig cfg = base;
      cfg.planner.w = run.weight;
      cfg.seed = run.seed;
      try {
        const ScenarioRunLog log = run_scenario(cfg);
        run.grasp = log.summary.grasp;
        run.error = log.summary.grasp_error;
      } catch (const std::exception& e) {
        run.error = e.what();
      }
    }
  };
  int n_threads = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  n_threads = std::clamp(n_threads, 1, static_cast<int>(total));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (std::size_t w = 0; w < weights.size(); ++w) {
    AblationRow row;
    row.weight = weights[w];
    for (int r = 0; r < n_runs; ++r) {
      const auto& run = result.runs[w * static_cast<std::size_t>(n_runs) + r];
      if (run.grasp.success) {
        ++row.successes;
      } else {
        ++row.failures;
      }
    }
    row.rate = static_cast<double>(row.successes) / n_runs;
    result.table.push_back(row);
  }
  return result;
}

}  // namespace dualrope
