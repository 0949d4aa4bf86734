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

#include "dualrope/estimation.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <random>

#include "dualrope/errors.hpp"
#include "dualrope/geometry.hpp"
#include "dualrope/numerics.hpp"

namespace dualrope {

namespace {

constexpr double kCollinearRatio = 1e-8;
constexpr int kLevelSetGrid = 721;

bool finite_vec(const Vec3& v) { return v.allFinite(); }

PlaneFit vertical_plane(const RopePointCloud& cloud, double tol) {
  const Vec3 delta = cloud.attach2 - cloud.attach1;
  const double h = std::hypot(delta.x(), delta.y());
  if (!(h > 1e-9)) {
    throw DegenerateError("plane fit: attachments coincide horizontally");
  }
  PlaneFit fit;
  fit.normal = Vec3(delta.y() / h, -delta.x() / h, 0.0);
  fit.offset = -fit.normal.dot(cloud.attach1);
  fit.vertical_fallback = true;
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    if (std::abs(fit.normal.dot(cloud.points[i]) + fit.offset) <= tol) {
      fit.inliers.push_back(static_cast<int>(i));
    }
  }
  fit.inlier_count = static_cast<int>(fit.inliers.size());
  return fit;
}

struct Row {
  double y, z, w;
};

std::vector<Row> fit_rows(const std::vector<Vec3>& points, double y_end, double z_end,
                          const EstimationConfig& cfg) {
  std::vector<Row> rows;
  rows.reserve(points.size() + 2);
  rows.push_back({0.0, 0.0, cfg.w_manual});
  for (const auto& p : points) rows.push_back({p.y(), p.z(), cfg.w_depth});
  rows.push_back({y_end, z_end, cfg.w_gps});
  return rows;
}

// Weighted mean residual offset for fixed (a, b), and the resulting cost.
std::pair<double, double> best_offset(const std::vector<Row>& rows, double a, double b) {
  double sw = 0.0, swr = 0.0;
  for (const auto& r : rows) {
    sw += r.w;
    swr += r.w * (r.z - a * r.y * r.y - b * r.y);
  }
  const double c = sw > 0.0 ? swr / sw : 0.0;
  double q = 0.0;
  for (const auto& r : rows) {
    const double e = a * r.y * r.y + b * r.y + c - r.z;
    q += r.w * e * e;
  }
  return {c, q};
}

// Minimises the fit cost on {arc_length_general(a, b, Y) == target, a >= 0}.
// The length is convex in (a, b) with its minimum Y at the origin, so every
// ray from the origin in (aY, b) space meets the level set exactly once.
ParabolaFit fit_on_level_set(const std::vector<Row>& rows, double y_end, double target) {
  if (!(target > y_end * (1.0 + 1e-12))) {
    throw InfeasibleError("parabola fit: attachments are further apart than the length bound");
  }
  auto point_on_ray = [&](double alpha) {
    const double cp = std::cos(alpha), sp = std::sin(alpha);
    auto excess = [&](double r) {
      return arc_length_general(r * cp / y_end, r * sp, y_end) - target;
    };
    double hi = 1.0;
    int grow = 0;
    while (excess(hi) < 0.0) {
      hi *= 2.0;
      if (++grow > 80) throw ConvergenceError("parabola fit: level set not bracketed");
    }
    numerics::RootOptions opt;
    opt.x_tol_rel = 1e-14;
    const double r = numerics::brent_root(excess, 0.0, hi, opt);
    return std::pair{r * cp / y_end, r * sp};
  };
  auto cost = [&](double alpha) {
    auto [a, b] = point_on_ray(alpha);
    return best_offset(rows, a, b).second;
  };
  constexpr double half_pi = 0.5 * std::numbers::pi;
  const auto best = numerics::grid_then_golden(cost, -half_pi, half_pi, kLevelSetGrid, 1e-12);
  auto [a, b] = point_on_ray(best.x);
  ParabolaFit fit;
  fit.a = a;
  fit.b = b;
  std::tie(fit.c, fit.objective) = best_offset(rows, a, b);
  fit.length = arc_length_general(a, b, y_end);
  return fit;
}

}  // namespace

void EstimationConfig::validate() const {
  if (!(voxel_size > 0.0) || !std::isfinite(voxel_size))
    throw DomainError("voxel size must be > 0");
  if (ransac_iterations < 1) throw DomainError("RANSAC iterations must be >= 1");
  if (!(ransac_inlier_tol > 0.0)) throw DomainError("RANSAC inlier tolerance must be > 0");
  if (!(w_manual >= 0.0 && w_depth >= 0.0 && w_gps >= 0.0))
    throw DomainError("fit weights must be >= 0");
  if (!(w_manual + w_depth + w_gps > 0.0)) throw DomainError("fit weights must not all be 0");
  if (!((process_var.array() >= 0.0).all() && (measurement_var.array() >= 0.0).all()))
    throw DomainError("Kalman variances must be >= 0");
}

std::vector<Vec3> voxel_downsample(const std::vector<Vec3>& points, double voxel_size) {
  if (!(voxel_size > 0.0)) throw DomainError("voxel_downsample: voxel size must be > 0");
  std::map<std::array<long long, 3>, std::pair<Vec3, int>> cells;
  for (const auto& p : points) {
    if (!finite_vec(p)) continue;
    const std::array<long long, 3> key{static_cast<long long>(std::floor(p.x() / voxel_size)),
                                       static_cast<long long>(std::floor(p.y() / voxel_size)),
                                       static_cast<long long>(std::floor(p.z() / voxel_size))};
    auto& cell = cells[key];
    if (cell.second == 0) cell.first.setZero();
    cell.first += p;
    ++cell.second;
  }
  std::vector<Vec3> out;
  out.reserve(cells.size());
  for (const auto& [key, cell] : cells) out.push_back(cell.first / cell.second);
  return out;
}

PlaneFit fit_plane_ransac(const RopePointCloud& cloud, const EstimationConfig& cfg) {
  const double tol = cfg.ransac_inlier_tol;
  std::vector<Vec3> all = cloud.points;
  all.push_back(cloud.attach1);
  all.push_back(cloud.attach2);
  const int n = static_cast<int>(all.size());
  if (n < 5) return vertical_plane(cloud, tol);

  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<int> pick(0, n - 1);
  const double tol2 = tol * tol;
  double best_cost = std::numeric_limits<double>::infinity();
  Vec3 best_n = Vec3::Zero();
  double best_off = 0.0;
  for (int it = 0; it < cfg.ransac_iterations; ++it) {
    const int i = pick(rng), j = pick(rng), k = pick(rng);
    if (i == j || j == k || i == k) continue;
    Vec3 nn = (all[j] - all[i]).cross(all[k] - all[i]);
    const double norm = nn.norm();
    if (!(norm > 1e-12)) continue;
    nn /= norm;
    const double off = -nn.dot(all[i]);
    double c = 0.0;
    for (const auto& p : all) {
      const double r = nn.dot(p) + off;
      c += std::min(r * r, tol2);
    }
    if (c < best_cost) {
      best_cost = c;
      best_n = nn;
      best_off = off;
    }
  }
  if (!std::isfinite(best_cost)) return vertical_plane(cloud, tol);

  // Least-squares refit on the consensus set plus both attachments.
  std::vector<Vec3> consensus;
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    if (std::abs(best_n.dot(cloud.points[i]) + best_off) <= tol) consensus.push_back(cloud.points[i]);
  }
  consensus.push_back(cloud.attach1);
  consensus.push_back(cloud.attach2);
  if (consensus.size() < 3) return vertical_plane(cloud, tol);
  Vec3 centroid = Vec3::Zero();
  for (const auto& p : consensus) centroid += p;
  centroid /= static_cast<double>(consensus.size());
  Mat3 scatter = Mat3::Zero();
  for (const auto& p : consensus) scatter += (p - centroid) * (p - centroid).transpose();
  Eigen::SelfAdjointEigenSolver<Mat3> eig(scatter);
  const Eigen::Vector3d ev = eig.eigenvalues();
  if (!(ev(1) > kCollinearRatio * ev(2))) return vertical_plane(cloud, tol);

  PlaneFit fit;
  fit.normal = eig.eigenvectors().col(0).normalized();
  fit.offset = -fit.normal.dot(centroid);
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    if (std::abs(fit.normal.dot(cloud.points[i]) + fit.offset) <= tol) {
      fit.inliers.push_back(static_cast<int>(i));
    }
  }
  fit.inlier_count = static_cast<int>(fit.inliers.size());
  return fit;
}

Vec3 orient_normal(const Vec3& n, const Vec3& attach1, const Vec3& attach2) {
  const Vec3 axis(-n.y(), n.x(), 0.0);
  return axis.dot(attach2 - attach1) < 0.0 ? Vec3(-n) : n;
}

PlaneAngles plane_angles(const Vec3& n) {
  const double h = std::hypot(n.x(), n.y());
  if (!(h > 1e-12)) throw DegenerateError("plane_angles: horizontal plane");
  return {std::atan2(n.y(), n.x()), std::atan2(n.z(), h)};
}

Vec3 to_attach_frame(const Vec3& p, const Vec3& origin, double psi) {
  return rot_z(-psi) * (p - origin);
}

std::vector<Vec3> to_attach_frame(const std::vector<Vec3>& points, const Vec3& origin,
                                  double psi) {
  const Mat3 r = rot_z(-psi);
  std::vector<Vec3> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(r * (p - origin));
  return out;
}

Vec3 from_attach_frame(const Vec3& q, const Vec3& origin, double psi) {
  return origin + rot_z(psi) * q;
}

double parabola_objective(const std::vector<Vec3>& points, double y_end, double z_end,
                          const EstimationConfig& cfg, double a, double b, double c) {
  double q = 0.0;
  for (const auto& r : fit_rows(points, y_end, z_end, cfg)) {
    const double e = a * r.y * r.y + b * r.y + c - r.z;
    q += r.w * e * e;
  }
  return q;
}

ParabolaFit fit_parabola(const std::vector<Vec3>& points, double y_end, double z_end,
                         const EstimationConfig& cfg, const RopeSpec& rope) {
  if (!(y_end > 0.0) || !std::isfinite(y_end) || !std::isfinite(z_end)) {
    throw DomainError("fit_parabola: second attachment must lie at y > 0 in the attach frame");
  }
  const auto rows = fit_rows(points, y_end, z_end, cfg);

  // Normal equations in columns scaled by (Y^2, Y, 1) for a unit-free rank test.
  const Eigen::Vector3d scale(y_end * y_end, y_end, 1.0);
  Eigen::Matrix3d normal = Eigen::Matrix3d::Zero();
  Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
  for (const auto& r : rows) {
    const Eigen::Vector3d x(r.y * r.y / scale(0), r.y / scale(1), 1.0);
    normal += r.w * x * x.transpose();
    rhs += r.w * r.z * x;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(normal);
  const double lmax = eig.eigenvalues()(2);
  const bool determined = lmax > 0.0 && eig.eigenvalues()(0) > 1e-10 * lmax;

  if (!determined) {
    ParabolaFit fit = fit_on_level_set(rows, y_end, rope.length);
    fit.constraint = LengthConstraint::kPinned;
    return fit;
  }

  const Eigen::Vector3d theta = normal.ldlt().solve(rhs).cwiseQuotient(scale);
  ParabolaFit fit;
  fit.a = theta(0);
  fit.b = theta(1);
  fit.c = theta(2);
  fit.length = arc_length_general(fit.a, fit.b, y_end);
  const double lo = kLengthBandLow * rope.length;
  const double hi = kLengthBandHigh * rope.length;
  if (fit.length >= lo && fit.length <= hi) {
    fit.objective = parabola_objective(points, y_end, z_end, cfg, fit.a, fit.b, fit.c);
    fit.constraint = LengthConstraint::kInactive;
    return fit;
  }
  const bool below = fit.length < lo;
  ParabolaFit constrained = fit_on_level_set(rows, y_end, below ? lo : hi);
  constrained.constraint = below ? LengthConstraint::kLower : LengthConstraint::kUpper;
  return constrained;
}

ShapeFilter kalman_predict(const ShapeFilter& filter, const EstimationConfig& cfg) {
  ShapeFilter next = filter;
  if (next.initialized) next.variance += cfg.process_var;
  return next;
}

ShapeFilter kalman_update(const ShapeFilter& filter, const ShapeVector& measurement,
                          const EstimationConfig& cfg) {
  if (!measurement.allFinite()) return kalman_predict(filter, cfg);
  ShapeFilter next;
  next.initialized = true;
  if (!filter.initialized) {
    next.state = measurement;
    next.state(2) = wrap_angle(measurement(2));
    next.variance = cfg.measurement_var;
    return next;
  }
  const ShapeFilter prior = kalman_predict(filter, cfg);
  for (int i = 0; i < 3; ++i) {
    const double p = prior.variance(i);
    const double s = p + cfg.measurement_var(i);
    const double gain = s > 0.0 ? p / s : 1.0;
    double innovation = measurement(i) - prior.state(i);
    if (i == 2) innovation = wrap_angle(innovation);
    next.state(i) = prior.state(i) + gain * innovation;
    next.variance(i) = (1.0 - gain) * p;
  }
  next.state(2) = wrap_angle(next.state(2));
  return next;
}

EstimatedShape estimate_shape(const RopePointCloud& cloud, const EstimationConfig& cfg,
                              const RopeSpec& rope, ShapeFilter& filter) {
  EstimatedShape out;
  out.origin = cloud.attach1;
  try {
    if (!finite_vec(cloud.attach1) || !finite_vec(cloud.attach2)) {
      throw DegenerateError("estimate_shape: non-finite attachment");
    }
    RopePointCloud ds{voxel_downsample(cloud.points, cfg.voxel_size), cloud.attach1,
                      cloud.attach2};
    const PlaneFit plane = fit_plane_ransac(ds, cfg);
    const Vec3 n = orient_normal(plane.normal, cloud.attach1, cloud.attach2);
    const PlaneAngles angles = plane_angles(n);
    std::vector<Vec3> inliers;
    inliers.reserve(plane.inliers.size());
    for (int idx : plane.inliers) inliers.push_back(ds.points[idx]);
    const auto local = to_attach_frame(inliers, cloud.attach1, angles.psi);
    const Vec3 end = to_attach_frame(cloud.attach2, cloud.attach1, angles.psi);
    const ParabolaFit fit = fit_parabola(local, end.y(), end.z(), cfg, rope);

    out.raw = ShapeVector(fit.a, fit.b, angles.psi);
    filter = kalman_update(filter, out.raw, cfg);
    out.y_end = end.y();
    out.z_end = end.z();
    out.inliers = plane.inlier_count;
    out.constraint = fit.constraint;
    out.shape.c = fit.c;
    out.shape.phi = angles.phi;
  } catch (const NumericError&) {
    filter = kalman_predict(filter, cfg);
    out.stale = true;
  } catch (const DomainError&) {
    filter = kalman_predict(filter, cfg);
    out.stale = true;
  }
  out.valid = filter.initialized;
  out.shape.a = filter.state(0);
  out.shape.b = filter.state(1);
  out.shape.psi = filter.state(2);
  out.variance = filter.variance;
  return out;
}

}  // namespace dualrope
