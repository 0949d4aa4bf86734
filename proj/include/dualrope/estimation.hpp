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

// Parabola shape estimation from a world-frame rope point cloud.
//
// Pipeline: voxel downsampling -> RANSAC plane fit (attachment points always
// part of the consensus) -> plane yaw/roll -> attach frame -> weighted,
// length-constrained parabola fit -> per-parameter Kalman smoothing.

#pragma once

#include <cstdint>
#include <vector>

#include "dualrope/types.hpp"

namespace dualrope {

struct RopePointCloud {
  std::vector<Vec3> points;  ///< sensed rope points, world frame
  Vec3 attach1 = Vec3::Zero();
  Vec3 attach2 = Vec3::Zero();
};

struct EstimationConfig {
  double voxel_size = 0.02;
  int ransac_iterations = 200;
  double ransac_inlier_tol = 0.03;
  double w_manual = 100.0;  ///< weight of the first attachment (origin) term
  double w_depth = 1.0;     ///< weight of each depth point
  double w_gps = 10.0;      ///< weight of the second attachment term
  Eigen::Vector3d process_var{1e-4, 1e-4, 1e-4};
  Eigen::Vector3d measurement_var{1e-2, 1e-2, 1e-2};
  std::uint64_t seed = 0;

  void validate() const;
};

std::vector<Vec3> voxel_downsample(const std::vector<Vec3>& points, double voxel_size);

struct PlaneFit {
  Vec3 normal = Vec3::UnitX();  ///< unit normal
  double offset = 0.0;          ///< plane: normal . p + offset = 0
  int inlier_count = 0;         ///< camera points in the consensus set
  std::vector<int> inliers;     ///< indices into cloud.points
  bool vertical_fallback = false;
};

/// RANSAC plane through the cloud with a least-squares refit on the
/// consensus set. Collinear data (taut rope, endpoints only) falls back to the
/// vertical plane through both attachments. Deterministic for a fixed seed.
PlaneFit fit_plane_ransac(const RopePointCloud& cloud, const EstimationConfig& cfg);

/// Flips `n` so that e_z x n points horizontally from attach1 to attach2.
Vec3 orient_normal(const Vec3& n, const Vec3& attach1, const Vec3& attach2);

struct PlaneAngles {
  double psi = 0.0;  ///< yaw: the plane's horizontal in-plane axis is R_z(psi) e_y
  double phi = 0.0;  ///< roll
};

/// psi = atan2(n_y, n_x), phi = atan2(n_z, |n_xy|). DegenerateError for a
/// horizontal plane.
PlaneAngles plane_angles(const Vec3& n);

/// World -> attach frame: R_z(-psi) (p - origin).
std::vector<Vec3> to_attach_frame(const std::vector<Vec3>& points, const Vec3& origin,
                                  double psi);
Vec3 to_attach_frame(const Vec3& p, const Vec3& origin, double psi);
Vec3 from_attach_frame(const Vec3& q, const Vec3& origin, double psi);

enum class LengthConstraint { kInactive, kLower, kUpper, kPinned };

struct ParabolaFit {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double objective = 0.0;
  double length = 0.0;  ///< arc_length_general(a, b, y_end)
  LengthConstraint constraint = LengthConstraint::kInactive;
};

inline constexpr double kLengthBandLow = 0.9;
inline constexpr double kLengthBandHigh = 1.1;

/// Weighted least squares
///   w_m c^2 + sum_i w_d (a y_i^2 + b y_i + c - z_i)^2 + w_p (a Y^2 + b Y + c - Z)^2
/// subject to 0.9 l <= arc_length_general(a, b, Y) <= 1.1 l, with (Y, Z) the
/// second attachment in the attach frame. When the data leave the curvature
/// undetermined (endpoints only) the length is pinned to l. Only the
/// in-plane (y, z) coordinates of `points` are used.
ParabolaFit fit_parabola(const std::vector<Vec3>& points, double y_end, double z_end,
                         const EstimationConfig& cfg, const RopeSpec& rope);

/// Weighted fit objective for given parameters.
double parabola_objective(const std::vector<Vec3>& points, double y_end, double z_end,
                          const EstimationConfig& cfg, double a, double b, double c);

/// Three independent random-walk Kalman filters over (a_p, b_p, psi_p).
struct ShapeFilter {
  bool initialized = false;
  ShapeVector state = ShapeVector::Zero();
  Eigen::Vector3d variance = Eigen::Vector3d::Zero();
};

/// Predict + update. The first finite measurement initialises the state; a
/// non-finite one only runs the prediction. The psi innovation is wrapped.
ShapeFilter kalman_update(const ShapeFilter& filter, const ShapeVector& measurement,
                          const EstimationConfig& cfg);
ShapeFilter kalman_predict(const ShapeFilter& filter, const EstimationConfig& cfg);

struct EstimatedShape {
  AttachFrameParabola shape;                   ///< filtered a, b, psi; raw c, phi
  ShapeVector raw = ShapeVector::Zero();       ///< unfiltered (a, b, psi)
  Eigen::Vector3d variance = Eigen::Vector3d::Zero();
  Vec3 origin = Vec3::Zero();                  ///< attach1 used as frame origin
  double y_end = 0.0;
  double z_end = 0.0;
  int inliers = 0;
  LengthConstraint constraint = LengthConstraint::kInactive;
  bool stale = false;  ///< the pipeline failed; shape is the filter prediction
  bool valid = false;  ///< false until the filter has been initialised
};

EstimatedShape estimate_shape(const RopePointCloud& cloud, const EstimationConfig& cfg,
                              const RopeSpec& rope, ShapeFilter& filter);

}  // namespace dualrope
