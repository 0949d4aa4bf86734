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

#pragma once

#include <Eigen/Core>

namespace dualrope {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Parabola parameter vector (a_p, b_p, psi_p) used by the estimator and the
// shape servo.
using ShapeVector = Eigen::Vector3d;

/// Physical constants of the rope manipulator.
struct RopeSpec {
  double length = 2.8;          ///< total rope length [m]
  double mass = 0.25;           ///< rope plus hook tool [kg]
  double hook_length = 0.30;    ///< arc length of the hooked middle section [m]
  double attach_offset = 0.12;  ///< attachment point below the robot CoM [m]
  double gravity = 9.81;        ///< [m/s^2]

  /// Throws DomainError when any invariant is violated.
  void validate() const;
};

/// Symmetric hanging shape z = a*y^2 + b*y expressed at the tool point.
/// `psi` is the yaw of the parabola plane, `phi` its roll.
struct ToolFrameParabola {
  double a = 0.0;
  double b = 0.0;
  double psi = 0.0;
  double phi = 0.0;
};

/// z = a*y^2 + b*y + c with the origin at robot 1's attachment point and the
/// y axis pointing horizontally towards robot 2's attachment point.
struct AttachFrameParabola {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double psi = 0.0;
  double phi = 0.0;

  ShapeVector vector() const { return {a, b, psi}; }
};

}  // namespace dualrope
