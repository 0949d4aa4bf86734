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

// Shape visual servoing: a PI law on the parabola parameter error producing a
// relative velocity between the two attachments, split symmetrically into
// position corrections so the rope midpoint reference is left untouched.

#pragma once

#include <deque>

#include "dualrope/planner.hpp"
#include "dualrope/types.hpp"

namespace dualrope {

struct ServoConfig {
  double k_c = 0.5;          ///< proportional gain [1/s]
  double k_i = 0.005;        ///< gain on the windowed error sum [1/s]
  int n_w = 50;              ///< integral window length [samples]
  double dt = 1.0 / 15.0;    ///< controller period [s]
  double v_corr_max = 0.5;   ///< per-axis saturation of v_rel [m/s]
  double fd_step = 1e-5;     ///< finite-difference step for the Jacobian [m]
  double max_condition = 1e8;
  /// Swaps which robot receives +v_rel/2. The default closes the loop with
  /// decreasing error when M inverts d s / d (p_A2 - p_A1).
  bool flip_split = false;

  void validate() const;
};

struct ServoState {
  std::deque<ShapeVector> window;
  Vec3 correction = Vec3::Zero();  ///< accumulated correction of robot 1
  Vec3 velocity = Vec3::Zero();    ///< last commanded v_rel

  Vec3 correction1() const { return correction; }
  Vec3 correction2() const { return -correction; }
};

/// s - s_ref with the yaw component wrapped to (-pi, pi].
ShapeVector shape_error(const ShapeVector& s, const ShapeVector& s_ref);

/// (a, -a d, psi) for a planned symmetric shape.
ShapeVector reference_from_plan(const PlannedStep& step);

/// d s / d Delta of the quasi-static rope model at Delta = attach2 - attach1,
/// by central differences.
Mat3 forward_jacobian(const Vec3& attach1, const Vec3& attach2, const RopeSpec& rope,
                      double step);

/// Inverse of forward_jacobian; SingularError above cfg.max_condition.
Mat3 interaction_matrix(const Vec3& attach1, const Vec3& attach2, const RopeSpec& rope,
                        const ServoConfig& cfg);

/// One controller update. A stale estimate leaves the integral window as it
/// is. Returns the updated state; corrections are read from it.
ServoState servo_step(const ShapeVector& error, const ServoState& state, const Mat3& m,
                      const ServoConfig& cfg, bool stale = false);

}  // namespace dualrope
