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

// Closed-form geometry of a rope hanging as a parabola.
//
// Two parameterisations are used throughout:
//   * tool frame:   z = a*y^2 with y in [-d/2, d/2], d the horizontal span;
//   * attach frame: z = a*y^2 + b*y + c with y in [0, y_span], origin at the
//     first attachment point.
// All functions are pure and thread-safe.

#pragma once

#include "dualrope/types.hpp"

namespace dualrope {

/// Below this value of a*d the symmetric arc length uses its Taylor series.
inline constexpr double kArcSeriesThreshold = 1e-6;

/// Arc length of z = a*y^2 over y in [-d/2, d/2]:
///   L = (a*d*sqrt(1 + (a*d)^2) + asinh(a*d)) / (2a),  L -> d as a -> 0.
/// Throws DomainError for negative or non-finite inputs.
double arc_length(double a, double span);

/// Arc length of z = a*y^2 + b*y over y in [0, y_span]. Any finite a, b.
double arc_length_general(double a, double b, double y_span);

/// Unique a >= 0 with arc_length(a, span) == length.
/// DomainError for span <= 0, InfeasibleError when span >= length.
double solve_curvature_for_length(double span, double length);

/// Horizontal span covered by an arc of the given length centred on the
/// vertex of z = a*y^2 (the hook ground coverage when length = l_hook).
double solve_span_for_length(double a, double length);

/// y_span >= 0 with arc_length_general(a, b, y_span) == length.
double solve_extent_for_length(double a, double b, double length);

struct Tension {
  double magnitude = 0.0;   ///< |T| at either endpoint [N]
  double horizontal = 0.0;  ///< H [N]
  double vertical = 0.0;    ///< V = m g / 2 [N]
};

/// Endpoint tension of the symmetric parabola. SingularError when a*d == 0.
Tension endpoint_tension(double a, double span, const RopeSpec& rope);

/// Vertical drop from the attachment height to the vertex, a*(d/2)^2.
double sag(double a, double span);

/// Tool-frame symmetric shape to the attachment frame:
/// a_p = a, b_p = -a*d, c_p = 0, same yaw and roll.
AttachFrameParabola tool_to_attach_frame(const ToolFrameParabola& shape, double span);

/// Rotation about the world z axis.
Mat3 rot_z(double psi);

/// Wraps an angle to (-pi, pi].
double wrap_angle(double angle);

/// Unit horizontal direction of the attach-frame y axis, R_z(psi) * e_y.
Vec3 plane_axis(double psi);

/// World position of the parabola point at attach-frame coordinate y.
Vec3 attach_frame_point(const AttachFrameParabola& shape, const Vec3& origin, double y);

/// Lowest point of the attach-frame curve restricted to [0, y_span].
Vec3 lowest_point(const AttachFrameParabola& shape, const Vec3& origin, double y_span);

}  // namespace dualrope
