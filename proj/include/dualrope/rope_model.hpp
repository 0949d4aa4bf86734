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

// Quasi-static rope closure: the hanging shape as a function of the two
// attachment points only. The parabola model drives the simulator; the
// catenary is kept as an independent reference.

#pragma once

#include <vector>

#include "dualrope/types.hpp"

namespace dualrope {

struct TrueShape {
  AttachFrameParabola shape;  ///< c = 0, phi = 0 (vertical plane)
  double y_end = 0.0;         ///< horizontal span
  double z_end = 0.0;         ///< height of attach2 over attach1
  bool degenerate = false;    ///< vertical hang: yaw undefined, shape zeroed
};

/// Parabola through both attachments with the rope's length, hanging in the
/// vertical plane that contains them. InfeasibleError when the rope would
/// have to stretch.
TrueShape rope_ground_truth(const Vec3& attach1, const Vec3& attach2, double length);

/// z = C cosh((y - y0)/C) + z0 through (0, 0) and (y_end, z_end).
struct Catenary {
  double c = 0.0;
  double y0 = 0.0;
  double z0 = 0.0;

  double height(double y) const;
  /// Arc length from y = 0.
  double arc_length_to(double y) const;
  /// Inverse of arc_length_to.
  double coordinate_at(double s) const;
};

Catenary solve_catenary(double y_end, double z_end, double length);

/// Node positions (links + 1 of them) of a chain of `links` equal links at
/// static equilibrium, i.e. the catenary sampled at equal arc length.
std::vector<Vec3> chain_equilibrium(const Vec3& attach1, const Vec3& attach2, double length,
                                    int links);

}  // namespace dualrope
