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

#include "dualrope/servo.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>
#include <cmath>

#include "dualrope/errors.hpp"
#include "dualrope/geometry.hpp"
#include "dualrope/rope_model.hpp"

namespace dualrope {

void ServoConfig::validate() const {
  if (!(k_c > 0.0)) throw DomainError("servo k_c must be > 0");
  if (!(k_i >= 0.0)) throw DomainError("servo k_i must be >= 0");
  if (n_w < 1) throw DomainError("servo window must hold at least one sample");
  if (!(dt > 0.0)) throw DomainError("servo dt must be > 0");
  if (!(v_corr_max > 0.0)) throw DomainError("servo v_corr_max must be > 0");
  if (!(fd_step > 0.0)) throw DomainError("servo finite-difference step must be > 0");
  if (!(max_condition > 1.0)) throw DomainError("servo condition limit must be > 1");
}

ShapeVector shape_error(const ShapeVector& s, const ShapeVector& s_ref) {
  ShapeVector e = s - s_ref;
  e(2) = wrap_angle(e(2));
  return e;
}

ShapeVector reference_from_plan(const PlannedStep& step) {
  const auto p = tool_to_attach_frame({step.a, 0.0, step.psi, 0.0}, step.d);
  return p.vector();
}

Mat3 forward_jacobian(const Vec3& attach1, const Vec3& attach2, const RopeSpec& rope,
                      double step) {
  Mat3 j;
  for (int k = 0; k < 3; ++k) {
    Vec3 dp = Vec3::Zero();
    dp(k) = step;
    const TrueShape plus = rope_ground_truth(attach1, attach2 + dp, rope.length);
    const TrueShape minus = rope_ground_truth(attach1, attach2 - dp, rope.length);
    if (plus.degenerate || minus.degenerate)
      throw SingularError("forward_jacobian: vertical hang");
    ShapeVector diff = shape_error(plus.shape.vector(), minus.shape.vector());
    j.col(k) = diff / (2.0 * step);
  }
  return j;
}

Mat3 interaction_matrix(const Vec3& attach1, const Vec3& attach2, const RopeSpec& rope,
                        const ServoConfig& cfg) {
  const Mat3 j = forward_jacobian(attach1, attach2, rope, cfg.fd_step);
  Eigen::JacobiSVD<Mat3> svd(j);
  const Eigen::Vector3d sv = svd.singularValues();
  if (!(sv(2) > 0.0) || sv(0) / sv(2) > cfg.max_condition)
    throw SingularError("interaction_matrix: ill-conditioned shape Jacobian");
  return j.inverse();
}

ServoState servo_step(const ShapeVector& error, const ServoState& state, const Mat3& m,
                      const ServoConfig& cfg, bool stale) {
  ServoState next = state;
  if (!stale) {
    next.window.push_back(error);
    while (static_cast<int>(next.window.size()) > cfg.n_w) next.window.pop_front();
  }
  ShapeVector sum = ShapeVector::Zero();
  for (const auto& e : next.window) sum += e;
  Vec3 v = cfg.k_c * (m * error) + cfg.k_i * (m * sum);
  v = v.cwiseMax(-cfg.v_corr_max).cwiseMin(cfg.v_corr_max);
  next.velocity = v;
  const Vec3 half_step = 0.5 * cfg.dt * v;
  next.correction += cfg.flip_split ? Vec3(-half_step) : half_step;
  return next;
}

}  // namespace dualrope
