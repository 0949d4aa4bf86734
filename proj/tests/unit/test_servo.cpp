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

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <random>

#include "dualrope/errors.hpp"
#include "dualrope/geometry.hpp"
#include "dualrope/rope_model.hpp"
#include "dualrope/servo.hpp"

namespace dualrope {
namespace {

struct Pair {
  Vec3 a1, a2;
};

Pair level_pair(double d, double psi) {
  const Vec3 a1(0.2, -0.1, 1.5);
  return {a1, a1 + rot_z(psi) * Vec3(0.0, d, 0.0)};
}

TEST(ShapeError, Examples) {
  const ShapeVector s(0.5, -1.0, 0.2);
  EXPECT_TRUE(shape_error(s, s).isZero(0.0));
  const ShapeVector e = shape_error({0.0, 0.0, 3.1}, {0.0, 0.0, -3.1});
  EXPECT_NEAR(e(2), -0.0832, 5e-5);
  EXPECT_NEAR(e(2), 6.2 - 2.0 * std::numbers::pi, 1e-14);
}

TEST(ReferenceFromPlan, Example) {
  PlannedStep step;
  step.a = 0.5;
  step.d = 2.0;
  step.psi = std::numbers::pi / 2;
  const ShapeVector r = reference_from_plan(step);
  EXPECT_DOUBLE_EQ(r(0), 0.5);
  EXPECT_DOUBLE_EQ(r(1), -1.0);
  EXPECT_DOUBLE_EQ(r(2), std::numbers::pi / 2);
}

TEST(Jacobian, YawRowFromRigidRotation) {
  const RopeSpec rope;
  for (double psi : {0.0, 0.8, -2.2}) {
    for (double d : {1.2, 2.0}) {
      const Pair p = level_pair(d, psi);
      const Mat3 j = forward_jacobian(p.a1, p.a2, rope, 1e-5);
      const Vec3 tangential = rot_z(psi) * Vec3(-1.0, 0.0, 0.0);
      const Vec3 col = j * tangential;
      EXPECT_NEAR(col(2), 1.0 / d, 1e-6);
      EXPECT_NEAR(col(0), 0.0, 1e-6);
      EXPECT_NEAR(col(1), 0.0, 1e-6);
    }
  }
}

TEST(Jacobian, SeparationFlattensRope) {
  const RopeSpec rope;
  for (double d : {0.8, 1.5, 2.4}) {
    const Pair p = level_pair(d, 0.4);
    const Mat3 j = forward_jacobian(p.a1, p.a2, rope, 1e-5);
    const Vec3 along = (p.a2 - p.a1).normalized();
    EXPECT_LT((j * along)(0), 0.0);
    // Oracle from the symmetric closed form: d a / d d along the level line.
    const double h = 1e-6;
    const double dadd = (solve_curvature_for_length(d + h, rope.length) -
                         solve_curvature_for_length(d - h, rope.length)) /
                        (2.0 * h);
    EXPECT_NEAR((j * along)(0), dadd, 1e-5 * std::abs(dadd) + 1e-7);
  }
}

TEST(InteractionMatrix, InvertsJacobian) {
  const RopeSpec rope;
  const ServoConfig cfg;
  for (double d : {1.0, 1.8, 2.5}) {
    const Pair p = level_pair(d, 1.1);
    const Mat3 m = interaction_matrix(p.a1, p.a2, rope, cfg);
    const Mat3 j = forward_jacobian(p.a1, p.a2, rope, cfg.fd_step);
    EXPECT_LE((m * j - Mat3::Identity()).cwiseAbs().maxCoeff(), 1e-6);
  }
}

TEST(InteractionMatrix, TautRopeIsRejected) {
  const RopeSpec rope;
  const Pair p = level_pair(rope.length, 0.0);
  EXPECT_THROW(interaction_matrix(p.a1, p.a2, rope, ServoConfig{}), NumericError);
}

TEST(ServoStep, ZeroErrorIsInert) {
  const ServoConfig cfg;
  const ServoState s = servo_step(ShapeVector::Zero(), ServoState{}, Mat3::Identity(), cfg);
  EXPECT_TRUE(s.velocity.isZero(0.0));
  EXPECT_TRUE(s.correction.isZero(0.0));
}

TEST(ServoStep, ProportionalAndIntegralTerms) {
  ServoConfig cfg;
  cfg.k_c = 0.7;
  cfg.k_i = 0.1;
  const Mat3 m = Vec3(1.0, 2.0, 3.0).asDiagonal();
  ServoState s = servo_step(ShapeVector(0.01, 0.0, 0.0), ServoState{}, m, cfg);
  s = servo_step(ShapeVector(0.02, 0.0, 0.0), s, m, cfg);
  EXPECT_NEAR(s.velocity.x(), 0.7 * 0.02 + 0.1 * 0.03, 1e-15);
  EXPECT_NEAR(s.correction.x(), 0.5 * cfg.dt * (0.7 * 0.01 + 0.1 * 0.01 + s.velocity.x()), 1e-15);
}

TEST(ServoStep, WindowForgetsOldErrorsExactly) {
  ServoConfig cfg;
  cfg.n_w = 5;
  cfg.k_c = 1.0;
  cfg.k_i = 1.0;
  ServoState s = servo_step(ShapeVector(1e3, 0.0, 0.0), ServoState{}, Mat3::Identity(), cfg);
  for (int k = 0; k < cfg.n_w; ++k)
    s = servo_step(ShapeVector(0.0, 0.25, 0.0), s, Mat3::Identity(), cfg);
  ASSERT_EQ(static_cast<int>(s.window.size()), cfg.n_w);
  // The large early error no longer contributes at all.
  EXPECT_EQ(s.velocity.x(), 0.0);
  EXPECT_EQ(s.velocity.y(), std::min(cfg.v_corr_max, 0.25 + 5 * 0.25));
}

TEST(ServoStep, StaleFreezesWindow) {
  ServoConfig cfg;
  ServoState s = servo_step(ShapeVector(0.1, 0.0, 0.0), ServoState{}, Mat3::Identity(), cfg);
  const ServoState t = servo_step(ShapeVector(0.5, 0.0, 0.0), s, Mat3::Identity(), cfg, true);
  EXPECT_EQ(t.window.size(), s.window.size());
  EXPECT_EQ(t.window.back(), s.window.back());
}

TEST(ServoStep, Saturates) {
  ServoConfig cfg;
  cfg.v_corr_max = 0.2;
  const ServoState s =
      servo_step(ShapeVector(10.0, -10.0, 0.01), ServoState{}, Mat3::Identity(), cfg);
  EXPECT_DOUBLE_EQ(s.velocity.x(), 0.2);
  EXPECT_DOUBLE_EQ(s.velocity.y(), -0.2);
  EXPECT_LT(std::abs(s.velocity.z()), 0.2);
}

TEST(ServoStep, CorrectionsStayAntisymmetric) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0.0, 0.3);
  ServoConfig cfg;
  ServoState s;
  Mat3 m;
  m << 1.0, 0.2, -0.3, 0.1, 2.0, 0.4, 0.0, -0.5, 1.5;
  for (int k = 0; k < 500; ++k) {
    s = servo_step(ShapeVector(n(rng), n(rng), n(rng)), s, m, cfg, k % 7 == 0);
    const Vec3 p1(1.0, 2.0, 3.0), p2(-4.0, 0.5, 2.0);
    EXPECT_EQ((s.correction1() + s.correction2()).norm(), 0.0);
    const Vec3 mid = 0.5 * ((p1 + s.correction1()) + (p2 + s.correction2()));
    EXPECT_LE((mid - 0.5 * (p1 + p2)).norm(), 1e-12);
  }
}

TEST(ServoStep, FlipSplitReversesSign) {
  ServoConfig cfg;
  const ServoState a = servo_step(ShapeVector(0.1, 0.0, 0.0), ServoState{}, Mat3::Identity(), cfg);
  cfg.flip_split = true;
  const ServoState b = servo_step(ShapeVector(0.1, 0.0, 0.0), ServoState{}, Mat3::Identity(), cfg);
  EXPECT_EQ(a.correction, Vec3(-b.correction));
}

TEST(ClosedLoop, LinearisedIterationIsContractive) {
  const RopeSpec rope;
  const ServoConfig cfg;
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ud(0.9, 2.5), upsi(-3.0, 3.0), uz(-0.3, 0.3);
  for (int k = 0; k < 10; ++k) {
    const double d = ud(rng), psi = upsi(rng);
    Pair p = level_pair(d, psi);
    p.a2.z() += uz(rng);
    const Mat3 m = interaction_matrix(p.a1, p.a2, rope, cfg);
    // Plant seen from a nearby, different shape: the gain is frozen.
    const Pair q{p.a1, p.a2 + Vec3(0.02, -0.03, 0.01)};
    for (const Pair& plant : {p, q}) {
      const Mat3 j = forward_jacobian(plant.a1, plant.a2, rope, cfg.fd_step);
      const Mat3 iter = Mat3::Identity() - cfg.dt * cfg.k_c * j * m;
      const auto eig = iter.eigenvalues();
      for (int i = 0; i < 3; ++i) EXPECT_LT(std::abs(eig(i)), 1.0);
    }
  }
}

TEST(ClosedLoop, QuasiStaticLoopConvergesOnTrueShape) {
  const RopeSpec rope;
  ServoConfig cfg;
  const Pair ref = level_pair(1.6, 0.3);
  const ShapeVector s_ref = rope_ground_truth(ref.a1, ref.a2, rope.length).shape.vector();
  // Robot 2 starts displaced; the servo has to pull the shape back.
  const Vec3 offset(0.15, -0.2, 0.1);
  ServoState st;
  const double e0 = shape_error(
      rope_ground_truth(ref.a1, ref.a2 + offset, rope.length).shape.vector(), s_ref).norm();
  double e = e0;
  for (int k = 0; k < 300; ++k) {
    const Vec3 a1 = ref.a1 + st.correction1();
    const Vec3 a2 = ref.a2 + offset + st.correction2();
    const ShapeVector s = rope_ground_truth(a1, a2, rope.length).shape.vector();
    e = shape_error(s, s_ref).norm();
    st = servo_step(shape_error(s, s_ref), st, interaction_matrix(a1, a2, rope, cfg), cfg);
  }
  EXPECT_LT(e, 1e-3 * e0);
}

TEST(ServoConfig, Validation) {
  ServoConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.n_w = 0;
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg = ServoConfig{};
  cfg.k_c = 0.0;
  EXPECT_THROW(cfg.validate(), DomainError);
}

}  // namespace
}  // namespace dualrope
