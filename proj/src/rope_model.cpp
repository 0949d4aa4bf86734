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

#include "dualrope/rope_model.hpp"

#include <cmath>

#include "dualrope/errors.hpp"
#include "dualrope/geometry.hpp"
#include "dualrope/numerics.hpp"

namespace dualrope {

namespace {

constexpr double kVerticalHang = 1e-9;

void check_span(const Vec3& attach1, const Vec3& attach2, double length) {
  if (!attach1.allFinite() || !attach2.allFinite() || !std::isfinite(length))
    throw DomainError("rope model: non-finite input");
  if (!(length > 0.0)) throw DomainError("rope model: length must be > 0");
  if ((attach2 - attach1).norm() >= length)
    throw InfeasibleError("rope model: attachments are at least a rope length apart");
}

}  // namespace

TrueShape rope_ground_truth(const Vec3& attach1, const Vec3& attach2, double length) {
  check_span(attach1, attach2, length);
  const Vec3 delta = attach2 - attach1;
  TrueShape out;
  out.y_end = std::hypot(delta.x(), delta.y());
  out.z_end = delta.z();
  if (out.y_end < kVerticalHang) {
    out.degenerate = true;
    return out;
  }
  out.shape.psi = std::atan2(-delta.x(), delta.y());

  // Slopes run from m - aY to m + aY; the length grows with a from the chord.
  const double y = out.y_end;
  const double m = out.z_end / y;
  auto excess = [&](double a) { return arc_length_general(a, m - a * y, y) - length; };
  double hi = 1.0 / y;
  int grow = 0;
  while (excess(hi) < 0.0) {
    hi *= 2.0;
    if (++grow > 200) throw ConvergenceError("rope_ground_truth: curvature not bracketed");
  }
  numerics::RootOptions opt;
  opt.x_tol_rel = 1e-15;
  const double a = numerics::brent_root(excess, 0.0, hi, opt);
  out.shape.a = a;
  out.shape.b = m - a * y;
  return out;
}

double Catenary::height(double y) const { return c * std::cosh((y - y0) / c) + z0; }

double Catenary::arc_length_to(double y) const {
  return c * (std::sinh((y - y0) / c) + std::sinh(y0 / c));
}

double Catenary::coordinate_at(double s) const {
  return y0 + c * std::asinh(s / c - std::sinh(y0 / c));
}

Catenary solve_catenary(double y_end, double z_end, double length) {
  if (!(y_end > 0.0)) throw DegenerateError("solve_catenary: zero horizontal span");
  const double chord2 = length * length - z_end * z_end;
  if (!(chord2 > y_end * y_end)) throw InfeasibleError("solve_catenary: rope too short");

  // 2C sinh(Y/2C) = sqrt(l^2 - Z^2); with u = Y/2C this is sinh(u)/u = ratio.
  const double ratio = std::sqrt(chord2) / y_end;
  auto f = [&](double u) { return (u < 1e-8 ? 1.0 + u * u / 6.0 : std::sinh(u) / u) - ratio; };
  double hi = 1.0;
  while (f(hi) < 0.0) hi *= 2.0;
  numerics::RootOptions opt;
  opt.x_tol_rel = 1e-15;
  const double u = numerics::brent_root(f, 0.0, hi, opt);
  if (!(u > 0.0)) throw InfeasibleError("solve_catenary: rope is taut");

  Catenary cat;
  cat.c = y_end / (2.0 * u);
  // Z = 2C sinh((Y - 2 y0)/2C) sinh(u).
  cat.y0 = 0.5 * y_end - cat.c * std::asinh(z_end / (2.0 * cat.c * std::sinh(u)));
  cat.z0 = -cat.c * std::cosh(cat.y0 / cat.c);
  return cat;
}

std::vector<Vec3> chain_equilibrium(const Vec3& attach1, const Vec3& attach2, double length,
                                    int links) {
  if (links < 10) throw DomainError("chain_equilibrium: need at least 10 links");
  check_span(attach1, attach2, length);
  const Vec3 delta = attach2 - attach1;
  const double y_end = std::hypot(delta.x(), delta.y());
  if (y_end < kVerticalHang) throw DegenerateError("chain_equilibrium: vertical hang");
  const Vec3 axis(delta.x() / y_end, delta.y() / y_end, 0.0);
  const Catenary cat = solve_catenary(y_end, delta.z(), length);

  std::vector<Vec3> nodes;
  nodes.reserve(static_cast<std::size_t>(links) + 1);
  for (int k = 0; k <= links; ++k) {
    if (k == 0) {
      nodes.push_back(attach1);
    } else if (k == links) {
      nodes.push_back(attach2);
    } else {
      const double y = cat.coordinate_at(length * k / links);
      nodes.push_back(attach1 + y * axis + Vec3(0.0, 0.0, cat.height(y)));
    }
  }
  return nodes;
}

}  // namespace dualrope
