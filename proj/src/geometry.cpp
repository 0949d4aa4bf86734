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

#include "dualrope/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dualrope/errors.hpp"
#include "dualrope/numerics.hpp"

namespace dualrope {

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw DomainError(std::string(what) + " must be finite");
}

// d/da of arc_length(a, d) at fixed span.
double arc_length_da(double a, double d) {
  const double u = a * d;
  if (u < 1e-3) {
    return d * d * d * a / 3.0 * (1.0 - 0.3 * u * u);
  }
  return (u * std::sqrt(1.0 + u * u) - std::asinh(u)) / (2.0 * a * a);
}

}  // namespace

void RopeSpec::validate() const {
  if (!(length > 0.0) || !std::isfinite(length)) throw DomainError("rope length must be > 0");
  if (!(mass > 0.0) || !std::isfinite(mass)) throw DomainError("rope mass must be > 0");
  if (!(hook_length > 0.0 && hook_length < length))
    throw DomainError("hook length must lie in (0, rope length)");
  if (!(attach_offset >= 0.0) || !std::isfinite(attach_offset))
    throw DomainError("attachment offset must be >= 0");
  if (!(gravity > 0.0) || !std::isfinite(gravity)) throw DomainError("gravity must be > 0");
}

double arc_length(double a, double span) {
  require_finite(a, "curvature");
  require_finite(span, "span");
  if (a < 0.0 || span < 0.0) throw DomainError("arc_length: curvature and span must be >= 0");
  const double u = a * span;
  if (u < kArcSeriesThreshold) {
    // L = d (1 + u^2/6 - u^4/40 + ...); the quartic term is below 1e-24 here.
    return span * (1.0 + u * u / 6.0);
  }
  return (u * std::sqrt(1.0 + u * u) + std::asinh(u)) / (2.0 * a);
}

double arc_length_general(double a, double b, double y_span) {
  require_finite(a, "a_p");
  require_finite(b, "b_p");
  require_finite(y_span, "y_span");
  if (y_span < 0.0) throw DomainError("arc_length_general: y_span must be >= 0");
  if (y_span == 0.0) return 0.0;

  // Slope runs linearly from t0 = b to t1 = b + h.
  const double t0 = b;
  const double h = 2.0 * a * y_span;
  const double t1 = t0 + h;
  const double s0 = std::hypot(1.0, t0);
  const double s1 = std::hypot(1.0, t1);

  if (std::abs(h) <= 1e-6 * (1.0 + std::abs(t0))) {
    // Mean of sqrt(1+t^2) over [t0, t0+h] by Taylor expansion about t0.
    const double f1 = t0 / s0;
    const double f2 = 1.0 / (s0 * s0 * s0);
    return y_span * (s0 + 0.5 * f1 * h + f2 * h * h / 6.0);
  }

  // 2*(F(t1) - F(t0)) with F(t) = (t*sqrt(1+t^2) + asinh t)/2, written in
  // difference form so that nothing cancels when h is small against t0.
  const double d1 = h * s1 + t0 * h * (t1 + t0) / (s1 + s0);
  double d2;
  if ((t0 >= 0.0) == (t1 >= 0.0)) {
    d2 = std::asinh(h * (t1 + t0) / (t1 * s0 + t0 * s1));
  } else {
    d2 = std::asinh(t1) - std::asinh(t0);
  }
  return (d1 + d2) / (4.0 * a);
}

double solve_curvature_for_length(double span, double length) {
  require_finite(span, "span");
  require_finite(length, "length");
  if (span <= 0.0) throw DomainError("solve_curvature_for_length: span must be > 0");
  if (span >= length) throw InfeasibleError("solve_curvature_for_length: span must be shorter than the rope");

  // Arc length exceeds twice the sag a*d^2/4, so a = 2l/d^2 overshoots.
  const double hi = 2.0 * length / (span * span);
  // Small-u inversion of L ~ d(1 + u^2/6) as the starting point.
  const double guess = std::sqrt(6.0 * (length / span - 1.0)) / span;
  numerics::RootOptions opt;
  opt.f_tol = 4.0 * std::numeric_limits<double>::epsilon() * length;
  opt.x_tol_rel = 4.0 * std::numeric_limits<double>::epsilon();
  return numerics::newton_increasing(
      [&](double a) {
        return std::pair{arc_length(a, span) - length, arc_length_da(a, span)};
      },
      0.0, hi, guess, opt);
}

double solve_span_for_length(double a, double length) {
  require_finite(a, "curvature");
  require_finite(length, "length");
  if (a < 0.0 || length <= 0.0)
    throw DomainError("solve_span_for_length: need a >= 0 and length > 0");
  if (a == 0.0) return length;
  numerics::RootOptions opt;
  opt.f_tol = 4.0 * std::numeric_limits<double>::epsilon() * length;
  opt.x_tol_rel = 4.0 * std::numeric_limits<double>::epsilon();
  // L(a, d) >= d, so the span lies in [0, length].
  return numerics::newton_increasing(
      [&](double d) {
        const double u = a * d;
        return std::pair{arc_length(a, d) - length, std::sqrt(1.0 + u * u)};
      },
      0.0, length, length, opt);
}

double solve_extent_for_length(double a, double b, double length) {
  require_finite(length, "length");
  if (length < 0.0) throw DomainError("solve_extent_for_length: length must be >= 0");
  if (length == 0.0) return 0.0;
  numerics::RootOptions opt;
  opt.f_tol = 4.0 * std::numeric_limits<double>::epsilon() * length;
  opt.x_tol_rel = 4.0 * std::numeric_limits<double>::epsilon();
  const double guess = length / std::hypot(1.0, b);
  return numerics::newton_increasing(
      [&](double y) {
        const double t = 2.0 * a * y + b;
        return std::pair{arc_length_general(a, b, y) - length, std::hypot(1.0, t)};
      },
      0.0, length, guess, opt);
}

Tension endpoint_tension(double a, double span, const RopeSpec& rope) {
  require_finite(a, "curvature");
  require_finite(span, "span");
  if (a < 0.0 || span < 0.0) throw DomainError("endpoint_tension: negative input");
  const double u = a * span;
  if (u == 0.0) throw SingularError("endpoint_tension: a*d == 0, tension is unbounded");
  const double weight = rope.mass * rope.gravity;
  Tension t;
  t.magnitude = weight * std::sqrt(1.0 + u * u) / (2.0 * u);
  t.horizontal = weight / (2.0 * u);
  t.vertical = 0.5 * weight;
  return t;
}

double sag(double a, double span) {
  if (a < 0.0 || span < 0.0) throw DomainError("sag: negative input");
  return a * 0.25 * span * span;
}

AttachFrameParabola tool_to_attach_frame(const ToolFrameParabola& shape, double span) {
  AttachFrameParabola p;
  p.a = shape.a;
  p.b = -shape.a * span;
  p.c = 0.0;
  p.psi = shape.psi;
  p.phi = shape.phi;
  return p;
}

Mat3 rot_z(double psi) {
  const double c = std::cos(psi), s = std::sin(psi);
  Mat3 r;
  r << c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0;
  return r;
}

double wrap_angle(double angle) {
  constexpr double pi = std::numbers::pi;
  double w = std::remainder(angle, 2.0 * pi);
  if (w <= -pi) w += 2.0 * pi;
  return w;
}

Vec3 plane_axis(double psi) { return {-std::sin(psi), std::cos(psi), 0.0}; }

Vec3 attach_frame_point(const AttachFrameParabola& shape, const Vec3& origin, double y) {
  const double z = shape.a * y * y + shape.b * y + shape.c;
  return origin + y * plane_axis(shape.psi) + Vec3(0.0, 0.0, z);
}

Vec3 lowest_point(const AttachFrameParabola& shape, const Vec3& origin, double y_span) {
  double y;
  if (shape.a > 0.0) {
    y = std::clamp(-shape.b / (2.0 * shape.a), 0.0, y_span);
  } else {
    const double z_end = shape.a * y_span * y_span + shape.b * y_span;
    y = z_end < 0.0 ? y_span : 0.0;
  }
  return attach_frame_point(shape, origin, y);
}

}  // namespace dualrope
