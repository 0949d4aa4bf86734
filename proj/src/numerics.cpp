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

#include "dualrope/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace dualrope::numerics {

double brent_root(const std::function<double(double)>& f, double lo, double hi,
                  const RootOptions& opt) {
  double a = lo, b = hi;
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0)) throw ConvergenceError("brent_root: interval does not bracket");
  if (std::abs(fa) < std::abs(fb)) {
    std::swap(a, b);
    std::swap(fa, fb);
  }
  double c = a, fc = fa, d = b - a;
  bool bisected = true;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (int it = 0; it < opt.max_iterations; ++it) {
    if (std::abs(fb) <= opt.f_tol) return b;
    const double tol = 2.0 * eps * std::abs(b) + opt.x_tol_abs + opt.x_tol_rel * std::abs(b);
    if (std::abs(b - a) <= tol) return b;

    double s;
    if (fa != fc && fb != fc) {
      // inverse quadratic interpolation
      s = a * fb * fc / ((fa - fb) * (fa - fc)) + b * fa * fc / ((fb - fa) * (fb - fc)) +
          c * fa * fb / ((fc - fa) * (fc - fb));
    } else {
      s = b - fb * (b - a) / (fb - fa);
    }
    const double lo_s = (3.0 * a + b) / 4.0;
    const bool outside = !((s > std::min(lo_s, b)) && (s < std::max(lo_s, b)));
    if (outside || (bisected && std::abs(s - b) >= 0.5 * std::abs(b - c)) ||
        (!bisected && std::abs(s - b) >= 0.5 * std::abs(c - d)) ||
        (bisected && std::abs(b - c) < tol) || (!bisected && std::abs(c - d) < tol)) {
      s = 0.5 * (a + b);
      bisected = true;
    } else {
      bisected = false;
    }
    const double fs = f(s);
    if (!std::isfinite(fs)) throw ConvergenceError("brent_root: non-finite residual");
    d = c;
    c = b;
    fc = fb;
    if ((fa > 0.0) != (fs > 0.0)) {
      b = s;
      fb = fs;
    } else {
      a = s;
      fa = fs;
    }
    if (std::abs(fa) < std::abs(fb)) {
      std::swap(a, b);
      std::swap(fa, fb);
    }
  }
  throw ConvergenceError("brent_root: no convergence");
}

double bisect_last_true(const std::function<bool(double)>& pred, double lo, double hi,
                        double tol, int* iterations) {
  int it = 0;
  while (hi - lo > tol && it < 4 * kMaxIterations) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (pred(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
    ++it;
  }
  if (iterations) *iterations = it;
  return lo;
}

MinimizeResult golden_section(const std::function<double(double)>& f, double lo, double hi,
                              double x_tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  int evals = 2;
  while (b - a > x_tol && evals < 4 * kMaxIterations) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
    ++evals;
  }
  return f1 <= f2 ? MinimizeResult{x1, f1, evals} : MinimizeResult{x2, f2, evals};
}

MinimizeResult grid_then_golden(const std::function<double(double)>& f, double lo, double hi,
                                int grid_points, double x_tol) {
  if (grid_points < 2 || hi <= lo) {
    return {lo, f(lo), 1};
  }
  const double step = (hi - lo) / (grid_points - 1);
  int best = 0;
  double best_f = f(lo);
  for (int i = 1; i < grid_points; ++i) {
    const double x = (i == grid_points - 1) ? hi : lo + i * step;
    const double fx = f(x);
    if (fx < best_f) {
      best = i;
      best_f = fx;
    }
  }
  const double best_x = (best == grid_points - 1) ? hi : lo + best * step;
  const double a = std::max(lo, best_x - step);
  const double b = std::min(hi, best_x + step);
  MinimizeResult refined = golden_section(f, a, b, x_tol);
  refined.evaluations += grid_points;
  if (refined.fx < best_f) return refined;
  return {best_x, best_f, refined.evaluations};
}

}  // namespace dualrope::numerics
