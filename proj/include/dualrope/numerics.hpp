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

// Scalar root finding and bounded minimisation used across the library.

#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>

#include "dualrope/errors.hpp"

namespace dualrope::numerics {

inline constexpr int kMaxIterations = 200;

struct RootOptions {
  double x_tol_rel = 1e-15;
  double x_tol_abs = 0.0;
  double f_tol = 0.0;  ///< absolute residual accepted as converged
  int max_iterations = kMaxIterations;
};

/// Newton's method safeguarded by bisection for an increasing function with
/// f(lo) <= 0 <= f(hi). `fdf` returns {f(x), f'(x)}.
template <class Fdf>
double newton_increasing(Fdf&& fdf, double lo, double hi, double guess,
                         const RootOptions& opt = {}) {
  double x = (guess > lo && guess < hi) ? guess : 0.5 * (lo + hi);
  for (int it = 0; it < opt.max_iterations; ++it) {
    auto [f, df] = fdf(x);
    if (!std::isfinite(f)) throw ConvergenceError("newton_increasing: non-finite residual");
    if (std::abs(f) <= opt.f_tol) return x;
    if (f < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    if (hi - lo <= opt.x_tol_abs + opt.x_tol_rel * std::abs(x)) return x;
    double next = (df > 0.0 && std::isfinite(df)) ? x - f / df : lo - 1.0;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == x) return x;
    x = next;
  }
  throw ConvergenceError("newton_increasing: no convergence after " +
                         std::to_string(opt.max_iterations) + " iterations");
}

/// Brent's method on a bracketing interval. Requires f(lo) and f(hi) of
/// opposite sign (or one of them zero).
double brent_root(const std::function<double(double)>& f, double lo, double hi,
                  const RootOptions& opt = {});

/// Largest x in [lo, hi] where the monotone predicate still holds, assuming
/// pred(lo) is true and pred(hi) is false. Bisection down to `tol`.
double bisect_last_true(const std::function<bool(double)>& pred, double lo, double hi,
                        double tol, int* iterations = nullptr);

struct MinimizeResult {
  double x = 0.0;
  double fx = 0.0;
  int evaluations = 0;
};

/// Golden-section search for a unimodal function on [lo, hi].
MinimizeResult golden_section(const std::function<double(double)>& f, double lo, double hi,
                              double x_tol);

/// Dense grid followed by golden-section refinement between the neighbours of
/// the best grid point. Ties on the grid go to the smallest x, and the refined
/// point only replaces the grid point when it is strictly better.
MinimizeResult grid_then_golden(const std::function<double(double)>& f, double lo, double hi,
                                int grid_points, double x_tol);

}  // namespace dualrope::numerics
