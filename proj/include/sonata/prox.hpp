#pragma once

#include <functional>
#include <string>

#include "sonata/types.hpp"

namespace sonata {

/// Convex nonsmooth term r together with everything the solver and the
/// verification layer need from it. The step is supplied per call, so one
/// operator serves every alpha.
struct ProxOp {
  std::string label;
  /// prox_{step * r}(point)
  std::function<Vec(const Vec& point, double step)> evaluate;
  /// r(x); +inf outside dom r.
  std::function<double(const Vec& x)> value;
  /// Minimal-norm element of grad + dr(x).
  std::function<Vec(const Vec& x, const Vec& grad)> min_norm_subgradient;
  /// Whether s belongs to dr(x), up to an absolute tolerance.
  std::function<bool(const Vec& x, const Vec& s, double tol)> contains_subgradient;
};

Vec soft_threshold(const Vec& v, double t);
Vec project_unit_ball(const Vec& v);
Vec prox_zero(const Vec& v);

ProxOp l1_prox(double lambda);
ProxOp unit_ball_prox();
ProxOp zero_prox();

/// Grid minimizer of r(y) + (v - y)^2 / (2 step) over
/// [v - h, v + h], h = 10 * step * max(slope_bound, 1). Test oracle only.
/// Throws GridTooCoarse when the minimizer sits on the window boundary.
double brute_force_prox_1d(const std::function<double(double)>& r, double v, double step,
                           double grid, double slope_bound = 1.0);

}  // namespace sonata
