#include "sonata/prox.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sonata/error.hpp"

namespace sonata {

namespace {

constexpr double kBallSlack = 1e-10;

}  // namespace

Vec soft_threshold(const Vec& v, double t) {
  Vec out(v.size());
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    const double mag = std::abs(v(k)) - t;
    out(k) = mag > 0.0 ? std::copysign(mag, v(k)) : 0.0;
  }
  return out;
}

Vec project_unit_ball(const Vec& v) {
  const double n = v.norm();
  if (n <= 1.0) return v;
  return v / n;
}

Vec prox_zero(const Vec& v) { return v; }

ProxOp l1_prox(double lambda) {
  if (!(lambda > 0.0)) throw Error(Errc::BadHyper, "l1 weight must be positive");
  ProxOp op;
  op.label = "l1(lambda=" + std::to_string(lambda) + ")";
  op.evaluate = [lambda](const Vec& p, double step) { return soft_threshold(p, step * lambda); };
  op.value = [lambda](const Vec& x) { return lambda * x.lpNorm<1>(); };
  op.min_norm_subgradient = [lambda](const Vec& x, const Vec& g) {
    Vec out(g.size());
    for (Eigen::Index k = 0; k < g.size(); ++k) {
      if (x(k) > 0.0) {
        out(k) = g(k) + lambda;
      } else if (x(k) < 0.0) {
        out(k) = g(k) - lambda;
      } else {
        const double mag = std::abs(g(k)) - lambda;
        out(k) = mag > 0.0 ? std::copysign(mag, g(k)) : 0.0;
      }
    }
    return out;
  };
  op.contains_subgradient = [lambda](const Vec& x, const Vec& s, double tol) {
    for (Eigen::Index k = 0; k < x.size(); ++k) {
      if (x(k) != 0.0) {
        if (std::abs(s(k) - std::copysign(lambda, x(k))) > tol) return false;
      } else if (std::abs(s(k)) > lambda + tol) {
        return false;
      }
    }
    return true;
  };
  return op;
}

ProxOp unit_ball_prox() {
  ProxOp op;
  op.label = "indicator(unit ball)";
  op.evaluate = [](const Vec& p, double) { return project_unit_ball(p); };
  op.value = [](const Vec& x) {
    return x.norm() <= 1.0 + kBallSlack ? 0.0 : std::numeric_limits<double>::infinity();
  };
  op.min_norm_subgradient = [](const Vec& x, const Vec& g) -> Vec {
    // Normal cone is {mu x : mu >= 0} on the sphere, {0} inside.
    const double n = x.norm();
    if (n < 1.0 - kBallSlack) return g;
    const Vec u = x / n;
    const double mu = std::max(0.0, -g.dot(u));
    return g + mu * u;
  };
  op.contains_subgradient = [](const Vec& x, const Vec& s, double tol) {
    const double n = x.norm();
    if (n > 1.0 + kBallSlack) return false;
    if (n < 1.0 - kBallSlack) return s.norm() <= tol;
    const Vec u = x / n;
    const double along = s.dot(u);
    return along >= -tol && (s - along * u).norm() <= tol;
  };
  return op;
}

ProxOp zero_prox() {
  ProxOp op;
  op.label = "zero";
  op.evaluate = [](const Vec& p, double) { return prox_zero(p); };
  op.value = [](const Vec&) { return 0.0; };
  op.min_norm_subgradient = [](const Vec&, const Vec& g) { return g; };
  op.contains_subgradient = [](const Vec&, const Vec& s, double tol) { return s.norm() <= tol; };
  return op;
}

double brute_force_prox_1d(const std::function<double(double)>& r, double v, double step,
                           double grid, double slope_bound) {
  if (!(step > 0.0) || !(grid > 0.0)) throw Error(Errc::BadHyper, "step and grid must be positive");
  const double half = 10.0 * step * std::max(slope_bound, 1.0);
  const auto n = static_cast<long>(std::ceil(2.0 * half / grid));
  const double lo = v - half;
  long best = -1;
  double best_val = std::numeric_limits<double>::infinity();
  for (long k = 0; k <= n; ++k) {
    const double y = lo + static_cast<double>(k) * grid;
    const double obj = r(y) + (v - y) * (v - y) / (2.0 * step);
    if (obj < best_val) {
      best_val = obj;
      best = k;
    }
  }
  if (best <= 0 || best >= n)
    throw Error(Errc::GridTooCoarse, "minimizer on the search window boundary");
  return lo + static_cast<double>(best) * grid;
}

}  // namespace sonata
