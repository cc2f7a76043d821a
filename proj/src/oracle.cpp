#include "sonata/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "sonata/error.hpp"
#include "sonata/matrix_io.hpp"

namespace sonata {

namespace {

Vec prox_grad_map(const Problem& problem, const Vec& x, double alpha) {
  return problem.prox.evaluate(x - alpha * problem.grad_global(x), alpha);
}

// Signed prox-gradient map in one dimension.
double signed_residual(const Problem& problem, double x, double alpha) {
  Vec v(1);
  v(0) = x;
  return (x - prox_grad_map(problem, v, alpha)(0)) / alpha;
}

}  // namespace

double prox_grad_residual(const Problem& problem, const Vec& x, double alpha) {
  return (x - prox_grad_map(problem, x, alpha)).norm() / alpha;
}

ReferenceSolution centralized_prox_grad(const Problem& problem, const Vec& x0, double alpha,
                                        double tol, int max_iters) {
  if (!(alpha > 0.0)) throw Error(Errc::BadHyper, "alpha must be positive");
  if (x0.size() != problem.d) throw Error(Errc::BadHyper, "x0 has the wrong dimension");
  Vec x = x0;
  double res = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= max_iters; ++k) {
    Vec next = prox_grad_map(problem, x, alpha);
    if (!next.allFinite()) throw Error(Errc::NumericalBlowup, "reference iterate is not finite");
    res = (next - x).norm() / alpha;
    x = std::move(next);
    if (res <= tol) return ReferenceSolution{x, problem.u(x), res, k};
  }
  throw Error(Errc::NotConverged,
              "residual " + io::format_real(res) + " after " + std::to_string(max_iters) + " steps");
}

double brute_force_stationary_1d(const Problem& problem, double lo, double hi, double grid) {
  if (problem.d != 1) throw Error(Errc::BadHyper, "brute-force oracle needs d = 1");
  if (!(hi > lo) || !(grid > 0.0)) throw Error(Errc::BadHyper, "bad interval or grid");
  const auto n = static_cast<long>(std::ceil((hi - lo) / grid));
  Vec v(1);
  long best = 0;
  double best_u = std::numeric_limits<double>::infinity();
  for (long k = 0; k <= n; ++k) {
    v(0) = std::min(lo + static_cast<double>(k) * grid, hi);
    const double u = problem.u(v);
    if (u < best_u) {
      best_u = u;
      best = k;
    }
  }
  const double x_grid = std::min(lo + static_cast<double>(best) * grid, hi);
  const double alpha = 1.0 / std::max(problem.L_avg(), 1.0);
  double a = std::max(lo, x_grid - grid);
  double b = std::min(hi, x_grid + grid);
  double ga = signed_residual(problem, a, alpha);
  const double gb = signed_residual(problem, b, alpha);
  if (ga == 0.0) return a;
  if (gb == 0.0) return b;
  if ((ga < 0.0) == (gb < 0.0)) return x_grid;
  for (int it = 0; it < 200 && b - a > 0.0; ++it) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    const double gm = signed_residual(problem, mid, alpha);
    if (gm == 0.0) return mid;
    if ((gm < 0.0) == (ga < 0.0)) {
      a = mid;
      ga = gm;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

void write_reference(std::ostream& os, const ReferenceSolution& ref) {
  os << "u_star=" << io::format_real(ref.u_star) << " residual=" << io::format_real(ref.residual)
     << " iterations=" << ref.iterations << '\n';
  io::write_row(os, ref.x_star);
}

}  // namespace sonata
