#include "sonata/theory.hpp"

#include <algorithm>
#include <cmath>

#include "sonata/error.hpp"

namespace sonata {

TheoryConstants evaluate_constants(const TheoryInputs& in) {
  const double L = in.L;
  const double Lmx2 = in.L_mx * in.L_mx;
  const double rho2 = in.rho * in.rho;
  const double a = in.alpha;
  const double g = in.gamma;
  const double xi = in.xi;

  TheoryConstants c;
  c.c1 = 1.0 / (2.0 * xi) + std::max(L * in.w_mx / Lmx2, 2.0 * L * a * a * in.w_mx);
  c.c2 = 1.0 / a - L / 2.0 - xi / 2.0 - 14.0 * Lmx2 * g * rho2;
  c.c3 = (1.0 - 5.0 * rho2) * g - c.c1;
  c.c4 = std::max(14.0 * g * rho2 * Lmx2 / c.c2, (5.0 * g * rho2 + c.c1 - 1.0 / xi) / c.c3);
  c.c4_negative = c.c4 < 0.0;
  if (in.sanitize) c.c4 = std::max(c.c4, 0.0);
  c.omega_prime = 1.0 / c.c4;
  c.tau_prime = std::sqrt(1.0 / (1.0 + c.omega_prime));

  if (in.theta) {
    const double th = *in.theta;
    const double dim_factor = std::max(std::pow(static_cast<double>(in.dim), th - 0.5), 1.0);
    c.c5 = dim_factor *
           std::sqrt(std::max(3.0 * (L * L + 1.0 / (a * a)) / c.c2, 3.0 / c.c3));
    c.theta = th;
    if (in.kappa) {
      const double k = *in.kappa;
      c.c6 = (*c.c5) * (*c.c5) / std::pow(k, 1.0 / th) + c.c4;
      c.c7 = std::pow(*c.c5 / k, 1.0 / th) + c.c4;
      c.omega = 1.0 / *c.c6;
      c.tau = std::sqrt(1.0 / (1.0 + *c.omega));
    }
  }

  c.rho_condition_ok = in.rho < 1.0 / std::sqrt(5.0);
  c.corollary_rho_ok = in.rho < corollary_rho_threshold(L, in.L_mx, in.w_mx);
  return c;
}

TheoryConstants constants(const TheoryInputs& in) {
  if (!(in.L > 0.0 && in.L_mx > 0.0 && in.w_mx > 0.0 && in.alpha > 0.0 && in.gamma > 0.0 &&
        in.xi > 0.0))
    throw Error(Errc::BadHyper, "L, L_mx, w_mx, alpha, gamma, xi must be positive");
  if (!(in.rho >= 0.0 && in.rho < 1.0)) throw Error(Errc::BadHyper, "rho must lie in [0,1)");
  if (in.kappa && !(*in.kappa > 0.0)) throw Error(Errc::BadHyper, "kappa must be positive");
  if (in.theta && !(*in.theta > 0.0 && *in.theta < 1.0))
    throw Error(Errc::BadHyper, "theta must lie in (0,1)");
  TheoryConstants c = evaluate_constants(in);
  if (!(c.c2 > 0.0)) throw Error(Errc::InvalidRegime, "c2 <= 0");
  if (!(c.c3 > 0.0)) throw Error(Errc::InvalidRegime, "c3 <= 0");
  return c;
}

double corollary_rho_threshold(double L, double L_mx, double w_mx) {
  return std::min(1.0 / std::sqrt(5.0), L / (L_mx * std::sqrt(42.0 * w_mx + 26.0)));
}

long predicted_iterations(double tau, double eps) {
  if (!(tau > 0.0 && tau < 1.0)) throw Error(Errc::BadHyper, "tau must lie in (0,1)");
  if (!(eps > 0.0)) throw Error(Errc::BadHyper, "eps must be positive");
  if (eps >= 1.0) return 0;
  return static_cast<long>(std::ceil(std::log(1.0 / eps) / std::log(1.0 / tau)));
}

long predicted_complexity(const TheoryConstants& c, double eps) {
  if (!c.theta || *c.theta > 0.5)
    throw Error(Errc::RegimeNotApplicable, "complexity bound needs theta <= 1/2");
  if (!c.tau) throw Error(Errc::RegimeNotApplicable, "complexity bound needs kappa");
  return predicted_iterations(*c.tau, eps);
}

double predicted_sublinear_exponent(double theta) {
  if (!(theta > 0.5)) throw Error(Errc::ExponentUnbounded, "theta must exceed 1/2");
  if (!(theta < 1.0)) throw Error(Errc::BadHyper, "theta must be below 1");
  return (1.0 - theta) / (2.0 * theta - 1.0);
}

}  // namespace sonata
