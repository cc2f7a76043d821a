#pragma once

#include <optional>

namespace sonata {

struct TheoryInputs {
  double L = 0.0;      // mean of L_i
  double L_mx = 0.0;   // max of L_i
  double w_mx = 0.0;
  double rho = 0.0;
  double alpha = 0.0;
  double gamma = 0.0;
  double xi = 0.0;
  int dim = 1;         // enters c5 through max{dim^(theta-1/2), 1}
  std::optional<double> kappa;
  std::optional<double> theta;
  /// Clamp c4 at zero; the unclamped form can go negative.
  bool sanitize = false;
};

struct TheoryConstants {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double c4 = 0.0;
  bool c4_negative = false;  // unclamped c4 < 0
  std::optional<double> c5;
  std::optional<double> c6;
  std::optional<double> c7;
  std::optional<double> omega;        // 1/c6
  double omega_prime = 0.0;           // 1/c4
  std::optional<double> tau;          // sqrt(1/(1+omega))
  double tau_prime = 0.0;             // sqrt(1/(1+omega'))
  bool rho_condition_ok = false;      // rho < 1/sqrt(5)
  bool corollary_rho_ok = false;
  std::optional<double> theta;
};

/// Evaluates every constant without regime checks; fields may be
/// meaningless (negative, NaN) when c2 or c3 is nonpositive.
TheoryConstants evaluate_constants(const TheoryInputs& in);
/// As above; throws InvalidRegime when c2 <= 0 or c3 <= 0.
TheoryConstants constants(const TheoryInputs& in);

/// min{1/sqrt(5), L / (L_mx sqrt(42 w_mx + 26))}
double corollary_rho_threshold(double L, double L_mx, double w_mx);

/// ceil(log(1/eps) / log(1/tau)); 0 when eps >= 1.
long predicted_iterations(double tau, double eps);
/// Requires theta <= 1/2 and kappa; throws RegimeNotApplicable otherwise.
long predicted_complexity(const TheoryConstants& c, double eps);

/// (1-theta)/(2 theta - 1); throws ExponentUnbounded for theta <= 1/2.
double predicted_sublinear_exponent(double theta);

}  // namespace sonata
