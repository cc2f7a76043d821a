#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sonata/prox.hpp"
#include "sonata/types.hpp"

namespace sonata {

struct KlMeta {
  double theta;
  std::optional<double> kappa;
};

/// Generated data behind a problem instance. Regenerating with the same
/// parameters and seed is bit-identical.
struct DataBundle {
  std::string problem;
  int m = 0;
  int n = 0;
  int d = 0;
  std::uint64_t seed = 0;
  double noise_sd = 0.0;
  std::vector<Mat> design;   // per agent, n x d
  std::vector<Vec> targets;  // per agent, length n; empty when unused
  Vec x_true;                // empty when unused
};

void write_bundle(std::ostream& os, const DataBundle& data);
DataBundle read_bundle(std::istream& is);

using ScalarFn = std::function<double(const Vec&)>;
using GradFn = std::function<Vec(const Vec&)>;

/// u(x) = (1/m) sum_i f_i(x) + r(x), f_i smooth with constant L_i.
struct Problem {
  std::string name;
  int m = 0;
  int d = 0;
  std::vector<ScalarFn> f;
  std::vector<GradFn> grad;
  std::vector<double> L;
  ProxOp prox;
  std::optional<KlMeta> kl;
  bool nonconvex = false;
  /// Set when a minimizer is known in closed form.
  std::optional<Vec> known_minimizer;
  std::shared_ptr<const DataBundle> data;

  // Optional closed forms of the average f and its gradient; must agree with
  // the per-agent average up to rounding.
  ScalarFn global_f;
  GradFn global_grad;

  double f_global(const Vec& x) const;
  Vec grad_global(const Vec& x) const;
  double r(const Vec& x) const { return prox.value(x); }
  double u(const Vec& x) const { return f_global(x) + r(x); }
  double L_avg() const;
  double L_max() const;
};

enum class ScadDenominator { continuous, squared };

struct LassoParams {
  int m = 10;
  int n = 15;
  int d = 60;
  double sparsity = 0.4;
  double noise_sd = 0.31622776601683794;  // variance 0.1
  double lambda = 0.05;
  std::uint64_t seed = 1;
};

struct ScadParams {
  int m = 10;
  int n = 15;
  int d = 60;
  double sparsity = 0.2;
  double noise_sd = 0.31622776601683794;
  double lambda = 0.1;
  double a = 3.7;
  ScadDenominator denominator = ScadDenominator::continuous;
  std::uint64_t seed = 1;
};

struct PcaParams {
  int m = 20;
  int n = 20;
  int d = 50;
  std::uint64_t seed = 1;
};

struct LogisticParams {
  int m = 10;
  int n = 20;
  int d = 10;
  std::uint64_t seed = 1;
};

struct PhaseRetrievalParams {
  int m = 10;
  int n = 30;
  int d = 5;
  double noise_sd = 0.0;
  std::uint64_t seed = 1;
};

Problem make_lasso(const LassoParams& p);
Problem make_scad(const ScadParams& p);
Problem make_pca(const PcaParams& p);
Problem make_logistic(const LogisticParams& p);
Problem make_phase_retrieval(const PhaseRetrievalParams& p);
/// d = 1, f_i(x) = |x|^q / q with q = 1/(1-theta). L_i is the curvature bound
/// on |x| <= 1, so iterates are expected to stay there.
Problem make_synthetic_kl(double theta, int m, std::uint64_t seed = 0);

/// Concave part of the SCAD split, one coordinate.
double scad_p(double x, double lambda, double a, ScadDenominator den);
double scad_p_prime(double x, double lambda, double a, ScadDenominator den);

/// Largest singular value via dense SVD.
double spectral_norm(const Mat& a);

}  // namespace sonata
