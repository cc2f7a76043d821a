#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sonata/metrics.hpp"
#include "sonata/problems.hpp"

namespace sonata {

enum class RateModel { Geometric, Power };

struct RateFit {
  RateModel model = RateModel::Geometric;
  double slope = 0.0;      // d log(dist) / d nu, or d log(dist) / d log(nu)
  double intercept = 0.0;
  double r_squared = 0.0;
  int burn_in = 0;
  int first = 0;           // window, inclusive
  int last = 0;
  int points = 0;
  bool contracting = false;
  /// Power-law decay exponent, -slope.
  double exponent() const { return -slope; }
};

constexpr double kDistFloor = 1e-12;
constexpr int kMinFitPoints = 10;

/// Default burn-in: the first 20% of records.
int default_burn_in(std::size_t records);

/// Least squares of log(dist) on nu over nu >= burn_in and dist > 1e-12.
RateFit fit_linear_rate(const std::vector<double>& nu, const std::vector<double>& dist, int burn_in);
/// Least squares of log(dist) on log(nu) over nu >= max(burn_in, 1).
RateFit fit_sublinear_rate(const std::vector<double>& nu, const std::vector<double>& dist,
                           int burn_in);

/// dist_ref column; burn-in defaults to 20%.
RateFit fit_linear_rate(const std::vector<TraceRecord>& trace, std::optional<int> burn_in = {});
RateFit fit_sublinear_rate(const std::vector<TraceRecord>& trace, std::optional<int> burn_in = {});

/// Higher R^2 wins; ties go to geometric.
RateModel select_model(const RateFit& geometric, const RateFit& power);

struct KlOptions {
  double region_radius = 1.0;
  int samples = 1000;
  std::uint64_t seed = 1;
  bool two_sided = false;
  /// Upper end of the level band; u - u(x_bar) must lie in (0, eta).
  double eta = 1e300;
  /// Throw EmptyLevelBand instead of passing vacuously.
  bool require_samples = false;
};

struct KlReport {
  int sampled = 0;
  int in_band = 0;
  /// min over in-band samples of ||g|| / |u - u(x_bar)|^theta; a sampling
  /// lower bound, not the true KL parameter.
  double kappa_empirical = 0.0;
  bool vacuous = false;
  bool passed = false;
};

/// Checks ||g|| >= kappa |u(x) - u(x_bar)|^theta on random points of the
/// ball around x_bar, g the minimal-norm element of grad f + dr.
KlReport kl_certificate(const Problem& problem, const Vec& x_bar, double theta, double kappa,
                        const KlOptions& opts = {});

}  // namespace sonata
