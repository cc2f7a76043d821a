#include "sonata/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "sonata/error.hpp"

namespace sonata {

namespace {

RateFit least_squares(const std::vector<double>& xs, const std::vector<double>& ys,
                      const std::vector<int>& iters, RateModel model, int burn_in) {
  if (xs.size() < static_cast<std::size_t>(kMinFitPoints))
    throw Error(Errc::WindowTooSmall,
                std::to_string(xs.size()) + " points, need " + std::to_string(kMinFitPoints));
  const double n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    mx += xs[k];
    my += ys[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double dx = xs[k] - mx;
    const double dy = ys[k] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  RateFit fit;
  fit.model = model;
  fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  fit.intercept = my - fit.slope * mx;
  if (syy <= 0.0) {
    fit.r_squared = 1.0;
  } else {
    double ss_res = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      const double e = ys[k] - (fit.intercept + fit.slope * xs[k]);
      ss_res += e * e;
    }
    fit.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  }
  fit.burn_in = burn_in;
  fit.first = iters.front();
  fit.last = iters.back();
  fit.points = static_cast<int>(xs.size());
  fit.contracting = fit.slope < 0.0;
  return fit;
}

RateFit fit(const std::vector<double>& nu, const std::vector<double>& dist, int burn_in,
            RateModel model) {
  if (nu.size() != dist.size()) throw Error(Errc::BadHyper, "nu and dist differ in length");
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<int> iters;
  const double start = model == RateModel::Power ? std::max(burn_in, 1) : burn_in;
  for (std::size_t k = 0; k < nu.size(); ++k) {
    if (nu[k] < start || !(dist[k] > kDistFloor)) continue;
    xs.push_back(model == RateModel::Power ? std::log(nu[k]) : nu[k]);
    ys.push_back(std::log(dist[k]));
    iters.push_back(static_cast<int>(nu[k]));
  }
  return least_squares(xs, ys, iters, model, burn_in);
}

void trace_columns(const std::vector<TraceRecord>& trace, std::vector<double>& nu,
                   std::vector<double>& dist) {
  for (const auto& r : trace) {
    if (!r.dist_ref) throw Error(Errc::BadHyper, "trace has no dist_ref column");
    nu.push_back(r.nu);
    dist.push_back(*r.dist_ref);
  }
}

}  // namespace

int default_burn_in(std::size_t records) { return static_cast<int>(records / 5); }

RateFit fit_linear_rate(const std::vector<double>& nu, const std::vector<double>& dist, int burn_in) {
  return fit(nu, dist, burn_in, RateModel::Geometric);
}

RateFit fit_sublinear_rate(const std::vector<double>& nu, const std::vector<double>& dist,
                           int burn_in) {
  return fit(nu, dist, burn_in, RateModel::Power);
}

RateFit fit_linear_rate(const std::vector<TraceRecord>& trace, std::optional<int> burn_in) {
  std::vector<double> nu;
  std::vector<double> dist;
  trace_columns(trace, nu, dist);
  return fit_linear_rate(nu, dist, burn_in.value_or(default_burn_in(trace.size())));
}

RateFit fit_sublinear_rate(const std::vector<TraceRecord>& trace, std::optional<int> burn_in) {
  std::vector<double> nu;
  std::vector<double> dist;
  trace_columns(trace, nu, dist);
  return fit_sublinear_rate(nu, dist, burn_in.value_or(default_burn_in(trace.size())));
}

RateModel select_model(const RateFit& geometric, const RateFit& power) {
  return power.r_squared > geometric.r_squared ? RateModel::Power : RateModel::Geometric;
}

KlReport kl_certificate(const Problem& problem, const Vec& x_bar, double theta, double kappa,
                        const KlOptions& opts) {
  if (!(theta >= 0.0 && theta < 1.0)) throw Error(Errc::BadHyper, "theta must lie in [0,1)");
  if (!(opts.region_radius > 0.0) || opts.samples < 1)
    throw Error(Errc::BadHyper, "radius and sample count must be positive");
  if (x_bar.size() != problem.d) throw Error(Errc::BadHyper, "x_bar has the wrong dimension");
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> n01(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double u_bar = problem.u(x_bar);

  KlReport rep;
  rep.kappa_empirical = std::numeric_limits<double>::infinity();
  for (int s = 0; s < opts.samples; ++s) {
    Vec dir(problem.d);
    for (int k = 0; k < problem.d; ++k) dir(k) = n01(rng);
    const double nrm = dir.norm();
    if (nrm == 0.0) continue;
    const double radius = opts.region_radius * std::pow(unif(rng), 1.0 / problem.d);
    const Vec x = x_bar + dir / nrm * radius;
    ++rep.sampled;
    const double u = problem.u(x);
    if (!std::isfinite(u)) continue;
    const double gap = u - u_bar;
    const double level = opts.two_sided ? std::abs(gap) : gap;
    if (!(level > 0.0 && level < opts.eta)) continue;
    ++rep.in_band;
    const double g = problem.prox.min_norm_subgradient(x, problem.grad_global(x)).norm();
    rep.kappa_empirical = std::min(rep.kappa_empirical, g / std::pow(level, theta));
  }
  if (rep.in_band == 0) {
    if (opts.require_samples) throw Error(Errc::EmptyLevelBand, "no sample in the level band");
    rep.vacuous = true;
    rep.passed = true;
    return rep;
  }
  rep.passed = rep.kappa_empirical >= kappa;
  return rep;
}

}  // namespace sonata
