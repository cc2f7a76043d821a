#include <cmath>
#include <limits>
#include <random>

#include "sonata/algorithm.hpp"
#include "sonata/error.hpp"
#include "sonata/theory.hpp"

namespace sonata {

namespace {

void require_finite(const Mat& a, const char* what) {
  if (!a.allFinite()) throw Error(Errc::NumericalBlowup, std::string("non-finite entry in ") + what);
}

void check_config(const RunConfig& cfg) {
  if (!(cfg.alpha > 0.0)) throw Error(Errc::BadHyper, "alpha must be positive");
  if (!(cfg.gamma > 0.0) || !(cfg.xi > 0.0)) throw Error(Errc::BadHyper, "gamma and xi must be positive");
  if (cfg.max_iters < 0) throw Error(Errc::BadHyper, "max_iters must be nonnegative");
  if (cfg.gossip_rounds < 1) throw Error(Errc::BadHyper, "gossip_rounds must be at least 1");
  if (cfg.patience < 1) throw Error(Errc::BadHyper, "patience must be at least 1");
}

}  // namespace

Mat grad_matrix(const Problem& problem, const Mat& x) {
  Mat g(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    g.row(i) = problem.grad[static_cast<std::size_t>(i)](x.row(i).transpose()).transpose();
  return g;
}

Mat sample_initial(const Problem& problem, const RunConfig& cfg) {
  if (!(cfg.init_radius >= 0.0)) throw Error(Errc::BadHyper, "init_radius must be nonnegative");
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> n01(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Mat x(problem.m, problem.d);
  for (int i = 0; i < problem.m; ++i) {
    Vec dir(problem.d);
    for (int k = 0; k < problem.d; ++k) dir(k) = n01(rng);
    const double nrm = dir.norm();
    const double radius = cfg.init_radius * std::pow(unif(rng), 1.0 / problem.d);
    x.row(i) = (nrm > 0.0 ? dir / nrm * radius : dir).transpose();
  }
  return x;
}

IterateState init(const Problem& problem, const Mat& x0) {
  if (x0.rows() != problem.m || x0.cols() != problem.d)
    throw Error(Errc::BadHyper, "initial point has the wrong shape");
  for (Eigen::Index i = 0; i < x0.rows(); ++i)
    if (!std::isfinite(problem.r(x0.row(i).transpose())))
      throw Error(Errc::InfeasibleInit, "row " + std::to_string(i) + " lies outside dom r");
  IterateState s;
  s.X = x0;
  s.grad_cache = grad_matrix(problem, x0);
  s.Y = s.grad_cache;
  s.nu = 0;
  require_finite(s.Y, "initial gradients");
  return s;
}

IterateState init(const Problem& problem, const RunConfig& cfg) {
  return init(problem, sample_initial(problem, cfg));
}

Mat half_step(const Problem& problem, const IterateState& state, double alpha) {
  Mat out(state.X.rows(), state.X.cols());
  for (Eigen::Index i = 0; i < state.X.rows(); ++i) {
    const Vec v = (state.X.row(i) - alpha * state.Y.row(i)).transpose();
    out.row(i) = problem.prox.evaluate(v, alpha).transpose();
  }
  require_finite(out, "X_half");
  return out;
}

void complete_step(const Problem& problem, const GossipMatrix& w, IterateState& state,
                   const Mat& x_half) {
  const Mat& W = w.weights();
  Mat x_next = W * x_half;
  require_finite(x_next, "X");
  Mat g_next = grad_matrix(problem, x_next);
  require_finite(g_next, "grad F(X)");
  Mat y_next = W * (state.Y + g_next - state.grad_cache);
  require_finite(y_next, "Y");
  state.X = std::move(x_next);
  state.Y = std::move(y_next);
  state.grad_cache = std::move(g_next);
  ++state.nu;
}

void step(const Problem& problem, const GossipMatrix& w, const RunConfig& cfg,
          IterateState& state) {
  const Mat x_half = half_step(problem, state, cfg.alpha);
  complete_step(problem, w, state, x_half);
}

RunConfig tune(const Problem& problem, const GossipMatrix& w, double safety,
               double gamma_margin) {
  if (!(safety > 0.0 && safety < 1.0)) throw Error(Errc::BadHyper, "safety must lie in (0,1)");
  if (!(gamma_margin > 0.0)) throw Error(Errc::BadHyper, "gamma margin must be positive");
  const double rho = w.rho();
  if (rho >= 1.0 / std::sqrt(5.0))
    throw Error(Errc::MixingTooWeak, "rho = " + std::to_string(rho) + " >= 1/sqrt(5)");
  const double L = problem.L_avg();
  const double Lmx = problem.L_max();
  const double wmx = w.w_mx();
  const double rho2 = rho * rho;
  const double contraction = 1.0 - 5.0 * rho2;

  RunConfig cfg;
  cfg.xi = L;
  cfg.gamma = (1.0 + gamma_margin) * (1.0 / (2.0 * cfg.xi) + L * wmx / (Lmx * Lmx)) / contraction;
  const double a1 = 1.0 / (L / 2.0 + cfg.xi / 2.0 + 14.0 * Lmx * Lmx * cfg.gamma * rho2);
  const double a2 = std::sqrt((contraction * cfg.gamma - 1.0 / (2.0 * cfg.xi)) / (2.0 * L * wmx));
  cfg.alpha = safety * std::min(a1, a2);

  TheoryInputs in;
  in.L = L;
  in.L_mx = Lmx;
  in.w_mx = wmx;
  in.rho = rho;
  in.alpha = cfg.alpha;
  in.gamma = cfg.gamma;
  in.xi = cfg.xi;
  in.dim = problem.d;
  constants(in);  // throws InvalidRegime if c2 or c3 fails
  return cfg;
}

Trace run(const Problem& problem, const GossipMatrix& w, const RunConfig& cfg,
          const RunOptions& opts) {
  check_config(cfg);
  if (w.size() != problem.m) throw Error(Errc::BadHyper, "gossip matrix size differs from m");
  Trace trace;
  trace.context = make_context(problem, w, cfg, opts.x_ref);
  const bool t_usable = trace.context.c2 > 0.0 && trace.context.c3 > 0.0;
  const bool dnorm_stop = cfg.use_dnorm_stop || !t_usable;

  IterateState state = opts.x0 ? init(problem, *opts.x0) : init(problem, cfg);
  double best = std::numeric_limits<double>::infinity();
  int best_nu = 0;
  for (;;) {
    const Mat x_half = half_step(problem, state, cfg.alpha);
    trace.records.push_back(diagnostics(trace.context, problem, state, x_half));
    const TraceRecord& rec = trace.records.back();
    const double metric = dnorm_stop ? rec.dnorm : rec.T;
    if (metric <= cfg.stop_tol) {
      trace.reason = StopReason::Converged;
      break;
    }
    if (state.nu >= cfg.max_iters) {
      trace.reason = StopReason::MaxIters;
      break;
    }
    if (metric < best) {
      best = metric;
      best_nu = state.nu;
    } else if (state.nu - best_nu >= cfg.patience) {
      throw Error(Errc::NoProgress, "no decrease in " + std::to_string(cfg.patience) + " iterations");
    }
    complete_step(problem, w, state, x_half);
  }
  trace.final_state = std::move(state);
  return trace;
}

}  // namespace sonata
