#include "sonata/app/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "sonata/error.hpp"
#include "sonata/matrix_io.hpp"

namespace sonata::app {

namespace {

class Reader {
 public:
  explicit Reader(const ConfigFile& f) : f_(f) {}

  int positive_int(const std::string& s, const std::string& k, int def) const {
    const auto v = f_.get_int(s, k);
    if (!v) return def;
    if (*v < 1 || *v > 100000000) f_.fail(s, k, "must be a positive integer");
    return static_cast<int>(*v);
  }
  int nonneg_int(const std::string& s, const std::string& k, int def) const {
    const auto v = f_.get_int(s, k);
    if (!v) return def;
    if (*v < 0 || *v > 2000000000) f_.fail(s, k, "must be a nonnegative integer");
    return static_cast<int>(*v);
  }
  double positive(const std::string& s, const std::string& k, double def) const {
    const auto v = f_.get_double(s, k);
    if (!v) return def;
    if (!(*v > 0.0) || !std::isfinite(*v)) f_.fail(s, k, "must be positive");
    return *v;
  }
  double nonneg(const std::string& s, const std::string& k, double def) const {
    const auto v = f_.get_double(s, k);
    if (!v) return def;
    if (!(*v >= 0.0) || !std::isfinite(*v)) f_.fail(s, k, "must be nonnegative");
    return *v;
  }
  double fraction(const std::string& s, const std::string& k, double def, bool open) const {
    const auto v = f_.get_double(s, k);
    if (!v) return def;
    const bool ok = open ? (*v > 0.0 && *v < 1.0) : (*v >= 0.0 && *v <= 1.0);
    if (!ok) f_.fail(s, k, open ? "must lie in (0,1)" : "must lie in [0,1]");
    return *v;
  }
  std::optional<double> opt_positive(const std::string& s, const std::string& k) const {
    if (!f_.has(s, k)) return std::nullopt;
    return positive(s, k, 0.0);
  }
  std::uint64_t seed(const std::string& s, const std::string& k, std::uint64_t def) const {
    return f_.get_u64(s, k).value_or(def);
  }
  std::string choice(const std::string& s, const std::string& k, const std::string& def,
                     std::initializer_list<const char*> allowed) const {
    const auto v = f_.get_string(s, k);
    if (!v) return def;
    std::string list;
    for (const char* a : allowed) {
      if (*v == a) return *v;
      list += list.empty() ? a : std::string(", ") + a;
    }
    f_.fail(s, k, "'" + *v + "' is not one of: " + list);
  }
  const ConfigFile& file() const { return f_; }

 private:
  const ConfigFile& f_;
};

void read_shape(const Reader& r, int& m, int& n, int& d) {
  m = r.positive_int("problem", "m", m);
  n = r.positive_int("problem", "n", n);
  d = r.positive_int("problem", "d", d);
}

Vec row_mean(const Mat& x) { return x.colwise().mean().transpose(); }

void put(std::ostream& os, const char* key, double v) {
  os << key << " = " << io::format_real(v) << '\n';
}
void put(std::ostream& os, const char* key, const std::string& v) { os << key << " = " << v << '\n'; }
void put(std::ostream& os, const char* key, long v) { os << key << " = " << v << '\n'; }
void put(std::ostream& os, const char* key, int v) { os << key << " = " << v << '\n'; }

}  // namespace

ExperimentConfig parse_experiment(const ConfigFile& file) {
  const Reader r(file);
  ExperimentConfig c;
  c.source = file.source();

  ProblemSpec& p = c.problem;
  if (!file.has("problem", "name")) file.fail("problem", "name", "missing");
  p.name = r.choice("problem", "name", "",
                    {"lasso", "scad", "pca", "logistic", "phase_retrieval", "synthetic_kl"});
  if (p.name == "lasso") {
    auto& q = p.lasso;
    read_shape(r, q.m, q.n, q.d);
    q.sparsity = r.fraction("problem", "sparsity", q.sparsity, false);
    q.noise_sd = r.nonneg("problem", "noise_sd", q.noise_sd);
    q.lambda = r.positive("problem", "lambda", q.lambda);
    q.seed = r.seed("problem", "seed", q.seed);
  } else if (p.name == "scad") {
    auto& q = p.scad;
    read_shape(r, q.m, q.n, q.d);
    q.sparsity = r.fraction("problem", "sparsity", q.sparsity, false);
    q.noise_sd = r.nonneg("problem", "noise_sd", q.noise_sd);
    q.lambda = r.positive("problem", "lambda", q.lambda);
    q.a = r.positive("problem", "a", q.a);
    if (!(q.a > 1.0)) file.fail("problem", "a", "must exceed 1");
    q.denominator = r.choice("problem", "denominator", "continuous", {"continuous", "squared"}) == "squared"
                        ? ScadDenominator::squared
                        : ScadDenominator::continuous;
    q.seed = r.seed("problem", "seed", q.seed);
  } else if (p.name == "pca") {
    auto& q = p.pca;
    read_shape(r, q.m, q.n, q.d);
    q.seed = r.seed("problem", "seed", q.seed);
  } else if (p.name == "logistic") {
    auto& q = p.logistic;
    read_shape(r, q.m, q.n, q.d);
    q.seed = r.seed("problem", "seed", q.seed);
  } else if (p.name == "phase_retrieval") {
    auto& q = p.phase;
    read_shape(r, q.m, q.n, q.d);
    q.noise_sd = r.nonneg("problem", "noise_sd", q.noise_sd);
    q.seed = r.seed("problem", "seed", q.seed);
  } else {
    p.theta = r.fraction("problem", "theta", p.theta, true);
    if (p.theta < 0.5) file.fail("problem", "theta", "must be at least 0.5");
    p.synthetic_m = r.positive_int("problem", "m", p.synthetic_m);
    p.synthetic_seed = r.seed("problem", "seed", p.synthetic_seed);
  }

  c.graph.type = r.choice("graph", "type", c.graph.type, {"erdos_renyi", "complete", "path"});
  if (c.graph.type == "erdos_renyi") c.graph.p = r.fraction("graph", "p", c.graph.p, false);
  c.graph.seed = r.seed("graph", "seed", c.graph.seed);

  r.choice("gossip", "rule", "metropolis_hastings", {"metropolis_hastings"});
  if (file.has("gossip", "rho_target"))
    c.gossip.rho_target = r.fraction("gossip", "rho_target", 0.0, true);

  AlgorithmSpec& a = c.algorithm;
  a.tuned = r.choice("algorithm", "mode", "tuned", {"tuned", "explicit"}) == "tuned";
  a.safety = r.fraction("algorithm", "safety", a.safety, true);
  a.gamma_margin = r.positive("algorithm", "gamma_margin", a.gamma_margin);
  a.alpha = r.opt_positive("algorithm", "alpha");
  a.gamma = r.opt_positive("algorithm", "gamma");
  a.xi = r.opt_positive("algorithm", "xi");
  if (!a.tuned && !a.alpha) file.fail("algorithm", "alpha", "required when mode = explicit");
  a.max_iters = r.nonneg_int("algorithm", "max_iters", a.max_iters);
  a.stop_tol = r.nonneg("algorithm", "stop_tol", a.stop_tol);
  a.dnorm_stop = r.choice("algorithm", "stop_on", "T", {"T", "dnorm"}) == "dnorm";
  a.patience = r.positive_int("algorithm", "patience", a.patience);
  a.init_seed = r.seed("algorithm", "init_seed", a.init_seed);
  a.init_radius = r.nonneg("algorithm", "init_radius", a.init_radius);

  c.reference.mode = r.choice("reference", "mode", c.reference.mode, {"auto", "none"});
  c.reference.tol = r.positive("reference", "tol", c.reference.tol);
  c.reference.max_iters = r.positive_int("reference", "max_iters", c.reference.max_iters);

  c.theory.kappa = r.opt_positive("theory", "kappa");
  c.theory.sanitize = file.get_bool("theory", "sanitize").value_or(c.theory.sanitize);
  c.theory.epsilon = r.positive("theory", "epsilon", c.theory.epsilon);

  c.output.dir = file.get_string("output", "dir").value_or(c.output.dir);
  c.output.trace = file.get_string("output", "trace").value_or(c.output.trace);
  c.output.summary = file.get_string("output", "summary").value_or(c.output.summary);
  if (c.output.trace.empty()) file.fail("output", "trace", "must not be empty");
  if (c.output.summary.empty()) file.fail("output", "summary", "must not be empty");

  c.verify = file.get_bool("verify", "enabled").value_or(c.verify);

  file.ensure_all_used();
  return c;
}

ExperimentConfig load_experiment(const std::string& path) {
  return parse_experiment(ConfigFile::load(path));
}

Problem build_problem(const ProblemSpec& spec) {
  if (spec.name == "lasso") return make_lasso(spec.lasso);
  if (spec.name == "scad") return make_scad(spec.scad);
  if (spec.name == "pca") return make_pca(spec.pca);
  if (spec.name == "logistic") return make_logistic(spec.logistic);
  if (spec.name == "phase_retrieval") return make_phase_retrieval(spec.phase);
  if (spec.name == "synthetic_kl")
    return make_synthetic_kl(spec.theta, spec.synthetic_m, spec.synthetic_seed);
  throw Error(Errc::BadConfig, "unknown problem '" + spec.name + "'");
}

Experiment build_experiment(const ExperimentConfig& cfg) {
  Problem problem = build_problem(cfg.problem);
  Graph graph = cfg.graph.type == "complete" ? complete_graph(problem.m)
                : cfg.graph.type == "path"   ? path_graph(problem.m)
                                             : erdos_renyi(problem.m, cfg.graph.p, cfg.graph.seed);
  GossipMatrix base = metropolis_hastings(graph);
  BoostedMixing boosted = cfg.gossip.rho_target ? boost_mixing(base, *cfg.gossip.rho_target)
                                                : BoostedMixing{base, 1};

  const AlgorithmSpec& a = cfg.algorithm;
  RunConfig run;
  if (a.tuned) {
    run = tune(problem, boosted.matrix, a.safety, a.gamma_margin);
  } else if (boosted.matrix.rho() < 1.0 / std::sqrt(5.0)) {
    run = tune(problem, boosted.matrix, a.safety, a.gamma_margin);
  } else {
    // No admissible gamma exists; any positive weight keeps the diagnostics defined.
    run.xi = problem.L_avg();
    run.gamma = 1.0;
  }
  if (a.alpha) run.alpha = *a.alpha;
  if (a.gamma) run.gamma = *a.gamma;
  if (a.xi) run.xi = *a.xi;
  run.max_iters = a.max_iters;
  run.stop_tol = a.stop_tol;
  run.use_dnorm_stop = a.dnorm_stop;
  run.patience = a.patience;
  run.gossip_rounds = boosted.rounds;
  run.seed = a.init_seed;
  run.init_radius = a.init_radius;
  Mat x0 = sample_initial(problem, run);
  return Experiment{std::move(problem), std::move(graph),   std::move(base),
                    boosted.matrix,     boosted.rounds,     run,
                    std::move(x0)};
}

ExperimentResult run_experiment(const Experiment& exp, const ExperimentConfig& cfg) {
  const Problem& prob = exp.problem;
  ExperimentResult res;
  RunOptions opts;
  opts.x0 = exp.x0;
  const double ref_alpha = 1.0 / prob.L_avg();

  if (cfg.reference.mode == "auto") {
    if (prob.known_minimizer) {
      const Vec& x = *prob.known_minimizer;
      res.reference = ReferenceSolution{x, prob.u(x), prox_grad_residual(prob, x, ref_alpha), 0};
      res.reference_kind = "known";
    } else if (!prob.nonconvex) {
      res.reference = centralized_prox_grad(prob, row_mean(exp.x0), ref_alpha, cfg.reference.tol,
                                            cfg.reference.max_iters);
      res.reference_kind = "centralized";
    } else {
      // Stationary point reached from this initialization, polished centrally.
      const Trace first = run(prob, exp.mixing, exp.run, opts);
      res.reference = centralized_prox_grad(prob, row_mean(first.final_state.X), ref_alpha,
                                            cfg.reference.tol, cfg.reference.max_iters);
      res.reference_kind = "polished_endpoint";
    }
    opts.x_ref = res.reference->x_star;
  }

  res.trace = run(prob, exp.mixing, exp.run, opts);

  TheoryInputs in;
  in.L = prob.L_avg();
  in.L_mx = prob.L_max();
  in.w_mx = exp.mixing.w_mx();
  in.rho = exp.mixing.rho();
  in.alpha = exp.run.alpha;
  in.gamma = exp.run.gamma;
  in.xi = exp.run.xi;
  in.dim = prob.d;
  in.sanitize = cfg.theory.sanitize;
  if (prob.kl) {
    in.theta = prob.kl->theta;
    in.kappa = cfg.theory.kappa ? cfg.theory.kappa : prob.kl->kappa;
  } else if (cfg.theory.kappa) {
    in.kappa = cfg.theory.kappa;
  }
  res.constants = evaluate_constants(in);
  if (res.constants.c2 > 0.0 && res.constants.c3 > 0.0 && res.constants.theta &&
      *res.constants.theta <= 0.5 && res.constants.tau && *res.constants.tau > 0.0 &&
      *res.constants.tau < 1.0)
    res.predicted_iterations = predicted_complexity(res.constants, cfg.theory.epsilon);

  if (opts.x_ref) {
    try {
      res.geometric_fit = fit_linear_rate(res.trace.records);
    } catch (const Error& e) {
      if (e.code() != Errc::WindowTooSmall) throw;
    }
    try {
      res.power_fit = fit_sublinear_rate(res.trace.records);
    } catch (const Error& e) {
      if (e.code() != Errc::WindowTooSmall) throw;
    }
  }

  if (cfg.verify) {
    res.reports = check_all(res.trace.records, res.trace.context);
    for (const auto& rep : res.reports) res.verified = res.verified && rep.passed();
  }
  return res;
}

void write_summary(std::ostream& os, const Experiment& exp, const ExperimentConfig& cfg,
                   const ExperimentResult& res) {
  const Problem& prob = exp.problem;
  const TraceRecord& last = res.trace.records.back();
  put(os, "problem", prob.name);
  put(os, "m", prob.m);
  put(os, "d", prob.d);
  put(os, "graph", cfg.graph.type);
  put(os, "edges", static_cast<long>(exp.graph.edge_count()));
  put(os, "rho_base", exp.base.rho());
  put(os, "gossip_rounds", exp.rounds);
  put(os, "rho", exp.mixing.rho());
  put(os, "w_mx", exp.mixing.w_mx());
  put(os, "L", prob.L_avg());
  put(os, "L_mx", prob.L_max());
  put(os, "alpha", exp.run.alpha);
  put(os, "gamma", exp.run.gamma);
  put(os, "xi", exp.run.xi);
  put(os, "iterations", last.nu);
  put(os, "stop_reason", std::string(res.trace.reason == StopReason::Converged ? "converged" : "max_iters"));
  put(os, "final_U", last.U);
  put(os, "final_lyap", last.lyap);
  put(os, "final_cons_err", last.cons_err);
  put(os, "final_T", last.T);
  put(os, "reference", res.reference_kind);
  if (res.reference) {
    put(os, "reference_u", res.reference->u_star);
    put(os, "reference_residual", res.reference->residual);
  }
  if (last.dist_ref) put(os, "final_dist", *last.dist_ref);
  if (res.geometric_fit) {
    put(os, "fit_geometric_slope", res.geometric_fit->slope);
    put(os, "fit_geometric_r2", res.geometric_fit->r_squared);
    put(os, "fit_burn_in", res.geometric_fit->burn_in);
  }
  if (res.power_fit) {
    put(os, "fit_power_exponent", res.power_fit->exponent());
    put(os, "fit_power_r2", res.power_fit->r_squared);
  }
  if (res.geometric_fit && res.power_fit)
    put(os, "fit_model",
        std::string(select_model(*res.geometric_fit, *res.power_fit) == RateModel::Geometric
                        ? "geometric"
                        : "power"));
  const TheoryConstants& c = res.constants;
  put(os, "c1", c.c1);
  put(os, "c2", c.c2);
  put(os, "c3", c.c3);
  put(os, "c4", c.c4);
  put(os, "c4_negative", std::string(c.c4_negative ? "true" : "false"));
  if (c.c5) put(os, "c5", *c.c5);
  if (c.c6) put(os, "c6", *c.c6);
  if (c.c7) put(os, "c7", *c.c7);
  if (c.theta) put(os, "theta", *c.theta);
  if (c.omega) put(os, "omega", *c.omega);
  put(os, "omega_prime", c.omega_prime);
  if (c.tau) put(os, "tau", *c.tau);
  put(os, "tau_prime", c.tau_prime);
  put(os, "rho_condition_ok", std::string(c.rho_condition_ok ? "true" : "false"));
  put(os, "corollary_rho_ok", std::string(c.corollary_rho_ok ? "true" : "false"));
  if (res.predicted_iterations) put(os, "predicted_iterations", *res.predicted_iterations);
  if (cfg.verify) {
    put(os, "verified", std::string(res.verified ? "true" : "false"));
    for (const auto& rep : res.reports)
      put(os, ("violations_" + rep.name).c_str(), static_cast<long>(rep.violated_iters.size()));
  }
}

void write_report_table(std::ostream& os, const std::vector<InequalityReport>& reports) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-22s %8s %10s %14s\n", "check", "checked", "violations",
                "max_excess");
  os << buf;
  for (const auto& r : reports) {
    std::snprintf(buf, sizeof buf, "%-22s %8d %10zu %14.6e\n", r.name.c_str(), r.checked,
                  r.violated_iters.size(), r.max_violation);
    os << buf;
  }
}

}  // namespace sonata::app
