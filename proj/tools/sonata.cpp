#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sonata/app/commands.hpp"

int main(int argc, char** argv) {
  using namespace sonata::app;
  CLI::App app{"Decentralized SONATA simulator and rate analysis"};
  app.require_subcommand(1);

  std::string config;
  std::string out_dir;
  bool quiet = false;
  auto common = [&](CLI::App* sub, bool need_config) {
    auto* opt = sub->add_option("--config", config, "Experiment config file");
    if (need_config) opt->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "Output directory (overrides [output] dir)");
    sub->add_flag("--quiet", quiet, "Suppress progress output");
  };

  auto* run = app.add_subcommand("run", "Run one experiment, write trace and summary");
  common(run, true);
  auto* verify = app.add_subcommand("verify", "Run the inequality suite along a trajectory");
  common(verify, true);

  auto* cons = app.add_subcommand("constants", "Print analysis constants");
  ConstantsArgs cargs;
  std::optional<double> kappa;
  std::optional<double> theta;
  std::optional<double> eps;
  auto* cons_cfg = cons->add_option("--config", config, "Take inputs from an experiment config")
                       ->check(CLI::ExistingFile);
  auto* cons_L = cons->add_option("--L", cargs.inputs.L, "Mean smoothness constant");
  cons->add_option("--Lmx", cargs.inputs.L_mx, "Largest smoothness constant");
  cons->add_option("--wmx", cargs.inputs.w_mx, "Sum of row maxima of W");
  cons->add_option("--rho", cargs.inputs.rho, "Spectral norm of W - J");
  cons->add_option("--alpha", cargs.inputs.alpha, "Step size");
  cons->add_option("--gamma", cargs.inputs.gamma, "Lyapunov weight");
  cons->add_option("--xi", cargs.inputs.xi, "Young parameter");
  cons->add_option("--dim", cargs.inputs.dim, "Dimension entering c5");
  cons->add_option("--kappa", kappa, "KL constant");
  cons->add_option("--theta", theta, "KL exponent");
  cons->add_option("--eps", eps, "Target accuracy for the iteration estimate");
  cons->add_flag("--sanitize", cargs.inputs.sanitize, "Clamp c4 at zero");
  cons_cfg->excludes(cons_L);

  auto* sweep = app.add_subcommand("sweep", "Repeat an experiment over values of one key");
  common(sweep, true);
  std::string parameter;
  std::vector<std::string> values;
  int parallel = 1;
  sweep->add_option("--param", parameter, "Key to vary, as section.key")->required();
  sweep->add_option("--values", values, "Values to try")->required();
  sweep->add_option("--parallel", parallel, "Concurrent runs")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  CommonOptions opts;
  if (!out_dir.empty()) opts.out_dir = out_dir;
  opts.quiet = quiet;

  if (run->parsed()) return cmd_run(config, opts, std::cout, std::cerr);
  if (verify->parsed()) return cmd_verify(config, opts, std::cout, std::cerr);
  if (cons->parsed()) {
    if (!config.empty()) cargs.config = config;
    cargs.inputs.kappa = kappa;
    cargs.inputs.theta = theta;
    cargs.epsilon = eps;
    return cmd_constants(cargs, std::cout, std::cerr);
  }
  return cmd_sweep(config, parameter, values, parallel, opts, std::cout, std::cerr);
}
