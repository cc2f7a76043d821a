#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sonata/algorithm.hpp"
#include "sonata/analysis.hpp"
#include "sonata/app/config.hpp"
#include "sonata/graph.hpp"
#include "sonata/oracle.hpp"
#include "sonata/problems.hpp"
#include "sonata/theory.hpp"

namespace sonata::app {

struct ProblemSpec {
  std::string name = "lasso";
  LassoParams lasso;
  ScadParams scad;
  PcaParams pca;
  LogisticParams logistic;
  PhaseRetrievalParams phase;
  double theta = 0.75;
  int synthetic_m = 5;
  std::uint64_t synthetic_seed = 0;
};

struct GraphSpec {
  std::string type = "erdos_renyi";  // erdos_renyi | complete | path
  double p = 0.45;
  std::uint64_t seed = 1;
};

struct GossipSpec {
  std::optional<double> rho_target;
};

struct AlgorithmSpec {
  bool tuned = true;
  double safety = 0.9;
  double gamma_margin = 0.1;
  std::optional<double> alpha;
  std::optional<double> gamma;
  std::optional<double> xi;
  int max_iters = 10000;
  double stop_tol = 1e-10;
  bool dnorm_stop = false;
  int patience = 10000;
  std::uint64_t init_seed = 1;
  double init_radius = 1.0;
};

struct ReferenceSpec {
  std::string mode = "auto";  // auto | none
  double tol = 1e-12;
  int max_iters = 1000000;
};

struct TheorySpec {
  std::optional<double> kappa;
  bool sanitize = true;
  double epsilon = 1e-6;
};

struct OutputSpec {
  std::string dir = "out";
  std::string trace = "trace.csv";
  std::string summary = "summary.txt";
};

struct ExperimentConfig {
  std::string source;
  ProblemSpec problem;
  GraphSpec graph;
  GossipSpec gossip;
  AlgorithmSpec algorithm;
  ReferenceSpec reference;
  TheorySpec theory;
  OutputSpec output;
  bool verify = true;
};

/// Throws BadConfig with file:line context, including for unknown keys.
ExperimentConfig parse_experiment(const ConfigFile& file);
ExperimentConfig load_experiment(const std::string& path);

Problem build_problem(const ProblemSpec& spec);

struct Experiment {
  Problem problem;
  Graph graph;
  GossipMatrix base;    // before boosting
  GossipMatrix mixing;  // W^K
  int rounds;
  RunConfig run;
  Mat x0;
};

Experiment build_experiment(const ExperimentConfig& cfg);

struct ExperimentResult {
  Trace trace;
  std::optional<ReferenceSolution> reference;
  std::string reference_kind = "none";
  TheoryConstants constants;
  std::optional<long> predicted_iterations;
  std::optional<RateFit> geometric_fit;
  std::optional<RateFit> power_fit;
  std::vector<InequalityReport> reports;
  bool verified = true;
};

ExperimentResult run_experiment(const Experiment& exp, const ExperimentConfig& cfg);

/// key = value lines; the theory slope overlay reads `omega`.
void write_summary(std::ostream& os, const Experiment& exp, const ExperimentConfig& cfg,
                   const ExperimentResult& res);
void write_report_table(std::ostream& os, const std::vector<InequalityReport>& reports);

}  // namespace sonata::app
