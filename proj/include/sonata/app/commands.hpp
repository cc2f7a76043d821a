#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sonata/theory.hpp"

namespace sonata::app {

// Exit codes: 0 success, 2 verification failure, 1 any other error.
constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitVerify = 2;

struct CommonOptions {
  std::optional<std::string> out_dir;
  bool quiet = false;
};

/// Writes the trace CSV and the summary under the output directory.
int cmd_run(const std::string& config_path, const CommonOptions& opts, std::ostream& out,
            std::ostream& err);

/// Runs the inequality suite along the trajectory; writes no files.
int cmd_verify(const std::string& config_path, const CommonOptions& opts, std::ostream& out,
               std::ostream& err);

struct ConstantsArgs {
  /// Take L, L_mx, w_mx, rho and the tuned parameters from an experiment.
  std::optional<std::string> config;
  TheoryInputs inputs;
  std::optional<double> epsilon;
};

/// Prints every constant as a two-column table and as one CSV row.
int cmd_constants(const ConstantsArgs& args, std::ostream& out, std::ostream& err);

/// One run per value of `parameter` ("section.key"), each in its own
/// subdirectory, plus sweep.csv. parallel > 1 runs independent values on
/// worker threads; outputs do not depend on it.
int cmd_sweep(const std::string& config_path, const std::string& parameter,
              const std::vector<std::string>& values, int parallel, const CommonOptions& opts,
              std::ostream& out, std::ostream& err);

}  // namespace sonata::app
