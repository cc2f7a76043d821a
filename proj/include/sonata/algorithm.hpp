#pragma once

#include <optional>
#include <vector>

#include "sonata/graph.hpp"
#include "sonata/metrics.hpp"
#include "sonata/problems.hpp"
#include "sonata/state.hpp"

namespace sonata {

/// Rows are the per-agent gradients grad f_i(x_i).
Mat grad_matrix(const Problem& problem, const Mat& x);

/// Rows drawn independently and uniformly from the ball of cfg.init_radius.
Mat sample_initial(const Problem& problem, const RunConfig& cfg);

/// Y0 = grad F(X0). Throws InfeasibleInit when a row lies outside dom r.
IterateState init(const Problem& problem, const Mat& x0);
IterateState init(const Problem& problem, const RunConfig& cfg);

/// prox_{alpha r}(x_i - alpha y_i), row by row.
Mat half_step(const Problem& problem, const IterateState& state, double alpha);
/// X+ = W X_half; Y+ = W (Y + grad F(X+) - grad F(X)). One gradient per agent.
void complete_step(const Problem& problem, const GossipMatrix& w, IterateState& state,
                   const Mat& x_half);
void step(const Problem& problem, const GossipMatrix& w, const RunConfig& cfg,
          IterateState& state);

/// xi = L, gamma with relative margin above its lower bound, alpha a
/// `safety` fraction of its upper bound. Throws MixingTooWeak when
/// rho >= 1/sqrt(5).
RunConfig tune(const Problem& problem, const GossipMatrix& w, double safety = 0.9,
               double gamma_margin = 0.1);

enum class StopReason { Converged, MaxIters };

struct RunOptions {
  std::optional<Vec> x_ref;
  std::optional<Mat> x0;
};

struct Trace {
  std::vector<TraceRecord> records;  // one per nu = 0..final
  IterateState final_state;
  StopReason reason = StopReason::MaxIters;
  DiagnosticsContext context;
};

Trace run(const Problem& problem, const GossipMatrix& w, const RunConfig& cfg,
          const RunOptions& opts = {});

}  // namespace sonata
