#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sonata/graph.hpp"
#include "sonata/problems.hpp"
#include "sonata/state.hpp"

namespace sonata {

struct TraceRecord {
  int nu = 0;
  double U = 0.0;      // sum_i u(x_i)
  double lyap = 0.0;   // U + gamma E
  double cons_err = 0.0;
  double track_err = 0.0;
  double delta = 0.0;  // ||grad f(x_i) - y_i|| stacked
  double dnorm = 0.0;  // ||X_half - X||
  double E = 0.0;
  double T = 0.0;
  std::optional<double> dist_ref;

  // Not part of the CSV schema.
  double U_half = 0.0;
  double subgrad_norm = 0.0;  // explicit element of dU(X_half)
  bool subgrad_valid = true;
  double avg_identity_err = 0.0;
};

/// Fixed inputs of the per-iteration diagnostics.
struct DiagnosticsContext {
  double alpha = 0.0;
  double gamma = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double L = 0.0;
  double L_mx = 0.0;
  double rho = 0.0;
  std::optional<Vec> x_ref;
};

DiagnosticsContext make_context(const Problem& problem, const GossipMatrix& w,
                                const RunConfig& cfg, std::optional<Vec> x_ref = std::nullopt);

/// (I - J) X
Mat perp(const Mat& x);

/// Record for iteration nu from X^nu, Y^nu and X^{nu+1/2}.
TraceRecord diagnostics(const DiagnosticsContext& ctx, const Problem& problem,
                        const IterateState& state, const Mat& x_half);

struct InequalityReport {
  std::string name;
  std::vector<int> violated_iters;
  double max_violation = 0.0;  // largest lhs - rhs seen, may be negative
  int checked = 0;
  bool passed() const { return violated_iters.empty(); }
};

constexpr double kRelSlack = 1e-9;

InequalityReport check_tracking_bound(const std::vector<TraceRecord>& trace, double L_mx);
InequalityReport check_consensus_dynamics(const std::vector<TraceRecord>& trace, double rho,
                                          double L_mx);
InequalityReport check_lyapunov_descent(const std::vector<TraceRecord>& trace, double c2, double c3);
InequalityReport check_lyapunov_monotone(const std::vector<TraceRecord>& trace);
InequalityReport check_subgradient_bound(const std::vector<TraceRecord>& trace, double L,
                                         double alpha);
InequalityReport check_tracking_identity(const std::vector<TraceRecord>& trace, double tol = 1e-10);

/// Every check above, in a fixed order.
std::vector<InequalityReport> check_all(const std::vector<TraceRecord>& trace,
                                        const DiagnosticsContext& ctx);

/// u(sum w_i x_i) - sum w_i u(x_i) - (L/2) sum_ij w_i w_j ||x_j - x_i||^2;
/// nonpositive for L-smooth u.
double jensen_gap(const std::function<double(const Vec&)>& u, const Vec& weights,
                  const Mat& points, double L);

// Trace CSV: nu,U,lyap,cons_err,track_err,delta,dnorm,E,T,dist_ref
extern const char* const kTraceHeader;
void write_trace_csv(std::ostream& os, const std::vector<TraceRecord>& trace);
/// Writes to path.tmp, then renames over path.
void write_trace_csv(const std::string& path, const std::vector<TraceRecord>& trace);
std::vector<TraceRecord> read_trace_csv(std::istream& is);

}  // namespace sonata
