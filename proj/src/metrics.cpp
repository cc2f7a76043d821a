#include "sonata/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "sonata/error.hpp"
#include "sonata/matrix_io.hpp"
#include "sonata/theory.hpp"

namespace sonata {

namespace {

double slack(double scale) { return kRelSlack * (1.0 + std::abs(scale)); }

void record(InequalityReport& rep, int nu, double lhs, double rhs, double scale) {
  const double excess = lhs - rhs;
  if (rep.checked == 0 || excess > rep.max_violation) rep.max_violation = excess;
  ++rep.checked;
  if (excess > slack(scale)) rep.violated_iters.push_back(nu);
}

}  // namespace

const char* const kTraceHeader = "nu,U,lyap,cons_err,track_err,delta,dnorm,E,T,dist_ref";

DiagnosticsContext make_context(const Problem& problem, const GossipMatrix& w,
                                const RunConfig& cfg, std::optional<Vec> x_ref) {
  TheoryInputs in;
  in.L = problem.L_avg();
  in.L_mx = problem.L_max();
  in.w_mx = w.w_mx();
  in.rho = w.rho();
  in.alpha = cfg.alpha;
  in.gamma = cfg.gamma;
  in.xi = cfg.xi;
  in.dim = problem.d;
  const TheoryConstants c = evaluate_constants(in);
  DiagnosticsContext ctx;
  ctx.alpha = cfg.alpha;
  ctx.gamma = cfg.gamma;
  ctx.c2 = c.c2;
  ctx.c3 = c.c3;
  ctx.L = in.L;
  ctx.L_mx = in.L_mx;
  ctx.rho = in.rho;
  ctx.x_ref = std::move(x_ref);
  return ctx;
}

Mat perp(const Mat& x) {
  const Eigen::RowVectorXd mean = x.colwise().mean();
  return x.rowwise() - mean;
}

TraceRecord diagnostics(const DiagnosticsContext& ctx, const Problem& problem,
                        const IterateState& state, const Mat& x_half) {
  const Mat& X = state.X;
  const Mat& Y = state.Y;
  const auto m = X.rows();
  TraceRecord rec;
  rec.nu = state.nu;

  const double cons = perp(X).norm();
  const double track = perp(Y).norm();
  rec.cons_err = cons;
  rec.track_err = track;
  rec.E = 2.0 * track * track + 4.0 * ctx.L_mx * ctx.L_mx * cons * cons;
  rec.dnorm = (x_half - X).norm();
  rec.T = std::sqrt(std::max(0.0, ctx.c2 * rec.dnorm * rec.dnorm + ctx.c3 * rec.E));

  double u_sum = 0.0;
  double u_half = 0.0;
  double delta2 = 0.0;
  double g2 = 0.0;
  bool valid = true;
  for (Eigen::Index i = 0; i < m; ++i) {
    const Vec xi = X.row(i).transpose();
    const Vec hi = x_half.row(i).transpose();
    const Vec yi = Y.row(i).transpose();
    u_sum += problem.u(xi);
    u_half += problem.u(hi);
    delta2 += (problem.grad_global(xi) - yi).squaredNorm();
    // s lies in dr(x_half) by prox optimality; G = grad f(x_half) + s.
    const Vec s = -yi - (hi - xi) / ctx.alpha;
    g2 += (problem.grad_global(hi) + s).squaredNorm();
    if (!problem.prox.contains_subgradient(hi, s, kRelSlack * (1.0 + s.lpNorm<Eigen::Infinity>())))
      valid = false;
  }
  rec.U = u_sum;
  rec.U_half = u_half;
  rec.lyap = rec.U + ctx.gamma * rec.E;
  rec.delta = std::sqrt(delta2);
  rec.subgrad_norm = std::sqrt(g2);
  rec.subgrad_valid = valid;
  rec.avg_identity_err =
      (Y.colwise().mean() - state.grad_cache.colwise().mean()).lpNorm<Eigen::Infinity>();
  if (ctx.x_ref) rec.dist_ref = (X.rowwise() - ctx.x_ref->transpose()).norm();
  return rec;
}

InequalityReport check_tracking_bound(const std::vector<TraceRecord>& trace, double L_mx) {
  InequalityReport rep{"tracking_bound", {}, 0.0, 0};
  for (const auto& r : trace) {
    const double lhs = r.delta * r.delta;
    const double rhs = 2.0 * r.track_err * r.track_err + 4.0 * L_mx * L_mx * r.cons_err * r.cons_err;
    record(rep, r.nu, lhs, rhs, std::max(lhs, rhs));
  }
  return rep;
}

InequalityReport check_consensus_dynamics(const std::vector<TraceRecord>& trace, double rho,
                                          double L_mx) {
  InequalityReport rep{"consensus_dynamics", {}, 0.0, 0};
  for (std::size_t k = 0; k + 1 < trace.size(); ++k) {
    const auto& a = trace[k];
    const auto& b = trace[k + 1];
    const double rx = rho * a.cons_err + rho * a.dnorm;
    const double ry = rho * a.track_err + 2.0 * rho * L_mx * a.cons_err + rho * L_mx * a.dnorm;
    // One entry per iteration: the worse of the two recursions.
    const double ex = b.cons_err - rx;
    const double ey = b.track_err - ry;
    if (ex - slack(std::max(b.cons_err, rx)) >= ey - slack(std::max(b.track_err, ry)))
      record(rep, a.nu, b.cons_err, rx, std::max(b.cons_err, rx));
    else
      record(rep, a.nu, b.track_err, ry, std::max(b.track_err, ry));
  }
  return rep;
}

InequalityReport check_lyapunov_descent(const std::vector<TraceRecord>& trace, double c2,
                                        double c3) {
  InequalityReport rep{"lyapunov_descent", {}, 0.0, 0};
  for (std::size_t k = 0; k + 1 < trace.size(); ++k) {
    const auto& a = trace[k];
    const double rhs = a.lyap - c2 * a.dnorm * a.dnorm - c3 * a.E;
    record(rep, a.nu, trace[k + 1].lyap, rhs, a.lyap);
  }
  return rep;
}

InequalityReport check_lyapunov_monotone(const std::vector<TraceRecord>& trace) {
  InequalityReport rep{"lyapunov_monotone", {}, 0.0, 0};
  for (std::size_t k = 0; k + 1 < trace.size(); ++k)
    record(rep, trace[k].nu, trace[k + 1].lyap, trace[k].lyap, trace[k].lyap);
  return rep;
}

InequalityReport check_subgradient_bound(const std::vector<TraceRecord>& trace, double L,
                                         double alpha) {
  InequalityReport rep{"subgradient_bound", {}, 0.0, 0};
  for (const auto& r : trace) {
    const double lhs = r.subgrad_norm * r.subgrad_norm;
    const double rhs = 3.0 * (L * L + 1.0 / (alpha * alpha)) * r.dnorm * r.dnorm + 3.0 * r.E;
    record(rep, r.nu, lhs, rhs, std::max(lhs, rhs));
    if (!r.subgrad_valid &&
        (rep.violated_iters.empty() || rep.violated_iters.back() != r.nu))
      rep.violated_iters.push_back(r.nu);
  }
  return rep;
}

InequalityReport check_tracking_identity(const std::vector<TraceRecord>& trace, double tol) {
  InequalityReport rep{"tracking_identity", {}, 0.0, 0};
  for (const auto& r : trace) {
    const double excess = r.avg_identity_err - tol;
    if (rep.checked == 0 || excess > rep.max_violation) rep.max_violation = excess;
    ++rep.checked;
    if (excess > 0.0) rep.violated_iters.push_back(r.nu);
  }
  return rep;
}

std::vector<InequalityReport> check_all(const std::vector<TraceRecord>& trace,
                                        const DiagnosticsContext& ctx) {
  return {check_lyapunov_monotone(trace),
          check_lyapunov_descent(trace, ctx.c2, ctx.c3),
          check_tracking_bound(trace, ctx.L_mx),
          check_consensus_dynamics(trace, ctx.rho, ctx.L_mx),
          check_subgradient_bound(trace, ctx.L, ctx.alpha),
          check_tracking_identity(trace)};
}

double jensen_gap(const std::function<double(const Vec&)>& u, const Vec& weights,
                  const Mat& points, double L) {
  const auto m = points.rows();
  const Vec avg = (weights.transpose() * points).transpose();
  double lhs = u(avg);
  double rhs = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    rhs += weights(i) * u(points.row(i).transpose());
    for (Eigen::Index j = 0; j < m; ++j)
      rhs += 0.5 * L * weights(i) * weights(j) * (points.row(j) - points.row(i)).squaredNorm();
  }
  return lhs - rhs;
}

void write_trace_csv(std::ostream& os, const std::vector<TraceRecord>& trace) {
  os << kTraceHeader << '\n';
  for (const auto& r : trace) {
    os << r.nu;
    for (double v : {r.U, r.lyap, r.cons_err, r.track_err, r.delta, r.dnorm, r.E, r.T})
      os << ',' << io::format_real(v);
    os << ',';
    if (r.dist_ref) os << io::format_real(*r.dist_ref);
    os << '\n';
  }
}

void write_trace_csv(const std::string& path, const std::vector<TraceRecord>& trace) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error(Errc::Io, "cannot open " + tmp);
    write_trace_csv(os, trace);
    os.flush();
    if (!os) {
      std::remove(tmp.c_str());
      throw Error(Errc::Io, "write failed for " + tmp);
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::remove(tmp.c_str());
    throw Error(Errc::Io, "cannot rename " + tmp + ": " + ec.message());
  }
}

std::vector<TraceRecord> read_trace_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw Error(Errc::Io, "empty trace");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTraceHeader) throw Error(Errc::Io, "unexpected trace header '" + line + "'");
  std::vector<TraceRecord> out;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    if (fields.size() != 10)
      throw Error(Errc::Io, "line " + std::to_string(lineno) + ": expected 10 fields");
    try {
      TraceRecord r;
      r.nu = std::stoi(fields[0]);
      double* slots[] = {&r.U, &r.lyap, &r.cons_err, &r.track_err, &r.delta, &r.dnorm, &r.E, &r.T};
      for (std::size_t k = 0; k < 8; ++k) *slots[k] = std::stod(fields[k + 1]);
      if (!fields[9].empty()) r.dist_ref = std::stod(fields[9]);
      out.push_back(r);
    } catch (const std::logic_error&) {
      throw Error(Errc::Io, "line " + std::to_string(lineno) + ": bad number");
    }
  }
  return out;
}

}  // namespace sonata
