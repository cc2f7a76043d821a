#include "sonata/app/commands.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "sonata/app/experiment.hpp"
#include "sonata/error.hpp"
#include "sonata/matrix_io.hpp"

namespace sonata::app {

namespace fs = std::filesystem;

namespace {

void write_file_atomic(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error(Errc::Io, "cannot open " + tmp.string());
    os << content;
    os.flush();
    if (!os) throw Error(Errc::Io, "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(Errc::Io, "cannot rename onto " + path.string());
  }
}

struct RunOutcome {
  Experiment exp;
  ExperimentResult res;
};

RunOutcome execute(const ExperimentConfig& cfg) {
  Experiment exp = build_experiment(cfg);
  ExperimentResult res = run_experiment(exp, cfg);
  return RunOutcome{std::move(exp), std::move(res)};
}

void emit(const RunOutcome& o, const ExperimentConfig& cfg, const fs::path& dir) {
  fs::create_directories(dir);
  write_trace_csv((dir / cfg.output.trace).string(), o.res.trace.records);
  std::ostringstream summary;
  write_summary(summary, o.exp, cfg, o.res);
  write_file_atomic(dir / cfg.output.summary, summary.str());
}

void brief(std::ostream& out, const RunOutcome& o) {
  const TraceRecord& last = o.res.trace.records.back();
  out << o.exp.problem.name << ": " << last.nu << " iterations ("
      << (o.res.trace.reason == StopReason::Converged ? "converged" : "max_iters")
      << "), alpha=" << io::format_real(o.exp.run.alpha);
  if (last.dist_ref) out << ", final_dist=" << io::format_real(*last.dist_ref);
  if (o.res.geometric_fit)
    out << ", slope=" << io::format_real(o.res.geometric_fit->slope)
        << ", r2=" << io::format_real(o.res.geometric_fit->r_squared);
  out << '\n';
}

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return kExitError;
}

void constants_table(std::ostream& out, const TheoryInputs& in, const TheoryConstants& c,
                     const std::optional<long>& iters) {
  std::vector<std::pair<std::string, std::string>> rows;
  auto add = [&rows](const std::string& k, double v) { rows.emplace_back(k, io::format_real(v)); };
  auto add_opt = [&rows](const std::string& k, const std::optional<double>& v) {
    rows.emplace_back(k, v ? io::format_real(*v) : std::string());
  };
  add("L", in.L);
  add("L_mx", in.L_mx);
  add("w_mx", in.w_mx);
  add("rho", in.rho);
  add("alpha", in.alpha);
  add("gamma", in.gamma);
  add("xi", in.xi);
  add("c1", c.c1);
  add("c2", c.c2);
  add("c3", c.c3);
  add("c4", c.c4);
  add_opt("c5", c.c5);
  add_opt("c6", c.c6);
  add_opt("c7", c.c7);
  add_opt("omega", c.omega);
  add("omega_prime", c.omega_prime);
  add_opt("tau", c.tau);
  add("tau_prime", c.tau_prime);
  rows.emplace_back("c4_negative", c.c4_negative ? "true" : "false");
  rows.emplace_back("rho_condition_ok", c.rho_condition_ok ? "true" : "false");
  rows.emplace_back("corollary_rho_ok", c.corollary_rho_ok ? "true" : "false");
  rows.emplace_back("predicted_iterations", iters ? std::to_string(*iters) : std::string());
  char buf[128];
  for (const auto& [k, v] : rows) {
    std::snprintf(buf, sizeof buf, "%-22s %s\n", k.c_str(), v.c_str());
    out << buf;
  }
  out << '\n';
  for (std::size_t i = 0; i < rows.size(); ++i) out << (i ? "," : "") << rows[i].first;
  out << '\n';
  for (std::size_t i = 0; i < rows.size(); ++i) out << (i ? "," : "") << rows[i].second;
  out << '\n';
}

}  // namespace

int cmd_run(const std::string& config_path, const CommonOptions& opts, std::ostream& out,
            std::ostream& err) {
  return guarded(err, [&] {
    const ExperimentConfig cfg = load_experiment(config_path);
    const RunOutcome o = execute(cfg);
    emit(o, cfg, opts.out_dir ? fs::path(*opts.out_dir) : fs::path(cfg.output.dir));
    if (!opts.quiet) brief(out, o);
    if (!o.res.verified) {
      if (!opts.quiet) write_report_table(out, o.res.reports);
      err << "verification failed\n";
      return kExitVerify;
    }
    return kExitOk;
  });
}

int cmd_verify(const std::string& config_path, const CommonOptions& opts, std::ostream& out,
               std::ostream& err) {
  return guarded(err, [&] {
    ExperimentConfig cfg = load_experiment(config_path);
    cfg.verify = true;
    const RunOutcome o = execute(cfg);
    if (!opts.quiet) {
      brief(out, o);
      write_report_table(out, o.res.reports);
    }
    if (!o.res.verified) {
      err << "verification failed\n";
      return kExitVerify;
    }
    return kExitOk;
  });
}

int cmd_constants(const ConstantsArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    TheoryInputs in = args.inputs;
    if (args.config) {
      const ExperimentConfig cfg = load_experiment(*args.config);
      const Experiment exp = build_experiment(cfg);
      in.L = exp.problem.L_avg();
      in.L_mx = exp.problem.L_max();
      in.w_mx = exp.mixing.w_mx();
      in.rho = exp.mixing.rho();
      in.alpha = exp.run.alpha;
      in.gamma = exp.run.gamma;
      in.xi = exp.run.xi;
      in.dim = exp.problem.d;
      in.sanitize = cfg.theory.sanitize;
      if (exp.problem.kl) {
        if (!in.theta) in.theta = exp.problem.kl->theta;
        if (!in.kappa) in.kappa = cfg.theory.kappa ? cfg.theory.kappa : exp.problem.kl->kappa;
      }
    }
    const TheoryConstants c = constants(in);
    std::optional<long> iters;
    if (args.epsilon && c.theta && *c.theta <= 0.5 && c.tau) iters = predicted_complexity(c, *args.epsilon);
    constants_table(out, in, c, iters);
    return kExitOk;
  });
}

int cmd_sweep(const std::string& config_path, const std::string& parameter,
              const std::vector<std::string>& values, int parallel, const CommonOptions& opts,
              std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    const auto dot = parameter.find('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 == parameter.size())
      throw Error(Errc::BadConfig, "sweep parameter must look like section.key");
    if (values.empty()) throw Error(Errc::BadConfig, "sweep needs at least one value");
    if (parallel < 1) throw Error(Errc::BadConfig, "--parallel must be at least 1");
    const std::string section = parameter.substr(0, dot);
    const std::string key = parameter.substr(dot + 1);
    const ConfigFile base = ConfigFile::load(config_path);

    // Parse everything up front so config errors surface before any run.
    std::vector<ExperimentConfig> cfgs;
    for (const auto& v : values) {
      ConfigFile f = base;
      f.set(section, key, v);
      cfgs.push_back(parse_experiment(f));
    }
    const fs::path root = opts.out_dir ? fs::path(*opts.out_dir) : fs::path(cfgs.front().output.dir);

    struct Slot {
      std::optional<RunOutcome> outcome;
      std::string error;
    };
    std::vector<Slot> slots(cfgs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next++; i < cfgs.size(); i = next++) {
        try {
          RunOutcome o = execute(cfgs[i]);
          emit(o, cfgs[i], root / ("sweep_" + std::to_string(i)));
          slots[i].outcome = std::move(o);
        } catch (const std::exception& e) {
          slots[i].error = e.what();
        }
      }
    };
    const auto nthreads = std::min<std::size_t>(static_cast<std::size_t>(parallel), cfgs.size());
    if (nthreads <= 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
    }

    std::ostringstream csv;
    csv << "index,value,status,iterations,final_dist,fit_slope,fit_r2,verified\n";
    int code = kExitOk;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      csv << i << ',' << values[i] << ',';
      if (!slots[i].outcome) {
        csv << "error,,,,,\n";
        err << "error: " << parameter << "=" << values[i] << ": " << slots[i].error << '\n';
        code = kExitError;
        continue;
      }
      const auto& res = slots[i].outcome->res;
      const TraceRecord& last = res.trace.records.back();
      csv << (res.trace.reason == StopReason::Converged ? "converged" : "max_iters") << ','
          << last.nu << ',' << (last.dist_ref ? io::format_real(*last.dist_ref) : "") << ','
          << (res.geometric_fit ? io::format_real(res.geometric_fit->slope) : "") << ','
          << (res.geometric_fit ? io::format_real(res.geometric_fit->r_squared) : "") << ','
          << (cfgs[i].verify ? (res.verified ? "true" : "false") : "") << '\n';
      if (!res.verified && code == kExitOk) code = kExitVerify;
      if (!opts.quiet) {
        out << parameter << "=" << values[i] << ": ";
        brief(out, *slots[i].outcome);
      }
    }
    fs::create_directories(root);
    write_file_atomic(root / "sweep.csv", csv.str());
    return code;
  });
}

}  // namespace sonata::app
