#include "wedreg/commands.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <vector>

#include "wedreg/csv.hpp"
#include "wedreg/diagnostics.hpp"
#include "wedreg/errors.hpp"
#include "wedreg/validation.hpp"

namespace wedreg {

namespace fs = std::filesystem;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

fs::path output_dir(const ExperimentConfig& config, const CommandOptions& opts) {
  fs::path dir = opts.out_dir.empty() ? fs::path(config.output_directory)
                                      : opts.out_dir;
  fs::create_directories(dir);
  return dir;
}

std::string trajectory_name(double eps) {
  return "trajectory_eps" + format_number(eps, 12) + ".csv";
}

// Collects the files of one command and writes them in order; if any write
// fails, the files already written are removed again.
class OutputSet {
 public:
  void add(fs::path path, std::string text) {
    files_.emplace_back(std::move(path), std::move(text));
  }
  void commit() {
    std::vector<fs::path> done;
    try {
      for (const auto& [path, text] : files_) {
        write_text_file(path, text);
        done.push_back(path);
      }
    } catch (...) {
      std::error_code ignored;
      for (const auto& path : done) fs::remove(path, ignored);
      throw;
    }
  }

 private:
  std::vector<std::pair<fs::path, std::string>> files_;
};

template <class Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DimensionError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  }
}

std::vector<double> eps_list(const ExperimentConfig& config,
                             const CommandOptions& opts) {
  if (opts.eps) return {*opts.eps};
  return config.eps;
}

ExperimentConfig effective(const ExperimentConfig& config,
                           const CommandOptions& opts) {
  ExperimentConfig c = config;
  c.eps = eps_list(config, opts);
  validate_config(c);
  return c;
}

}  // namespace

int cmd_minimize(const ExperimentConfig& config, const CommandOptions& opts,
                 std::ostream& log, std::ostream& err) {
  return guarded(err, [&] {
    const ExperimentConfig c = effective(config, opts);
    if (c.eps.size() != 1) {
      throw ConfigError("minimize needs a single eps (use --eps or a one-entry list)");
    }
    const double eps = c.eps.front();
    const WedProblem prob = c.problem_for(eps);
    const MinimizeResult res = minimize(prob, c.solver);
    if (!res.converged) {
      throw SolverError("minimize did not converge (" + res.message +
                        ", scaled gradient " + format_number(res.grad_norm, 3) +
                        ")");
    }
    const double el = el_residual(res.traj, prob);
    const FinalResidual bc = final_bc_residual(res.traj);
    const double energy =
        prob.grid.steps >= 5 ? energy_lhs(res.traj, prob.nl).value : kNaN;

    CsvBuilder summary(c.precision);
    summary.header({"eps", "tau", "objective", "grad_norm", "newton_iters",
                    "el_residual", "bc_res_2", "bc_res_3", "energy_value"});
    summary.cell(eps).cell(prob.grid.tau).cell(res.objective).cell(res.grad_norm)
        .cell(res.newton_iters).cell(el).cell(bc.second).cell(bc.third)
        .cell(energy).end_row();

    const fs::path dir = output_dir(c, opts);
    OutputSet out;
    out.add(dir / trajectory_name(eps), trajectory_csv(res.traj, c.precision));
    out.add(dir / "summary.csv", summary.str());
    out.commit();

    log << "eps " << format_number(eps, 6) << ": objective "
        << format_number(res.objective, 12) << ", " << res.newton_iters
        << " Newton steps, el_residual " << format_number(el, 3)
        << ", final conditions " << format_number(bc.second, 3) << " / "
        << format_number(bc.third, 3) << "\n"
        << "wrote " << (dir / "summary.csv").string() << "\n";
    return static_cast<int>(kExitOk);
  });
}

int cmd_sweep(const ExperimentConfig& config, const CommandOptions& opts,
              std::ostream& log, std::ostream& err) {
  return guarded(err, [&] {
    const ExperimentConfig c = effective(config, opts);
    const WedProblem base = c.problem_for(c.eps.front());
    const SampledPath ref =
        solve_limit(base.domain, base.nl, base.u0, base.u1, c.final_time,
                    c.reference_dt, c.steps);
    const auto records =
        convergence_study(base, c.eps, ref, c.solver, std::max(1, opts.jobs));

    const fs::path dir = output_dir(c, opts);
    OutputSet out;
    out.add(dir / "reference.csv",
            sampled_csv(ref.domain, ref.spacing, ref.samples, c.precision));
    CsvBuilder summary(c.precision);
    summary.header({"eps", "tau", "dist_sup", "dist_l2", "energy_value",
                    "u1_gap", "iterations", "status"});
    int successes = 0;
    double emax = 0.0;
    double emin = std::numeric_limits<double>::infinity();
    log << std::left << std::setw(10) << "eps" << std::setw(14) << "dist_sup"
        << std::setw(14) << "dist_l2" << std::setw(14) << "energy"
        << std::setw(14) << "u1_gap" << "status\n";
    for (const auto& r : records) {
      const bool have = r.traj.states.size() > 0;
      if (have) {
        out.add(dir / trajectory_name(r.eps), trajectory_csv(r.traj, c.precision));
      }
      summary.cell(r.eps).cell(r.tau)
          .cell(have ? r.dist_sup : kNaN).cell(have ? r.dist_l2 : kNaN)
          .cell(have ? r.energy.value : kNaN).cell(have ? r.u1_gap : kNaN)
          .cell(r.newton_iters).cell(std::string_view(r.status)).end_row();
      if (r.ok) {
        ++successes;
        emax = std::max(emax, r.energy.value);
        emin = std::min(emin, r.energy.value);
      }
      log << std::left << std::setw(10) << format_number(r.eps, 6)
          << std::setw(14) << format_number(r.dist_sup, 6) << std::setw(14)
          << format_number(r.dist_l2, 6) << std::setw(14)
          << format_number(r.energy.value, 6) << std::setw(14)
          << format_number(r.u1_gap, 6) << r.status << "\n";
    }
    out.add(dir / "sweep_summary.csv", summary.str());
    out.commit();

    if (successes > 0) {
      log << "energy bound over the sweep: max " << format_number(emax, 6)
          << ", max/min " << format_number(emax / emin, 6) << "\n";
    }
    log << "u1_gap is reported only; it is not asserted\n"
        << "wrote " << (dir / "sweep_summary.csv").string() << "\n";
    if (successes == 0) {
      err << "solver failure: no eps value converged\n";
      return static_cast<int>(kExitSolver);
    }
    return static_cast<int>(kExitOk);
  });
}

int cmd_reference(const ExperimentConfig& config, const CommandOptions& opts,
                  std::ostream& log, std::ostream& err) {
  return guarded(err, [&] {
    const ExperimentConfig c = effective(config, opts);
    const SpatialDomain dom = c.domain();
    const SampledPath ref =
        solve_limit(dom, c.nonlinearity(), make_datum(dom, c.problem.u0),
                    make_datum(dom, c.problem.u1), c.final_time, c.reference_dt,
                    c.steps);
    const fs::path dir = output_dir(c, opts);
    OutputSet out;
    out.add(dir / "reference.csv",
            sampled_csv(dom, ref.spacing, ref.samples, c.precision));
    out.commit();
    log << "wrote " << (dir / "reference.csv").string() << "\n";
    return static_cast<int>(kExitOk);
  });
}

int cmd_validate(const ExperimentConfig& config, const CommandOptions& opts,
                 std::ostream& log, std::ostream& err) {
  std::vector<CheckResult> checks;
  try {
    ValidationOptions vo;
    vo.flip_gradient_sign = opts.inject_fault;
    checks = run_validation(vo);
  } catch (const std::exception& e) {
    err << "validation aborted: " << e.what() << "\n";
    return kExitValidation;
  }

  auto threshold_text = [](const CheckResult& r) {
    if (r.relation == "in") {
      return "in [" + format_number(r.threshold, 6) + ", " +
             format_number(r.upper, 6) + "]";
    }
    return r.relation + " " + format_number(r.threshold, 6);
  };

  CsvBuilder csv(config.precision);
  csv.header({"check", "value", "threshold", "verdict"});
  bool all = true;
  for (const auto& r : checks) {
    all = all && r.pass;
    csv.cell(std::string_view(r.name)).cell(r.value)
        .cell(std::string_view(threshold_text(r)))
        .cell(std::string_view(r.pass ? "pass" : "FAIL")).end_row();
    log << std::left << std::setw(34) << r.name << std::setw(16)
        << format_number(r.value, 6) << std::setw(22) << threshold_text(r)
        << (r.pass ? "pass" : "FAIL") << "\n";
  }
  try {
    const fs::path dir = output_dir(config, opts);
    write_text_file(dir / "validation.csv", csv.str());
  } catch (const std::exception& e) {
    err << "cannot write validation.csv: " << e.what() << "\n";
    return kExitValidation;
  }
  const auto failed = std::count_if(checks.begin(), checks.end(),
                                    [](const CheckResult& r) { return !r.pass; });
  log << (all ? "all " + std::to_string(checks.size()) + " checks passed"
              : std::to_string(failed) + " of " + std::to_string(checks.size()) +
                    " checks failed")
      << "\n";
  return all ? kExitOk : kExitValidation;
}

}  // namespace wedreg
