// Acceptance criteria AC1-AC10. Prints one PASS/FAIL line per criterion.
//
//   acceptance          all criteria
//   acceptance AC3 AC7  selected criteria
//
// Exit status is nonzero if any selected criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "wedreg/commands.hpp"
#include "wedreg/csv.hpp"
#include "wedreg/validation.hpp"

using namespace wedreg;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string num(double v) { return format_number(v, 4); }

WedProblem scalar_problem(const Nonlinearity& nl, double u0, double u1, double T,
                          int n, double eps) {
  return make_problem(SpatialDomain::scalar(), nl, State::Constant(1, u0),
                      State::Constant(1, u1), build_grid(T, n), eps);
}

// Solves shared between criteria, computed on first use.
struct Runs {
  const Nonlinearity quartic = Nonlinearity::power(4.0);
  const std::vector<double> preset_eps{0.4, 0.2, 0.1, 0.05};
  const std::vector<double> energy_eps{0.4, 0.2, 0.1, 0.05, 0.025, 0.0125};

  // Scalar preset data at n = 600 against the limit ODE.
  const std::vector<ConvergenceRecord>& fig1_fine() {
    if (!fig1_fine_) {
      const WedProblem base = scalar_problem(quartic, 1.0, 0.0, 3.0, 600, 0.4);
      const SampledPath ref =
          solve_limit(base.domain, quartic, base.u0, base.u1, 3.0, 1e-4, 600);
      fig1_fine_ = convergence_study(base, energy_eps, ref, SolverOptions{}, 1);
    }
    return *fig1_fine_;
  }

  struct PathPair {
    double eps;
    WedProblem prob;
    MinimizeResult min;
    MinimizeResult el;
  };

  const std::vector<PathPair>& preset_paths(const std::string& name) {
    auto it = paths_.find(name);
    if (it != paths_.end()) return it->second;
    const ExperimentConfig c = preset(name);
    std::vector<PathPair> out;
    for (double eps : c.eps) {
      const WedProblem prob = c.problem_for(eps);
      out.push_back({eps, prob, minimize(prob, c.solver), solve_el(prob, c.solver)});
    }
    return paths_.emplace(name, std::move(out)).first->second;
  }

 private:
  std::optional<std::vector<ConvergenceRecord>> fig1_fine_;
  std::map<std::string, std::vector<PathPair>> paths_;
};

Verdict ac1(Runs& runs) {
  const auto& all = runs.fig1_fine();
  std::ostringstream d;
  bool ok = true;
  double first = 0.0, last = 0.0;
  for (std::size_t k = 0; k < runs.preset_eps.size(); ++k) {
    const auto& r = all[k];
    ok = ok && r.ok;
    if (k > 0) ok = ok && r.dist_sup < all[k - 1].dist_sup;
    d << (k ? ", " : "dist_sup ") << num(r.dist_sup);
    if (k == 0) first = r.dist_sup;
    last = r.dist_sup;
  }
  const double ratio = last / first;
  ok = ok && ratio < 0.4;
  d << "; ratio " << num(ratio) << " (< 0.4, strictly decreasing)";
  return {ok, d.str()};
}

Verdict ac2(Runs& runs) {
  double worst_scalar = 0.0, worst_line = 0.0;
  bool ok = true;
  for (const auto& p : runs.preset_paths("fig1")) {
    ok = ok && p.min.converged && p.el.converged;
    worst_scalar = std::max(worst_scalar, sup_distance(p.min.traj, p.el.traj));
  }
  for (const auto& p : runs.preset_paths("wave1d")) {
    ok = ok && p.min.converged && p.el.converged;
    worst_line = std::max(worst_line, sup_distance(p.min.traj, p.el.traj));
  }
  ok = ok && worst_scalar <= 1e-8 && worst_line <= 1e-6;
  return {ok, "max |minimize - solve_el| scalar " + num(worst_scalar) +
                  " (<= 1e-8), 1-D " + num(worst_line) + " (<= 1e-6)"};
}

Verdict ac3(Runs& runs) {
  const auto& all = runs.fig1_fine();
  std::ostringstream d;
  bool ok = true;
  double emax = 0.0, emin = 1e300;
  std::vector<double> values;
  for (std::size_t k = 0; k < all.size(); ++k) {
    ok = ok && all[k].ok;
    values.push_back(all[k].energy.value);
    emax = std::max(emax, all[k].energy.value);
    emin = std::min(emin, all[k].energy.value);
    d << (k ? ", " : "energy ") << num(all[k].energy.value);
  }
  // Blow-up: increments that keep growing up to the smallest eps. A
  // saturating sequence has its last increment below the largest one.
  double largest_earlier = -1e300;
  for (std::size_t k = 1; k + 1 < values.size(); ++k) {
    largest_earlier = std::max(largest_earlier, values[k] - values[k - 1]);
  }
  const double last_increment = values.back() - values[values.size() - 2];
  const bool saturating = last_increment < largest_earlier;
  const double ratio = emax / emin;
  ok = ok && ratio <= 2.0 && saturating;
  d << "; max/min " << num(ratio) << " (<= 2), last increment " << num(last_increment)
    << " vs largest earlier " << num(largest_earlier)
    << (saturating ? " (saturating)" : " (growing)");
  return {ok, d.str()};
}

Verdict ac4(Runs& runs) {
  double el_scalar = 0.0, el_line = 0.0, bc_scalar = 0.0, bc_line = 0.0;
  int checked = 0;
  const SolverOptions scalar_opts;
  for (const auto& r : runs.fig1_fine()) {
    if (!r.ok) continue;
    ++checked;
    el_scalar = std::max(el_scalar, r.el_residual);
    bc_scalar = std::max({bc_scalar, r.bc_res.second, r.bc_res.third});
  }
  for (const auto& p : runs.preset_paths("fig1")) {
    if (!p.min.converged) continue;
    ++checked;
    el_scalar = std::max(el_scalar, el_residual(p.min.traj, p.prob));
    const FinalResidual bc = final_bc_residual(p.min.traj);
    bc_scalar = std::max({bc_scalar, bc.second, bc.third});
  }
  double tol_line = 0.0;
  for (const auto& p : runs.preset_paths("wave1d")) {
    if (!p.min.converged) continue;
    ++checked;
    tol_line = preset("wave1d").solver.tol_grad;
    el_line = std::max(el_line, el_residual(p.min.traj, p.prob));
    const FinalResidual bc = final_bc_residual(p.min.traj);
    bc_line = std::max({bc_line, bc.second, bc.third});
  }
  const bool ok = checked > 0 && el_scalar <= 10 * scalar_opts.tol_grad &&
                  el_line <= 10 * tol_line && bc_scalar <= 1e-6 && bc_line <= 1e-5;
  return {ok, std::to_string(checked) + " minimizers; el_residual scalar " + num(el_scalar) +
                  " (<= " + num(10 * scalar_opts.tol_grad) + "), 1-D " + num(el_line) +
                  " (<= " + num(10 * tol_line) + "); final conditions scalar " +
                  num(bc_scalar) + " (<= 1e-6), 1-D " + num(bc_line) + " (<= 1e-5)"};
}

Verdict ac5(Runs& runs) {
  std::mt19937_64 rng(2024);
  const WedProblem scalar = scalar_problem(runs.quartic, 1.0, 0.0, 3.0, 300, 0.1);
  const WedProblem line = preset("wave1d").problem_for(0.1);
  double grad = 0.0, asym = 0.0, min_form = 1e300;
  for (const WedProblem* prob : {&scalar, &line}) {
    for (int probe = 0; probe < 5; ++probe) {
      const FreeVariables x = affine_free(*prob) + random_free(*prob, rng, 0.5);
      const FreeVariables a = random_free(*prob, rng);
      const FreeVariables b = random_free(*prob, rng);
      grad = std::max(grad, fd_gradient_error(*prob, x, a));
      asym = std::max(asym, hessian_asymmetry(*prob, x, a, b));
      min_form = std::min(
          min_form, free_inner(*prob, a, hessian_apply(embed(x, *prob), a, *prob)));
    }
  }
  const bool ok = grad <= 1e-6 && asym <= 1e-12 && min_form >= 0.0;
  return {ok, "FD gradient rel. error " + num(grad) + " (<= 1e-6), Hessian asymmetry " +
                  num(asym) + " (<= 1e-12), min <d, H d> " + num(min_form) + " (>= 0)"};
}

Verdict ac6(Runs&) {
  const WedProblem prob = preset("fig1").problem_for(0.1);
  std::mt19937_64 rng(77);
  const MinimizeResult a = minimize(prob, {}, random_free(prob, rng, 2.0));
  const MinimizeResult b = minimize(prob, {}, random_free(prob, rng, 2.0));
  const double d = sup_distance(a.traj, b.traj);
  return {a.converged && b.converged && d <= 1e-8,
          "two random starts differ by " + num(d) + " (<= 1e-8)"};
}

Verdict ac7(Runs& runs) {
  const WedProblem base = scalar_problem(runs.quartic, 1.0, 0.0, 3.0, 120, 0.2);
  const TimeFunction u = [](double t) { return State::Constant(1, std::cos(t)); };
  const TimeFunction utt = [](double t) { return State::Constant(1, -std::cos(t)); };
  const RecoveryStudy s = recovery_gap_study(base, u, utt, 120, 3);
  std::ostringstream d;
  bool ok = true;
  for (std::size_t k = 0; k < s.gaps.size(); ++k) {
    d << (k ? ", " : "gap ") << "n=" << s.steps[k] << ": " << num(s.gaps[k]);
    if (k > 0) ok = ok && std::abs(s.gaps[k]) < std::abs(s.gaps[k - 1]);
  }
  double worst = 1e300;
  for (double o : s.orders) worst = std::min(worst, o);
  ok = ok && worst >= 0.8;
  d << "; min order " << num(worst) << " (>= 0.8)";
  return {ok, d.str()};
}

Verdict ac8(Runs&) {
  const WedProblem none = scalar_problem(Nonlinearity::none(), 1.0, 0.5, 3.0, 300, 0.1);
  const MinimizeResult m = minimize(none, {});
  const double affine_dist = sup_distance(m.traj, embed(affine_free(none), none));
  double oracle = 0.0;
  for (double eps : {0.4, 0.2, 0.05}) {
    const WedProblem q = scalar_problem(Nonlinearity::quadratic(), 1.0, 0.0, 3.0, 40, eps);
    oracle = std::max(oracle, sup_distance(minimize(q, {}).traj, dense_quadratic_minimizer(q)));
  }
  const double tiny = 16 * std::numeric_limits<double>::epsilon();
  const bool ok = std::abs(m.objective) <= tiny && affine_dist <= tiny && oracle <= 1e-10;
  return {ok, "W = 0: objective " + num(m.objective) + ", distance to affine " +
                  num(affine_dist) + " (<= " + num(tiny) + "); quadratic vs dense oracle " +
                  num(oracle) + " (<= 1e-10)"};
}

Verdict ac9(Runs& runs) {
  const double drift = limit_energy_drift(runs.quartic, 1.0, 0.0, 3.0, 1e-4);
  const auto line = SpatialDomain::interval(8.0, 127);
  const double order = limit_self_convergence_order(
      line, runs.quartic, make_datum(line, "bump 1"), make_datum(line, "zero"), 2.0, 0.05, 40);
  const bool ok = drift <= 1e-8 && order >= 1.8 && order <= 2.2;
  return {ok, "energy drift " + num(drift) + " (<= 1e-8), leapfrog order " + num(order) +
                  " (in [1.8, 2.2])"};
}

Verdict ac10(Runs& runs) {
  bool exact = true;
  int count = 0;
  for (const auto& r : runs.fig1_fine()) {
    if (r.traj.states.size() == 0) continue;
    exact = exact && r.traj.states(0, 0) == 1.0;
    ++count;
  }
  for (const char* name : {"fig1", "wave1d"}) {
    for (const auto& p : runs.preset_paths(name)) {
      exact = exact && p.min.traj.states.col(0) == p.prob.u0 &&
              p.el.traj.states.col(0) == p.prob.u0;
      count += 2;
    }
  }
  // The sweep summary must carry u1_gap on every row.
  const auto dir = std::filesystem::temp_directory_path() / "wedreg_acceptance_ac10";
  std::filesystem::remove_all(dir);
  std::ostringstream log, err;
  CommandOptions opts;
  opts.out_dir = dir;
  const int code = cmd_sweep(preset("fig1"), opts, log, err);
  std::ifstream in(dir / "sweep_summary.csv");
  std::string header, row;
  std::getline(in, header);
  int rows = 0, with_gap = 0;
  double max_gap = 0.0;
  while (std::getline(in, row)) {
    ++rows;
    std::vector<std::string> cells;
    std::stringstream ls(row);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() >= 6 && std::isfinite(std::stod(cells[5]))) {
      ++with_gap;
      max_gap = std::max(max_gap, std::stod(cells[5]));
    }
  }
  const bool has_column = header.find("u1_gap") != std::string::npos;
  const bool ok = exact && code == 0 && has_column && rows > 0 && with_gap == rows;
  return {ok, "u_0 = u0 bitwise in " + std::to_string(count) + " runs; u1_gap on " +
                  std::to_string(with_gap) + "/" + std::to_string(rows) +
                  " sweep rows (max " + num(max_gap) + ", reported only)"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Verdict(Runs&)>>> criteria{
      {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4}, {"AC5", ac5},
      {"AC6", ac6}, {"AC7", ac7}, {"AC8", ac8}, {"AC9", ac9}, {"AC10", ac10}};
  std::vector<std::string> selected(argv + 1, argv + argc);
  Runs runs;
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    if (!selected.empty() &&
        std::find(selected.begin(), selected.end(), name) == selected.end()) {
      continue;
    }
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = run(runs);
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%-4s %s  %s  [%.1f s]\n", name.c_str(), v.pass ? "PASS" : "FAIL",
                v.detail.c_str(), secs);
    std::fflush(stdout);
    if (!v.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
