#include "wedreg/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include "wedreg/errors.hpp"

namespace wedreg {

namespace {

constexpr std::string_view kFig1 = R"(# Scalar case d = 0, p = 4, u0 = 1, u1 = 0.
[problem]
dimension = 0
potential = power
p = 4
u0 = constant 1
u1 = zero

[time]
T = 3
n = 300

[sweep]
eps = 0.4, 0.2, 0.1, 0.05
energy_checks = true

[solver]
tol_grad = 1e-10
max_newton = 100

[reference]
dt = 1e-4

[output]
directory = out/fig1
precision = 12
)";

constexpr std::string_view kWave1d = R"(# Semilinear wave on [-8, 8], bump datum at rest.
[problem]
dimension = 1
potential = power
p = 4
u0 = bump 1
u1 = zero
L = 8
m = 127

[time]
T = 2
n = 200

[sweep]
eps = 0.4, 0.2, 0.1, 0.05
energy_checks = true

[solver]
tol_grad = 1e-8
max_newton = 100

[reference]
dt = 0.01

[output]
directory = out/wave1d
precision = 12
)";

constexpr std::string_view kKleinGordon = R"(# Scalar semilinear Klein-Gordon: W(r) = r^2/2 + |r|^4/2.
[problem]
dimension = 0
potential = klein-gordon
p = 4
u0 = constant 1
u1 = constant 0.5

[time]
T = 3
n = 300

[sweep]
eps = 0.4, 0.2, 0.1, 0.05
energy_checks = true

[solver]
tol_grad = 1e-10
max_newton = 100

[reference]
dt = 1e-4

[output]
directory = out/klein-gordon
precision = 12
)";

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::optional<double> to_double(std::string_view s) {
  const std::string t = trim(s);
  double v = 0.0;
  const char* begin = t.data();
  const char* end = t.data() + t.size();
  if (!t.empty() && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end || t.empty()) return std::nullopt;
  return v;
}

std::optional<int> to_int(std::string_view s) {
  const std::string t = trim(s);
  int v = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    return std::nullopt;
  }
  return v;
}

std::optional<bool> to_bool(std::string_view s) {
  const std::string t = trim(s);
  if (t == "true" || t == "yes" || t == "on" || t == "1") return true;
  if (t == "false" || t == "no" || t == "off" || t == "0") return false;
  return std::nullopt;
}

std::optional<std::vector<double>> to_list(std::string_view s) {
  std::string t = trim(s);
  if (!t.empty() && t.front() == '[') {
    if (t.back() != ']') return std::nullopt;
    t = t.substr(1, t.size() - 2);
  }
  std::vector<double> out;
  std::stringstream in(t);
  std::string item;
  while (std::getline(in, item, ',')) {
    auto v = to_double(item);
    if (!v) return std::nullopt;
    out.push_back(*v);
  }
  return out;
}

// Line numbers of the keys that were present, for semantic messages.
using KeyLines = std::map<std::string, int>;

std::string at(const KeyLines& lines, const std::string& key) {
  auto it = lines.find(key);
  return it == lines.end() ? "" : "line " + std::to_string(it->second) + ": ";
}

void semantic_checks(const ExperimentConfig& c, const KeyLines& lines,
                     std::vector<std::string>& errors) {
  auto fail = [&](const std::string& key, const std::string& msg) {
    errors.push_back(at(lines, key) + msg);
  };
  const ProblemConfig& p = c.problem;
  if (p.dimension != 0 && p.dimension != 1) {
    fail("problem.dimension", "dimension must be 0 or 1");
  }
  if (p.potential == "power" || p.potential == "klein-gordon") {
    if (!(p.p > 2.0)) fail("problem.p", "p must be > 2");
  } else if (p.potential != "none" && p.potential != "quadratic") {
    fail("problem.potential",
         "potential must be power | none | quadratic | klein-gordon");
  }
  if (p.dimension == 1) {
    if (!(p.half_length > 0.0)) fail("problem.L", "L must be positive");
    if (p.interior_nodes < 3) fail("problem.m", "m must be >= 3");
  }
  if (!(c.final_time > 0.0)) fail("time.T", "T must be positive");
  if (c.steps < 4) fail("time.n", "n too small (need n >= 4)");
  if (c.eps.empty()) fail("sweep.eps", "eps list must be nonempty");
  for (std::size_t k = 0; k < c.eps.size(); ++k) {
    if (!(c.eps[k] > 0.0)) {
      fail("sweep.eps", "eps must be positive");
      break;
    }
    if (k > 0 && !(c.eps[k] < c.eps[k - 1])) {
      fail("sweep.eps", "eps list must be strictly descending");
      break;
    }
  }
  if (c.energy_checks &&
      std::any_of(c.eps.begin(), c.eps.end(), [](double e) { return e >= 0.5; })) {
    fail("sweep.eps", "eps must be < 1/2 when energy checks are enabled");
  }
  try {
    c.solver.validate();
  } catch (const ConfigError& e) {
    fail("solver", e.what());
  }
  if (!(c.reference_dt > 0.0)) {
    fail("reference.dt", "reference dt must be positive");
  } else if (p.dimension == 1 && p.interior_nodes >= 1 && p.half_length > 0.0) {
    const double h = 2.0 * p.half_length / (p.interior_nodes + 1);
    if (c.reference_dt > 0.9 * h) {
      fail("reference.dt", "reference dt violates CFL (dt <= 0.9 h)");
    }
  }
  if (c.precision < 1 || c.precision > 17) {
    fail("output.precision", "precision must lie in [1, 17]");
  }
  if (c.output_directory.empty()) {
    fail("output.directory", "output directory must be nonempty");
  }
  // The data strings are checked by actually building them.
  if (errors.empty()) {
    try {
      const SpatialDomain dom = c.domain();
      make_datum(dom, p.u0);
    } catch (const ConfigError& e) {
      fail("problem.u0", e.what());
    }
    try {
      make_datum(c.domain(), p.u1);
    } catch (const ConfigError& e) {
      fail("problem.u1", e.what());
    }
  }
}

[[noreturn]] void throw_errors(const std::vector<std::string>& errors) {
  std::string msg;
  for (const auto& e : errors) msg += (msg.empty() ? "" : "\n") + e;
  throw ConfigError(msg);
}

}  // namespace

SpatialDomain ExperimentConfig::domain() const {
  if (problem.dimension == 0) return SpatialDomain::scalar();
  return SpatialDomain::interval(problem.half_length, problem.interior_nodes);
}

Nonlinearity ExperimentConfig::nonlinearity() const {
  if (problem.potential == "none") return Nonlinearity::none();
  if (problem.potential == "quadratic") return Nonlinearity::quadratic();
  if (problem.potential == "klein-gordon") {
    return Nonlinearity::klein_gordon(problem.p);
  }
  return Nonlinearity::power(problem.p);
}

TimeGrid ExperimentConfig::grid() const { return build_grid(final_time, steps); }

WedProblem ExperimentConfig::problem_for(double eps) const {
  const SpatialDomain dom = domain();
  return make_problem(dom, nonlinearity(), make_datum(dom, problem.u0),
                      make_datum(dom, problem.u1), grid(), eps);
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig c;
  std::vector<std::string> errors;
  KeyLines lines;
  bool tol_given = false;
  std::string section;

  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto cut = raw.find_first_of("#;");
    std::string line = trim(cut == std::string::npos ? raw : raw.substr(0, cut));
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') {
        errors.push_back(where + "malformed section header");
        continue;
      }
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      static const char* known[] = {"problem", "time",   "sweep",
                                    "solver",  "reference", "output"};
      if (std::find(std::begin(known), std::end(known), section) ==
          std::end(known)) {
        errors.push_back(where + "unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back(where + "expected key = value");
      continue;
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    const std::string full = section + "." + key;
    lines[full] = line_no;

    auto number = [&](double& dst) {
      if (auto v = to_double(value); v && std::isfinite(*v)) {
        dst = *v;
      } else {
        errors.push_back(where + full + ": expected a number, got '" + value + "'");
      }
    };
    auto integer = [&](int& dst) {
      if (auto v = to_int(value)) {
        dst = *v;
      } else {
        errors.push_back(where + full + ": expected an integer, got '" + value + "'");
      }
    };

    if (full == "problem.dimension") {
      integer(c.problem.dimension);
    } else if (full == "problem.potential") {
      c.problem.potential = value;
    } else if (full == "problem.p") {
      number(c.problem.p);
    } else if (full == "problem.u0") {
      c.problem.u0 = value;
    } else if (full == "problem.u1") {
      c.problem.u1 = value;
    } else if (full == "problem.L") {
      number(c.problem.half_length);
    } else if (full == "problem.m") {
      integer(c.problem.interior_nodes);
    } else if (full == "time.T") {
      number(c.final_time);
    } else if (full == "time.n") {
      integer(c.steps);
    } else if (full == "sweep.eps") {
      if (auto v = to_list(value)) {
        c.eps = *v;
      } else {
        errors.push_back(where + "sweep.eps: expected a list of numbers");
      }
    } else if (full == "sweep.energy_checks") {
      if (auto v = to_bool(value)) {
        c.energy_checks = *v;
      } else {
        errors.push_back(where + "sweep.energy_checks: expected true/false");
      }
    } else if (full == "solver.tol_grad") {
      number(c.solver.tol_grad);
      tol_given = true;
    } else if (full == "solver.max_newton") {
      integer(c.solver.max_newton);
    } else if (full == "solver.max_cg") {
      integer(c.solver.max_cg);
    } else if (full == "solver.backtrack") {
      number(c.solver.backtrack);
    } else if (full == "solver.armijo") {
      number(c.solver.armijo);
    } else if (full == "solver.linear_solver") {
      if (value == "direct") {
        c.solver.linear_solver = LinearSolver::kDirect;
      } else if (value == "cg") {
        c.solver.linear_solver = LinearSolver::kConjugateGradient;
      } else {
        errors.push_back(where + "solver.linear_solver: expected direct | cg");
      }
    } else if (full == "reference.dt") {
      number(c.reference_dt);
    } else if (full == "output.directory") {
      c.output_directory = value;
    } else if (full == "output.precision") {
      integer(c.precision);
    } else {
      errors.push_back(where + "unknown key '" + full + "'");
    }
  }
  if (!errors.empty()) throw_errors(errors);

  if (!tol_given && (c.problem.dimension == 0 || c.problem.dimension == 1)) {
    c.solver.tol_grad = c.problem.dimension == 0 ? 1e-10 : 1e-8;
  }
  semantic_checks(c, lines, errors);
  if (!errors.empty()) throw_errors(errors);
  return c;
}

void validate_config(const ExperimentConfig& config) {
  std::vector<std::string> errors;
  semantic_checks(config, {}, errors);
  if (!errors.empty()) throw_errors(errors);
}

std::vector<std::string> preset_names() { return {"fig1", "wave1d", "klein-gordon"}; }

std::string_view preset_text(std::string_view name) {
  if (name == "fig1") return kFig1;
  if (name == "wave1d") return kWave1d;
  if (name == "klein-gordon") return kKleinGordon;
  throw ConfigError("unknown preset '" + std::string(name) +
                    "' (expected fig1 | wave1d | klein-gordon)");
}

ExperimentConfig preset(std::string_view name) {
  ExperimentConfig c = parse_config(preset_text(name));
  c.name = std::string(name);
  return c;
}

}  // namespace wedreg
