// wedreg: minimize | sweep | reference | validate
//
//   wedreg sweep --preset fig1 --jobs 4 --out out/fig1
//   wedreg minimize --config my.cfg --eps 0.1
//   wedreg validate

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "wedreg/commands.hpp"
#include "wedreg/errors.hpp"
#include "wedreg/parallel.hpp"

namespace {

wedreg::ExperimentConfig load(const std::string& path, const std::string& preset,
                              bool required) {
  if (!path.empty() && !preset.empty()) {
    throw wedreg::ConfigError("--config and --preset are mutually exclusive");
  }
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw wedreg::ConfigError("cannot read config file " + path);
    std::ostringstream text;
    text << in.rdbuf();
    auto config = wedreg::parse_config(text.str());
    config.name = path;
    return config;
  }
  if (!preset.empty()) return wedreg::preset(preset);
  if (required) throw wedreg::ConfigError("pass --config PATH or --preset NAME");
  return {};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted-energy-dissipation regularization of semilinear waves"};
  app.require_subcommand(1);

  std::string config_path;
  std::string preset_name;
  std::string out_dir;
  int jobs = wedreg::max_threads();
  double eps = 0.0;
  bool inject_fault = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "Configuration file");
    sub->add_option("--preset", preset_name, "Built-in preset: fig1 | wave1d | klein-gordon");
    sub->add_option("--out", out_dir, "Output directory (overrides the config)");
  };

  CLI::App* minimize = app.add_subcommand("minimize", "Minimize for one eps");
  add_common(minimize);
  CLI::Option* minimize_eps =
      minimize->add_option("--eps", eps, "eps value (overrides the list)");

  CLI::App* sweep = app.add_subcommand("sweep", "eps sweep against the limit solution");
  add_common(sweep);
  sweep->add_option("--jobs", jobs, "Concurrent solves")->check(CLI::PositiveNumber);
  CLI::Option* sweep_eps = sweep->add_option("--eps", eps, "Single eps instead of the list");

  CLI::App* reference = app.add_subcommand("reference", "Limit-equation reference path");
  add_common(reference);

  CLI::App* validate = app.add_subcommand("validate", "Run the invariant suite");
  add_common(validate);
  validate->add_flag("--inject-fault", inject_fault,
                     "Negate the analytic gradient (the gradient checks must fail)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : wedreg::kExitConfig;
  }

  CLI::App* chosen = app.get_subcommands().front();
  wedreg::CommandOptions opts;
  opts.out_dir = out_dir;
  opts.jobs = jobs;
  opts.inject_fault = inject_fault;
  if (minimize_eps->count() > 0 || sweep_eps->count() > 0) opts.eps = eps;

  wedreg::ExperimentConfig config;
  try {
    config = load(config_path, preset_name, chosen != validate);
  } catch (const wedreg::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return wedreg::kExitConfig;
  }

  if (chosen == minimize) return wedreg::cmd_minimize(config, opts, std::cout, std::cerr);
  if (chosen == sweep) return wedreg::cmd_sweep(config, opts, std::cout, std::cerr);
  if (chosen == reference) return wedreg::cmd_reference(config, opts, std::cout, std::cerr);
  return wedreg::cmd_validate(config, opts, std::cout, std::cerr);
}
