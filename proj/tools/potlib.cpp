#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "potlib/cli.hpp"
#include "potlib/errors.hpp"

int main(int argc, char** argv) {
  namespace cli = potlib::cli;
  CLI::App app{"Potential-theoretic classification of model manifolds and warped cones"};
  app.set_version_flag("--version", "potlib 1.0.0");

  std::string command;
  std::string config;
  app.add_option("command", command, "classify | green | exit-time | cone | exhaust | mc | verify");
  app.add_option("--config", config, "Key-value config file; flags given on the command line override it");

  // Every config key is also a flag; values are applied through the same setter as the config parser.
  std::map<std::string, std::string> flags;
  const std::map<std::string, std::string> help = {
      {"manifold", "euclid(m), hyperbolic(m[,A]), e_r3_tail(m), slab(k), halfspace(n), model(m), cone(m)"},
      {"m", "Dimension"},
      {"sigma", "power(p[,join]) | exp(a,q[,join]) | sinh(A) | table(path)"},
      {"cap-angle", "Half-angle of the cap fiber of a cone"},
      {"lambda1", "First Dirichlet eigenvalue of a cone's fiber"},
      {"R-schedule", "Comma-separated increasing radii"},
      {"seed", "Monte Carlo seed"},
      {"n-paths", "Monte Carlo path count"},
      {"dt", "Monte Carlo time step"},
      {"max-time", "Monte Carlo censoring horizon"},
      {"workers", "Monte Carlo worker threads (POTLIB_THREADS overrides)"},
      {"tol", "Relative quadrature tolerance"},
      {"r", "Sampling radius (or start radius for mc)"},
      {"R", "Ball radius"},
      {"h0", "Start height (slab) or pole height (half space)"},
      {"T", "Explosion-probe horizon"},
      {"suite", "Verification suite"},
      {"output", "Output file (default stdout)"},
      {"format", "json | csv"}};
  for (const auto& key : cli::config_keys()) {
    if (key == "command") continue;
    app.add_option("--" + key, flags[key], help.at(key));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kExitOk : cli::kExitError;
  }

  cli::RunSpec spec;
  try {
    if (!config.empty()) spec = cli::parse_config(config);
    if (!command.empty()) cli::set_field(spec, "command", command);
    for (const auto& key : cli::config_keys()) {
      if (key != "command" && app.get_option("--" + key)->count() > 0) cli::set_field(spec, key, flags[key]);
    }
  } catch (const potlib::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitError;
  }
  return cli::run(spec, std::cout, std::cerr);
}
