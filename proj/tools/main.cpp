#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <Eigen/Core>

#include "shellopt/cli/commands.hpp"
#include "shellopt/cli/config.hpp"
#include "shellopt/errors.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  bool deterministic = false;
  int threads = 0;
};

void attach_flags(CLI::App& sub, CommonFlags& flags) {
  sub.add_option("--config", flags.config_path, "run configuration (JSON)")
      ->required();
  sub.add_option("--out", flags.out_dir, "output directory");
  sub.add_option("--seed", flags.seed,
                 "override the seed of every config section");
  sub.add_flag("--deterministic", flags.deterministic,
               "single-threaded, byte-reproducible outputs");
  sub.add_option("--threads", flags.threads, "linear algebra thread count")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"compliance optimisation of thin shells over neural surface "
               "maps"};
  app.require_subcommand(1);

  CommonFlags flags;
  auto* fit = app.add_subcommand("fit", "fit a network to a target surface");
  auto* optimize =
      app.add_subcommand("optimize", "minimise compliance under a volume "
                                     "bound");
  auto* gradcheck =
      app.add_subcommand("gradcheck", "finite-difference gradient audit");
  auto* lat = app.add_subcommand("lattice", "lattice-skin geometry from a "
                                            "saved network");
  for (CLI::App* sub : {fit, optimize, gradcheck, lat})
    attach_flags(*sub, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? shellopt::cli::exit_ok : shellopt::cli::exit_config;
  }

  if (flags.threads > 0) Eigen::setNbThreads(flags.threads);
  if (flags.deterministic) Eigen::setNbThreads(1);

  try {
    auto config = shellopt::cli::load_config(flags.config_path);
    CLI::App* active = app.get_subcommands().front();
    if (active->count("--seed") > 0)
      shellopt::cli::override_seed(config, flags.seed);
    if (fit->parsed()) {
      if (!config.fit)
        throw shellopt::ConfigError("config has no \"fit\" section");
      return shellopt::cli::cmd_fit(*config.fit, flags.out_dir);
    }
    if (optimize->parsed()) {
      if (!config.optimize)
        throw shellopt::ConfigError("config has no \"optimize\" section");
      return shellopt::cli::cmd_optimize(*config.optimize, flags.out_dir);
    }
    if (gradcheck->parsed()) {
      if (!config.gradcheck)
        throw shellopt::ConfigError("config has no \"gradcheck\" section");
      return shellopt::cli::cmd_gradcheck(*config.gradcheck, flags.out_dir);
    }
    if (!config.lattice)
      throw shellopt::ConfigError("config has no \"lattice\" section");
    return shellopt::cli::cmd_lattice(*config.lattice, flags.out_dir);
  } catch (const shellopt::ConfigError& err) {
    std::cerr << "config error: " << err.what() << '\n';
    return shellopt::cli::exit_config;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return shellopt::cli::exit_failure;
  }
}
