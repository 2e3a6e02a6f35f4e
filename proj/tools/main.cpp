#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <thread>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "supcogarch/errors.hpp"

namespace cli = supcogarch::cli;

int main(int argc, char** argv) {
  CLI::App app{"Simulation and analytics for COGARCH and supCOGARCH models"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  std::optional<std::string> out_dir;

  struct Command {
    const char* name;
    const char* help;
    int (*run)(const cli::ExperimentConfig&, const cli::RunOptions&);
  };
  const Command commands[] = {
      {"simulate", "write sample paths of L, a COGARCH and every requested variant", cli::cmd_simulate},
      {"analytics", "tabulate every closed-form quantity", cli::cmd_analytics},
      {"verify", "compare Monte Carlo estimates with closed forms", cli::cmd_verify},
      {"qstats", "jump ratios q at common jumps, histograms and bound checks", cli::cmd_qstats},
  };

  for (const auto& cmd : commands) {
    auto* sub = app.add_subcommand(cmd.name, cmd.help);
    sub->add_option("--config", config_path, "INI configuration file")->required();
    sub->add_option("--seed", seed, "root seed; overrides simulation.seed");
    sub->add_option("--threads", threads, "worker threads")->check(CLI::Range(1u, 4096u));
    sub->add_option("--out", out_dir, "output directory; overrides output.dir");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kSuccess : cli::kValidationError;
  }

  const auto* chosen = app.get_subcommands().front();
  try {
    auto config = cli::load_config(config_path);
    if (seed) config.seed = *seed;
    if (out_dir) config.output_dir = *out_dir;
    const cli::RunOptions opts{threads, config.output_dir};
    for (const auto& cmd : commands)
      if (chosen->get_name() == cmd.name) return cmd.run(config, opts);
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kIoError;
  } catch (const cli::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kIoError;
  } catch (const cli::ConfigError& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return cli::kValidationError;
  } catch (const supcogarch::NonStationary& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return cli::kValidationError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return cli::kValidationError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kValidationError;
  }
  return cli::kValidationError;
}
