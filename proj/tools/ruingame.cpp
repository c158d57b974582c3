#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ruingame/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Lifetime-ruin risk-sensitive control: closed-form game, grid oracle, Monte Carlo"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::size_t workers = 0;

  for (auto name : ruingame::kCommands) {
    auto* sub = app.add_subcommand(std::string(name));
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--out", out_dir, "output directory (default: config output_dir or .)");
    sub->add_option("--workers", workers, "Monte Carlo worker threads")
        ->envname(ruingame::kWorkersEnv)
        ->check(CLI::PositiveNumber);
  }
  app.get_subcommand("value")->description("U and pi* on the x_grid, summary, optional grid oracle");
  app.get_subcommand("hjb-check")->description("HJB residual on the interior of (a, d)");
  app.get_subcommand("game-cost")->description("saddle identity check for pi*, 0 and a constant policy");
  app.get_subcommand("simulate")->description("Monte Carlo estimate of J^n at x");
  app.get_subcommand("convergence")->description("J^n over n_list with dt scaled by 1/sqrt(n)");
  app.get_subcommand("validate")->description("check the problem's standing assumptions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ruingame::exit_code::validation;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  ruingame::RunConfig cfg;
  try {
    cfg = ruingame::load_run_config(config_path);
  } catch (const ruingame::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return ruingame::exit_code::validation;
  }

  ruingame::CommandOptions opt;
  opt.out_dir = out_dir;
  opt.workers = workers;
  return ruingame::run_command(command, cfg, opt);
}
