#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "lossy/cli.hpp"

int main(int argc, char** argv) {
  using namespace lossy::cli;

  CLI::App app{"Fisher information and Bayesian probe analysis for lossy bosonic channels", "lossy-estimator"};
  app.require_subcommand(1);
  app.fallthrough();

  // Raw flag values; applied on top of the config file so that flags win.
  std::vector<std::pair<std::string, std::optional<std::string>>> flags = {
      {"alpha", {}}, {"eta", {}},        {"tau", {}},        {"theta", {}}, {"gamma", {}},
      {"channel", {}}, {"grid-gamma", {}}, {"grid-tau", {}}, {"grid-theta", {}},
      {"out", {}},   {"format", {}},     {"name", {}},
  };
  for (auto& [key, value] : flags) app.add_option("--" + key, value);
  std::string config_path;
  app.add_option("--config", config_path, "flat key=value config file");

  std::optional<std::string> positional_name;
  const char* commands[] = {"single-fisher", "sweep", "optimality-scan", "joint-prob", "figure", "validate"};
  for (const char* c : commands) {
    auto* sub = app.add_subcommand(c);
    if (std::string(c) == "figure") sub->add_option("name", positional_name, "fig3, fig4 or fig5");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "lossy-estimator: config error: " << e.what() << '\n';
    return kExitConfig;
  }

  RunConfig cfg;
  try {
    cfg.command = parse_command(app.get_subcommands().front()->get_name());
    if (!config_path.empty()) {
      for (const auto& [k, v] : read_config_file(config_path)) apply_setting(cfg, k, v);
    }
    for (const auto& [key, value] : flags)
      if (value) apply_setting(cfg, key, *value);
    if (positional_name) apply_setting(cfg, "name", *positional_name);
  } catch (const ConfigError& e) {
    std::cerr << "lossy-estimator: config error: " << e.what() << '\n';
    return kExitConfig;
  }
  return run(cfg, std::cout, std::cerr);
}
