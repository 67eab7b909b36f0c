#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "liouville/config.hpp"
#include "liouville/errors.hpp"
#include "liouville/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Liouville-space generator workbench"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::string out_dir;
  long long seed = -1;
  for (const char* name : liouville::kCommands) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "run configuration (INI)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory (overrides [output] directory)");
    sub->add_option("--seed", seed, "random seed (overrides [command] seed)")->check(CLI::NonNegativeNumber);
  }
  CLI11_PARSE(app, argc, argv);

  liouville::RunConfig config;
  try {
    config = liouville::parse_config_file(config_path);
  } catch (const liouville::Error& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return liouville::exit_config;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  if (!config.command.name.empty() && config.command.name != command) {
    std::cerr << "configuration error: [command] name = " << config.command.name << " conflicts with command '"
              << command << "'\n";
    return liouville::exit_config;
  }
  config.command.name = command;
  if (!out_dir.empty()) config.output.directory = out_dir;
  if (seed >= 0) config.command.seed = static_cast<unsigned long long>(seed);
  return liouville::run(config, std::cout, std::cerr);
}
