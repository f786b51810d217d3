// Command-line front end: parameter intake, sweeps, CSV/JSON emission.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "ecp/cli/config.hpp"
#include "ecp/cli/run.hpp"
#include "ecp/errors.hpp"

int main(int argc, char** argv) {
  using namespace ecp::cli;

  CLI::App app{"Electronic Casimir-Polder energy and force between two impurities on a tight-binding ring"};
  app.set_version_flag("--version", std::string(tool_version));

  std::string config_file;
  app.add_option("--config", config_file, "flat key = value config file (flags override it)")
      ->check(CLI::ExistingFile);

  std::map<std::string, std::string> values;
  for (const auto& key : known_keys) {
    const std::string name(key.name);
    app.add_option("--" + name, values[name], std::string(key.help));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_config;
  }

  std::vector<std::pair<std::string, std::string>> flags;
  for (const auto& key : known_keys) {
    const std::string name(key.name);
    if (app.count("--" + name) > 0) flags.emplace_back(name, values[name]);
  }

  try {
    std::optional<std::filesystem::path> file;
    if (!config_file.empty()) file = config_file;
    const auto cfg = load_config(file, flags);
    const auto table = run(cfg);
    for (const auto& m : table.metadata)
      if (m.key == "summary" || m.key == "warning") std::cerr << m.key << ": " << m.value << '\n';

    if (const auto path = output_path(cfg)) {
      if (path->has_parent_path()) std::filesystem::create_directories(path->parent_path());
      std::ofstream out(*path, std::ios::binary);
      if (!out) throw ecp::config_error("cannot open output '" + path->string() + "'");
      write_table(out, cfg, table);
    } else {
      write_table(std::cout, cfg, table);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_status_for(e);
  }
  return exit_ok;
}
