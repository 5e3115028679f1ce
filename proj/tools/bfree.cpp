#include "bfree/app.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Sieving, densities, Toeplitz approximants, measures and entropy of B-free systems"};
  app.require_subcommand(1, 1);
  std::string scenario, config_path, out, log_level;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::vector<std::string> sets;
  for (auto& name : bfree::subcommand_names()) {
    auto* sub = app.add_subcommand(name, "run the " + name + " stage");
    sub->add_option("--scenario", scenario, "bundled scenario name");
    sub->add_option("--config", config_path, "config file (sections with key = value, or JSON)");
    sub->add_option("--threads", threads, "worker threads");
    sub->add_option("--seed", seed, "sampler seed");
    sub->add_option("--out", out, "output root directory");
    sub->add_option("--log-level", log_level, "quiet, normal or debug");
    sub->add_option("--set", sets, "override a parameter, key=value (repeatable)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : bfree::kExitBadConfig;
  }
  std::string command = app.get_subcommands().front()->get_name();
  try {
    std::vector<bfree::ConfigEntry> overrides;
    for (auto& s : sets) {
      auto eq = s.find('=');
      if (eq == std::string::npos) throw bfree::ConfigError("--set expects key=value, got '" + s + "'");
      overrides.push_back({"", s.substr(0, eq), s.substr(eq + 1)});
    }
    auto* sub = app.get_subcommands().front();
    if (sub->count("--threads")) overrides.push_back({"run", "threads", std::to_string(threads)});
    if (sub->count("--seed")) overrides.push_back({"params", "seed", std::to_string(seed)});
    if (sub->count("--out")) overrides.push_back({"run", "out", out});
    if (sub->count("--log-level")) overrides.push_back({"run", "log_level", log_level});
    auto cfg = bfree::resolve_config(scenario, config_path, overrides);
    return bfree::run_subcommand(command, cfg, std::cout, std::cerr);
  } catch (const bfree::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return bfree::kExitBadConfig;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return bfree::kExitInternal;
  }
}
