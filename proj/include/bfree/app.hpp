// Scenario configuration, the subcommands of the command-line front end and
// the verification harness (scenario invariant suites and acceptance checks).
#pragma once

#include "bfree/report.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace bfree {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScenarioConfig {
  std::string scenario = "finite-23";
  std::string family = "{2,3}";
  std::string description;

  std::uint64_t K = 1000;                              // truncation for single-K reports
  std::vector<std::uint64_t> K_grid = {10, 100, 1000};  // density, sandwich and discrepancy grids
  std::uint64_t K_prime = 0;                           // witness bound; 0 means 10 K
  std::uint64_t L = 100000;                            // window length
  std::vector<unsigned> n_grid = {8, 12, 16, 20, 24, 28};
  std::uint64_t burn_in = 1000;
  std::uint64_t star_K = 1000;  // search cutoff for B*
  std::uint64_t m = 5;          // coprime witnesses required for B*
  std::uint64_t bound_K = 100;  // truncation of the upper counting bound
  std::uint64_t taut_K = 100;   // truncation of the tautness check
  std::uint64_t sampler_K = 100;
  std::uint64_t seed = 20240601;
  std::uint64_t samples = 100000;
  unsigned block_n = 4;  // block length of frequency tables
  double tolerance = 0.01;
  std::string mode = "exact-set";
  std::string suite = "scenario";  // scenario or acceptance

  // run environment, not part of any result
  std::string out = "out";
  unsigned threads = 1;
  std::string log_level = "normal";  // quiet, normal, debug

  std::uint64_t k_prime() const { return K_prime ? K_prime : 10 * K; }
  BSpec spec() const { return BSpec::parse(family); }
  // Every parameter that can influence a result, in a fixed order.
  Json effective() const;
};

std::vector<std::string> scenario_names();
// Throws ConfigError for an unknown name.
ScenarioConfig scenario_defaults(const std::string& name);

// Sets one key; throws ConfigError naming the key when it is unknown or its value is invalid.
void set_config_key(ScenarioConfig& cfg, const std::string& section, const std::string& key,
                    const std::string& value);
// Parses "key = value" lines grouped under [section] headers, or a JSON object.
// Returns the pairs (section, key, value) in file order.
struct ConfigEntry {
  std::string section, key, value;
};
std::vector<ConfigEntry> parse_config_text(const std::string& text);
std::vector<ConfigEntry> read_config_file(const std::string& path);

// Defaults of the scenario named on the command line, else in the file, else finite-23;
// then the file entries; then the command-line overrides.
ScenarioConfig resolve_config(const std::string& cli_scenario, const std::string& config_path,
                              const std::vector<ConfigEntry>& cli_overrides);

enum ExitCode { kExitOk = 0, kExitVerifyFailed = 1, kExitBadConfig = 2, kExitInternal = 3 };

std::vector<std::string> subcommand_names();
// Runs a subcommand, writing out/<scenario>/<subcommand>/*. Returns an exit code.
int run_subcommand(const std::string& name, const ScenarioConfig& cfg, std::ostream& out, std::ostream& err);

struct CheckResult {
  std::string id;
  std::string title;
  bool pass = false;
  std::string detail;
};

// Invariant checks on the configured scenario.
std::vector<CheckResult> scenario_suite(const ScenarioConfig& cfg);

// Acceptance criteria 1..11.
int acceptance_count();
CheckResult acceptance_check(int criterion);
std::vector<CheckResult> acceptance_suite();

std::string format_check(const CheckResult& r);

}  // namespace bfree
