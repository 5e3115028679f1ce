#include "bfree/app.hpp"

#include <doctest.h>

#include <filesystem>
#include <sstream>

using namespace bfree;

TEST_CASE("bundled scenarios") {
  auto names = scenario_names();
  CHECK(names == std::vector<std::string>{"finite-23", "prime-squares", "scaled-primes-2", "two-primes-plus-9", "star-29"});
  for (auto& n : names) CHECK(scenario_defaults(n).scenario == n);
  CHECK_THROWS_AS(scenario_defaults("nope"), ConfigError);
}

TEST_CASE("config text") {
  auto e = parse_config_text("# comment\n[scenario]\nscenario = star-29\n[params]\nK = 10^4 ; trailing\nL = 1e5\n");
  REQUIRE(e.size() == 3);
  CHECK(e[1].section == "params");
  CHECK(e[1].key == "K");
  CHECK(e[1].value == "10^4");
  auto j = parse_config_text(R"({"params": {"K": 500, "n_grid": [8, 12]}, "run": {"threads": 2}})");
  ScenarioConfig cfg;
  for (auto& x : j) set_config_key(cfg, x.section, x.key, x.value);
  CHECK(cfg.K == 500);
  CHECK(cfg.n_grid == std::vector<unsigned>{8, 12});
  CHECK(cfg.threads == 2);
}

TEST_CASE("config keys are validated") {
  ScenarioConfig cfg;
  set_config_key(cfg, "params", "L", "1e6");
  CHECK(cfg.L == 1000000);
  set_config_key(cfg, "params", "K", "2^10");
  CHECK(cfg.K == 1024);
  try {
    set_config_key(cfg, "params", "bogus_key", "1");
    FAIL("accepted an unknown key");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("bogus_key") != std::string::npos);
  }
  CHECK_THROWS_AS(set_config_key(cfg, "params", "L", "many"), ConfigError);
  CHECK_THROWS_AS(set_config_key(cfg, "run", "K", "5"), ConfigError);
}

TEST_CASE("precedence of overrides") {
  auto dir = std::filesystem::temp_directory_path() / "bfree_cfg_test";
  std::filesystem::create_directories(dir);
  auto path = (dir / "c.ini").string();
  write_file(path, "[scenario]\nscenario = prime-squares\n[params]\nK = 123\nL = 456\n");
  auto cfg = resolve_config("", path, {{"params", "L", "789"}});
  CHECK(cfg.scenario == "prime-squares");
  CHECK(cfg.K == 123);
  CHECK(cfg.L == 789);
  auto cli = resolve_config("finite-23", path, {});
  CHECK(cli.scenario == "finite-23");
  CHECK(cli.K == 123);
  std::filesystem::remove_all(dir);
}

TEST_CASE("effective config excludes run keys") {
  ScenarioConfig cfg;
  auto j = cfg.effective();
  CHECK(j.contains("K"));
  CHECK_FALSE(j.contains("threads"));
  CHECK_FALSE(j.contains("out"));
}

TEST_CASE("subcommands") {
  auto dir = std::filesystem::temp_directory_path() / "bfree_cmd_test";
  auto cfg = scenario_defaults("finite-23");
  cfg.out = dir.string();
  cfg.log_level = "quiet";
  std::ostringstream out, err;
  CHECK(run_subcommand("sieve", cfg, out, err) == kExitOk);
  CHECK(std::filesystem::exists(dir / "finite-23" / "sieve" / "sieve.json"));
  CHECK(run_subcommand("verify", cfg, out, err) == kExitOk);
  CHECK(run_subcommand("frobnicate", cfg, out, err) == kExitBadConfig);
  auto bad = cfg;
  bad.family = "{2,x}";
  CHECK(run_subcommand("density", bad, out, err) == kExitBadConfig);
  auto text = read_file(dir / "finite-23" / "sieve" / "sieve.json");
  CHECK(text.find("\"config\"") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("scenario suite passes on the finite scenario") {
  for (auto& r : scenario_suite(scenario_defaults("finite-23"))) {
    INFO(format_check(r));
    CHECK(r.pass);
  }
}

TEST_CASE("check formatting") {
  CheckResult r{"7", "sampler", true, "ok"};
  CHECK(format_check(r).rfind("PASS", 0) == 0);
  r.pass = false;
  CHECK(format_check(r).rfind("FAIL", 0) == 0);
}
