#include "bfree/app.hpp"

namespace bfree {

namespace {

ScenarioConfig base(const std::string& name, const std::string& family, const std::string& description) {
  ScenarioConfig c;
  c.scenario = name;
  c.family = family;
  c.description = description;
  return c;
}

}  // namespace

std::vector<std::string> scenario_names() {
  return {"finite-23", "prime-squares", "scaled-primes-2", "two-primes-plus-9", "star-29"};
}

ScenarioConfig scenario_defaults(const std::string& name) {
  if (name == "finite-23") {
    auto c = base(name, "{2,3}", "finite set {2,3}: eta is periodic with period 6");
    c.K = 1000;
    c.L = 100000;
    return c;
  }
  if (name == "prime-squares") {
    auto c = base(name, "prime-squares", "squares of primes: squarefree integers, B* = {1}");
    // n = 28 needs about 10^7 positions before p_n passes 2^|F cap [1,n]|
    c.K = 10000000;
    c.K_grid = {10, 100, 1000, 10000};
    c.L = 10000000;
    return c;
  }
  if (name == "scaled-primes-2") {
    auto c = base(name, "scaled-primes(2)", "2 times the primes: B* = {2}");
    c.K = 1000000;
    c.L = 1000000;
    return c;
  }
  if (name == "two-primes-plus-9") {
    auto c = base(name, "union(scaled-primes(2),{9})", "2 times the primes and 9: B* = {2,9}, zero entropy");
    c.K = 1000000;
    c.L = 1000000;
    return c;
  }
  if (name == "star-29") {
    auto c = base(name, "union(scaled-primes(2),scaled-primes(9))", "2 and 9 times the primes: B* = {2,9}");
    c.K = 1000000;
    c.L = 1000000;
    return c;
  }
  std::string known;
  for (auto& n : scenario_names()) known += (known.empty() ? "" : ", ") + n;
  throw ConfigError("unknown scenario '" + name + "' (known: " + known + ")");
}

}  // namespace bfree
