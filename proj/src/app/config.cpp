#include "bfree/app.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <sstream>

namespace bfree {

namespace {

std::string trim(std::string s) {
  auto ws = [](unsigned char c) { return std::isspace(c); };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
  return s;
}

std::uint64_t parse_natural(const std::string& key, const std::string& v) {
  std::string t = trim(v);
  try {
    std::size_t used = 0;
    if (!t.empty() && std::all_of(t.begin(), t.end(), [](unsigned char c) { return std::isdigit(c); })) {
      unsigned long long x = std::stoull(t, &used);
      return x;
    }
    auto caret = t.find('^');
    if (caret != std::string::npos) {
      std::uint64_t b = parse_natural(key, t.substr(0, caret)), e = parse_natural(key, t.substr(caret + 1));
      long double r = std::pow(static_cast<long double>(b), static_cast<long double>(e));
      if (r < 1.8e19L) return static_cast<std::uint64_t>(r);
    }
    long double d = std::stold(t, &used);
    if (used == t.size() && d >= 0 && d < 1.8e19L && d == std::floor(d)) return static_cast<std::uint64_t>(d);
  } catch (const std::exception&) {
  }
  throw ConfigError("invalid value for key '" + key + "': expected a natural number, got '" + v + "'");
}

double parse_real(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    std::string t = trim(v);
    double d = std::stod(t, &used);
    if (used == t.size()) return d;
  } catch (const std::exception&) {
  }
  throw ConfigError("invalid value for key '" + key + "': expected a number, got '" + v + "'");
}

std::vector<std::string> split_list(std::string v) {
  v = trim(v);
  if (!v.empty() && (v.front() == '{' || v.front() == '[')) v = v.substr(1, v.size() - 2);
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string unquote(std::string v) {
  v = trim(v);
  if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') && v.back() == v.front()) v = v.substr(1, v.size() - 2);
  return v;
}

using Setter = void (*)(ScenarioConfig&, const std::string&, const std::string&);

struct KeyInfo {
  std::string section;
  Setter set;
};

const std::map<std::string, KeyInfo>& key_table() {
  static const std::map<std::string, KeyInfo> table = {
      {"scenario", {"scenario", [](ScenarioConfig& c, const std::string&, const std::string& v) { c.scenario = v; }}},
      {"family",
       {"scenario",
        [](ScenarioConfig& c, const std::string& k, const std::string& v) {
          try {
            BSpec::parse(v);
          } catch (const std::exception& e) {
            throw ConfigError("invalid value for key '" + k + "': " + e.what());
          }
          c.family = v;
        }}},
      {"description", {"scenario", [](ScenarioConfig& c, const std::string&, const std::string& v) { c.description = v; }}},
      {"K", {"params", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.K = parse_natural(k, v); }}},
      {"K_grid",
       {"params",
        [](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.K_grid.clear();
          for (auto& x : split_list(v)) c.K_grid.push_back(parse_natural(k, x));
          if (c.K_grid.empty()) throw ConfigError("invalid value for key '" + k + "': empty list");
        }}},
      {"K_prime",
       {"params", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.K_prime = parse_natural(k, v); }}},
      {"L", {"params", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.L = parse_natural(k, v); }}},
      {"n_grid",
       {"params",
        [](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.n_grid.clear();
          for (auto& x : split_list(v)) {
            auto n = parse_natural(k, x);
            if (n == 0 || n > 4096) throw ConfigError("invalid value for key '" + k + "': block lengths must be in [1, 4096]");
            c.n_grid.push_back(static_cast<unsigned>(n));
          }
          if (c.n_grid.empty()) throw ConfigError("invalid value for key '" + k + "': empty list");
        }}},
      {"burn_in",
       {"params", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.burn_in = parse_natural(k, v); }}},
      {"star_K",
       {"params", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.star_K = parse_natural(k, v); }}},
      {"m", {"params", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.m = parse_natural(k, v); }}},
      {"bound_K",
       {"params", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.bound_K = parse_natural(k, v); }}},
      {"taut_K",
       {"params", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.taut_K = parse_natural(k, v); }}},
      {"sampler_K",
       {"params", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.sampler_K = parse_natural(k, v); }}},
      {"seed", {"params", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.seed = parse_natural(k, v); }}},
      {"samples",
       {"params", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.samples = parse_natural(k, v); }}},
      {"block_n",
       {"params",
        [](ScenarioConfig& c, const std::string& k, const std::string& v) {
          auto n = parse_natural(k, v);
          if (n == 0 || n > 64) throw ConfigError("invalid value for key '" + k + "': must be in [1, 64]");
          c.block_n = static_cast<unsigned>(n);
        }}},
      {"tolerance",
       {"params", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.tolerance = parse_real(k, v); }}},
      {"mode",
       {"params",
        [](ScenarioConfig& c, const std::string& k, const std::string& v) {
          try {
            parse_count_mode(v);
          } catch (const std::exception&) {
            throw ConfigError("invalid value for key '" + k + "': " + v);
          }
          c.mode = v;
        }}},
      {"suite",
       {"params",
        [](ScenarioConfig& c, const std::string& k, const std::string& v) {
          if (v != "scenario" && v != "acceptance" && v != "all")
            throw ConfigError("invalid value for key '" + k + "': expected scenario, acceptance or all");
          c.suite = v;
        }}},
      {"out", {"run", [](ScenarioConfig& c, const std::string&, const std::string& v) { c.out = v; }}},
      {"threads",
       {"run",
        [](ScenarioConfig& c, const std::string& k, const std::string& v) {
          auto n = parse_natural(k, v);
          if (n == 0 || n > 1024) throw ConfigError("invalid value for key '" + k + "': must be in [1, 1024]");
          c.threads = static_cast<unsigned>(n);
        }}},
      {"log_level",
       {"run",
        [](ScenarioConfig& c, const std::string& k, const std::string& v) {
          if (v != "quiet" && v != "normal" && v != "debug")
            throw ConfigError("invalid value for key '" + k + "': expected quiet, normal or debug");
          c.log_level = v;
        }}},
  };
  return table;
}

}  // namespace

Json ScenarioConfig::effective() const {
  Json j;
  j["scenario"] = scenario;
  j["family"] = family;
  j["K"] = K;
  j["K_grid"] = K_grid;
  j["K_prime"] = k_prime();
  j["L"] = L;
  j["n_grid"] = n_grid;
  j["burn_in"] = burn_in;
  j["star_K"] = star_K;
  j["m"] = m;
  j["bound_K"] = bound_K;
  j["taut_K"] = taut_K;
  j["sampler_K"] = sampler_K;
  j["seed"] = seed;
  j["samples"] = samples;
  j["block_n"] = block_n;
  j["tolerance"] = tolerance;
  j["mode"] = mode;
  j["suite"] = suite;
  return j;
}

void set_config_key(ScenarioConfig& cfg, const std::string& section, const std::string& key,
                    const std::string& value) {
  auto& table = key_table();
  auto it = table.find(key);
  if (it == table.end()) {
    throw ConfigError("unknown config key '" + key + "'" + (section.empty() ? "" : " in section [" + section + "]"));
  }
  if (!section.empty() && section != it->second.section)
    throw ConfigError("config key '" + key + "' does not belong in section [" + section + "] (expected [" +
                      it->second.section + "])");
  it->second.set(cfg, key, unquote(value));
}

std::vector<ConfigEntry> parse_config_text(const std::string& text) {
  std::vector<ConfigEntry> out;
  std::string t = trim(text);
  if (!t.empty() && t.front() == '{') {
    Json j;
    try {
      j = Json::parse(t);
    } catch (const std::exception& e) {
      throw ConfigError(std::string("malformed JSON config: ") + e.what());
    }
    auto value_text = [](const Json& v) -> std::string {
      if (v.is_string()) return v.get<std::string>();
      if (v.is_array()) {
        std::string s;
        for (auto& x : v) s += (s.empty() ? "" : ",") + (x.is_string() ? x.get<std::string>() : x.dump());
        return s;
      }
      return v.dump();
    };
    for (auto& [k, v] : j.items()) {
      if (v.is_object()) {
        if (k != "scenario" && k != "params" && k != "run") throw ConfigError("unknown config section '" + k + "'");
        for (auto& [k2, v2] : v.items()) out.push_back({k, k2, value_text(v2)});
      } else {
        out.push_back({"", k, value_text(v)});
      }
    }
    return out;
  }
  std::istringstream in(text);
  std::string line, section;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("malformed section header at line " + std::to_string(number));
      section = trim(line.substr(1, line.size() - 2));
      if (section != "scenario" && section != "params" && section != "run")
        throw ConfigError("unknown config section '" + section + "' at line " + std::to_string(number));
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key = value at line " + std::to_string(number));
    out.push_back({section, trim(line.substr(0, eq)), trim(line.substr(eq + 1))});
  }
  return out;
}

std::vector<ConfigEntry> read_config_file(const std::string& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  return parse_config_text(text);
}

ScenarioConfig resolve_config(const std::string& cli_scenario, const std::string& config_path,
                              const std::vector<ConfigEntry>& cli_overrides) {
  std::vector<ConfigEntry> file;
  if (!config_path.empty()) file = read_config_file(config_path);
  std::string name = cli_scenario;
  if (name.empty())
    for (auto& e : file)
      if (e.key == "scenario") name = unquote(e.value);
  if (name.empty()) name = "finite-23";
  ScenarioConfig cfg = scenario_defaults(name);
  for (auto& e : file) {
    if (e.key == "scenario") {
      if (!e.section.empty() && e.section != "scenario")
        throw ConfigError("config key 'scenario' does not belong in section [" + e.section + "]");
      continue;
    }
    set_config_key(cfg, e.section, e.key, e.value);
  }
  for (auto& e : cli_overrides) set_config_key(cfg, e.section, e.key, e.value);
  cfg.scenario = name;
  return cfg;
}

}  // namespace bfree
