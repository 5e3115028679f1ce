#include "bfree/app.hpp"

#include "bfree/core.hpp"
#include "bfree/parallel.hpp"
#include "bfree/rng.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace bfree {

namespace fs = std::filesystem;

namespace {

struct Context {
  const ScenarioConfig& cfg;
  std::ostream& out;
  fs::path dir;
  std::vector<std::string> files;

  bool quiet() const { return cfg.log_level == "quiet"; }
  bool debug() const { return cfg.log_level == "debug"; }

  void json(const std::string& name, const Json& result) {
    Json j;
    j["config"] = cfg.effective();
    j["result"] = result;
    write_file(dir / name, j.dump(2) + "\n");
    files.push_back(name);
  }
  void csv(const std::string& name, const std::string& body) {
    write_file(dir / name, comment_lines(cfg.effective().dump()) + body);
    files.push_back(name);
  }
  void text(const std::string& name, const std::string& body) {
    write_file(dir / name, body);
    files.push_back(name);
  }
  void say(const std::string& line) {
    if (!quiet()) out << line << '\n';
  }
};

std::string utc_timestamp() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

std::string fmt(double x, int digits = 6) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << x;
  return s.str();
}

std::uint64_t exact_K(const ScenarioConfig& c) { return std::max(c.K, c.L); }

EllSequence ell_of(const ScenarioConfig& c) {
  return lower_density_sequence(c.spec(), exact_K(c), c.L, c.burn_in);
}

void cmd_sieve(Context& ctx) {
  const auto& c = ctx.cfg;
  BTruncation t = truncate(c.spec(), c.K);
  Window eta = eta_window(t, 1, c.L);
  std::ostringstream bin;
  write_binary(bin, eta);
  write_file(ctx.dir / "eta.bin", bin.str());
  ctx.files.push_back("eta.bin");
  std::ostringstream head;
  write_text(head, eta.slice(1, std::min<std::uint64_t>(c.L, 1000)));
  ctx.text("eta_head.txt", head.str());
  Json r;
  r["window"] = {{"a", 1}, {"L", c.L}, {"tag", tag_name(eta.tag())}};
  r["truncation_size"] = t.size();
  r["truncation_complete"] = t.complete();
  if (t.overflowed())
    r["lcm"] = nullptr;
  else
    r["lcm"] = t.lcm();
  r["ones"] = eta.count();
  r["one_fraction"] = static_cast<double>(eta.count()) / static_cast<double>(c.L);
  ctx.json("sieve.json", r);
  ctx.say("sieve: " + std::to_string(eta.count()) + " ones on [1, " + std::to_string(c.L) + "], tag " +
          tag_name(eta.tag()));
}

void cmd_density(Context& ctx) {
  const auto& c = ctx.cfg;
  BSpec spec = c.spec();
  DensitySeries series = davenport_erdos_profile(spec, c.K_grid);
  ctx.csv("profile.csv", to_csv(series));
  EllSequence ell = ell_of(c);
  ctx.csv("ell.csv", to_csv(ell));
  LogDensityEstimate log_est = logarithmic_density_estimate(spec, exact_K(c), c.L);
  PrefixRatio upper = upper_density_estimate(spec, exact_K(c), c.L, c.burn_in);
  Json r;
  r["profile"] = to_json(series);
  r["ell"] = to_json(ell);
  r["log_density"] = to_json(log_est);
  r["upper_density_est"] = {{"value", to_string(upper.value)}, {"float", to_double(upper.value)}, {"prefix", upper.prefix}};
  ctx.json("density.json", r);
  for (auto& [K, d] : series.entries)
    ctx.say("density: d(M_B_" + std::to_string(K) + ") = " +
            (d.value ? to_string(*d.value) + " ~ " + fmt(to_double(*d.value))
                     : "[" + fmt(to_double(d.lower)) + ", " + fmt(to_double(d.upper)) + "]") +
            " (" + method_name(d.method) + ")");
  ctx.say("density: log-density estimate " + fmt(static_cast<double>(log_est.value)) + ", two-scale " +
          fmt(static_cast<double>(log_est.two_scale)));
}

void cmd_structure(Context& ctx) {
  const auto& c = ctx.cfg;
  BSpec spec = c.spec();
  Json r;
  TautReport taut = taut_check(spec, c.taut_K);
  r["taut"] = to_json(taut);
  r["behrend"] = to_json(behrend_gauge(spec, c.K_grid));
  r["bstar"] = to_json(bstar_approx(spec, c.star_K, 0, c.m));
  r["bprime"] = to_json(bprime_approx(spec, c.star_K));
  StarModel star = star_model(spec, c.star_K, c.m);
  r["star_model"] = to_json(star);
  std::uint64_t L = std::min<std::uint64_t>(c.L, 100000);
  r["self_divisibility"] = to_json(divisibility_order_check(spec, spec, star, std::max(L, c.star_K), L));
  ctx.json("structure.json", r);
  std::string bs;
  for (auto b : star.elements.elements()) bs += (bs.empty() ? "" : ",") + std::to_string(b);
  ctx.say("structure: " + taut.label() + ", B* = {" + bs + "}" + (star.assumed_complete ? "" : " (upper approximation)"));
}

void cmd_toeplitz(Context& ctx) {
  const auto& c = ctx.cfg;
  BSpec spec = c.spec();
  StarModel star = star_model(spec, c.star_K, c.m);
  Json r;
  r["regularity"] = to_json(regularity_profile(star, c.K_grid, c.k_prime()));
  Json sandwiches = Json::array();
  for (auto K : c.K_grid) {
    std::uint64_t kp = c.K_prime ? c.K_prime : 10 * K;
    try {
      auto v = sandwich_check(spec, star, K, kp, 1, c.L);
      sandwiches.push_back(to_json(v));
      ctx.say("toeplitz: sandwich K=" + std::to_string(K) + (v.passes() ? " holds" : " VIOLATED"));
    } catch (const OverflowError& e) {
      sandwiches.push_back({{"K", K}, {"error", e.what()}});
    }
  }
  r["sandwich"] = sandwiches;
  try {
    auto u = underline_eta_K_window(star, c.K_grid.front(), c.K_prime ? c.K_prime : 10 * c.K_grid.front(), 1,
                                    std::min<std::uint64_t>(c.L, 1000));
    auto pc = per_positions(star, u.s, 1, std::min<std::uint64_t>(c.L, 1000),
                            c.K_prime ? c.K_prime : 10 * c.K_grid.front());
    ctx.text("per.txt", pc.to_text());
    if (ctx.debug()) ctx.out << pc.to_text();
  } catch (const OverflowError& e) {
    r["per_error"] = e.what();
  }
  EllSequence ell = ell_of(c);
  r["discrepancy"] = to_json(symbolic_discrepancy(spec, star, c.K_grid, ell));
  ctx.json("toeplitz.json", r);
}

void cmd_entropy(Context& ctx) {
  const auto& c = ctx.cfg;
  EntropyReportParams p;
  p.K = exact_K(c);
  p.L = c.L;
  p.n_grid = c.n_grid;
  p.mode = parse_count_mode(c.mode);
  p.burn_in = c.burn_in;
  p.star_K = c.star_K;
  p.m = c.m;
  p.bound_K = c.bound_K;
  p.taut_K = c.taut_K;
  p.zero_tolerance = c.tolerance;
  EntropyReport rep = entropy_report(c.spec(), p);
  ctx.csv("profile.csv", to_csv(rep.profile));
  ctx.json("entropy_report.json", Json::parse(rep.to_json()));
  for (auto& e : rep.profile.entries)
    ctx.say("entropy: n=" + std::to_string(e.n) + " p_n=" + std::to_string(e.p_n) + " h=" + fmt(e.h_hat, 4) +
            (e.saturated ? "" : " (unsaturated, lower estimate)"));
  ctx.say("entropy: density gap " + fmt(rep.density_gap, 4) + ", zero-entropy flag " +
          (rep.zero_entropy_flag ? "on" : "off") + ", counting bounds " + (rep.bounds_hold() ? "hold" : "VIOLATED"));
}

void cmd_measures(Context& ctx) {
  const auto& c = ctx.cfg;
  BSpec spec = c.spec();
  StarModel star = star_model(spec, c.star_K, c.m);
  Json r;
  BTruncation ts = truncate(spec, c.sampler_K);
  try {
    r["mirsky"] = Json::parse(mirsky_exact(ts, c.block_n).to_json());
  } catch (const OverflowError& e) {
    r["mirsky"] = {{"error", e.what()}};
  }
  EllSequence ell = ell_of(c);
  r["quasi_generic"] = Json::parse(quasi_generic_freq(spec, exact_K(c), ell, c.block_n).to_json());
  SystemModel exact_sys{spec, star, exact_K(c), 10 * exact_K(c)};
  try {
    r["pair"] = Json::parse(pair_joining_freq(exact_sys, ell, c.block_n).to_json());
  } catch (const PreconditionError& e) {
    r["pair"] = {{"error", e.what()}};
  }
  SystemModel sys{spec, star, c.sampler_K, 10 * c.sampler_K};
  FreqTable sampled = max_entropy_sampler(sys, c.L, c.block_n, c.samples, c.seed);
  r["sampler"] = Json::parse(sampled.to_json());
  auto disc = eta_vs_etaprime_discrepancy(spec, c.star_K, ell);
  r["eta_prime_discrepancy"] = {{"value", to_double(disc.value)}, {"bprime", to_json(disc.prime)}};
  Json pre = Json::array();
  Window eta = eta_window(truncate(spec, exact_K(c)), 1, c.L);
  Window star_w = eta_star_window(star, 1, c.L);
  for (auto K : c.K_grid) {
    Json e;
    e["K"] = K;
    e["eta_vs_eta_K"] = to_double(dlow_premetric(eta, eta_K_window(spec, K, 1, c.L), c.burn_in));
    try {
      auto u = underline_eta_K_window(star, K, c.K_prime ? c.K_prime : 10 * K, 1, c.L);
      e["underline_vs_star_upper"] = to_double(dupper_premetric(u.bits, star_w, c.burn_in));
    } catch (const OverflowError& err) {
      e["underline_vs_star_upper"] = nullptr;
    }
    pre.push_back(e);
  }
  r["premetric"] = pre;
  ctx.json("measures.json", r);
  ctx.say("measures: sampler 1-frequency " + fmt(to_double(sampled.one_frequency(0)), 5) + " over " +
          std::to_string(c.samples) + " samples");
}

void cmd_verify(Context& ctx, bool& failed) {
  const auto& c = ctx.cfg;
  std::vector<CheckResult> results;
  if (c.suite == "scenario" || c.suite == "all") {
    auto s = scenario_suite(c);
    results.insert(results.end(), s.begin(), s.end());
  }
  if (c.suite == "acceptance" || c.suite == "all") {
    auto a = acceptance_suite();
    results.insert(results.end(), a.begin(), a.end());
  }
  std::string lines;
  Json arr = Json::array();
  for (auto& r : results) {
    lines += format_check(r) + "\n";
    arr.push_back({{"id", r.id}, {"title", r.title}, {"pass", r.pass}, {"detail", r.detail}});
    if (!r.pass) failed = true;
    ctx.say(format_check(r));
  }
  ctx.text("verify.txt", lines);
  ctx.json("verify.json", arr);
}

void run_one(const std::string& name, Context& ctx, bool& failed) {
  if (name == "sieve") cmd_sieve(ctx);
  else if (name == "density") cmd_density(ctx);
  else if (name == "structure") cmd_structure(ctx);
  else if (name == "toeplitz") cmd_toeplitz(ctx);
  else if (name == "entropy") cmd_entropy(ctx);
  else if (name == "measures") cmd_measures(ctx);
  else if (name == "verify") cmd_verify(ctx, failed);
}

void write_metadata(const Context& ctx, const std::string& name) {
  Json m;
  m["subcommand"] = name;
  m["scenario"] = ctx.cfg.scenario;
  m["timestamp_utc"] = utc_timestamp();
  m["threads"] = ctx.cfg.threads;
  m["rng"] = kRngAlgorithm;
  m["files"] = ctx.files;
  write_file(ctx.dir / "metadata.json", m.dump(2) + "\n");
}

}  // namespace

std::vector<std::string> subcommand_names() {
  return {"sieve", "density", "structure", "toeplitz", "entropy", "measures", "verify", "report"};
}

int run_subcommand(const std::string& name, const ScenarioConfig& cfg, std::ostream& out, std::ostream& err) {
  auto names = subcommand_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    err << "error: unknown subcommand '" << name << "'\n";
    return kExitBadConfig;
  }
  unsigned previous = thread_count();
  set_thread_count(cfg.threads);
  bool failed = false;
  int code = kExitOk;
  try {
    fs::path base = fs::path(cfg.out) / cfg.scenario;
    if (name == "report") {
      std::string summary = "scenario: " + cfg.scenario + "\nfamily: " + cfg.family + "\n";
      if (!cfg.description.empty()) summary += "about: " + cfg.description + "\n";
      summary += "\n";
      Json index;
      ScenarioConfig loud = cfg;
      if (loud.log_level == "quiet") loud.log_level = "normal";
      for (auto& sub : {"density", "structure", "toeplitz", "entropy", "measures", "verify"}) {
        std::ostringstream captured;
        Context ctx{loud, captured, base / sub, {}};
        run_one(sub, ctx, failed);
        write_metadata(ctx, sub);
        index[sub] = ctx.files;
        summary += "[" + std::string(sub) + "]\n" + captured.str() + "\n";
      }
      Context ctx{cfg, out, base / "report", {}};
      ctx.text("summary.txt", summary);
      ctx.json("index.json", index);
      write_metadata(ctx, name);
      if (!ctx.quiet()) out << summary;
    } else {
      Context ctx{cfg, out, base / name, {}};
      run_one(name, ctx, failed);
      write_metadata(ctx, name);
    }
    code = failed ? kExitVerifyFailed : kExitOk;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    code = kExitBadConfig;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    code = kExitBadConfig;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    code = kExitBadConfig;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    code = kExitInternal;
  }
  set_thread_count(previous);
  return code;
}

}  // namespace bfree
