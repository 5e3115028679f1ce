#include "bfree/app.hpp"

#include "bfree/core.hpp"
#include "bfree/oracles.hpp"
#include "bfree/parallel.hpp"
#include "bfree/rng.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <unistd.h>

namespace bfree {

namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double x, int digits = 4) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(digits);
  s << x;
  return s.str();
}

std::string join(const std::vector<std::uint64_t>& v) {
  std::string s;
  for (auto x : v) s += (s.empty() ? "" : ",") + std::to_string(x);
  return "{" + s + "}";
}

CheckResult guarded(const std::string& id, const std::string& title, const std::function<CheckResult()>& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    return {id, title, false, std::string("exception: ") + e.what()};
  }
}

Window random_window(const CounterRng& rng, std::uint64_t index, std::int64_t a, std::uint64_t L, bool sparse) {
  Window w(a, L);
  for (std::uint64_t j = 0; j < L; ++j) {
    std::uint64_t word = rng.draw(index, 2 * (j / 64));
    if (sparse) word &= rng.draw(index, 2 * (j / 64) + 1);
    if ((word >> (j % 64)) & 1) w.set(j);
  }
  return w;
}

struct Tally {
  std::uint64_t cases = 0;
  std::uint64_t comparisons = 0;
  std::uint64_t violations = 0;
  std::string first;
  void fail(const std::string& what) {
    if (violations++ == 0) first = what;
  }
};

// Reading along sigma z of sigma x equals the reading along z (z(0) = 0) or its shift (z(0) = 1).
Tally hat_relation_property(std::uint64_t seed, std::uint64_t pairs) {
  CounterRng rng(seed, 31);
  Tally t;
  const std::int64_t a = -64;
  const std::uint64_t L = 128;
  for (std::uint64_t i = 0; i < pairs; ++i) {
    Window x = random_window(rng, 2 * i, a, L, false);
    Window z = random_window(rng, 2 * i + 1, a, L, i % 2 == 1);
    if (z.count_range(static_cast<std::uint64_t>(1 - a), L) == 0) z.set(static_cast<std::uint64_t>(1 - a));
    HatWord base = hat_read(x, z);
    HatWord moved = hat_read(x.shifted(1), z.shifted(1));
    std::int64_t step = z.at(0) ? 1 : 0;
    ++t.cases;
    for (std::int64_t j = moved.first_index; j <= moved.last_index(); ++j) {
      if (!base.has(j + step)) continue;
      ++t.comparisons;
      if (moved.at(j) != base.at(j + step)) t.fail("pair " + std::to_string(i) + " hat index " + std::to_string(j));
    }
  }
  return t;
}

Window hat_window(const HatWord& h) {
  Window w(h.first_index, h.bits.size());
  for (std::size_t k = 0; k < h.bits.size(); ++k)
    if (h.bits[k]) w.set(k);
  return w;
}

void compare_defined(Tally& t, const Assembled& p, const Assembled& q, const std::string& what) {
  for (std::uint64_t i = 0; i < p.y.length(); ++i) {
    if (!p.defined.get(i) || !q.defined.get(i)) continue;
    ++t.comparisons;
    if (p.y.get(i) != q.y.get(i)) t.fail(what + " at position " + std::to_string(p.y.offset() + static_cast<std::int64_t>(i)));
  }
}

// Skew trajectories replayed step by step: shift rule against eta and eta*, the
// reassembly identity Phi(h, hat reading of y) = N(low, up, y), and sigma Phi = Phi R~.
Tally skew_commutation_property(const BSpec& spec, const StarModel& star, std::uint64_t seed,
                                std::uint64_t trajectories, std::uint64_t steps, std::uint64_t h_K = 30) {
  Tally t;
  if (!star.assumed_complete) {
    t.first = "skipped: B* not certified complete";
    return t;
  }
  const std::int64_t W = 128;
  SystemModel sys{spec, star, 1000, 10000};
  auto htrunc = std::make_shared<const BTruncation>(truncate(spec, h_K));
  CounterRng rng(seed, 57);
  for (std::uint64_t r = 0; r < trajectories; ++r) {
    HPoint h = HPoint::delta(htrunc, static_cast<std::int64_t>(rng.below(3 * r, htrunc->lcm())));
    const std::int64_t xr = 2 * W + static_cast<std::int64_t>(steps) + 8;
    Window x = random_window(rng, 3 * r + 1, -xr, static_cast<std::uint64_t>(2 * xr), false);
    Trajectory tr = skew_orbit(sys, h, x, steps);
    ++t.cases;
    if (tr.halted) {
      t.fail("trajectory " + std::to_string(r) + " halted: " + tr.halt_reason);
      continue;
    }
    std::int64_t m0 = tr.start;
    std::int64_t lo = m0 - W - 2;
    std::uint64_t len = steps + 2 * W + 4;
    Window eta = sys.eta(lo, len);
    Window eta_s = sys.eta_star(lo, len);
    auto frame = [&](const Window& w, std::int64_t m, std::int64_t from) {
      return w.slice(m + from, static_cast<std::uint64_t>(2 * W)).shifted(m);
    };
    Window xt = x;
    for (std::uint64_t s = 0; s < steps; ++s) {
      std::int64_t m = m0 + static_cast<std::int64_t>(s);
      bool expect = !eta_s.at(m) && eta.at(m);
      ++t.comparisons;
      if (tr.steps[s].shifted != expect) t.fail("trajectory " + std::to_string(r) + " shift rule at step " + std::to_string(s));
      Window low = frame(eta_s, m, -W), up = frame(eta, m, -W);
      Assembled phi = assemble_phi(low, up, xt);
      // Phi after Psi equals M_H = N(low, up, y)
      Window y = random_window(rng, 3 * r + 2 + 1000003 * (s + 1), -W, static_cast<std::uint64_t>(2 * W), false);
      Window gap = up ^ low;
      if (gap.count_range(static_cast<std::uint64_t>(W), static_cast<std::uint64_t>(2 * W)) > 0) {
        Assembled back = assemble_phi(low, up, hat_window(hat_read(y, gap)));
        Assembled direct{map_N(low, up, y), Window::ones(-W, static_cast<std::uint64_t>(2 * W))};
        compare_defined(t, back, direct, "Phi(Psi) != M_H, trajectory " + std::to_string(r));
      }
      // sigma Phi(h, x) = Phi(R~(h, x))
      Window xn = expect ? xt.shifted(1) : xt;
      Assembled left{phi.y.shifted(1), phi.defined.shifted(1)};
      Window low1 = frame(eta_s, m + 1, -W - 1), up1 = frame(eta, m + 1, -W - 1);
      Assembled right = assemble_phi(low1, up1, xn);
      compare_defined(t, left, right, "sigma Phi != Phi R~, trajectory " + std::to_string(r));
      xt = xn;
    }
    if (xt != tr.final_x) t.fail("trajectory " + std::to_string(r) + " final x differs from replay");
  }
  return t;
}

std::string tally_text(const Tally& t) {
  std::string s = std::to_string(t.cases) + " cases, " + std::to_string(t.comparisons) + " comparisons, " +
                  std::to_string(t.violations) + " violations";
  if (!t.first.empty()) s += " (" + t.first + ")";
  return s;
}

bool same_counts(const FreqTable& a, const FreqTable& b) { return a.counts == b.counts && a.total == b.total; }

// Per classes of the gcd rule against the brute-force periodicity check.
bool per_agrees(const std::vector<std::uint64_t>& bstar, std::uint64_t s, std::int64_t a, std::uint64_t L,
                std::string& where) {
  StarModel star = star_model_from(bstar);
  std::uint64_t kp = star.elements.elements().empty() ? 1 : star.elements.elements().back();
  auto pc = per_positions(star, s, a, L, kp);
  std::string fast;
  for (auto c : pc.classes) fast.push_back(static_cast<char>(c));
  std::string slow = oracle::per_classes(star.elements.elements(), s, a, L);
  if (fast == slow) return true;
  for (std::size_t i = 0; i < L; ++i)
    if (fast[i] != slow[i]) {
      where = "B*=" + join(star.elements.elements()) + " s=" + std::to_string(s) + " n=" +
              std::to_string(a + static_cast<std::int64_t>(i)) + " gcd-rule '" + fast[i] + "' brute '" + slow[i] + "'";
      break;
    }
  return false;
}

// Entropy reports reused by several criteria.
const EntropyReport& cached_report(const std::string& scenario) {
  static std::map<std::string, std::unique_ptr<EntropyReport>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[scenario];
  if (!slot) {
    ScenarioConfig c = scenario_defaults(scenario);
    EntropyReportParams p;
    p.L = scenario == "prime-squares" ? 10000000 : scenario == "finite-23" ? 100000 : 1000000;
    p.K = p.L;
    p.n_grid = {8, 12, 16, 20, 24, 28};
    p.bound_K = 100;
    p.star_K = c.star_K;
    p.m = c.m;
    slot = std::make_unique<EntropyReport>(entropy_report(c.spec(), p));
  }
  return *slot;
}

}  // namespace

std::string format_check(const CheckResult& r) {
  return std::string(r.pass ? "PASS" : "FAIL") + "  " + r.id + "  " + r.title + ": " + r.detail;
}

std::vector<CheckResult> scenario_suite(const ScenarioConfig& c) {
  BSpec spec = c.spec();
  StarModel star = star_model(spec, c.star_K, c.m);
  const std::uint64_t KL = std::max(c.K, c.L);
  std::vector<CheckResult> out;

  out.push_back(guarded("density-period-oracle", "exact densities match one-period counts", [&] {
    std::uint64_t checked = 0;
    for (auto K : c.K_grid) {
      BTruncation t = truncate(spec, K);
      if (t.overflowed() || t.lcm() > (std::uint64_t{1} << 22)) continue;
      auto d = exact_density_multiples(t, enclosure_options());
      Rational o = oracle::period_density_multiples(t.elements());
      if (!d.value || *d.value != o)
        return CheckResult{"density-period-oracle", "exact densities match one-period counts", false,
                           "K=" + std::to_string(K) + " oracle " + to_string(o)};
      ++checked;
    }
    return CheckResult{"density-period-oracle", "exact densities match one-period counts", true,
                       std::to_string(checked) + " truncations with lcm <= 2^22"};
  }));

  out.push_back(guarded("density-monotone", "d(M_B_K) nondecreasing over the K grid", [&] {
    auto s = davenport_erdos_profile(spec, c.K_grid);
    return CheckResult{"density-monotone", "d(M_B_K) nondecreasing over the K grid", s.certified_monotone,
                       std::to_string(s.entries.size()) + " grid points, " +
                           std::to_string(s.monotonicity_violations.size()) + " drops"};
  }));

  out.push_back(guarded("ell-sequence", "lower-density prefixes have increasing ratios", [&] {
    auto e = lower_density_sequence(spec, KL, c.L, c.burn_in);
    bool ok = e.size() > 0;
    for (std::size_t i = 1; i < e.size(); ++i) ok = ok && e.ratio(i - 1) < e.ratio(i);
    return CheckResult{"ell-sequence", "lower-density prefixes have increasing ratios", ok,
                       std::to_string(e.size()) + " prefixes" +
                           (e.size() ? ", last ratio " + fmt(to_double(e.ratio(e.size() - 1)), 6) : "")};
  }));

  out.push_back(guarded("sandwich", "underline-eta_K <= eta* <= eta <= eta_K on the window", [&] {
    std::uint64_t bad = 0;
    std::string detail;
    for (auto K : c.K_grid) {
      auto v = sandwich_check(spec, star, K, c.K_prime ? c.K_prime : 10 * K, 1, c.L);
      bad += v.lower_above_star + v.star_above_eta + v.eta_above_upper;
    }
    detail = std::to_string(c.K_grid.size()) + " truncations, " + std::to_string(bad) + " violations";
    return CheckResult{"sandwich", "underline-eta_K <= eta* <= eta <= eta_K on the window", bad == 0, detail};
  }));

  out.push_back(guarded("per-oracle", "gcd rule for Per(eta*, s) matches brute force", [&] {
    if (!star.assumed_complete)
      return CheckResult{"per-oracle", "gcd rule for Per(eta*, s) matches brute force", true,
                         "skipped: B* not certified complete"};
    const auto& bs = star.elements.elements();
    if (oracle::lcm_of(bs) > 10000)
      return CheckResult{"per-oracle", "gcd rule for Per(eta*, s) matches brute force", true,
                         "skipped: lcm(B*) > 10^4"};
    std::uint64_t checked = 0;
    std::string where;
    for (std::uint64_t s = 1; s <= 36; ++s) {
      if (!per_agrees(bs, s, -100, 500, where))
        return CheckResult{"per-oracle", "gcd rule for Per(eta*, s) matches brute force", false, where};
      ++checked;
    }
    return CheckResult{"per-oracle", "gcd rule for Per(eta*, s) matches brute force", true,
                       "B*=" + join(bs) + ", " + std::to_string(checked) + " periods"};
  }));

  out.push_back(guarded("counting-bounds", "2^(|F|-|F*|) <= p_n <= p_n(eta*) p_n(eta_K) 2^sup", [&] {
    EntropyReportParams p;
    p.K = KL;
    p.L = c.L;
    p.n_grid = c.n_grid;
    p.mode = parse_count_mode(c.mode);
    p.burn_in = c.burn_in;
    p.star_K = c.star_K;
    p.m = c.m;
    p.bound_K = c.bound_K;
    p.taut_K = c.taut_K;
    p.zero_tolerance = c.tolerance;
    auto r = entropy_report(spec, p);
    std::uint64_t bad = 0;
    for (auto& l : r.lower) bad += !l.passes();
    for (auto& u : r.upper) bad += !u.passes();
    return CheckResult{"counting-bounds", "2^(|F|-|F*|) <= p_n <= p_n(eta*) p_n(eta_K) 2^sup", bad == 0,
                       std::to_string(c.n_grid.size()) + " block lengths, " + std::to_string(bad) + " violations"};
  }));

  out.push_back(guarded("mirsky-density", "periodic 1-cylinder equals d(F_B_K); tables are shift-consistent", [&] {
    BTruncation t = truncate(spec, c.sampler_K);
    if (t.overflowed() || t.lcm() > (std::uint64_t{1} << 24))
      return CheckResult{"mirsky-density", "periodic 1-cylinder equals d(F_B_K); tables are shift-consistent", true,
                         "skipped: lcm(B_K) > 2^24"};
    Rational p1 = mirsky_exact(t, 1).freq("1");
    auto d = exact_density_free(t, enclosure_options());
    FreqTable tab = mirsky_exact(t, c.block_n);
    bool ok = d.value && *d.value == p1 && same_counts(tab.drop_last(), tab.drop_first());
    return CheckResult{"mirsky-density", "periodic 1-cylinder equals d(F_B_K); tables are shift-consistent", ok,
                       "P(1) = " + to_string(p1)};
  }));

  out.push_back(guarded("sampler-endpoints", "y = 0 gives the eta* table, y = 1 the eta_K table", [&] {
    SystemModel sys{spec, star, c.sampler_K, 10 * c.sampler_K};
    std::uint64_t L = std::min<std::uint64_t>(c.L, 100000), S = std::min<std::uint64_t>(c.samples, 20000);
    auto zeros = max_entropy_sampler(sys, L, c.block_n, S, c.seed, FairBits::zeros);
    auto ones = max_entropy_sampler(sys, L, c.block_n, S, c.seed, FairBits::ones);
    bool ok = same_counts(zeros, sampled_block_table(sys.eta_star(1, L), c.block_n, S, c.seed)) &&
              same_counts(ones, sampled_block_table(sys.eta_K(1, L), c.block_n, S, c.seed));
    auto again = max_entropy_sampler(sys, L, c.block_n, S, c.seed);
    ok = ok && same_counts(again, max_entropy_sampler(sys, L, c.block_n, S, c.seed));
    return CheckResult{"sampler-endpoints", "y = 0 gives the eta* table, y = 1 the eta_K table", ok,
                       std::to_string(S) + " samples; repeated run identical"};
  }));

  out.push_back(guarded("pair-marginals", "pair table marginals equal the single tables", [&] {
    auto ell = lower_density_sequence(spec, KL, c.L, c.burn_in);
    SystemModel sys{spec, star, KL, 10 * KL};
    PairFreqTable pj;
    try {
      pj = pair_joining_freq(sys, ell, c.block_n);
    } catch (const PreconditionError& e) {
      return CheckResult{"pair-marginals", "pair table marginals equal the single tables", true,
                         std::string("skipped: ") + e.what()};
    }
    FreqTable q = quasi_generic_freq(spec, KL, ell, c.block_n);
    Window sw = sys.eta_star(1, ell.last() + c.block_n - 1);
    auto star_counts = count_blocks(sw, 0, ell.last(), c.block_n);
    bool ok = pj.second_marginal().counts == q.counts && pj.first_marginal().counts == star_counts;
    return CheckResult{"pair-marginals", "pair table marginals equal the single tables", ok,
                       "along l = " + std::to_string(ell.last())};
  }));

  out.push_back(guarded("divisibility-self", "(B, B): divisibility clauses and window order both hold", [&] {
    std::uint64_t L = std::min<std::uint64_t>(c.L, 100000);
    auto v = divisibility_order_check(spec, spec, star, std::max(L, c.star_K), L);
    return CheckResult{"divisibility-self", "(B, B): divisibility clauses and window order both hold",
                       v.a_holds() && v.b_holds(), "L = " + std::to_string(L)};
  }));

  out.push_back(guarded("hat-relation", "reading along sigma z of sigma x", [&] {
    Tally t = hat_relation_property(c.seed, 2000);
    return CheckResult{"hat-relation", "reading along sigma z of sigma x", t.violations == 0 && t.comparisons > 0,
                       tally_text(t)};
  }));

  out.push_back(guarded("skew-commutation", "shift rule, Phi Psi = M_H and sigma Phi = Phi R~", [&] {
    Tally t = skew_commutation_property(spec, star, c.seed, 4, 500);
    return CheckResult{"skew-commutation", "shift rule, Phi Psi = M_H and sigma Phi = Phi R~", t.violations == 0,
                       tally_text(t)};
  }));

  out.push_back(guarded("submultiplicative", "p_(n+m) <= p_n p_m on the eta window", [&] {
    Window eta = eta_window(truncate(spec, KL), 1, std::min<std::uint64_t>(c.L, 100000));
    std::vector<std::uint64_t> p(17, 0);
    for (unsigned n = 1; n <= 16; ++n) p[n] = block_count(eta, n).value;
    std::uint64_t bad = 0;
    for (unsigned n = 1; n <= 8; ++n)
      for (unsigned m = 1; m <= 8; ++m) bad += p[n + m] > p[n] * p[m];
    for (unsigned n = 1; n < 16; ++n) bad += p[n + 1] < p[n];
    return CheckResult{"submultiplicative", "p_(n+m) <= p_n p_m on the eta window", bad == 0,
                       "n, m <= 8, " + std::to_string(bad) + " violations"};
  }));

  return out;
}

namespace {

CheckResult criterion1() {
  const std::string title = "exact densities of {2,3} and {4,9,25,49}";
  auto t0 = Clock::now();
  auto a = exact_density_multiples(BTruncation::of({2, 3}));
  auto b = exact_density_multiples(BTruncation::of({4, 9, 25, 49}));
  double secs = seconds_since(t0);
  Rational oracle_b = oracle::period_density_multiples({4, 9, 25, 49});
  bool ok = a.value && *a.value == Rational(2, 3) && b.value && *b.value == Rational(457, 1225) &&
            oracle_b == Rational(457, 1225) && secs < 1.0;
  return {"1", title, ok,
          "d({2,3}) = " + (a.value ? to_string(*a.value) : "?") + ", d({4,9,25,49}) = " +
              (b.value ? to_string(*b.value) : "?") + ", period oracle over [1,44100] = " + to_string(oracle_b) +
              ", " + fmt(secs, 3) + " s"};
}

CheckResult criterion2() {
  const std::string title = "density profile monotone; log-density estimate within 0.01";
  auto t0 = Clock::now();
  BSpec ps = BSpec::prime_squares();
  auto series = davenport_erdos_profile(ps, {10, 100, 1000, 10000});
  bool exact = true;
  Rational at1000;
  for (auto& [K, d] : series.entries) {
    exact = exact && d.is_exact();
    if (K == 1000 && d.value) at1000 = *d.value;
  }
  auto est = logarithmic_density_estimate(ps, 1000000, 1000000);
  double diff = std::fabs(static_cast<double>(est.value) - to_double(at1000));
  double secs = seconds_since(t0);
  bool ok = series.certified_monotone && exact && diff <= 0.01 && secs < 30.0;
  return {"2", title, ok,
          std::string("monotone ") + (series.certified_monotone && exact ? "yes" : "no") + ", d(M_B_1000) = " +
              fmt(to_double(at1000), 5) + ", log estimate at L=10^6 = " + fmt(static_cast<double>(est.value), 5) +
              " (|diff| = " + fmt(diff, 5) + ", tolerance 0.01; two-scale diagnostic " +
              fmt(static_cast<double>(est.two_scale), 5) + "), " + fmt(secs, 1) + " s"};
}

CheckResult criterion3() {
  const std::string title = "sandwich order on windows of length 10^6";
  std::uint64_t runs = 0, bad = 0;
  std::string first;
  for (auto& name : scenario_names()) {
    ScenarioConfig c = scenario_defaults(name);
    BSpec spec = c.spec();
    StarModel star = star_model(spec, c.star_K, c.m);
    for (auto K : c.K_grid) {
      auto v = sandwich_check(spec, star, K, 10 * K, 1, 1000000);
      ++runs;
      std::uint64_t b = v.lower_above_star + v.star_above_eta + v.eta_above_upper;
      if (b && first.empty()) first = name + " K=" + std::to_string(K);
      bad += b;
    }
  }
  return {"3", title, bad == 0,
          std::to_string(runs) + " (scenario, K) windows, " + std::to_string(bad) + " violations" +
              (first.empty() ? "" : " (first: " + first + ")")};
}

CheckResult criterion4() {
  const std::string title = "Per(eta*, s) by the gcd rule equals brute force";
  std::uint64_t pairs = 0;
  std::string where;
  auto run = [&](const std::vector<std::uint64_t>& bs, std::uint64_t s) {
    ++pairs;
    return per_agrees(bs, s, -30, 150, where);
  };
  for (auto& name : scenario_names()) {
    ScenarioConfig c = scenario_defaults(name);
    StarModel star = star_model(c.spec(), c.star_K, c.m);
    const auto& bs = star.elements.elements();
    std::uint64_t P = oracle::lcm_of(bs);
    if (!star.assumed_complete || P > 10000) continue;
    for (auto d : divisors(P))
      for (std::uint64_t k = 1; k <= 6; ++k)
        if (std::lcm(P, d * k) <= 10000 && !run(bs, d * k)) return {"4", title, false, where};
  }
  CounterRng rng(4242, 4);
  std::uint64_t sets = 0;
  for (std::uint64_t i = 0; sets < 100; ++i) {
    std::uint64_t size = 1 + rng.below(i, 4);
    std::vector<std::uint64_t> v;
    for (std::uint64_t j = 0; j < size; ++j) v.push_back(2 + rng.draw(i, 1 + j) % 59);
    v = primitive_subset(v);
    std::uint64_t P = oracle::lcm_of(v);
    if (P > 10000) continue;
    ++sets;
    auto ds = divisors(P);
    for (std::uint64_t j = 0; j < 6; ++j) {
      std::uint64_t s = ds[rng.below(1000 * i + j, ds.size())] * (1 + rng.below(2000 * i + j, 3));
      if (std::lcm(P, s) > 10000) continue;
      if (!run(v, s)) return {"4", title, false, where};
    }
    if (!run(v, 1 + rng.below(3000 * i, 100))) return {"4", title, false, where};
  }
  return {"4", title, true, std::to_string(pairs) + " (B*, s) pairs including 100 random primitive sets, exact agreement"};
}

CheckResult criterion5() {
  const std::string title = "entropy at desk scale: finite-23, prime-squares, two-primes-plus-9";
  auto t0 = Clock::now();
  // (i)
  BSpec f23 = BSpec::parse("{2,3}");
  Window eta = eta_window(truncate(f23, 100000), 1, 100000);
  bool all6 = true;
  std::uint64_t p32 = 0;
  for (unsigned n = 4; n <= 32; ++n) {
    auto p = block_count(eta, n).value;
    all6 = all6 && p == 6;
    if (n == 32) p32 = p;
  }
  double h32 = std::log2(static_cast<double>(p32)) / 32;
  StarModel s23 = star_model(f23, 1000);
  Rational gap23 = *exact_density_free(BTruncation::of({2, 3})).value - *exact_density_free(s23.elements).value;
  bool ok_i = all6 && h32 <= 0.09 && gap23 == 0;
  // (ii)
  const auto& ps = cached_report("prime-squares");
  double h24 = ps.profile.at(24).h_hat;
  double target = 1.0 - oracle::prime_square_multiples_density(10000000);
  bool ok_ii = std::fabs(h24 - target) <= 0.08;
  // (iii)
  const auto& tp9 = cached_report("two-primes-plus-9");
  double h24_9 = tp9.profile.at(24).h_hat;
  bool ok_iii = tp9.density_gap <= 0.01 && h24_9 <= 0.05 && tp9.zero_entropy_flag;
  double secs = seconds_since(t0);
  bool ok = ok_i && ok_ii && ok_iii && secs < 300;
  std::string d = std::string("(i) ") + (ok_i ? "pass" : "FAIL") + ": p_n = 6 for 4<=n<=32 " + (all6 ? "yes" : "no") +
                  ", h_32 = " + fmt(h32) + ", gap " + to_string(gap23) + "; (ii) " + (ok_ii ? "pass" : "FAIL") +
                  ": h_24 = " + fmt(h24) + " vs " + fmt(target) + " (tolerance 0.08); (iii) " +
                  (ok_iii ? "pass" : "FAIL") + ": density gap " + fmt(tp9.density_gap, 5) + " (<= 0.01), h_24 = " +
                  fmt(h24_9) + " (<= 0.05), p_24 = " + std::to_string(tp9.profile.at(24).p_n) + ", zero-entropy flag " +
                  (tp9.zero_entropy_flag ? "on" : "off") + "; " + fmt(secs, 1) + " s";
  return {"5", title, ok, d};
}

CheckResult criterion6() {
  const std::string title = "counting bounds on every scenario and block length";
  std::uint64_t runs = 0, bad = 0;
  std::string first;
  for (auto& name : scenario_names()) {
    const auto& r = cached_report(name);
    for (std::size_t i = 0; i < r.lower.size(); ++i) {
      ++runs;
      bool ok = r.lower[i].passes() && r.upper[i].passes() &&
                Natural(static_cast<unsigned long>(r.lower[i].measured)) <= r.upper[i].rhs;
      if (!ok) {
        ++bad;
        if (first.empty()) first = name + " n=" + std::to_string(r.lower[i].n);
      }
    }
  }
  return {"6", title, bad == 0,
          std::to_string(runs) + " (scenario, n) checks, " + std::to_string(bad) + " violations" +
              (first.empty() ? "" : " (first: " + first + ")")};
}

CheckResult criterion7() {
  const std::string title = "maximal-entropy sampler frequencies";
  BSpec ps = BSpec::prime_squares();
  SystemModel sys{ps, star_model(ps, 1000), 50, 500};
  const std::uint64_t L = 441000, samples = 100000, seed = 20240601;
  const unsigned n = 4;
  auto t = max_entropy_sampler(sys, L, n, samples, seed);
  double p = to_double(t.one_frequency(0));
  double target = 384.0 / 1225.0;
  double sigma = std::sqrt(target * (1 - target) / samples);
  bool freq_ok = std::fabs(p - target) <= 3 * sigma;
  auto zeros = max_entropy_sampler(sys, L, n, samples, seed, FairBits::zeros);
  auto ones = max_entropy_sampler(sys, L, n, samples, seed, FairBits::ones);
  bool z_ok = same_counts(zeros, sampled_block_table(sys.eta_star(1, L), n, samples, seed));
  bool o_ok = same_counts(ones, sampled_block_table(sys.eta_K(1, L), n, samples, seed));
  return {"7", title, freq_ok && z_ok && o_ok,
          "P(1) = " + fmt(p, 5) + " vs 384/1225 = " + fmt(target, 5) + " (3 sigma = " + fmt(3 * sigma, 5) +
              "); y=0 table " + (z_ok ? "identical" : "DIFFERS") + ", y=1 table " + (o_ok ? "identical" : "DIFFERS")};
}

CheckResult criterion8() {
  const std::string title = "divisibility clauses versus window order on 20 pairs";
  struct Pair {
    std::string B, C;
    bool a_expected;
  };
  const std::vector<Pair> pairs = {
      {"{2,3}", "{2,3}", true},
      {"{2,3}", "{2,3,9}", true},
      {"scaled-primes(2)", "{2}", true},
      {"scaled-primes(2)", "scaled-primes(2)", true},
      {"scaled-primes(2)", "union({2},scaled-primes(4))", true},
      {"union(scaled-primes(2),{9})", "{2,9}", true},
      {"union(scaled-primes(2),{9})", "union(scaled-primes(2),{9})", true},
      {"prime-squares", "primes", true},
      {"prime-squares", "{1}", true},
      {"union(scaled-primes(2),scaled-primes(9))", "{2,9}", true},
      {"{2,3}", "{2}", false},
      {"{2,3}", "{2,3,5}", false},
      {"{4,6}", "{2,3}", false},
      {"scaled-primes(2)", "{4}", false},
      {"scaled-primes(2)", "{2,3}", false},
      {"prime-squares", "{4,9}", false},
      {"union(scaled-primes(2),{9})", "{2}", false},
      {"union(scaled-primes(2),{9})", "{2,3}", false},
      {"union(scaled-primes(2),scaled-primes(9))", "{2}", false},
      {"prime-squares", "{2}", false},
  };
  const std::uint64_t K = 10000, L = 10000;
  std::uint64_t exceptions = 0, witnesses = 0;
  std::string first;
  auto note = [&](const std::string& s) {
    if (exceptions++ == 0) first = s;
  };
  for (auto& p : pairs) {
    BSpec B = BSpec::parse(p.B), C = BSpec::parse(p.C);
    StarModel star = star_model(B, 1000);
    auto v = divisibility_order_check(B, C, star, K, L);
    std::string tag = "(" + p.B + ", " + p.C + ")";
    if (v.a_holds() != p.a_expected) note(tag + " clause (a) evaluated unexpectedly");
    if (v.a_holds() && !v.b_holds()) note(tag + " (a) holds but the window order fails");
    if (!v.a_holds()) {
      // every witness must be confirmed by direct divisibility
      auto bs = truncate(B, K).elements(), cs = truncate(C, K).elements();
      const auto& ss = star.elements.elements();
      std::uint64_t confirmed = 0;
      for (auto& w : v.witnesses) {
        bool eta = !oracle::divisible_by_some(w.position, bs);
        bool etac = !oracle::divisible_by_some(w.position, cs);
        bool etas = !oracle::divisible_by_some(w.position, ss);
        bool ok = w.kind == "eta_C>eta" ? (etac && !eta) : (etas && !etac);
        if (ok && w.position >= 1 && static_cast<std::uint64_t>(w.position) <= L) ++confirmed;
        else if (!ok) note(tag + " witness " + std::to_string(w.position) + " not confirmed");
      }
      if (confirmed == 0) note(tag + " no confirmed witness position");
      witnesses += confirmed;
    }
  }
  return {"8", title, exceptions == 0,
          std::to_string(pairs.size()) + " pairs, " + std::to_string(witnesses) + " confirmed witnesses, " +
              std::to_string(exceptions) + " exceptions" + (first.empty() ? "" : " (first: " + first + ")")};
}

CheckResult criterion9() {
  const std::string title = "discrepancy along (l_i) decreases and matches density differences";
  BSpec ps = BSpec::prime_squares();
  StarModel star = star_model(ps, 1000);
  auto ell = lower_density_sequence(ps, 1000000, 1000000, 1000);
  std::vector<std::uint64_t> grid = {10, 100, 1000};
  auto disc = symbolic_discrepancy(ps, star, grid, ell);
  double full = oracle::prime_square_multiples_density(1000000000000ULL);
  bool decreasing = true, close = true;
  std::string d;
  for (std::size_t i = 0; i < disc.size(); ++i) {
    double v = to_double(disc[i].value);
    double want = full - oracle::prime_square_multiples_density(grid[i]);
    if (i > 0 && !(v < to_double(disc[i - 1].value))) decreasing = false;
    if (std::fabs(v - want) > 0.005) close = false;
    d += (d.empty() ? "" : "; ") + std::string("K=") + std::to_string(grid[i]) + ": " + fmt(v, 5) + " vs " + fmt(want, 5);
  }
  return {"9", title, decreasing && close,
          d + (decreasing ? ", decreasing" : ", NOT decreasing") + " (tolerance 0.005)"};
}

CheckResult criterion10() {
  const std::string title = "hat relation and skew-product commutation";
  Tally hat = hat_relation_property(1010, 10000);
  Tally skew;
  for (auto& name : scenario_names()) {
    ScenarioConfig c = scenario_defaults(name);
    BSpec spec = c.spec();
    Tally t = skew_commutation_property(spec, star_model(spec, c.star_K, c.m), 77, 3, 1000);
    skew.cases += t.cases;
    skew.comparisons += t.comparisons;
    if (t.violations && !skew.violations) skew.first = name + ": " + t.first;
    skew.violations += t.violations;
  }
  return {"10", title, hat.violations == 0 && skew.violations == 0 && hat.cases == 10000 && skew.cases > 0,
          "hat: " + tally_text(hat) + "; trajectories of length 1000: " + tally_text(skew)};
}

// Files of a report tree, keyed by relative path, metadata excluded.
std::map<std::string, std::string> tree_contents(const fs::path& root) {
  std::map<std::string, std::string> out;
  if (!fs::exists(root)) return out;
  for (auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file() || e.path().filename() == "metadata.json") continue;
    out[fs::relative(e.path(), root).string()] = read_file(e.path());
  }
  return out;
}

CheckResult criterion11() {
  const std::string title = "byte-identical reports across runs and thread counts";
  fs::path base = fs::temp_directory_path() / ("bfree-determinism-" + std::to_string(::getpid()));
  fs::remove_all(base);
  std::ostringstream sink;
  std::uint64_t files = 0;
  std::vector<std::string> diffs;
  auto run = [&](const std::string& sub, ScenarioConfig c, const std::string& tag, unsigned threads) {
    c.out = (base / tag).string();
    c.threads = threads;
    c.log_level = "quiet";
    run_subcommand(sub, c, sink, sink);
    return tree_contents(base / tag);
  };
  struct Job {
    std::string sub, scenario;
    std::uint64_t L;
  };
  for (auto& j : std::vector<Job>{{"verify", "finite-23", 100000}, {"report", "two-primes-plus-9", 100000}}) {
    ScenarioConfig c = scenario_defaults(j.scenario);
    c.L = j.L;
    c.K = j.L;
    c.samples = 20000;
    auto first = run(j.sub, c, j.sub + "-a", 1);
    auto second = run(j.sub, c, j.sub + "-b", 1);
    auto wide = run(j.sub, c, j.sub + "-c", 8);
    files += first.size();
    if (first.empty()) diffs.push_back(j.sub + ": no files written");
    if (first != second) diffs.push_back(j.sub + ": repeated run differs");
    if (first != wide) diffs.push_back(j.sub + ": 1 vs 8 threads differ");
  }
  fs::remove_all(base);
  std::string d = std::to_string(files) + " report files compared (verify twice, report twice, threads 1 vs 8)";
  for (auto& x : diffs) d += "; " + x;
  return {"11", title, diffs.empty(), d};
}

}  // namespace

int acceptance_count() { return 11; }

CheckResult acceptance_check(int criterion) {
  static const std::vector<std::function<CheckResult()>> checks = {
      criterion1, criterion2, criterion3, criterion4,  criterion5, criterion6,
      criterion7, criterion8, criterion9, criterion10, criterion11};
  if (criterion < 1 || criterion > acceptance_count()) throw std::out_of_range("no such criterion");
  return guarded(std::to_string(criterion), "criterion " + std::to_string(criterion), checks[criterion - 1]);
}

std::vector<CheckResult> acceptance_suite() {
  std::vector<CheckResult> out;
  for (int k = 1; k <= acceptance_count(); ++k) out.push_back(acceptance_check(k));
  return out;
}

}  // namespace bfree
