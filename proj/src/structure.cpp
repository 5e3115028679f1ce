#include "bfree/structure.hpp"

#include "bfree/core.hpp"
#include "bfree/parallel.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <tuple>

namespace bfree {

std::string verdict_name(TautVerdict v) {
  switch (v) {
    case TautVerdict::contributes: return "contributes";
    case TautVerdict::redundant: return "redundant";
    case TautVerdict::undecided: return "undecided";
  }
  return "?";
}

std::string TautReport::label() const {
  std::string suffix = truncation_level ? "-at-K" : "";
  switch (overall) {
    case TautOverall::taut: return "taut" + suffix;
    case TautOverall::not_taut: return "not-taut" + suffix;
    case TautOverall::undecided: return "undecided-at-K";
  }
  return "?";
}

TautReport taut_check(const BSpec& spec, std::uint64_t K, const DensityOptions& opt) {
  TautReport r;
  r.family = spec.describe();
  r.K = K;
  auto trunc = truncate(spec, K);
  r.truncation_level = !trunc.complete();
  auto with = exact_density_multiples(trunc, opt);
  const auto& elems = trunc.elements();
  r.entries.resize(elems.size());
  parallel_for(elems.size(), [&](std::size_t i) {
    std::vector<std::uint64_t> rest;
    rest.reserve(elems.size());
    for (std::size_t j = 0; j < elems.size(); ++j)
      if (j != i) rest.push_back(elems[j]);
    TautEntry e;
    e.b = elems[i];
    e.with = with;
    e.without = exact_density_multiples(BTruncation(rest, K, trunc.infinite_source()), opt);
    if (e.without.upper < e.with.lower)
      e.verdict = TautVerdict::contributes;
    else if (e.without.is_exact() && e.with.is_exact() && *e.without.value == *e.with.value)
      e.verdict = TautVerdict::redundant;
    r.entries[i] = std::move(e);
  });
  bool all = true, any_redundant = false;
  for (auto& e : r.entries) {
    all = all && e.verdict == TautVerdict::contributes;
    any_redundant = any_redundant || e.verdict == TautVerdict::redundant;
  }
  r.overall = any_redundant ? TautOverall::not_taut : all ? TautOverall::taut : TautOverall::undecided;
  return r;
}

BehrendGauge behrend_gauge(const BSpec& spec, const std::vector<std::uint64_t>& K_grid, const Rational& epsilon) {
  BehrendGauge g;
  g.epsilon = epsilon;
  g.series = davenport_erdos_profile(spec, K_grid);
  if (!g.series.entries.empty()) g.behrend_likely = g.series.entries.back().second.lower > 1 - epsilon;
  return g;
}

namespace {

std::vector<std::uint64_t> greedy_coprime(const std::vector<std::uint64_t>& sorted, std::size_t want) {
  std::vector<std::uint64_t> kept;
  for (auto q : sorted) {
    bool ok = std::all_of(kept.begin(), kept.end(), [&](std::uint64_t k) { return std::gcd(k, q) == 1; });
    if (ok) {
      kept.push_back(q);
      if (kept.size() >= want) break;
    }
  }
  return kept;
}

// For each d <= d_max, the quotients b/d over b in elems divisible by d (increasing).
std::map<std::uint64_t, std::vector<std::uint64_t>> quotient_sets(const std::vector<std::uint64_t>& elems,
                                                                  std::uint64_t d_max) {
  std::map<std::uint64_t, std::vector<std::uint64_t>> q;
  for (auto b : elems)
    for (auto d : divisors(b)) {
      if (d > d_max) break;
      q[d].push_back(b / d);
    }
  return q;
}

}  // namespace

StarApprox bstar_approx(const BTruncation& base, std::uint64_t d_max, std::uint64_t m) {
  StarApprox s;
  s.base = base;
  s.d_max = d_max;
  s.m = m;
  std::vector<std::uint64_t> all = base.elements();
  if (base.infinite_source()) {
    for (auto& [d, quotients] : quotient_sets(base.elements(), d_max)) {
      auto w = greedy_coprime(quotients, m);
      if (w.size() >= m) {
        s.found_D.push_back({d, w});
        all.push_back(d);
      }
    }
  }
  s.result = BTruncation(primitive_subset(all), base.cutoff(), base.infinite_source(), base.lcm_cap(),
                         !base.infinite_source() && base.complete());
  return s;
}

StarApprox bstar_approx(const BSpec& spec, std::uint64_t K, std::uint64_t d_max, std::uint64_t m) {
  return bstar_approx(truncate(spec, K), d_max == 0 ? K : d_max, m);
}

PrimeApprox bprime_approx(const BSpec& spec, std::uint64_t K, std::uint64_t c_max, const Rational& epsilon) {
  PrimeApprox p;
  p.base = truncate(spec, K);
  p.c_max = c_max == 0 ? K : c_max;
  p.epsilon = epsilon;
  Rational threshold = 1 - epsilon;
  auto qs = quotient_sets(p.base.elements(), p.c_max);
  std::vector<std::pair<std::uint64_t, std::vector<std::uint64_t>>> cand;
  for (auto& [c, quotients] : qs) {
    // c in B gives Q containing 1 and adds nothing after primitivizing
    if (quotients.front() == 1) continue;
    // d(M_Q) <= sum 1/q, so small sums cannot pass the gauge
    if (reciprocal_sum_upper(quotients) <= threshold) continue;
    cand.emplace_back(c, quotients);
  }
  std::vector<DensityEnclosure> gauges(cand.size());
  parallel_for(cand.size(), [&](std::size_t i) {
    gauges[i] = exact_density_multiples(BTruncation(cand[i].second, K, true), enclosure_options());
  });
  std::vector<std::uint64_t> all = p.base.elements();
  for (std::size_t i = 0; i < cand.size(); ++i) {
    if (gauges[i].lower > threshold) {
      p.found_C.push_back({cand[i].first, gauges[i]});
      all.push_back(cand[i].first);
    }
  }
  p.result = BTruncation(primitive_subset(all), K, p.base.infinite_source(), p.base.lcm_cap(), p.base.complete());
  return p;
}

StarModel star_model(const BSpec& spec, std::uint64_t search_K, std::uint64_t m) {
  StarModel s;
  s.search_K = search_K;
  s.m = m;
  if (spec.is_finite()) {
    // a finite B has no infinite coprime families, so B* is its primitive part
    auto all = spec.elements_up_to(UINT64_MAX);
    StarModel f = star_model_from(all);
    f.search_K = search_K;
    f.m = m;
    f.approx = bstar_approx(BTruncation::of(all), search_K, m);
    return f;
  }
  s.approx = bstar_approx(spec, search_K, search_K, m);
  auto wider = bstar_approx(spec, 2 * search_K, 2 * search_K, m);
  std::vector<std::uint64_t> e = s.approx.result.elements();
  s.assumed_complete = e == wider.result.elements();
  s.elements = BTruncation(e, s.assumed_complete && !e.empty() ? e.back() : search_K, !s.assumed_complete,
                           kDefaultLcmCap, s.assumed_complete);
  return s;
}

StarModel star_model_from(std::vector<std::uint64_t> bstar) {
  StarModel s;
  s.elements = BTruncation::of(primitive_subset(std::move(bstar)));
  s.assumed_complete = true;
  s.search_K = s.elements.cutoff();
  s.approx.base = s.elements;
  s.approx.result = s.elements;
  return s;
}

Window eta_star_window(const StarModel& star, std::int64_t a, std::uint64_t L) {
  Window w = sieve_multiples(star.elements, a, L).complement();
  w.set_tag(star.assumed_complete ? Tag::generic : Tag::eta_star_upper);
  return w;
}

namespace {
bool divisible_by_any(std::uint64_t n, const std::vector<std::uint64_t>& set) {
  for (auto d : set) {
    if (d > n) break;
    if (n % d == 0) return true;
  }
  return false;
}
}  // namespace

OrderVerdict divisibility_order_check(const BSpec& B, const BSpec& C, const StarModel& star, std::uint64_t K,
                                 std::uint64_t L) {
  if (K < L) throw PreconditionError("divisibility_order_check: K must be >= L");
  OrderVerdict v;
  v.K = K;
  v.L = L;
  v.bstar = star.elements.elements();
  auto bt = truncate(B, K);
  auto ct = truncate(C, K);
  const auto& cs = ct.elements();
  for (auto b : bt.elements())
    if (!divisible_by_any(b, cs)) {
      v.a_clause1 = false;
      v.clause1_failures.push_back(b);
    }
  for (auto c : cs)
    if (!divisible_by_any(c, v.bstar)) {
      v.a_clause2 = false;
      v.clause2_failures.push_back(c);
    }
  Window eta = eta_window(bt, 1, L);
  Window eta_c = eta_window(ct, 1, L);
  Window eta_s = eta_star_window(star, 1, L);
  v.star_le_C_violations = eta_s.excess_positions(eta_c, 64);
  v.C_le_eta_violations = eta_c.excess_positions(eta, 64);
  v.b_star_le_C = v.star_le_C_violations.empty();
  v.b_C_le_eta = v.C_le_eta_violations.empty();
  // every failing divisibility clause pins a position where (b) breaks
  for (auto b : v.clause1_failures) {
    // eta(b) = 0 since b is in B; eta_C(b) = 1 since no c divides b
    if (b <= K && !divisible_by_any(b, cs)) v.witnesses.push_back({static_cast<std::int64_t>(b), "eta_C>eta", b <= L});
  }
  for (auto c : v.clause2_failures) {
    // eta_C(c) = 0 since c is in C; eta*(c) = 1 since no b* divides c
    if (!divisible_by_any(c, v.bstar)) v.witnesses.push_back({static_cast<std::int64_t>(c), "eta*>eta_C", c <= L});
  }
  for (auto p : v.C_le_eta_violations) v.witnesses.push_back({p, "eta_C>eta", true});
  for (auto p : v.star_le_C_violations) v.witnesses.push_back({p, "eta*>eta_C", true});
  std::sort(v.witnesses.begin(), v.witnesses.end(),
            [](const OrderWitness& x, const OrderWitness& y) { return std::tie(x.position, x.kind) < std::tie(y.position, y.kind); });
  v.witnesses.erase(std::unique(v.witnesses.begin(), v.witnesses.end(),
                                [](const OrderWitness& x, const OrderWitness& y) {
                                  return x.position == y.position && x.kind == y.kind;
                                }),
                    v.witnesses.end());
  return v;
}

OrderVerdict divisibility_order_check(const BSpec& B, const BSpec& C, std::uint64_t K, std::uint64_t L,
                                 std::uint64_t star_K, std::uint64_t m) {
  return divisibility_order_check(B, C, star_model(B, star_K, m), K, L);
}

}  // namespace bfree
