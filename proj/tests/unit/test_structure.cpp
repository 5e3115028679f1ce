#include "bfree/core.hpp"
#include "bfree/oracles.hpp"
#include "bfree/structure.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>

using namespace bfree;

TEST_CASE("tautness") {
  auto a = taut_check(BSpec::parse("{2,3}"), 100);
  CHECK(a.label() == "taut");
  for (auto& e : a.entries) CHECK(e.verdict == TautVerdict::contributes);
  auto b = taut_check(BSpec::parse("{2,4}"), 100);
  CHECK(b.label() == "not-taut");
  auto c = taut_check(BSpec::prime_squares(), 100);
  CHECK(c.label() == "taut-at-K");
  for (auto& e : c.entries) {
    CHECK(e.verdict == TautVerdict::contributes);
    // removing b leaves a density equal to the brute-force value of the rest
    std::vector<std::uint64_t> rest;
    for (auto& f : c.entries)
      if (f.b != e.b) rest.push_back(f.b);
    if (oracle::lcm_of(rest) < 100000) CHECK(*e.without.value == oracle::period_density_multiples(rest));
  }
}

TEST_CASE("Behrend gauges") {
  auto primes = behrend_gauge(BSpec::parse("primes"), {10, 100, 1000});
  REQUIRE(primes.series.entries.size() == 3);
  for (std::size_t i = 1; i < 3; ++i)
    CHECK(primes.series.entries[i - 1].second.lower <= primes.series.entries[i].second.lower);
  // 1 - prod over p <= 10 of (1 - 1/p) = 1 - 8/35
  CHECK(*primes.series.entries[0].second.value == Rational(27, 35));
  CHECK_FALSE(primes.behrend_likely);
  // 1 - prod over p <= K of (1 - 1/p) only passes 0.95 near K = 1.5 10^5
  CHECK(behrend_gauge(BSpec::parse("primes"), {10000, 1000000}).behrend_likely);
  CHECK_FALSE(behrend_gauge(BSpec::parse("{2,3}"), {10, 100}).behrend_likely);
  CHECK_FALSE(behrend_gauge(BSpec::prime_squares(), {10, 100, 1000}).behrend_likely);
}

TEST_CASE("coprime witness families") {
  auto s = bstar_approx(BSpec::scaled_primes(2), 200, 0, 5);
  auto it = std::find_if(s.found_D.begin(), s.found_D.end(), [](auto& w) { return w.d == 2; });
  REQUIRE(it != s.found_D.end());
  CHECK(it->witnesses == std::vector<std::uint64_t>{2, 3, 5, 7, 11});
  CHECK(s.result.elements() == std::vector<std::uint64_t>{2});

  auto q = bstar_approx(BSpec::prime_squares(), 200, 0, 5);
  CHECK(q.result.elements() == std::vector<std::uint64_t>{1});

  auto f = bstar_approx(BSpec::parse("{2,3}"), 200, 0, 5);
  CHECK(f.found_D.empty());
  CHECK(f.result.elements() == std::vector<std::uint64_t>{2, 3});

  for (auto& fam : {BSpec::scaled_primes(2), BSpec::prime_squares(), BSpec::parse("union(scaled-primes(2),{9})")}) {
    auto r = bstar_approx(fam, 300, 0, 5);
    for (auto& w : r.found_D) {
      CHECK(w.witnesses.size() >= 5);
      for (std::size_t i = 0; i < w.witnesses.size(); ++i)
        for (std::size_t j = i + 1; j < w.witnesses.size(); ++j) CHECK(std::gcd(w.witnesses[i], w.witnesses[j]) == 1);
    }
  }
}

TEST_CASE("tautification scales") {
  auto p = bprime_approx(BSpec::parse("union(scaled-primes(2),{9})"), 1000000, 4);
  auto two = std::find_if(p.found_C.begin(), p.found_C.end(), [](auto& c) { return c.c == 2; });
  CHECK(two != p.found_C.end());
  auto r = p.result.elements();
  CHECK(std::find(r.begin(), r.end(), 2) != r.end());
  CHECK(std::find(r.begin(), r.end(), 9) != r.end());

  CHECK(bprime_approx(BSpec::parse("{2,3}"), 100).found_C.empty());
  CHECK(bprime_approx(BSpec::parse("{2,3}"), 100).result.elements() == std::vector<std::uint64_t>{2, 3});
  CHECK(bprime_approx(BSpec::prime_squares(), 1000).found_C.empty());
}

TEST_CASE("the star of the tautification is the star") {
  for (auto& fam : {BSpec::parse("{2,3}"), BSpec::prime_squares(), BSpec::scaled_primes(2),
                    BSpec::parse("union(scaled-primes(2),{9})")}) {
    auto direct = bstar_approx(fam, 500, 0, 5).result.elements();
    auto prime = bprime_approx(fam, 500);
    auto via = bstar_approx(prime.result, 500, 5).result.elements();
    CHECK(via == direct);
  }
}

TEST_CASE("star models") {
  auto s = star_model(BSpec::parse("union(scaled-primes(2),scaled-primes(9))"), 1000);
  CHECK(s.assumed_complete);
  CHECK(s.elements.elements() == std::vector<std::uint64_t>{2, 9});
  auto f = star_model(BSpec::parse("{6,10,15}"), 1000);
  CHECK(f.assumed_complete);
  CHECK(f.elements.elements() == std::vector<std::uint64_t>{6, 10, 15});
  auto w = eta_star_window(star_model_from({2, 9}), 1, 18);
  CHECK(w.bits() == oracle::free_word({2, 9}, 1, 18));
}

TEST_CASE("divisibility against window order") {
  auto same = divisibility_order_check(BSpec::parse("{2,3}"), BSpec::parse("{2,3}"), 1000, 1000);
  CHECK(same.a_holds());
  CHECK(same.b_holds());

  auto sq = divisibility_order_check(BSpec::prime_squares(), BSpec::parse("{2,3}"), 1000, 30);
  CHECK_FALSE(sq.a_clause1);
  CHECK_FALSE(sq.a_holds());
  CHECK_FALSE(sq.b_C_le_eta);
  CHECK(std::find(sq.C_le_eta_violations.begin(), sq.C_le_eta_violations.end(), 25) != sq.C_le_eta_violations.end());

  auto mixed = divisibility_order_check(BSpec::parse("union(scaled-primes(2),{9})"), BSpec::parse("{2,9}"), 10000, 10000);
  CHECK(mixed.bstar == std::vector<std::uint64_t>{2, 9});
  CHECK(mixed.a_holds());
  CHECK(mixed.b_holds());
  // every refuting witness is a real position
  for (auto& w : sq.witnesses) {
    if (!w.in_window) continue;
    auto eta = oracle::free_word(truncate(BSpec::prime_squares(), 1000).elements(), w.position, 1);
    auto etac = oracle::free_word({2, 3}, w.position, 1);
    if (w.kind == "eta_C>eta") CHECK((etac == "1" && eta == "0"));
  }
}
