#include "bfree/core.hpp"
#include "bfree/density.hpp"
#include "bfree/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace bfree;

TEST_CASE("exact densities of small truncations") {
  CHECK(*exact_density_multiples(BTruncation::of({2, 3})).value == Rational(2, 3));
  CHECK(*exact_density_multiples(BTruncation::of({2})).value == Rational(1, 2));
  auto d = exact_density_multiples(BTruncation::of({4, 9, 25, 49}));
  CHECK(*d.value == Rational(457, 1225));
  CHECK(*exact_density_free(BTruncation::of({4, 9, 25, 49})).value == Rational(768, 1225));
  CHECK(oracle::period_density_multiples({4, 9, 25, 49}) == Rational(457, 1225));
  CHECK(*exact_density_multiples(BTruncation::of({})).value == 0);
  CHECK(*exact_density_multiples(BTruncation::of({1, 5})).value == 1);
}

TEST_CASE("inclusion-exclusion agrees with a period count") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 150; ++trial) {
    std::vector<std::uint64_t> B(1 + rng() % 6);
    for (auto& b : B) b = 2 + rng() % 30;
    if (oracle::lcm_of(B) > 200000) continue;
    Rational expect = oracle::period_density_multiples(B);
    auto t = BTruncation::of(B);
    REQUIRE(*exact_density_multiples(t).value == expect);
    REQUIRE(inclusion_exclusion_density(t.elements()) == expect);
    REQUIRE(*period_density_multiples(t).value == expect);
    REQUIRE(*exact_density_free(t).value == 1 - expect);
  }
}

TEST_CASE("recursive evaluation matches literal subsets") {
  std::vector<std::uint64_t> s = {4, 6, 10, 14, 22, 26, 34, 38, 46, 9};
  auto rec = free_density_recursive(s, 1000000);
  REQUIRE(rec.has_value());
  CHECK(*rec == 1 - inclusion_exclusion_density(s));
}

TEST_CASE("enclosures bracket the truth") {
  auto t = truncate(BSpec::prime_squares(), 100000);
  auto d = exact_density_multiples(t, enclosure_options());
  double truth = oracle::prime_square_multiples_density(100000);
  CHECK(to_double(d.lower) <= truth + 1e-12);
  CHECK(to_double(d.upper) >= truth - 1e-12);
  CHECK(d.lower <= d.upper);
}

TEST_CASE("Davenport-Erdos profiles") {
  auto s = davenport_erdos_profile(BSpec::prime_squares(), {10, 100, 1000});
  REQUIRE(s.entries.size() == 3);
  CHECK(s.certified_monotone);
  for (std::size_t i = 0; i < s.entries.size(); ++i) {
    auto& [K, e] = s.entries[i];
    REQUIRE(e.is_exact());
    CHECK(to_double(*e.value) == doctest::Approx(oracle::prime_square_multiples_density(K)).epsilon(1e-12));
    if (i > 0) CHECK(s.entries[i - 1].second.value <= e.value);
  }
  CHECK(std::abs(to_double(s.entries.back().second.lower) - 0.39207) < 0.01);

  auto flat = davenport_erdos_profile(BSpec::parse("{2,3}"), {10, 100, 1000});
  for (auto& [K, e] : flat.entries) CHECK(*e.value == Rational(2, 3));

  auto scaled = davenport_erdos_profile(BSpec::scaled_primes(2), {10, 100});
  // 1/4 + 1/6 + 1/10 - 1/12 - 1/20 - 1/30 + 1/60
  CHECK(*scaled.entries[0].second.value == Rational(11, 30));
  CHECK(*scaled.entries[0].second.value == oracle::period_density_multiples({4, 6, 10}));
}

TEST_CASE("lower density prefixes") {
  auto e = lower_density_sequence(BSpec::parse("{2,3}"), 1000, 1000, 10);
  REQUIRE(e.size() > 0);
  CHECK(e.last() == 1000);
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (i > 0) CHECK(e.ratio(i - 1) < e.ratio(i));
    // away from the right edge the minima sit at l = 1 mod 6, below 2/3
    if (e.prefixes[i] <= 994) {
      CHECK(e.prefixes[i] % 6 == 1);
      CHECK(e.ratio(i) < Rational(2, 3));
    }
  }
  CHECK(std::abs(to_double(e.ratio(e.size() - 1)) - 2.0 / 3) < 0.002);

  auto two = lower_density_sequence(BSpec::parse("{2}"), 1000, 1000, 10);
  for (std::size_t i = 0; i + 1 < two.size(); ++i) CHECK(two.prefixes[i] % 2 == 1);

  // kept exactly when every later prefix has a larger ratio
  auto marks = oracle::free_marks({2, 3}, 1000);
  std::vector<std::uint64_t> m(1001, 0);
  for (std::uint64_t n = 1; n <= 1000; ++n) m[n] = m[n - 1] + (marks[n] ? 0 : 1);
  std::vector<std::uint64_t> expect;
  for (std::uint64_t l = 10; l <= 1000; ++l) {
    bool keep = true;
    for (std::uint64_t k = l + 1; k <= 1000 && keep; ++k) keep = m[l] * k < m[k] * l;
    if (keep) expect.push_back(l);
  }
  CHECK(e.prefixes == expect);
  for (std::size_t i = 0; i < e.size(); ++i) {
    std::uint64_t m = 0;
    for (std::uint64_t n = 1; n <= e.prefixes[i]; ++n) m += marks[n] ? 0 : 1;
    CHECK(m == e.counts[i]);
  }
}

TEST_CASE("prefix ratios approach the truncation density") {
  auto e = lower_density_sequence(BSpec::prime_squares(), 100000, 100000);
  REQUIRE(e.size() > 0);
  double d = oracle::prime_square_multiples_density(100000);
  CHECK(std::abs(to_double(e.ratio(e.size() - 1)) - d) < 0.005);
  for (std::size_t i = 0; i < e.size(); ++i) CHECK(to_double(e.ratio(i)) <= to_double(e.ratio(e.size() - 1)));
}

TEST_CASE("logarithmic density estimates") {
  CHECK(std::abs(static_cast<double>(logarithmic_density_estimate(BSpec::parse("{2}"), 1000000, 1000000).value) - 0.5) < 0.01);
  CHECK(std::abs(static_cast<double>(logarithmic_density_estimate(BSpec::parse("{2,3}"), 1000000, 1000000).value) - 2.0 / 3) <
        0.01);
  CHECK(logarithmic_density_estimate(BSpec::parse("{}"), 1000, 1000).value == 0);
  // against direct summation
  long double s = 0;
  for (std::uint64_t n = 2; n <= 100000; n += 2) s += 1.0L / n;
  auto est = logarithmic_density_estimate(BSpec::parse("{2}"), 100000, 100000);
  CHECK(static_cast<double>(est.harmonic_sum) == doctest::Approx(static_cast<double>(s)).epsilon(1e-12));
}

TEST_CASE("upper density estimates") {
  auto p = upper_density_estimate(BSpec::parse("{2,3}"), 10000, 10000, 1000);
  CHECK(std::abs(to_double(p.value) - 1.0 / 3) <= 1.0 / 1000);
  // a burn-in of L / 10 keeps the boundary term below the tolerance
  auto q = upper_density_estimate(BSpec::parse("{4,9,25,49}"), 1000000, 1000000, 100000);
  CHECK(std::abs(to_double(q.value) - 768.0 / 1225) < 0.001);
}

TEST_CASE("upper density along prefixes") {
  auto e = lower_density_sequence(BSpec::parse("{2}"), 10000, 10000, 100);
  // the odd numbers, read along odd prefixes: (l+1)/2 ones in [1, l]
  auto odd = eta_window(BTruncation::of({2}), 1, 10000);
  auto tail_from = static_cast<std::uint64_t>(std::ceil(0.1 * e.last()));
  Rational best = -1;
  for (auto l : e.prefixes)
    if (l >= tail_from) best = std::max(best, make_rational((l + 1) / 2, l));
  CHECK(upper_density_along(odd, e) == best);
  CHECK(upper_density_along(Window(1, 10000), e) == 0);
}

TEST_CASE("series csv") {
  auto s = davenport_erdos_profile(BSpec::parse("{2,3}"), {10});
  auto csv = to_csv(s);
  CHECK(csv.rfind("K,lower,upper,value,method\n", 0) == 0);
  CHECK(csv.find("10,2/3,2/3,2/3,exact-IE") != std::string::npos);
}
