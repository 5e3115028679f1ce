#include "bfree/core.hpp"
#include "bfree/oracles.hpp"
#include "bfree/parallel.hpp"

#include <doctest.h>

#include <random>
#include <sstream>

using namespace bfree;

namespace {
std::vector<std::int64_t> ones_of(const Window& w) { return w.support(); }

std::vector<std::uint64_t> random_set(std::mt19937_64& rng, std::size_t max_size, std::uint64_t max_value) {
  std::uniform_int_distribution<std::size_t> size(1, max_size);
  std::uniform_int_distribution<std::uint64_t> value(2, max_value);
  std::vector<std::uint64_t> out(size(rng));
  for (auto& v : out) v = value(rng);
  return out;
}
}  // namespace

TEST_CASE("truncations of the bundled families") {
  CHECK(truncate(BSpec::prime_squares(), 10).elements() == std::vector<std::uint64_t>{4, 9});
  CHECK(truncate(BSpec::scaled_primes(2), 15).elements() == std::vector<std::uint64_t>{4, 6, 10, 14});
  auto t = truncate(BSpec::parse("{2,3}"), 100);
  CHECK(t.elements() == std::vector<std::uint64_t>{2, 3});
  CHECK(t.lcm() == 6);
  CHECK(t.complete());
  CHECK_FALSE(truncate(BSpec::prime_squares(), 10).complete());
}

TEST_CASE("family parsing") {
  CHECK(BSpec::parse("union(scaled-primes(2),{9})").elements_up_to(20) == std::vector<std::uint64_t>{4, 6, 9, 10, 14});
  CHECK(BSpec::parse("explicit(9,2,3)").elements_up_to(100) == std::vector<std::uint64_t>{2, 3, 9});
  CHECK(BSpec::parse("primes").elements_up_to(12) == std::vector<std::uint64_t>{2, 3, 5, 7, 11});
  CHECK(BSpec::parse("{}").elements_up_to(100).empty());
  CHECK_THROWS_AS(BSpec::parse("no-such-family"), InputError);
  CHECK_THROWS_AS(BSpec::parse("{2,x}"), InputError);
}

TEST_CASE("lcm overflow is flagged") {
  auto t = truncate(BSpec::parse("primes"), 200);
  CHECK(t.overflowed());
  CHECK_THROWS_AS(t.lcm(), OverflowError);
  CHECK(t.exact_lcm() > Natural("18446744073709551615"));
}

TEST_CASE("primitive subsets") {
  CHECK(primitive_subset({2, 4, 5}) == std::vector<std::uint64_t>{2, 5});
  CHECK(primitive_subset({6, 2, 3, 12}) == std::vector<std::uint64_t>{2, 3});
  CHECK(primitive_subset({4, 9, 25}) == std::vector<std::uint64_t>{4, 9, 25});
}

TEST_CASE("sieve of multiples") {
  auto w = sieve_multiples(BTruncation::of({2, 3}), 1, 12);
  CHECK(ones_of(w) == std::vector<std::int64_t>{2, 3, 4, 6, 8, 9, 10, 12});
  CHECK(ones_of(sieve_multiples(BTruncation::of({4, 9}), 1, 12)) == std::vector<std::int64_t>{4, 8, 9, 12});
  CHECK(sieve_multiples(BTruncation::of({}), -7, 50).count() == 0);
}

TEST_CASE("eta windows") {
  CHECK(eta_window(BTruncation::of({2, 3}), 1, 6).bits() == "100010");
  CHECK(eta_window(BTruncation::of({4, 9}), 1, 10).bits() == "1110111001");
  auto w = eta_window(BTruncation::of({2, 3}), 1, 6);
  CHECK(w.tag() == Tag::eta);
  CHECK(eta_window(truncate(BSpec::prime_squares(), 10), 1, 100).tag() == Tag::eta_K);
  CHECK(eta_window(truncate(BSpec::prime_squares(), 100), 1, 100).tag() == Tag::eta);
}

TEST_CASE("admissibility and theta") {
  auto w6 = eta_window(BTruncation::of({2, 3}), 1, 6);
  CHECK(admissibility_defect(w6, 2) == std::vector<std::uint64_t>{1});
  CHECK(admissible_for(w6, 2));
  auto all = Window::ones(0, 4);
  CHECK(admissibility_defect(all, 2) == std::vector<std::uint64_t>{0, 1});
  CHECK_FALSE(admissible_for(all, 2));
  CHECK(admissibility_defect(Window(0, 10), 5).empty());
  auto w12 = eta_window(BTruncation::of({2, 3}), 1, 12);
  CHECK(theta_window(w12, 2) == std::vector<std::uint64_t>{0});
  CHECK(theta_window(w12, 3) == std::vector<std::uint64_t>{0});
  CHECK(theta_window(Window::ones(0, 9), 3).empty());
}

TEST_CASE("sieve agrees with direct divisibility, negative offsets included") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    auto B = random_set(rng, 6, 60);
    std::int64_t a = static_cast<std::int64_t>(rng() % 400) - 200;
    std::uint64_t L = 1 + rng() % 300;
    auto w = eta_window(BTruncation::of(B), a, L);
    REQUIRE(w.bits() == oracle::free_word(B, a, L));
  }
}

TEST_CASE("window invariants") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    auto B = random_set(rng, 5, 40);
    auto t = BTruncation::of(B);
    std::int64_t a = static_cast<std::int64_t>(rng() % 200) - 100;
    std::uint64_t L = 2 + rng() % 500;
    auto eta = eta_window(t, a, L);
    auto mult = sieve_multiples(t, a, L);
    CHECK((eta ^ mult) == Window::ones(a, L));
    CHECK(sieve_multiples(primitivize(t), a, L) == mult);
    CHECK(eta_window(t, a + 1, L - 1) == eta.slice(a + 1, L - 1));
    // more divisors can only clear bits
    auto wider = B;
    wider.push_back(2 + rng() % 50);
    CHECK(eta_window(BTruncation::of(wider), a, L).leq(eta));
    auto prim = primitivize(t);
    for (auto b : prim.elements()) {
      auto e = eta_window(prim, 0, 4 * prim.lcm() > 5000 ? 5000 : 4 * prim.lcm());
      CHECK(theta_window(e, b) == std::vector<std::uint64_t>{0});
    }
  }
}

TEST_CASE("sieve is independent of the worker count") {
  auto t = truncate(BSpec::prime_squares(), 100000);
  set_thread_count(1);
  auto one = eta_window(t, -12345, 100000);
  set_thread_count(8);
  auto eight = eta_window(t, -12345, 100000);
  set_thread_count(1);
  CHECK(one == eight);
}

TEST_CASE("window text and binary round trips") {
  auto w = eta_window(BTruncation::of({4, 9}), -5, 77);
  std::stringstream text;
  write_text(text, w);
  CHECK(text.str().rfind("window -5 77 eta", 0) == 0);
  auto back = read_text(text);
  CHECK(back == w);
  CHECK(back.tag() == w.tag());
  std::stringstream bin;
  write_binary(bin, w);
  CHECK(read_binary(bin) == w);
}

TEST_CASE("window operations") {
  auto x = Window::from_bits(0, "1010");
  auto y = Window::from_bits(0, "1100");
  CHECK((x & y).bits() == "1000");
  CHECK((x | y).bits() == "1110");
  CHECK((x ^ y).bits() == "0110");
  CHECK(x.shifted(2).offset() == -2);
  CHECK(x.complement().bits() == "0101");
  CHECK(x.excess_positions(y, 10) == std::vector<std::int64_t>{2});
  CHECK_THROWS_AS(x & Window::from_bits(1, "1010"), GeometryError);
  CHECK_THROWS_AS(x.at(4), std::out_of_range);
  CHECK(x.extract(0, 4) == 0b0101);
}

TEST_CASE("floored residues") {
  CHECK(floor_mod(-1, 6) == 5);
  CHECK(floor_mod(-6, 6) == 0);
  CHECK(floor_mod(13, 6) == 1);
  CHECK(divisors(36) == std::vector<std::uint64_t>{1, 2, 3, 4, 6, 9, 12, 18, 36});
  CHECK(factorize(360) == std::vector<std::pair<std::uint64_t, int>>{{2, 3}, {3, 2}, {5, 1}});
}
