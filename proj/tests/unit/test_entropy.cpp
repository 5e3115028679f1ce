#include "bfree/core.hpp"
#include "bfree/entropy.hpp"
#include "bfree/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace bfree;

TEST_CASE("distinct block counts") {
  CHECK(block_count(Window(0, 1000), 7).value == 1);
  auto w = eta_window(BTruncation::of({2, 3}), 1, 10000);
  CHECK(block_count(w, 4).value == 6);
  CHECK(oracle::periodic_blocks("100010", 4) == 6);
  auto w49 = eta_window(BTruncation::of({4, 9}), 1, 100000);
  CHECK(block_count(w49, 3).value == oracle::periodic_blocks(oracle::free_word({4, 9}, 1, 36), 3));
}

TEST_CASE("count modes agree") {
  std::mt19937_64 rng(23);
  Window w(0, 20000);
  for (std::uint64_t i = 0; i < w.length(); ++i) w.set(i, rng() % 3 == 0);
  auto s = w.bits();
  for (unsigned n : {1u, 5u, 12u, 20u, 64u, 65u, 90u}) {
    auto exact = block_count(w, n, CountMode::exact_set);
    auto merge = block_count(w, n, CountMode::sort_merge);
    CHECK(exact.value == merge.value);
    CHECK(exact.exact);
    if (n <= 20) CHECK(exact.value == oracle::distinct_blocks(s, n));
  }
  auto sk = block_count(w, 20, CountMode::sketch);
  CHECK_FALSE(sk.exact);
  double truth = static_cast<double>(block_count(w, 20).value);
  CHECK(std::abs(sk.value - truth) / truth < 5 * sk.relative_error + 1e-9);
}

TEST_CASE("memory budget") {
  std::mt19937_64 rng(1);
  Window w(0, 5000);
  for (std::uint64_t i = 0; i < w.length(); ++i) w.set(i, rng() & 1);
  CHECK_THROWS_AS(block_count(w, 30, CountMode::exact_set, 100), MemoryBudgetExceeded);
  CHECK(block_count(w, 30, CountMode::sort_merge, 100).value == block_count(w, 30).value);
}

TEST_CASE("complexity properties on a window") {
  auto w = eta_window(truncate(BSpec::prime_squares(), 200000), 1, 200000);
  std::vector<std::uint64_t> p(17);
  for (unsigned n = 1; n <= 16; ++n) p[n] = block_count(w, n).value;
  for (unsigned n = 1; n < 16; ++n) CHECK(p[n] <= p[n + 1]);
  for (unsigned n = 1; n <= 16; ++n)
    for (unsigned m = 1; n + m <= 16; ++m) CHECK(p[n + m] <= p[n] * p[m]);
  // longer windows can only reveal more blocks
  CHECK(block_count(w.slice(1, 100000), 16).value <= p[16]);
  CHECK(block_count_range(w, 0, 100000 - 15, 16).value == block_count(w.slice(1, 100000), 16).value);
}

TEST_CASE("periodic windows match their period") {
  for (auto B : std::vector<std::vector<std::uint64_t>>{{4, 9}, {6, 10, 15}, {4, 6, 10, 14}}) {
    auto P = oracle::lcm_of(B);
    auto w = eta_window(BTruncation::of(B), 1, 3 * P + 40);
    auto period = oracle::free_word(B, 1, P);
    for (unsigned n : {2u, 5u, 11u, 30u}) CHECK(block_count(w, n).value == oracle::periodic_blocks(period, n));
  }
}

TEST_CASE("entropy profiles") {
  auto f = entropy_profile(BSpec::parse("{2,3}"), 10000, 10000, {4, 8, 16, 32});
  for (auto& e : f.entries) {
    CHECK(e.p_n == 6);
    CHECK(e.h_hat == doctest::Approx(std::log2(6.0) / e.n));
    CHECK(e.saturated);
  }
  auto empty = entropy_profile(BSpec::parse("{}"), 1000, 1000, {8, 16});
  for (auto& e : empty.entries) {
    CHECK(e.p_n == 1);
    CHECK(e.h_hat == 0);
  }
  CHECK_THROWS_AS(entropy_profile(BSpec::prime_squares(), 100, 1000, {8}), PreconditionError);
  auto csv = to_csv(f);
  CHECK(csv.rfind("n,p_n,h_hat,mode,saturated\n", 0) == 0);
}

TEST_CASE("lower counting bound") {
  auto a = lower_bound_check(BSpec::parse("{2,3}"), 10000, 12, 10000);
  CHECK(a.exponent == 0);
  CHECK(a.lhs == 1);
  CHECK(a.measured == 6);
  CHECK(a.passes());
  auto sq = lower_bound_check(BSpec::prime_squares(), 1000000, 20, 1000000);
  CHECK(sq.free_count == 13);
  CHECK(sq.star_free_count == 0);
  CHECK(sq.lhs == 8192);
  CHECK(sq.passes());
  auto mix = lower_bound_check(BSpec::parse("union(scaled-primes(2),{9})"), 100000, 16, 100000);
  CHECK(mix.exponent <= 1);
  CHECK(mix.passes());
}

TEST_CASE("upper counting bound") {
  auto a = upper_bound_check(BSpec::parse("{2,3}"), 100, 8, 10000);
  CHECK(a.measured == 6);
  CHECK(a.p_star == 6);
  CHECK(a.p_K == 6);
  CHECK(a.sup_gap == 0);
  CHECK(a.passes());
  auto sq = upper_bound_check(BSpec::prime_squares(), 10, 36, 200000);
  CHECK(sq.p_star == 1);
  CHECK(sq.p_K == oracle::periodic_blocks(oracle::free_word({4, 9}, 1, 36), 36));
  CHECK(sq.sup_gap == 24);
  CHECK(sq.passes());
  auto star = upper_bound_check(BSpec::parse("union(scaled-primes(2),scaled-primes(9))"), 100, 12, 100000);
  CHECK(star.p_star > 1);
  CHECK(star.passes());
}

TEST_CASE("consolidated report") {
  EntropyReportParams p;
  p.K = 10000;
  p.L = 10000;
  p.n_grid = {8, 16};
  p.bound_K = 10;
  auto r = entropy_report(BSpec::parse("{2,3}"), p);
  CHECK(r.zero_entropy_flag);
  CHECK(r.density_gap == doctest::Approx(0).epsilon(0.002));
  CHECK(r.bounds_hold());
  CHECK(r.to_json().find("\"profile\"") != std::string::npos);
}
