#include "bfree/core.hpp"
#include "bfree/measures.hpp"
#include "bfree/oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace bfree;

TEST_CASE("exact periodic frequencies") {
  auto a = mirsky_exact(BTruncation::of({2, 3}), 1);
  CHECK(a.freq("1") == Rational(1, 3));
  CHECK(a.freq("0") == Rational(2, 3));
  auto b = mirsky_exact(BTruncation::of({4, 9, 25}), 1);
  CHECK(b.freq("1") == Rational(16, 25));
  auto c = mirsky_exact(BTruncation::of({2}), 2);
  CHECK(c.freq("10") == Rational(1, 2));
  CHECK(c.freq("01") == Rational(1, 2));
  CHECK(c.freq("00") == 0);
  CHECK(c.freq("11") == 0);
}

TEST_CASE("one-cylinder frequency equals the free density") {
  for (auto B : std::vector<std::vector<std::uint64_t>>{{4, 9, 25, 49}, {6, 10, 15}, {4, 6, 10, 14}, {3}}) {
    auto t = BTruncation::of(B);
    CHECK(mirsky_exact(t, 3).one_frequency(1) == *exact_density_free(t).value);
  }
}

TEST_CASE("Kolmogorov consistency of exact tables") {
  auto t = mirsky_exact(BTruncation::of({4, 6, 9}), 5);
  auto last = t.drop_last();
  auto first = t.drop_first();
  CHECK(last.total == first.total);
  CHECK(last.counts == first.counts);
  auto direct = mirsky_exact(BTruncation::of({4, 6, 9}), 4);
  for (auto& [w, c] : direct.counts) CHECK(last.freq(w) == direct.freq(w));
}

TEST_CASE("block counting") {
  auto w = Window::from_bits(0, "0110100110");
  auto m = count_blocks(w, 0, 8, 3);
  std::map<std::string, std::uint64_t> expect;
  auto s = w.bits();
  for (std::size_t i = 0; i < 8; ++i) ++expect[s.substr(i, 3)];
  CHECK(m == expect);
  auto long_w = eta_window(BTruncation::of({4, 9}), 1, 500);
  auto lm = count_blocks(long_w, 0, 400, 70);
  std::map<std::string, std::uint64_t> lexpect;
  auto ls = long_w.bits();
  for (std::size_t i = 0; i < 400; ++i) ++lexpect[ls.substr(i, 70)];
  CHECK(lm == lexpect);
}

TEST_CASE("frequencies along the lower-density prefixes") {
  auto spec = BSpec::parse("{2,3}");
  auto ell = lower_density_sequence(spec, 10000, 10000);
  auto q = quasi_generic_freq(spec, 10000, ell, 2);
  auto exact = mirsky_exact(BTruncation::of({2, 3}), 2);
  for (auto& [w, c] : exact.counts) CHECK(std::abs(to_double(q.freq(w) - exact.freq(w))) <= 1.0 / ell.last());
  auto q1 = quasi_generic_freq(spec, 10000, ell, 1);
  CHECK(q1.freq("1") == 1 - ell.ratio(ell.size() - 1));
}

TEST_CASE("pair statistics") {
  auto spec = BSpec::parse("{2,3}");
  SystemModel sys{spec, star_model(spec, 100), 100, 1000};
  auto ell = lower_density_sequence(spec, 10000, 10000);
  auto p = pair_joining_freq(sys, ell, 2);
  for (auto& [k, c] : p.counts) CHECK(k.first == k.second);
  auto q = quasi_generic_freq(spec, 10000, ell, 2);
  CHECK(p.second_marginal().counts == q.counts);

  auto sq = BSpec::prime_squares();
  SystemModel ssys{sq, star_model(sq, 1000), 100, 1000};
  auto sell = lower_density_sequence(sq, 100000, 100000);
  auto sp = pair_joining_freq(ssys, sell, 1);
  CHECK(sp.first_marginal().freq("1") == 0);
  CHECK(sp.second_marginal().counts == quasi_generic_freq(sq, 100000, sell, 1).counts);
}

TEST_CASE("maximal entropy sampler") {
  auto spec = BSpec::parse("{2,3}");
  SystemModel sys{spec, star_model(spec, 100), 100, 1000};
  auto t = max_entropy_sampler(sys, 6000, 1, 20000, 9);
  auto exact_eta = sampled_block_table(eta_window(BTruncation::of({2, 3}), 1, 6000), 1, 20000, 9);
  CHECK(t.counts == exact_eta.counts);
  CHECK(std::abs(to_double(t.freq("1")) - 1.0 / 3) < 3 * std::sqrt((1.0 / 3) * (2.0 / 3) / 20000));

  auto again = max_entropy_sampler(sys, 6000, 1, 20000, 9);
  CHECK(again.counts == t.counts);
  CHECK(max_entropy_sampler(sys, 6000, 1, 20000, 10).counts != t.counts);

  auto sq = BSpec::prime_squares();
  SystemModel ssys{sq, star_model(sq, 1000), 50, 500};
  const std::uint64_t L = 44100;
  auto ones = max_entropy_sampler(ssys, L, 3, 5000, 1, FairBits::ones);
  auto zeros = max_entropy_sampler(ssys, L, 3, 5000, 1, FairBits::zeros);
  auto eta50 = eta_window(truncate(sq, 50), 1, L);
  CHECK(ones.counts == sampled_block_table(eta50, 3, 5000, 1).counts);
  CHECK(zeros.counts == sampled_block_table(eta_star_window(ssys.star, 1, L), 3, 5000, 1).counts);
  CHECK(zeros.freq("000") == 1);
}

TEST_CASE("eta against its tautification") {
  auto spec = BSpec::parse("{2,3}");
  auto ell = lower_density_sequence(spec, 10000, 10000);
  CHECK(eta_vs_etaprime_discrepancy(spec, 1000, ell).value == 0);
  auto sq = BSpec::prime_squares();
  auto sell = lower_density_sequence(sq, 100000, 100000);
  CHECK(eta_vs_etaprime_discrepancy(sq, 1000, sell).value == 0);
}

TEST_CASE("premetrics") {
  auto x = eta_window(BTruncation::of({4, 9}), 1, 5000);
  CHECK(dlow_premetric(x, x, 100) == 0);
  auto y = x ^ eta_window(BTruncation::of({2}), 1, 5000).complement();
  CHECK(std::abs(to_double(dlow_premetric(x, y, 100)) - 0.5) < 0.01);
  CHECK(std::abs(to_double(dupper_premetric(x, y, 100)) - 0.5) < 0.01);
  CHECK(dlow_premetric(x, y, 100) <= dupper_premetric(x, y, 100));
}

TEST_CASE("frequency table json") {
  auto t = mirsky_exact(BTruncation::of({2}), 1);
  auto j = t.to_json();
  CHECK(j.find("\"n\"") != std::string::npos);
  CHECK(j.find("\"provenance\"") != std::string::npos);
  CHECK(j.find("\"entries\"") != std::string::npos);
  CHECK(j.find("\"num\"") != std::string::npos);
}
