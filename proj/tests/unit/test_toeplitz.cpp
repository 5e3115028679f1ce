#include "bfree/core.hpp"
#include "bfree/oracles.hpp"
#include "bfree/toeplitz.hpp"

#include <doctest.h>

#include <random>

using namespace bfree;

namespace {
std::string classes_text(const PerClassification& pc) {
  std::string s;
  for (auto c : pc.classes) s += static_cast<char>(c);
  return s;
}
}  // namespace

TEST_CASE("periodic parts of a finite star") {
  auto star = star_model_from({2, 9});
  auto pc = per_positions(star, 18, 0, 18, 180);
  CHECK(pc.positions(PerClass::one) == std::vector<std::int64_t>{1, 3, 5, 7, 11, 13, 15, 17});
  auto ones = pc.positions(PerClass::one);
  auto zeros = pc.positions(PerClass::zero);
  CHECK(pc.positions(PerClass::undetermined).empty());
  CHECK(zeros.size() == 10);
  CHECK(ones.size() + zeros.size() == 18);

  auto coarse = per_positions(star, 2, 0, 2, 180);
  CHECK(coarse.positions(PerClass::one).empty());
  CHECK(coarse.positions(PerClass::zero) == std::vector<std::int64_t>{0});
  CHECK(coarse.positions(PerClass::undetermined) == std::vector<std::int64_t>{1});

  auto erdos = per_positions(star_model_from({1}), 7, -3, 20, 70);
  CHECK(erdos.positions(PerClass::zero).size() == 20);
}

TEST_CASE("gcd rule against brute-force periodicity") {
  std::mt19937_64 rng(5);
  int checked = 0;
  while (checked < 150) {
    std::vector<std::uint64_t> raw(1 + rng() % 4);
    for (auto& b : raw) b = 2 + rng() % 40;
    auto bstar = primitive_subset(raw);
    auto P = oracle::lcm_of(bstar);
    if (P > 5000) continue;
    auto s = divisors(P)[rng() % divisors(P).size()];
    std::int64_t a = static_cast<std::int64_t>(rng() % 100) - 50;
    auto pc = per_positions(star_model_from(bstar), s, a, 60, P);
    REQUIRE(classes_text(pc) == oracle::per_classes(bstar, s, a, 60));
    ++checked;
  }
}

TEST_CASE("certification is monotone in the witness bound") {
  auto star = star_model_from({4, 6, 9, 10, 35});
  auto small = per_positions(star, 12, 0, 200, 6);
  auto large = per_positions(star, 12, 0, 200, 60);
  for (std::size_t i = 0; i < 200; ++i) {
    if (large.classes[i] == PerClass::one) CHECK(small.classes[i] == PerClass::one);
    if (small.classes[i] == PerClass::zero) CHECK(large.classes[i] == PerClass::zero);
  }
}

TEST_CASE("regularity profile") {
  auto r = regularity_profile(star_model_from({2, 9}), {2, 9}, 90);
  REQUIRE(r.size() == 2);
  CHECK(*r[0].outside_per.value == Rational(1, 2));
  CHECK(*r[1].outside_per.value == 0);
  for (auto& e : regularity_profile(star_model_from({1}), {1, 10, 100}, 1000)) CHECK(*e.outside_per.value == 0);
  auto scaled = star_model(BSpec::scaled_primes(2), 1000);
  for (auto& e : regularity_profile(scaled, {2, 10, 100}, 1000)) CHECK(*e.outside_per.value == 0);
}

TEST_CASE("upper periodic approximant") {
  CHECK(eta_K_window(BSpec::parse("{2,3}"), 3, 1, 12).bits() == "100010100010");
  auto sq = eta_K_window(BSpec::prime_squares(), 10, 0, 72);
  CHECK(sq.bits() == oracle::free_word({4, 9}, 0, 72));
  CHECK(sq.tag() == Tag::eta_K);
  CHECK(eta_K_window(BSpec::prime_squares(), 3, -5, 40) == Window::ones(-5, 40));
}

TEST_CASE("lower periodic approximant") {
  auto u = underline_eta_K_window(star_model_from({2, 9}), 9, 90, 0, 36);
  CHECK(u.s == 18);
  CHECK(u.bits.bits() == oracle::free_word({2, 9}, 0, 36));
  CHECK(u.undetermined.count() == 0);
  CHECK(underline_eta_K_window(star_model_from({1}), 1, 10, -10, 30).bits.count() == 0);
  auto six = underline_eta_K_window(star_model_from({2, 3}), 3, 30, 1, 60);
  CHECK(six.s == 6);
  for (std::uint64_t i = 0; i < 60; ++i) CHECK(six.bits.get(i) == ((i + 1) % 6 == 1 || (i + 1) % 6 == 5));
}

TEST_CASE("sandwich chain") {
  auto spec = BSpec::parse("{2,3}");
  auto v = sandwich_check(spec, star_model(spec, 100), 3, 30, 1, 1000);
  CHECK(v.passes());
  CHECK(v.strict_lower == 0);
  CHECK(v.strict_upper == 0);

  auto sq = BSpec::prime_squares();
  auto w = sandwich_check(sq, star_model(sq, 1000), 10, 100, 1, 100);
  CHECK(w.passes());
  CHECK(w.strict_upper > 0);

  auto mix = BSpec::parse("union(scaled-primes(2),{9})");
  auto m = sandwich_check(mix, star_model(mix, 1000), 10, 100, 1, 10000);
  CHECK(m.passes());
  CHECK(m.strict_upper > 0);
  auto neg = sandwich_check(mix, star_model(mix, 1000), 100, 1000, -5000, 10000);
  CHECK(neg.passes());
}

TEST_CASE("symbolic discrepancy") {
  auto spec = BSpec::parse("{2,3}");
  auto ell = lower_density_sequence(spec, 10000, 10000);
  for (auto& e : symbolic_discrepancy(spec, star_model(spec, 100), {3, 10}, ell)) CHECK(e.value == 0);

  auto fam = BSpec::parse("union(scaled-primes(2),scaled-primes(9))");
  auto fell = lower_density_sequence(fam, 100000, 100000);
  auto d = symbolic_discrepancy(fam, star_model(fam, 1000), {10, 100}, fell);
  for (auto& e : d) CHECK(e.lower_side == 0);
  CHECK(d[1].upper_side <= d[0].upper_side);
}

TEST_CASE("per classification text") {
  auto pc = per_positions(star_model_from({2, 9}), 2, 0, 4, 18);
  CHECK(pc.to_text() == "per 2 18 0 4\n0?0?\n");
}
