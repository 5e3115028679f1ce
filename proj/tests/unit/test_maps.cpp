#include "bfree/core.hpp"
#include "bfree/maps.hpp"
#include "bfree/oracles.hpp"

#include <doctest.h>

#include <random>

using namespace bfree;

namespace {
std::shared_ptr<const BTruncation> trunc_of(std::vector<std::uint64_t> b) {
  return std::make_shared<const BTruncation>(BTruncation::of(std::move(b)));
}
}  // namespace

TEST_CASE("points of H and rotation") {
  auto t = trunc_of({4, 6});
  auto h = HPoint::delta(t, 7);
  CHECK(h.modulus() == 12);
  CHECK(h.residue() == 7);
  CHECK(h.coordinate(4) == 3);
  CHECK(h.rotate(5).residue() == 0);
  CHECK(h.rotate(-8).residue() == 11);
  CHECK((h + HPoint::delta(t, 6)).residue() == 1);
  CHECK(HPoint::delta(t, -1).residue() == 11);
}

TEST_CASE("phi_K reads the free pattern at h") {
  auto t = trunc_of({2, 3});
  CHECK(phi_K(HPoint::delta(t, 0), 1, 6).bits() == "100010");
  CHECK(phi_K(HPoint::delta(t, 1), 0, 6).bits() == "100010");
  CHECK(phi_K(HPoint::delta(t, 3), 0, 6).bits() == oracle::free_word({2, 3}, 3, 6));
  std::mt19937_64 rng(17);
  auto big = trunc_of({4, 9, 25});
  for (int trial = 0; trial < 50; ++trial) {
    std::int64_t n = static_cast<std::int64_t>(rng() % 900);
    std::int64_t a = static_cast<std::int64_t>(rng() % 200) - 100;
    CHECK(phi_K(HPoint::delta(big, n), a, 120).bits() == oracle::free_word({4, 9, 25}, a + n, 120));
    // equivariance: phi(Rh) = sigma phi(h)
    auto w = phi_K(HPoint::delta(big, n), a, 121);
    CHECK(phi_K(HPoint::delta(big, n).rotate(), a, 120) == w.slice(a + 1, 120).shifted(1));
  }
}

TEST_CASE("theta recovers the point") {
  auto t = trunc_of({4, 9, 25});
  for (std::int64_t n : {0, 1, 17, 899, 450}) {
    auto w = phi_K(HPoint::delta(t, n), 0, 2000);
    auto back = theta_point(w, t);
    REQUIRE(back.has_value());
    CHECK(back->residue() == static_cast<std::uint64_t>(n));
  }
  CHECK_FALSE(theta_point(Window::ones(0, 100), t).has_value());
}

TEST_CASE("Gamma to the star group") {
  auto bstar = trunc_of({2});
  CHECK(gamma_star(HPoint::delta(trunc_of({4, 6}), 7), bstar).residue() == 1);
  CHECK(gamma_star(HPoint::delta(trunc_of({4, 6, 10}), 10), bstar).residue() == 0);
  CHECK(gamma_star(HPoint::delta(trunc_of({4, 6}), 0), bstar).residue() == 0);
  CHECK_THROWS_AS(gamma_star(HPoint::delta(trunc_of({9}), 1), bstar), PreconditionError);
}

TEST_CASE("coordinatewise maps") {
  auto x = Window::from_bits(0, "1010");
  CHECK(map_M(x, Window::ones(0, 4)) == x);
  CHECK(map_M(x, Window(0, 4)).count() == 0);
  CHECK(map_M(x, Window::from_bits(0, "1100")).bits() == "1000");
  auto w = Window::from_bits(0, "1000");
  CHECK(map_N(w, x, Window(0, 4)) == w);
  CHECK(map_N(w, x, Window::ones(0, 4)) == x);
  CHECK(map_N(w, x, Window::from_bits(0, "0011")).bits() == "1010");
  CHECK_THROWS_AS(map_N(x, w, Window(0, 4)), PreconditionError);
  CHECK_THROWS_AS(map_M(x, Window(1, 4)), GeometryError);
}

TEST_CASE("M_H enclosure endpoints") {
  auto spec = BSpec::parse("union(scaled-primes(2),{9})");
  SystemModel sys{spec, star_model(spec, 1000), 10, 100};
  auto h = HPoint::delta(std::make_shared<const BTruncation>(truncate(spec, 10)), 5);
  auto top = map_M_H(sys, h, Window::ones(-20, 60));
  CHECK(top.upper == phi_K(h, -20, 60));
  auto bottom = map_M_H(sys, h, Window(-20, 60));
  CHECK(bottom.lower.leq(bottom.upper));
  auto mid = map_M_H(sys, h, Window::from_bits(-20, std::string(30, '1') + std::string(30, '0')));
  CHECK(mid.lower.leq(mid.upper));
  CHECK(((mid.lower ^ mid.upper) & mid.mask.complement()).count() == 0);
}

TEST_CASE("hat reading") {
  auto x = Window::from_bits(0, "10110");
  auto z = Window::from_bits(0, "01010");
  auto h = hat_read(x, z);
  CHECK(h.bits == std::vector<bool>{false, true});
  CHECK(h.positions == std::vector<std::int64_t>{1, 3});
  CHECK(h.first_index == 0);
  auto all = hat_read(x, Window::ones(0, 5));
  CHECK(all.bits == std::vector<bool>{true, false, true, true, false});
  auto neg = hat_read(Window::from_bits(-2, "1101"), Window::from_bits(-2, "1011"));
  CHECK(neg.first_index == -1);
  CHECK(neg.positions == std::vector<std::int64_t>{-2, 0, 1});
  CHECK(neg.at(-1));
  CHECK_FALSE(neg.at(0));
  CHECK(neg.at(1));
  CHECK_THROWS_AS(hat_read(x, Window(0, 5)), PreconditionError);
}

TEST_CASE("assembling from a hat reading") {
  auto lower = Window::from_bits(-3, "1000100");
  auto upper = Window::from_bits(-3, "1101110");
  auto xs = Window::from_bits(-1, "1010");
  auto a = assemble_phi(lower, upper, xs);
  CHECK(a.defined == Window::ones(-3, 7));
  CHECK(lower.leq(a.y));
  CHECK(a.y.leq(upper));
  auto back = hat_read(a.y, upper ^ lower);
  for (std::int64_t j = -1; j <= 1; ++j) CHECK(back.at(j) == xs.at(j));
}

TEST_CASE("skew orbit") {
  auto spec = BSpec::parse("{2,3}");
  SystemModel sys{spec, star_model(spec, 100), 3, 30};
  auto h = HPoint::delta(std::make_shared<const BTruncation>(truncate(spec, 3)), 1);
  auto x = Window::from_bits(0, "0110");
  auto tr = skew_orbit(sys, h, x, 500);
  CHECK_FALSE(tr.halted);
  CHECK(tr.shifts == 0);
  CHECK(tr.final_x == x);
  auto none = skew_orbit(sys, h, x, 0);
  CHECK(none.steps.empty());
  CHECK(none.final_x == x);

  auto mix = BSpec::parse("union(scaled-primes(2),{9})");
  SystemModel ms{mix, star_model(mix, 1000), 10, 100};
  auto mh = HPoint::delta(std::make_shared<const BTruncation>(truncate(mix, 10)), 0);
  auto mt = skew_orbit(ms, mh, x, 1000);
  REQUIRE_FALSE(mt.halted);
  // shifts exactly where eta* = 0 < eta = 1
  auto eta = oracle::free_word(truncate(mix, 2000).elements(), 0, 1000);
  auto star = oracle::free_word({2, 9}, 0, 1000);
  std::int64_t expect = 0;
  for (std::size_t i = 0; i < 1000; ++i) expect += (eta[i] == '1' && star[i] == '0') ? 1 : 0;
  CHECK(mt.shifts == expect);
  CHECK(mt.final_x == x.shifted(expect));
}
