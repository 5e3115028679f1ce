#include "bfree/toeplitz.hpp"

#include "bfree/core.hpp"
#include "bfree/parallel.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace bfree {

std::vector<std::int64_t> PerClassification::positions(PerClass c) const {
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < classes.size(); ++i)
    if (classes[i] == c) out.push_back(a + static_cast<std::int64_t>(i));
  return out;
}

std::string PerClassification::to_text() const {
  std::ostringstream out;
  out << "per " << s << ' ' << K_prime << ' ' << a << ' ' << L << '\n';
  for (auto c : classes) out << static_cast<char>(c);
  out << '\n';
  return out.str();
}

namespace {

std::vector<std::uint64_t> known_up_to(const StarModel& star, std::uint64_t bound) {
  std::vector<std::uint64_t> out;
  for (auto b : star.elements.elements())
    if (b <= bound) out.push_back(b);
  return out;
}

PerClass classify(std::int64_t n, const std::vector<std::uint64_t>& zero_divs,
                  const std::vector<std::uint64_t>& one_divs) {
  for (auto d : zero_divs)
    if (floor_mod(n, d) == 0) return PerClass::zero;
  for (auto g : one_divs)
    if (floor_mod(n, g) == 0) return PerClass::undetermined;
  return PerClass::one;
}

}  // namespace

PerClassification per_positions(const StarModel& star, std::uint64_t s, std::int64_t a, std::uint64_t L,
                                std::uint64_t K_prime) {
  if (s == 0) throw PreconditionError("per_positions: s must be >= 1");
  PerClassification pc;
  pc.s = s;
  pc.K_prime = K_prime;
  pc.a = a;
  pc.L = L;
  pc.one_sided = !star.assumed_complete;
  auto known = known_up_to(star, K_prime);
  std::vector<std::uint64_t> zero_divs, one_divs;
  for (auto b : known) {
    if (s % b == 0) zero_divs.push_back(b);
    one_divs.push_back(std::gcd(b, s));
  }
  zero_divs = primitive_subset(zero_divs);
  one_divs = primitive_subset(one_divs);
  pc.classes.resize(L);
  if (s <= L) {
    std::vector<PerClass> table(s);
    for (std::uint64_t r = 0; r < s; ++r) table[r] = classify(static_cast<std::int64_t>(r), zero_divs, one_divs);
    std::uint64_t r = floor_mod(a, s);
    for (std::uint64_t i = 0; i < L; ++i) {
      pc.classes[i] = table[r];
      if (++r == s) r = 0;
    }
  } else {
    for (std::uint64_t i = 0; i < L; ++i)
      pc.classes[i] = classify(a + static_cast<std::int64_t>(i), zero_divs, one_divs);
  }
  return pc;
}

std::vector<RegularityEntry> regularity_profile(const StarModel& star, const std::vector<std::uint64_t>& K_grid,
                                                std::uint64_t K_prime) {
  std::vector<RegularityEntry> out;
  auto known = known_up_to(star, K_prime);
  for (auto K : K_grid) {
    RegularityEntry e;
    e.K = K;
    auto head = known_up_to(star, K);
    BTruncation ht = BTruncation::of(head);
    e.s = ht.lcm_value();
    // gcd(b, lcm(T)) = lcm over t in T of gcd(b, t), so s itself is never needed
    std::vector<std::uint64_t> zero_divs, one_divs;
    for (auto b : known) {
      std::uint64_t g = 1;
      for (auto t : head) g = *lcm_capped(g, std::gcd(b, t), UINT64_MAX);
      one_divs.push_back(g);
      if (g == b) zero_divs.push_back(b);
    }
    auto mg = exact_density_multiples(BTruncation::of(one_divs), enclosure_options());
    auto md = exact_density_multiples(BTruncation::of(zero_divs), enclosure_options());
    e.outside_per = DensityEnclosure::interval(mg.lower - md.upper, mg.upper - md.lower,
                                               mg.is_exact() && md.is_exact() ? DensityMethod::exact_ie
                                                                              : DensityMethod::enclosure_pruned);
    out.push_back(e);
  }
  return out;
}

Window eta_K_window(const BSpec& spec, std::uint64_t K, std::int64_t a, std::uint64_t L) {
  return eta_window(truncate(spec, K), a, L).with_tag(Tag::eta_K);
}

UnderlineEta underline_eta_K_window(const StarModel& star, std::uint64_t K, std::uint64_t K_prime, std::int64_t a,
                                    std::uint64_t L) {
  auto head = known_up_to(star, K);
  BTruncation ht = BTruncation::of(head);
  if (ht.overflowed()) throw OverflowError("lcm(B*_K) exceeds the cap; Per computation aborted");
  UnderlineEta u;
  u.s = ht.lcm();
  auto pc = per_positions(star, u.s, a, L, K_prime);
  u.bits = Window(a, L, Tag::underline_eta_K);
  u.undetermined = Window(a, L, Tag::generic);
  for (std::uint64_t i = 0; i < L; ++i) {
    if (pc.classes[i] == PerClass::one && !pc.one_sided)
      u.bits.set(i);
    else if (pc.classes[i] != PerClass::zero)
      u.undetermined.set(i);
  }
  return u;
}

SandwichVerdict sandwich_check(const BSpec& spec, const StarModel& star, std::uint64_t K, std::uint64_t K_prime,
                               std::int64_t a, std::uint64_t L) {
  SandwichVerdict v;
  v.K = K;
  v.K_prime = K_prime;
  v.a = a;
  v.L = L;
  std::int64_t last = a + static_cast<std::int64_t>(L) - 1;
  std::uint64_t reach = std::max<std::uint64_t>(std::max<std::int64_t>(a, -a), std::max<std::int64_t>(last, -last));
  auto exact_trunc = truncate(spec, std::max<std::uint64_t>({reach, K, 1}));
  Window eta = eta_window(exact_trunc, a, L);
  v.eta_exact = eta.tag() == Tag::eta;
  Window upper = eta_K_window(spec, K, a, L);
  Window star_w = eta_star_window(star, a, L);
  v.star_exact = star.assumed_complete;
  auto lower = underline_eta_K_window(star, K, K_prime, a, L);
  v.lower_above_star = lower.bits.excess_count(star_w.with_tag(Tag::generic));
  v.star_above_eta = star_w.excess_count(eta);
  v.eta_above_upper = eta.excess_count(upper);
  auto add = [&](const std::vector<std::int64_t>& p) { v.first_failures.insert(v.first_failures.end(), p.begin(), p.end()); };
  add(lower.bits.excess_positions(star_w, 16));
  add(star_w.excess_positions(eta, 16));
  add(eta.excess_positions(upper, 16));
  v.strict_lower = star_w.excess_count(lower.bits);
  v.strict_upper = upper.excess_count(eta);
  return v;
}

std::vector<DiscrepancyEntry> symbolic_discrepancy(const BSpec& spec, const StarModel& star,
                                                   const std::vector<std::uint64_t>& K_grid, const EllSequence& ell,
                                                   std::uint64_t K_prime_factor) {
  if (ell.size() == 0) throw PreconditionError("symbolic_discrepancy: empty ell sequence");
  std::uint64_t L = ell.last();
  Window eta = eta_window(truncate(spec, L), 1, L);
  Window star_w = eta_star_window(star, 1, L);
  std::vector<DiscrepancyEntry> out;
  for (auto K : K_grid) {
    auto lower = underline_eta_K_window(star, K, K_prime_factor * K, 1, L);
    Window upper = eta_K_window(spec, K, 1, L);
    Window low_diff = lower.bits ^ star_w;
    Window up_diff = upper ^ eta;
    DiscrepancyEntry e;
    e.K = K;
    e.lower_side = upper_density_along(low_diff, ell);
    e.upper_side = upper_density_along(up_diff, ell);
    e.value = upper_density_along(low_diff | up_diff, ell);
    out.push_back(e);
  }
  return out;
}

}  // namespace bfree

namespace bfree {

Window SystemModel::eta(std::int64_t a, std::uint64_t L) const {
  std::int64_t last = a + static_cast<std::int64_t>(L) - 1;
  std::uint64_t reach = std::max<std::uint64_t>(std::max<std::int64_t>(a, -a), std::max<std::int64_t>(last, -last));
  return eta_window(truncate(spec, std::max<std::uint64_t>({reach, K, 1})), a, L);
}

}  // namespace bfree
