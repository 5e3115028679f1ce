// Periodic parts of eta*, the regularity profile, and the periodic
// approximants eta_K (from above) and underline-eta_K (from below).
#pragma once

#include "bfree/density.hpp"
#include "bfree/structure.hpp"
#include "bfree/window.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bfree {

enum class PerClass : char { one = '1', zero = '0', undetermined = '?' };

struct PerClassification {
  std::uint64_t s = 0;
  std::uint64_t K_prime = 0;
  std::int64_t a = 0;
  std::uint64_t L = 0;
  bool one_sided = false;  // per-one may still contain positions a larger b* would remove
  std::vector<PerClass> classes;

  PerClass at(std::int64_t n) const { return classes[static_cast<std::size_t>(n - a)]; }
  std::vector<std::int64_t> positions(PerClass c) const;
  std::string to_text() const;  // "per s K' a L" header then a 1/0/? mask
};

// Classifies n in [a, a+L) for x = eta*: the class n + sZ meets bZ iff gcd(b, s) | n.
// per-zero: some b <= K' with b | s and b | n. per-one: no b <= K' with gcd(b, s) | n.
PerClassification per_positions(const StarModel& star, std::uint64_t s, std::int64_t a, std::uint64_t L,
                                std::uint64_t K_prime);

struct RegularityEntry {
  std::uint64_t K = 0;
  std::optional<std::uint64_t> s;    // lcm(B*_K) when it fits 64 bits
  DensityEnclosure outside_per;      // d(Z \ Per(eta*, s))
};

std::vector<RegularityEntry> regularity_profile(const StarModel& star, const std::vector<std::uint64_t>& K_grid,
                                                std::uint64_t K_prime);

// 1_{F_{B_K}} on the window, tagged eta-K.
Window eta_K_window(const BSpec& spec, std::uint64_t K, std::int64_t a, std::uint64_t L);

struct UnderlineEta {
  Window bits;          // certified per-one positions of eta* for s = lcm(B*_K)
  Window undetermined;  // positions that could not be certified either way
  std::uint64_t s = 0;
};

UnderlineEta underline_eta_K_window(const StarModel& star, std::uint64_t K, std::uint64_t K_prime, std::int64_t a,
                                    std::uint64_t L);

struct SandwichVerdict {
  std::uint64_t K = 0, K_prime = 0;
  std::int64_t a = 0;
  std::uint64_t L = 0;
  bool eta_exact = false;
  bool star_exact = false;
  std::uint64_t lower_above_star = 0;  // underline-eta_K = 1, eta* = 0
  std::uint64_t star_above_eta = 0;    // eta* = 1, eta = 0
  std::uint64_t eta_above_upper = 0;   // eta = 1, eta_K = 0
  std::vector<std::int64_t> first_failures;
  std::uint64_t strict_lower = 0;  // positions with underline-eta_K < eta*
  std::uint64_t strict_upper = 0;  // positions with eta < eta_K
  bool passes() const { return lower_above_star == 0 && star_above_eta == 0 && eta_above_upper == 0; }
};

SandwichVerdict sandwich_check(const BSpec& spec, const StarModel& star, std::uint64_t K, std::uint64_t K_prime,
                               std::int64_t a, std::uint64_t L);

struct DiscrepancyEntry {
  std::uint64_t K = 0;
  Rational value;        // upper density along (l_i) of the disagreement set
  Rational lower_side;   // of {underline-eta_K != eta*}
  Rational upper_side;   // of {eta_K != eta}
};

std::vector<DiscrepancyEntry> symbolic_discrepancy(const BSpec& spec, const StarModel& star,
                                                   const std::vector<std::uint64_t>& K_grid, const EllSequence& ell,
                                                   std::uint64_t K_prime_factor = 10);

}  // namespace bfree

namespace bfree {

// Everything needed to build the windows of eta, eta*, eta_K and underline-eta_K.
struct SystemModel {
  BSpec spec;
  StarModel star;
  std::uint64_t K = 0;        // truncation for the periodic approximants
  std::uint64_t K_prime = 0;  // witness bound for certified periodic positions

  // eta on [a, a+L), with the truncation extended until the window is exact
  Window eta(std::int64_t a, std::uint64_t L) const;
  Window eta_star(std::int64_t a, std::uint64_t L) const { return eta_star_window(star, a, L); }
  Window eta_K(std::int64_t a, std::uint64_t L) const { return eta_K_window(spec, K, a, L); }
  UnderlineEta underline_eta_K(std::int64_t a, std::uint64_t L) const {
    return underline_eta_K_window(star, K, K_prime, a, L);
  }
};

}  // namespace bfree
