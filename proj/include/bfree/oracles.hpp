// Brute-force reference computations used by the verification harness and the
// tests. They deliberately avoid the sieve, density and Toeplitz code paths.
#pragma once

#include "bfree/numeric.hpp"

#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>
#include <string>
#include <vector>

namespace bfree::oracle {

inline std::uint64_t residue(std::int64_t n, std::uint64_t b) {
  std::int64_t r = n % static_cast<std::int64_t>(b);
  return static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(b) : r);
}

inline bool divisible_by_some(std::int64_t n, const std::vector<std::uint64_t>& B) {
  for (auto b : B)
    if (residue(n, b) == 0) return true;
  return false;
}

// '1' where n in [a, a+L) has no divisor in B.
inline std::string free_word(const std::vector<std::uint64_t>& B, std::int64_t a, std::uint64_t L) {
  std::string w(L, '0');
  for (std::uint64_t i = 0; i < L; ++i)
    if (!divisible_by_some(a + static_cast<std::int64_t>(i), B)) w[i] = '1';
  return w;
}

// Indicator of F_B on [1, L] by marking multiples of each b.
inline std::vector<char> free_marks(const std::vector<std::uint64_t>& B, std::uint64_t L) {
  std::vector<char> v(L + 1, 1);
  v[0] = 0;
  for (auto b : B)
    for (std::uint64_t k = b; k <= L; k += b) v[k] = 0;
  return v;
}

inline std::uint64_t lcm_of(const std::vector<std::uint64_t>& B) {
  std::uint64_t l = 1;
  for (auto b : B) l = std::lcm(l, b);
  return l;
}

// d(M_B) by counting one period [1, lcm(B)].
inline Rational period_density_multiples(const std::vector<std::uint64_t>& B) {
  std::uint64_t P = lcm_of(B), hits = 0;
  for (std::uint64_t n = 1; n <= P; ++n)
    if (divisible_by_some(static_cast<std::int64_t>(n), B)) ++hits;
  return make_rational(hits, P);
}

// Per(eta*, s) classes on [a, a+L): '1' if eta*(n + ks) = 1 for every k, '0' if
// always 0, '?' otherwise. eta* has period lcm(B*), so k runs over one cycle.
inline std::string per_classes(const std::vector<std::uint64_t>& bstar, std::uint64_t s, std::int64_t a,
                               std::uint64_t L) {
  std::uint64_t P = lcm_of(bstar);
  std::uint64_t cycle = P / std::gcd(P, s % P == 0 ? P : s % P);
  std::string out(L, '?');
  for (std::uint64_t i = 0; i < L; ++i) {
    std::int64_t n = a + static_cast<std::int64_t>(i);
    bool any1 = false, any0 = false;
    for (std::uint64_t k = 0; k < cycle; ++k) {
      std::int64_t m = static_cast<std::int64_t>(residue(n + static_cast<std::int64_t>(k * (s % P)), P));
      if (divisible_by_some(m, bstar))
        any0 = true;
      else
        any1 = true;
    }
    out[i] = any1 && !any0 ? '1' : any0 && !any1 ? '0' : '?';
  }
  return out;
}

// Distinct length-n substrings.
inline std::uint64_t distinct_blocks(const std::string& w, unsigned n) {
  std::set<std::string> seen;
  for (std::size_t i = 0; i + n <= w.size(); ++i) seen.insert(w.substr(i, n));
  return seen.size();
}

// Distinct length-n blocks of the bi-infinite periodic word with the given period.
inline std::uint64_t periodic_blocks(const std::string& period, unsigned n) {
  std::string ext;
  while (ext.size() < period.size() + n) ext += period;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < period.size(); ++i) seen.insert(ext.substr(i, n));
  return seen.size();
}

// 1 - prod over primes p with p^2 <= K of (1 - 1/p^2).
inline double prime_square_multiples_density(std::uint64_t K) {
  std::uint64_t r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(K)));
  while ((r + 1) * (r + 1) <= K) ++r;
  while (r * r > K) --r;
  std::vector<char> comp(r + 1, 0);
  long double prod = 1;
  for (std::uint64_t p = 2; p <= r; ++p) {
    if (comp[p]) continue;
    for (std::uint64_t q = p * p; q <= r; q += p) comp[q] = 1;
    prod *= 1.0L - 1.0L / (static_cast<long double>(p) * static_cast<long double>(p));
  }
  return static_cast<double>(1.0L - prod);
}

}  // namespace bfree::oracle
