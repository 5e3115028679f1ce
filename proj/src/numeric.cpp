#include "bfree/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bfree {

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }

std::optional<std::uint64_t> lcm_capped(std::uint64_t a, std::uint64_t b, std::uint64_t cap) {
  if (a == 0 || b == 0) return std::uint64_t{0};
  std::uint64_t q = a / std::gcd(a, b);
  unsigned __int128 v = static_cast<unsigned __int128>(q) * b;
  if (v > cap) return std::nullopt;
  return static_cast<std::uint64_t>(v);
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  if (n < 2) return out;
  out.push_back(2);
  // odd-only sieve: index i stands for 2i+1
  std::uint64_t half = (n - 1) / 2;
  std::vector<bool> composite(half + 1, false);
  for (std::uint64_t i = 1; i <= half; ++i) {
    if (composite[i]) continue;
    std::uint64_t p = 2 * i + 1;
    out.push_back(p);
    for (std::uint64_t j = (p * p - 1) / 2; j <= half; j += p) composite[j] = true;
  }
  return out;
}

namespace {
const std::vector<std::uint64_t>& small_primes() {
  static const std::vector<std::uint64_t> ps = primes_up_to(1u << 16);
  return ps;
}
}  // namespace

std::vector<std::pair<std::uint64_t, int>> factorize(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, int>> out;
  if (n <= 1) return out;
  auto take = [&](std::uint64_t p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e) out.emplace_back(p, e);
  };
  for (std::uint64_t p : small_primes()) {
    if (p * p > n) break;
    take(p);
  }
  // beyond 2^16 fall back to 6k +- 1 candidates
  for (std::uint64_t d = 65537; d <= n / d; d += 2) take(d);
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

std::vector<std::uint64_t> prime_divisors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (auto& [p, e] : factorize(n)) out.push_back(p);
  return out;
}

std::vector<std::uint64_t> divisors(std::uint64_t n) {
  std::vector<std::uint64_t> out{1};
  for (auto& [p, e] : factorize(n)) {
    std::size_t base = out.size();
    std::uint64_t pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string to_string(const Natural& z) { return z.get_str(); }

double to_double(const Rational& q) { return q.get_d(); }

Rational make_rational(std::uint64_t num, std::uint64_t den) {
  Natural n, d;
  mpz_import(n.get_mpz_t(), 1, 1, sizeof(num), 0, 0, &num);
  mpz_import(d.get_mpz_t(), 1, 1, sizeof(den), 0, 0, &den);
  return make_rational(n, d);
}

Rational make_rational(const Natural& num, const Natural& den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

namespace {
Natural to_natural(std::uint64_t v) {
  Natural z;
  mpz_import(z.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
  return z;
}

Natural product_range(const std::vector<std::uint64_t>& f, std::size_t lo, std::size_t hi) {
  if (hi - lo <= 8) {
    Natural acc = 1;
    for (std::size_t i = lo; i < hi; ++i) acc *= to_natural(f[i]);
    return acc;
  }
  std::size_t mid = lo + (hi - lo) / 2;
  return product_range(f, lo, mid) * product_range(f, mid, hi);
}
}  // namespace

Natural product_tree(const std::vector<std::uint64_t>& factors) {
  if (factors.empty()) return 1;
  return product_range(factors, 0, factors.size());
}

Rational reciprocal_sum_upper(const std::vector<std::uint64_t>& values) {
  // each 1/s is replaced by ceil(2^64 / s) / 2^64
  Natural acc = 0;
  Natural two64 = Natural(1) << 64;
  for (std::uint64_t s : values) {
    if (s == 0) continue;
    Natural q;
    mpz_cdiv_q(q.get_mpz_t(), two64.get_mpz_t(), to_natural(s).get_mpz_t());
    acc += q;
  }
  return make_rational(acc, two64);
}

}  // namespace bfree
