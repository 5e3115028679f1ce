// Integer helpers, exact rationals and the error types shared by every module.
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bfree {

using Natural = mpz_class;
using Rational = mpq_class;

// Bad user input: unreadable files, malformed lists, invalid parameters.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An lcm did not fit the configured cap where a period was required.
class OverflowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Windows with different offset or length were combined.
class GeometryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A documented precondition of an operation does not hold.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Mathematical residue of n modulo m (always in [0, m)).
inline std::uint64_t floor_mod(std::int64_t n, std::uint64_t m) {
  if (n >= 0) return static_cast<std::uint64_t>(n) % m;
  std::uint64_t r = (static_cast<std::uint64_t>(-(n + 1))) % m;
  return m - 1 - r;
}

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b);

// lcm(a, b) if it does not exceed cap, nullopt otherwise.
std::optional<std::uint64_t> lcm_capped(std::uint64_t a, std::uint64_t b, std::uint64_t cap);

// Primes up to n, increasing.
std::vector<std::uint64_t> primes_up_to(std::uint64_t n);

// Prime factorization as (prime, exponent) pairs, increasing primes.
std::vector<std::pair<std::uint64_t, int>> factorize(std::uint64_t n);

// Distinct prime divisors.
std::vector<std::uint64_t> prime_divisors(std::uint64_t n);

// All divisors of n, increasing.
std::vector<std::uint64_t> divisors(std::uint64_t n);

std::string to_string(const Rational& q);
std::string to_string(const Natural& z);
double to_double(const Rational& q);
Rational make_rational(std::uint64_t num, std::uint64_t den);
Rational make_rational(const Natural& num, const Natural& den);

// Product of many small naturals, balanced so the cost stays near-linear.
Natural product_tree(const std::vector<std::uint64_t>& factors);

// A dyadic rational that is >= sum of 1/s over the given naturals.
Rational reciprocal_sum_upper(const std::vector<std::uint64_t>& values);

}  // namespace bfree
