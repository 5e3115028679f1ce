// Sets B of positive integers (possibly infinite) and their finite truncations.
#pragma once

#include "bfree/numeric.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bfree {

enum class FamilyKind { explicit_list, prime_squares, scaled_primes, file_list, composed };

// A set B described by a family; elements are produced in increasing order.
//
// Textual forms accepted by parse():
//   {2,3,9}  explicit(2,3,9)  prime-squares  primes  scaled-primes(c)
//   file(path)  union(A,B,...)
class BSpec {
 public:
  BSpec();  // the empty set

  static BSpec explicit_list(std::vector<std::uint64_t> elements);
  static BSpec prime_squares();
  // c times the set of all primes; c = 1 gives the primes themselves
  static BSpec scaled_primes(std::uint64_t c);
  static BSpec file_list(std::string path);
  static BSpec composed(std::vector<BSpec> parts);
  static BSpec parse(std::string_view text);

  FamilyKind kind() const;
  std::string describe() const;
  bool is_finite() const;

  // All elements b <= K, strictly increasing. Throws InputError on a bad file.
  std::vector<std::uint64_t> elements_up_to(std::uint64_t K) const;

 private:
  struct Node;
  explicit BSpec(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

inline constexpr std::uint64_t kDefaultLcmCap = std::uint64_t{1} << 63;

// The finite set B_K together with its lcm (or an overflow flag).
class BTruncation {
 public:
  BTruncation() = default;
  // elements need not be sorted; duplicates are removed
  BTruncation(std::vector<std::uint64_t> elements, std::uint64_t cutoff, bool infinite_source,
              std::uint64_t lcm_cap = kDefaultLcmCap, bool complete = false);

  // Truncation holding all of a finite set; cutoff = max element.
  static BTruncation of(std::vector<std::uint64_t> elements);

  const std::vector<std::uint64_t>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  bool empty() const { return elements_.empty(); }
  std::uint64_t cutoff() const { return cutoff_; }
  // True when the truncation was cut from a family with infinitely many elements.
  bool infinite_source() const { return infinite_source_; }
  // True when the truncation holds every element of B.
  bool complete() const { return complete_; }
  std::uint64_t lcm_cap() const { return lcm_cap_; }

  bool overflowed() const { return !lcm_.has_value(); }
  std::optional<std::uint64_t> lcm_value() const { return lcm_; }
  // Throws OverflowError when the lcm exceeded the cap.
  std::uint64_t lcm() const;
  // The lcm as a big natural, computed from prime factorizations.
  Natural exact_lcm() const;

  bool contains(std::uint64_t b) const;

 private:
  std::vector<std::uint64_t> elements_;
  std::uint64_t cutoff_ = 0;
  bool infinite_source_ = false;
  bool complete_ = false;
  std::uint64_t lcm_cap_ = kDefaultLcmCap;
  std::optional<std::uint64_t> lcm_ = std::uint64_t{1};
};

// B_K = {b in B : b <= K}. Requires K >= 1.
BTruncation truncate(const BSpec& spec, std::uint64_t K, std::uint64_t lcm_cap = kDefaultLcmCap);

// Removes every element divisible by a smaller element.
BTruncation primitivize(const BTruncation& trunc);
std::vector<std::uint64_t> primitive_subset(std::vector<std::uint64_t> values);

}  // namespace bfree
