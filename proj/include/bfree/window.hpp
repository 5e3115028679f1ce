// Finite slices of 0-1 sequences indexed by integers.
#pragma once

#include "bfree/numeric.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace bfree {

enum class Tag { eta, eta_star_upper, eta_K, underline_eta_K, multiples, generic };

std::string tag_name(Tag t);
Tag parse_tag(std::string_view s);

// Bits of a sequence on [offset, offset + length). Bit i is the value at
// absolute position offset + i; storage is little-endian within 64-bit words
// and bits past the length are kept zero.
class Window {
 public:
  Window() = default;
  Window(std::int64_t offset, std::uint64_t length, Tag tag = Tag::generic);

  static Window from_bits(std::int64_t offset, std::string_view bits, Tag tag = Tag::generic);
  static Window ones(std::int64_t offset, std::uint64_t length, Tag tag = Tag::generic);

  std::int64_t offset() const { return offset_; }
  std::uint64_t length() const { return length_; }
  std::int64_t end() const { return offset_ + static_cast<std::int64_t>(length_); }
  Tag tag() const { return tag_; }
  void set_tag(Tag t) { tag_ = t; }
  Window with_tag(Tag t) const;

  bool get(std::uint64_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::uint64_t i, bool v = true) {
    std::uint64_t m = std::uint64_t{1} << (i & 63);
    if (v)
      words_[i >> 6] |= m;
    else
      words_[i >> 6] &= ~m;
  }
  bool covers(std::int64_t pos) const { return pos >= offset_ && pos < end(); }
  // Value at an absolute position; throws std::out_of_range outside the window.
  bool at(std::int64_t pos) const;

  std::uint64_t count() const;
  // Ones among indices [i0, i1).
  std::uint64_t count_range(std::uint64_t i0, std::uint64_t i1) const;
  // Up to 64 bits starting at index i; bit j of the result is get(i + j).
  std::uint64_t extract(std::uint64_t i, unsigned n) const;

  // Sub-window on absolute positions [a, a + L), which must lie inside.
  Window slice(std::int64_t a, std::uint64_t L) const;
  // The window of sigma^k x: same bits, offset decreased by k.
  Window shifted(std::int64_t k) const;
  Window complement() const;

  std::string bits() const;
  std::vector<std::int64_t> support() const;
  const std::vector<std::uint64_t>& words() const { return words_; }
  std::vector<std::uint64_t>& words() { return words_; }

  bool same_geometry(const Window& o) const { return offset_ == o.offset_ && length_ == o.length_; }
  // Geometry and bits; the tag is metadata and not compared.
  bool operator==(const Window& o) const { return same_geometry(o) && words_ == o.words_; }
  bool operator!=(const Window& o) const { return !(*this == o); }
  // Bitwise this <= o. Throws GeometryError on mismatch.
  bool leq(const Window& o) const;
  // Absolute positions where this is 1 and o is 0, at most limit of them.
  std::vector<std::int64_t> excess_positions(const Window& o, std::size_t limit) const;
  std::uint64_t excess_count(const Window& o) const;

  void clear_tail();

 private:
  std::int64_t offset_ = 0;
  std::uint64_t length_ = 0;
  std::vector<std::uint64_t> words_;
  Tag tag_ = Tag::generic;
};

void require_same_geometry(const Window& a, const Window& b, std::string_view what);

Window operator&(const Window& a, const Window& b);
Window operator|(const Window& a, const Window& b);
Window operator^(const Window& a, const Window& b);

// Text: "window a L tag\n" then L characters 0/1 and a newline.
void write_text(std::ostream& out, const Window& w);
Window read_text(std::istream& in);
// Binary: int64 LE offset, uint64 LE length, ceil(L/8) bytes, bit j of byte k = position 8k + j.
void write_binary(std::ostream& out, const Window& w);
Window read_binary(std::istream& in);

}  // namespace bfree
