#include "bfree/window.hpp"

#include <bit>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace bfree {

std::string tag_name(Tag t) {
  switch (t) {
    case Tag::eta: return "eta";
    case Tag::eta_star_upper: return "eta-star-upper";
    case Tag::eta_K: return "eta-K";
    case Tag::underline_eta_K: return "underline-eta-K";
    case Tag::multiples: return "multiples";
    case Tag::generic: return "generic";
  }
  return "generic";
}

Tag parse_tag(std::string_view s) {
  for (Tag t : {Tag::eta, Tag::eta_star_upper, Tag::eta_K, Tag::underline_eta_K, Tag::multiples, Tag::generic})
    if (tag_name(t) == s) return t;
  throw InputError("unknown window tag '" + std::string(s) + "'");
}

Window::Window(std::int64_t offset, std::uint64_t length, Tag tag)
    : offset_(offset), length_(length), words_((length + 63) / 64, 0), tag_(tag) {}

Window Window::from_bits(std::int64_t offset, std::string_view bits, Tag tag) {
  Window w(offset, bits.size(), tag);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1')
      w.set(i);
    else if (bits[i] != '0')
      throw InputError("window bits must be 0 or 1");
  }
  return w;
}

Window Window::ones(std::int64_t offset, std::uint64_t length, Tag tag) {
  Window w(offset, length, tag);
  for (auto& x : w.words_) x = ~std::uint64_t{0};
  w.clear_tail();
  return w;
}

Window Window::with_tag(Tag t) const {
  Window w = *this;
  w.tag_ = t;
  return w;
}

bool Window::at(std::int64_t pos) const {
  if (!covers(pos)) throw std::out_of_range("position " + std::to_string(pos) + " outside window");
  return get(static_cast<std::uint64_t>(pos - offset_));
}

std::uint64_t Window::count() const {
  std::uint64_t c = 0;
  for (auto x : words_) c += std::popcount(x);
  return c;
}

std::uint64_t Window::count_range(std::uint64_t i0, std::uint64_t i1) const {
  if (i1 > length_) i1 = length_;
  if (i0 >= i1) return 0;
  std::uint64_t c = 0;
  std::uint64_t w0 = i0 >> 6, w1 = (i1 - 1) >> 6;
  for (std::uint64_t k = w0; k <= w1; ++k) {
    std::uint64_t x = words_[k];
    if (k == w0) x &= ~std::uint64_t{0} << (i0 & 63);
    if (k == w1 && ((i1 & 63) != 0)) x &= (std::uint64_t{1} << (i1 & 63)) - 1;
    c += std::popcount(x);
  }
  return c;
}

std::uint64_t Window::extract(std::uint64_t i, unsigned n) const {
  if (n == 0) return 0;
  std::uint64_t k = i >> 6;
  unsigned s = i & 63;
  std::uint64_t v = words_[k] >> s;
  if (s != 0 && k + 1 < words_.size()) v |= words_[k + 1] << (64 - s);
  if (n < 64) v &= (std::uint64_t{1} << n) - 1;
  return v;
}

Window Window::slice(std::int64_t a, std::uint64_t L) const {
  if (a < offset_ || a + static_cast<std::int64_t>(L) > end())
    throw std::out_of_range("slice outside window");
  Window w(a, L, tag_);
  std::uint64_t base = static_cast<std::uint64_t>(a - offset_);
  for (std::uint64_t k = 0; k < w.words_.size(); ++k) {
    unsigned n = static_cast<unsigned>(std::min<std::uint64_t>(64, L - 64 * k));
    w.words_[k] = extract(base + 64 * k, n);
  }
  return w;
}

Window Window::shifted(std::int64_t k) const {
  Window w = *this;
  w.offset_ = offset_ - k;
  return w;
}

Window Window::complement() const {
  Window w = *this;
  for (auto& x : w.words_) x = ~x;
  w.clear_tail();
  return w;
}

std::string Window::bits() const {
  std::string s(length_, '0');
  for (std::uint64_t i = 0; i < length_; ++i)
    if (get(i)) s[i] = '1';
  return s;
}

std::vector<std::int64_t> Window::support() const {
  std::vector<std::int64_t> out;
  for (std::uint64_t k = 0; k < words_.size(); ++k) {
    std::uint64_t x = words_[k];
    while (x) {
      unsigned b = std::countr_zero(x);
      out.push_back(offset_ + static_cast<std::int64_t>(64 * k + b));
      x &= x - 1;
    }
  }
  return out;
}

void require_same_geometry(const Window& a, const Window& b, std::string_view what) {
  if (!a.same_geometry(b))
    throw GeometryError(std::string(what) + ": window geometry mismatch ([" + std::to_string(a.offset()) + "," +
                        std::to_string(a.end()) + ") vs [" + std::to_string(b.offset()) + "," +
                        std::to_string(b.end()) + "))");
}

bool Window::leq(const Window& o) const {
  require_same_geometry(*this, o, "leq");
  for (std::size_t k = 0; k < words_.size(); ++k)
    if (words_[k] & ~o.words_[k]) return false;
  return true;
}

std::vector<std::int64_t> Window::excess_positions(const Window& o, std::size_t limit) const {
  require_same_geometry(*this, o, "excess_positions");
  std::vector<std::int64_t> out;
  for (std::size_t k = 0; k < words_.size() && out.size() < limit; ++k) {
    std::uint64_t x = words_[k] & ~o.words_[k];
    while (x && out.size() < limit) {
      unsigned b = std::countr_zero(x);
      out.push_back(offset_ + static_cast<std::int64_t>(64 * k + b));
      x &= x - 1;
    }
  }
  return out;
}

std::uint64_t Window::excess_count(const Window& o) const {
  require_same_geometry(*this, o, "excess_count");
  std::uint64_t c = 0;
  for (std::size_t k = 0; k < words_.size(); ++k) c += std::popcount(words_[k] & ~o.words_[k]);
  return c;
}

void Window::clear_tail() {
  if (length_ & 63) words_.back() &= (std::uint64_t{1} << (length_ & 63)) - 1;
}

namespace {
template <class Op>
Window combine(const Window& a, const Window& b, std::string_view what, Op op) {
  require_same_geometry(a, b, what);
  Window w(a.offset(), a.length(),
           (a.tag() == Tag::eta_star_upper || b.tag() == Tag::eta_star_upper) ? Tag::eta_star_upper : Tag::generic);
  for (std::size_t k = 0; k < w.words().size(); ++k) w.words()[k] = op(a.words()[k], b.words()[k]);
  w.clear_tail();
  return w;
}
}  // namespace

Window operator&(const Window& a, const Window& b) {
  return combine(a, b, "and", [](std::uint64_t x, std::uint64_t y) { return x & y; });
}
Window operator|(const Window& a, const Window& b) {
  return combine(a, b, "or", [](std::uint64_t x, std::uint64_t y) { return x | y; });
}
Window operator^(const Window& a, const Window& b) {
  return combine(a, b, "xor", [](std::uint64_t x, std::uint64_t y) { return x ^ y; });
}

void write_text(std::ostream& out, const Window& w) {
  out << "window " << w.offset() << ' ' << w.length() << ' ' << tag_name(w.tag()) << '\n' << w.bits() << '\n';
}

Window read_text(std::istream& in) {
  std::string kw, tag;
  std::int64_t a = 0;
  std::uint64_t L = 0;
  if (!(in >> kw >> a >> L >> tag) || kw != "window") throw InputError("bad window header");
  std::string bits;
  in >> std::ws;
  if (L > 0 && !(in >> bits)) throw InputError("missing window bits");
  if (bits.size() != L) throw InputError("window length mismatch");
  return Window::from_bits(a, bits, parse_tag(tag));
}

void write_binary(std::ostream& out, const Window& w) {
  auto put = [&](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xff));
  };
  put(static_cast<std::uint64_t>(w.offset()));
  put(w.length());
  std::uint64_t nbytes = (w.length() + 7) / 8;
  for (std::uint64_t k = 0; k < nbytes; ++k)
    out.put(static_cast<char>((w.words()[k / 8] >> (8 * (k % 8))) & 0xff));
}

Window read_binary(std::istream& in) {
  auto get = [&]() {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
      int c = in.get();
      if (c == EOF) throw InputError("truncated binary window");
      v |= static_cast<std::uint64_t>(c & 0xff) << (8 * i);
    }
    return v;
  };
  auto a = static_cast<std::int64_t>(get());
  std::uint64_t L = get();
  Window w(a, L);
  std::uint64_t nbytes = (L + 7) / 8;
  for (std::uint64_t k = 0; k < nbytes; ++k) {
    int c = in.get();
    if (c == EOF) throw InputError("truncated binary window");
    w.words()[k / 8] |= static_cast<std::uint64_t>(c & 0xff) << (8 * (k % 8));
  }
  w.clear_tail();
  return w;
}

}  // namespace bfree
