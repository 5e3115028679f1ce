#include "bfree/core.hpp"

#include "bfree/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>

namespace bfree {

namespace {
constexpr std::uint64_t kSegmentBits = std::uint64_t{1} << 18;  // multiple of 64
constexpr std::uint64_t kDenseResidueCap = std::uint64_t{1} << 26;
}  // namespace

Window sieve_multiples(const BTruncation& trunc, std::int64_t a, std::uint64_t L) {
  if (L < 1) throw PreconditionError("sieve_multiples: L must be >= 1");
  Window w(a, L, Tag::multiples);
  const auto& elems = trunc.elements();
  if (!elems.empty() && elems.front() == 1) {
    Window all = Window::ones(a, L, Tag::multiples);
    return all;
  }
  std::uint64_t segments = (L + kSegmentBits - 1) / kSegmentBits;
  auto* words = w.words().data();
  parallel_for(segments, [&](std::size_t s) {
    std::uint64_t lo = s * kSegmentBits;
    std::uint64_t hi = std::min(L, lo + kSegmentBits);
    std::int64_t start = a + static_cast<std::int64_t>(lo);
    for (std::uint64_t b : elems) {
      std::uint64_t r = floor_mod(start, b);
      std::uint64_t first = r == 0 ? 0 : b - r;
      for (std::uint64_t i = lo + first; i < hi; i += b) words[i >> 6] |= std::uint64_t{1} << (i & 63);
    }
  });
  return w;
}

bool eta_window_is_exact(const BTruncation& trunc, std::int64_t a, std::uint64_t L) {
  std::int64_t last = a + static_cast<std::int64_t>(L) - 1;
  std::uint64_t reach = std::max<std::uint64_t>(static_cast<std::uint64_t>(std::llabs(a)),
                                                static_cast<std::uint64_t>(std::llabs(last)));
  if (trunc.complete()) return true;
  if (trunc.cutoff() < reach) return false;
  // every b divides 0, so position 0 also needs a nonempty truncation
  bool has_zero = a <= 0 && last >= 0;
  return !(has_zero && trunc.empty());
}

Window eta_window(const BTruncation& trunc, std::int64_t a, std::uint64_t L) {
  Window w = sieve_multiples(trunc, a, L).complement();
  w.set_tag(eta_window_is_exact(trunc, a, L) ? Tag::eta : Tag::eta_K);
  return w;
}

std::vector<std::uint64_t> admissibility_defect(const Window& w, std::uint64_t b) {
  if (b < 1) throw PreconditionError("admissibility_defect: b must be >= 1");
  std::vector<std::uint64_t> out;
  if (b <= kDenseResidueCap) {
    std::vector<char> hit(b, 0);
    std::uint64_t distinct = 0;
    for (auto pos : w.support()) {
      auto r = floor_mod(pos, b);
      if (!hit[r]) {
        hit[r] = 1;
        if (++distinct == b) break;
      }
    }
    for (std::uint64_t r = 0; r < b; ++r)
      if (hit[r]) out.push_back(r);
    return out;
  }
  std::set<std::uint64_t> hit;
  for (auto pos : w.support()) hit.insert(floor_mod(pos, b));
  return {hit.begin(), hit.end()};
}

bool admissible_for(const Window& w, std::uint64_t b) { return admissibility_defect(w, b).size() + 1 <= b; }

std::vector<std::uint64_t> theta_window(const Window& w, std::uint64_t b) {
  if (b < 1) throw PreconditionError("theta_window: b must be >= 1");
  if (b > kDenseResidueCap) throw PreconditionError("theta_window: modulus too large to list residues");
  auto hit = admissibility_defect(w, b);
  std::vector<std::uint64_t> out;
  std::size_t j = 0;
  for (std::uint64_t r = 0; r < b; ++r) {
    if (j < hit.size() && hit[j] == r) {
      ++j;
      continue;
    }
    out.push_back(r);
  }
  return out;
}

}  // namespace bfree
