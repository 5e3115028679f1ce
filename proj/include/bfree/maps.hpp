// Truncated points of H and the maps built on them: phi_K, Gamma to H*, the
// coordinatewise maps M and N, the enclosure of M_H, the hat reading and the
// skew product.
#pragma once

#include "bfree/toeplitz.hpp"
#include "bfree/window.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace bfree {

// A residue n modulo lcm(B_K); coordinates h_b = n mod b.
class HPoint {
 public:
  static HPoint delta(std::shared_ptr<const BTruncation> trunc, std::int64_t n);

  std::uint64_t residue() const { return n_; }
  std::uint64_t modulus() const { return modulus_; }
  const BTruncation& trunc() const { return *trunc_; }
  std::shared_ptr<const BTruncation> trunc_ptr() const { return trunc_; }
  std::uint64_t coordinate(std::uint64_t b) const { return n_ % b; }

  HPoint rotate(std::int64_t k = 1) const;  // R^k
  HPoint operator+(const HPoint& o) const;
  bool operator==(const HPoint& o) const { return n_ == o.n_ && modulus_ == o.modulus_; }

 private:
  HPoint(std::shared_ptr<const BTruncation> t, std::uint64_t n, std::uint64_t m)
      : trunc_(std::move(t)), n_(n), modulus_(m) {}
  std::shared_ptr<const BTruncation> trunc_;
  std::uint64_t n_ = 0;
  std::uint64_t modulus_ = 1;
};

// The point whose window misses exactly the class theta(w, b) for every b in trunc.
std::optional<HPoint> theta_point(const Window& w, std::shared_ptr<const BTruncation> trunc);

// Bit n set iff (h.n + n) mod b != 0 for all b in the truncation.
Window phi_K(const HPoint& h, std::int64_t a, std::uint64_t L);

// Coordinates reduced modulo each b* (which must divide some b of h's truncation).
HPoint gamma_star(const HPoint& h, std::shared_ptr<const BTruncation> bstar);

Window map_M(const Window& x, const Window& y);
// w + y(x - w) for w <= x.
Window map_N(const Window& w, const Window& x, const Window& y);

struct MHEnclosure {
  Window lower;
  Window upper;
  Window mask;  // positions where lower and upper may disagree
};

// lower = N(certified phi_K-underline(h), phi(h) evidence, y),
// upper = N(phi-underline upper approximation, phi_K(h), y).
MHEnclosure map_M_H(const SystemModel& sys, const HPoint& h, const Window& y);

// Bits of x on the support of z, increasing; index 0 is the first support point >= 0.
struct HatWord {
  std::vector<bool> bits;
  std::vector<std::int64_t> positions;
  std::int64_t first_index = 0;  // hat index of bits[0]

  std::int64_t last_index() const { return first_index + static_cast<std::int64_t>(bits.size()) - 1; }
  bool has(std::int64_t j) const { return j >= first_index && j <= last_index(); }
  bool at(std::int64_t j) const { return bits[static_cast<std::size_t>(j - first_index)]; }
};

HatWord hat_read(const Window& x, const Window& z);

// The unique y with lower <= y <= upper whose hat reading along upper - lower is xs
// (xs indexed by hat index: xs position j holds hat index j).
struct Assembled {
  Window y;
  Window defined;
};
Assembled assemble_phi(const Window& lower, const Window& upper, const Window& xs);

struct SkewStep {
  std::uint64_t step = 0;
  std::uint64_t residue = 0;
  bool shifted = false;
  bool certified = false;
};

struct Trajectory {
  std::vector<SkewStep> steps;
  std::int64_t start = 0;      // integer representative of the starting point
  std::int64_t shifts = 0;     // total shifts applied to x
  bool halted = false;
  std::string halt_reason;
  Window final_x;
  std::string to_csv() const;
};

// Iterates (h, x) -> (Rh, x) or (Rh, sigma x); x shifts exactly when
// 0 = phi-underline(h)(0) < phi(h)(0) = 1.
Trajectory skew_orbit(const SystemModel& sys, const HPoint& h, const Window& x, std::uint64_t steps);

}  // namespace bfree
