// Sieving windows of M_B and F_B, admissibility and the residue reading theta.
#pragma once

#include "bfree/bspec.hpp"
#include "bfree/window.hpp"

#include <cstdint>
#include <vector>

namespace bfree {

// Bit i set iff some b in trunc divides a + i. Tag: multiples.
Window sieve_multiples(const BTruncation& trunc, std::int64_t a, std::uint64_t L);

// True when every b in B below max(|a|, |a+L-1|) is in the truncation, so the
// complement of the sieve is the true indicator of F_B on the window.
bool eta_window_is_exact(const BTruncation& trunc, std::int64_t a, std::uint64_t L);

// Indicator of F_{B_K} on [a, a+L). Tagged eta when exact, eta-K otherwise.
Window eta_window(const BTruncation& trunc, std::int64_t a, std::uint64_t L);

// Residues modulo b met by the support of w, increasing.
std::vector<std::uint64_t> admissibility_defect(const Window& w, std::uint64_t b);
bool admissible_for(const Window& w, std::uint64_t b);

// Residues modulo b not met by the support of w, increasing.
std::vector<std::uint64_t> theta_window(const Window& w, std::uint64_t b);

}  // namespace bfree
