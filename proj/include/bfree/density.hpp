// Exact and asymptotic densities of sets of multiples.
#pragma once

#include "bfree/bspec.hpp"
#include "bfree/window.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bfree {

enum class DensityMethod { exact_ie, exact_period, enclosure_pruned, empirical };
std::string method_name(DensityMethod m);

// An exact density or a rigorous interval around it.
struct DensityEnclosure {
  std::optional<Rational> value;
  Rational lower = 0;
  Rational upper = 1;
  DensityMethod method = DensityMethod::exact_ie;

  static DensityEnclosure exact(const Rational& v, DensityMethod m);
  static DensityEnclosure interval(const Rational& lo, const Rational& hi, DensityMethod m);
  bool is_exact() const { return value.has_value(); }
  // The enclosure of 1 - x.
  DensityEnclosure complement() const;
};

struct DensityOptions {
  std::size_t subset_cap = 24;       // literal subset enumeration up to this many elements
  bool enclosure = false;            // allow larger truncations (exact recursion, else bounds)
  std::size_t node_budget = 200000;  // recursion nodes before falling back to bounds
};

inline DensityOptions enclosure_options() {
  DensityOptions o;
  o.enclosure = true;
  return o;
}

class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// d(M_{B_K}) as an exact rational, or an enclosure for large truncations.
DensityEnclosure exact_density_multiples(const BTruncation& trunc, const DensityOptions& opt = {});
DensityEnclosure exact_density_free(const BTruncation& trunc, const DensityOptions& opt = {});

// Sum over nonempty subsets S of (-1)^{|S|+1} / lcm(S), evaluated literally.
Rational inclusion_exclusion_density(const std::vector<std::uint64_t>& elements);

// d(F_S) by exact recursion on prime structure; nullopt if the node budget runs out.
std::optional<Rational> free_density_recursive(const std::vector<std::uint64_t>& elements,
                                               std::size_t node_budget);

// Counts multiples over one full period [1, lcm] with the sieve.
DensityEnclosure period_density_multiples(const BTruncation& trunc,
                                          std::uint64_t period_cap = std::uint64_t{1} << 28);

struct DensitySeries {
  std::vector<std::pair<std::uint64_t, DensityEnclosure>> entries;
  Rational extrapolated = 0;
  Rational error_bar = 0;   // last increment; heuristic, not a rigorous bound
  bool certified_monotone = true;
  std::vector<std::uint64_t> monotonicity_violations;  // K where an exact value dropped
};

// d(M_{B_K}) over an increasing grid of K.
DensitySeries davenport_erdos_profile(const BSpec& spec, const std::vector<std::uint64_t>& K_grid,
                                      const DensityOptions& opt = enclosure_options());
std::string to_csv(const DensitySeries& s);

// Prefixes realizing the lower density of M in a window: l >= burn_in is kept
// when every later prefix up to L_max has a larger ratio |M cap [1,l]| / l.
struct EllSequence {
  std::vector<std::uint64_t> prefixes;
  std::vector<std::uint64_t> counts;  // |M cap [1, l_i]|
  std::uint64_t K = 0;
  std::uint64_t L_max = 0;
  std::uint64_t burn_in = 0;

  std::size_t size() const { return prefixes.size(); }
  Rational ratio(std::size_t i) const { return make_rational(counts[i], prefixes[i]); }
  std::uint64_t last() const { return prefixes.back(); }
};

EllSequence lower_density_sequence(const BSpec& spec, std::uint64_t K, std::uint64_t L_max,
                                   std::uint64_t burn_in = 1000);
// Same scan on an indicator of M given on [1, L_max].
EllSequence ell_from_multiples(const Window& multiples, std::uint64_t burn_in);
std::string to_csv(const EllSequence& e);

struct LogDensityEstimate {
  long double harmonic_sum = 0;  // sum of 1/l over M cap [1, L]
  long double value = 0;         // harmonic_sum / ln L
  std::uint64_t L = 0;
  // (S(L) - S(L0)) / ln(L / L0) with L0 = floor(sqrt(L)); cancels the constant term
  long double two_scale = 0;
  std::uint64_t L0 = 0;
};

LogDensityEstimate logarithmic_density_estimate(const BSpec& spec, std::uint64_t K, std::uint64_t L);

struct PrefixRatio {
  std::uint64_t count = 0;
  std::uint64_t prefix = 0;
  Rational value = 0;
};

// max over n in [burn_in, L] of |F cap [1,n]| / n.
PrefixRatio upper_density_estimate(const BSpec& spec, std::uint64_t K, std::uint64_t L,
                                   std::uint64_t burn_in = 1000);
// max (or min) over n in [burn_in, L] of the one-count in the first n bits of a window starting at 1.
PrefixRatio max_prefix_ratio(const Window& w, std::uint64_t burn_in);
PrefixRatio min_prefix_ratio(const Window& w, std::uint64_t burn_in);

// Upper density of a set along the tail of (l_i): max over l_i >= tail * l_last.
Rational upper_density_along(const Window& set_from_one, const EllSequence& ell, double tail = 0.1);

}  // namespace bfree
