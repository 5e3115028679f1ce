// Block-frequency tables: exact periodic frequencies, empirical frequencies
// along (l_i), the (eta*, eta) pair statistics, the maximal-entropy sampler,
// the eta versus eta' discrepancy and the lower premetric.
#pragma once

#include "bfree/density.hpp"
#include "bfree/structure.hpp"
#include "bfree/toeplitz.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace bfree {

struct Provenance {
  std::string kind;  // exact-period, empirical, sampled
  std::uint64_t period = 0;
  std::uint64_t ell = 0;
  std::uint64_t seed = 0;
  std::uint64_t samples = 0;
  std::string rng;
};

// Frequencies stored as counts over a common total.
struct FreqTable {
  unsigned n = 0;
  Provenance provenance;
  std::map<std::string, std::uint64_t> counts;  // word (first symbol first) -> count
  std::uint64_t total = 0;

  Rational freq(const std::string& word) const;
  // Frequency of symbol 1 at coordinate i of the block.
  Rational one_frequency(unsigned i = 0) const;
  FreqTable drop_last() const;
  FreqTable drop_first() const;
  std::string to_json() const;
};

struct PairFreqTable {
  unsigned n = 0;
  Provenance provenance;
  std::map<std::pair<std::string, std::string>, std::uint64_t> counts;
  std::uint64_t total = 0;
  double uncertified_mass = 0;

  FreqTable first_marginal() const;
  FreqTable second_marginal() const;
  Rational freq(const std::string& first, const std::string& second) const;
  std::string to_json() const;
};

// Counts of n-blocks starting at window indices [start, start + count).
std::map<std::string, std::uint64_t> count_blocks(const Window& w, std::uint64_t start, std::uint64_t count,
                                                  unsigned n);

FreqTable mirsky_exact(const BTruncation& trunc, unsigned n, std::uint64_t period_cap = std::uint64_t{1} << 28);

// Block frequencies of eta over start positions 1..l_last.
FreqTable quasi_generic_freq(const BSpec& spec, std::uint64_t K, const EllSequence& ell, unsigned n);

PairFreqTable pair_joining_freq(const SystemModel& sys, const EllSequence& ell, unsigned n,
                                double uncertified_tolerance = 1e-3);

enum class FairBits { random, zeros, ones };

// Blocks N(eta*[u,u+n), eta[u,u+n), y) for u uniform in [1, L-n] and fair bits y,
// with eta read from B_K (the exact eta once K >= L).
FreqTable max_entropy_sampler(const SystemModel& sys, std::uint64_t L, unsigned n, std::uint64_t samples,
                              std::uint64_t seed, FairBits mode = FairBits::random);
// Same offsets as the sampler, reading a single window (which must start at 1).
FreqTable sampled_block_table(const Window& w, unsigned n, std::uint64_t samples, std::uint64_t seed);

struct EtaPrimeDiscrepancy {
  Rational value;
  PrimeApprox prime;
};

EtaPrimeDiscrepancy eta_vs_etaprime_discrepancy(const BSpec& spec, std::uint64_t K, const EllSequence& ell,
                                                std::uint64_t c_max = 0, const Rational& epsilon = Rational(1, 20));

// min (resp. max) over n in [burn_in, L] of the mismatch fraction in the first n positions.
Rational dlow_premetric(const Window& x, const Window& y, std::uint64_t burn_in = 1000);
Rational dupper_premetric(const Window& x, const Window& y, std::uint64_t burn_in = 1000);

}  // namespace bfree
