// Block complexity, entropy profiles and the two counting bounds relating
// p_n(eta) to the densities of F_B and F_{B*}.
#pragma once

#include "bfree/density.hpp"
#include "bfree/structure.hpp"
#include "bfree/window.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace bfree {

enum class CountMode { exact_set, sort_merge, sketch };
std::string mode_name(CountMode m);
CountMode parse_count_mode(std::string_view s);

class MemoryBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BlockCount {
  std::uint64_t value = 0;
  CountMode mode = CountMode::exact_set;
  bool exact = true;
  double relative_error = 0;  // standard error of the sketch estimate
};

inline constexpr std::uint64_t kDefaultKeyBudget = std::uint64_t{1} << 27;

// Distinct n-subwords of the window. exact-set throws MemoryBudgetExceeded when
// more than key_budget distinct keys would be held.
BlockCount block_count(const Window& w, unsigned n, CountMode mode = CountMode::exact_set,
                       std::uint64_t key_budget = kDefaultKeyBudget);
// Distinct n-subwords starting at indices [start, start + count).
BlockCount block_count_range(const Window& w, std::uint64_t start, std::uint64_t count, unsigned n,
                             CountMode mode = CountMode::exact_set, std::uint64_t key_budget = kDefaultKeyBudget);

struct EntropyEntry {
  unsigned n = 0;
  std::uint64_t p_n = 0;
  double h_hat = 0;
  std::uint64_t p_half = 0;  // p_n on the first half of the window
  bool saturated = true;     // p_half within 1% of p_n
  bool exact = true;
};

struct EntropyProfile {
  std::uint64_t K = 0;
  std::uint64_t L = 0;
  CountMode mode = CountMode::exact_set;
  std::vector<EntropyEntry> entries;

  const EntropyEntry& at(unsigned n) const;
};

inline const std::vector<unsigned> kDefaultNGrid = {8, 12, 16, 20, 24, 28};

// Profile of an arbitrary window.
EntropyProfile entropy_profile(const Window& w, const std::vector<unsigned>& n_grid,
                               CountMode mode = CountMode::exact_set);
// Profile of the eta window [1, L] built from B_K; the window must be exact.
EntropyProfile entropy_profile(const BSpec& spec, std::uint64_t K, std::uint64_t L,
                               const std::vector<unsigned>& n_grid = kDefaultNGrid,
                               CountMode mode = CountMode::exact_set);
std::string to_csv(const EntropyProfile& p);

struct LowerBoundVerdict {
  unsigned n = 0;
  std::uint64_t L = 0;
  std::uint64_t free_count = 0;       // |F_B cap [1, n]|
  std::uint64_t star_free_count = 0;  // |F_{B*} cap [1, n]|
  std::uint64_t exponent = 0;
  Natural lhs;                 // 2^exponent
  std::uint64_t measured = 0;  // p_n on [1, L]
  std::uint64_t measured_half = 0;
  std::string tautness;  // label of the tautness check on a small truncation
  bool passes() const { return lhs <= measured; }
};

LowerBoundVerdict lower_bound_check(const BSpec& spec, const StarModel& star, const Window& eta, unsigned n,
                                    const std::string& tautness = "");
// Builds the eta window [1, L] from B_{max(K, L)} and its own B* model.
LowerBoundVerdict lower_bound_check(const BSpec& spec, std::uint64_t K, unsigned n, std::uint64_t L,
                                    std::uint64_t taut_K = 100);

struct UpperBoundVerdict {
  unsigned n = 0;
  std::uint64_t K = 0, L = 0;
  std::uint64_t measured = 0;  // p_n(eta) on [1, L]
  std::uint64_t p_star = 0;
  bool p_star_periodic = false;  // counted over a full period rather than the window
  std::uint64_t p_K = 0;
  bool p_K_periodic = false;
  std::uint64_t sup_gap = 0;  // max over the window of |supp eta_K block| - |supp eta* block|
  Natural rhs;                // p_star * p_K * 2^sup_gap
  bool passes() const { return Natural(static_cast<unsigned long>(measured)) <= rhs; }
};

UpperBoundVerdict upper_bound_check(const BSpec& spec, const StarModel& star, std::uint64_t K, unsigned n,
                                    const Window& eta, std::uint64_t period_cap = std::uint64_t{1} << 24);
// Same with the eta window [1, L] from B_{max(K, L)} and its own B* model.
UpperBoundVerdict upper_bound_check(const BSpec& spec, std::uint64_t K, unsigned n, std::uint64_t L);

struct EntropyReportParams {
  std::uint64_t K = 0;
  std::uint64_t L = 0;
  std::vector<unsigned> n_grid = kDefaultNGrid;
  CountMode mode = CountMode::exact_set;
  std::uint64_t burn_in = 1000;
  std::uint64_t star_K = 1000;
  std::uint64_t m = 5;
  std::uint64_t bound_K = 0;  // truncation for the upper bound; 0 means K
  std::uint64_t taut_K = 100;
  double zero_tolerance = 0.01;
};

struct EntropyReport {
  std::string family;
  EntropyReportParams params;
  EntropyProfile profile;
  Rational upper_density_est;  // max prefix ratio of F_B on [burn_in, L]
  Rational star_density;       // d(F_{B*}) for the B* model
  bool star_complete = false;
  double h_est = 0;            // h_hat at the largest n
  double density_gap = 0;      // upper_density_est - star_density
  bool zero_entropy_flag = false;
  std::vector<LowerBoundVerdict> lower;
  std::vector<UpperBoundVerdict> upper;
  bool bounds_hold() const;
  std::string to_json() const;
};

EntropyReport entropy_report(const BSpec& spec, const EntropyReportParams& params);

}  // namespace bfree
