// Tautness, Behrend gauges, approximations of B* and B', and the divisibility
// versus window-order equivalences for a pair (B, C).
#pragma once

#include "bfree/bspec.hpp"
#include "bfree/density.hpp"
#include "bfree/window.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace bfree {

enum class TautVerdict { contributes, redundant, undecided };
enum class TautOverall { taut, not_taut, undecided };
std::string verdict_name(TautVerdict v);

struct TautEntry {
  std::uint64_t b = 0;
  DensityEnclosure without;  // d(M of the truncation minus b)
  DensityEnclosure with;     // d(M of the truncation)
  TautVerdict verdict = TautVerdict::undecided;
};

struct TautReport {
  std::string family;
  std::uint64_t K = 0;
  bool truncation_level = false;  // verdict concerns B_K, not B
  std::vector<TautEntry> entries;
  TautOverall overall = TautOverall::undecided;
  std::string label() const;  // taut, not-taut, taut-at-K, not-taut-at-K, undecided-at-K
};

TautReport taut_check(const BSpec& spec, std::uint64_t K, const DensityOptions& opt = enclosure_options());

struct BehrendGauge {
  DensitySeries series;
  Rational epsilon;
  bool behrend_likely = false;  // final lower bound above 1 - epsilon; never a certificate
};

BehrendGauge behrend_gauge(const BSpec& spec, const std::vector<std::uint64_t>& K_grid,
                           const Rational& epsilon = Rational(1, 20));

struct CoprimeWitnesses {
  std::uint64_t d = 0;
  std::vector<std::uint64_t> witnesses;  // pairwise coprime quotients b/d
};

struct StarApprox {
  BTruncation base;
  std::vector<CoprimeWitnesses> found_D;
  BTruncation result;
  std::uint64_t d_max = 0;
  std::uint64_t m = 0;
};

// d_max = 0 means d_max = K.
StarApprox bstar_approx(const BSpec& spec, std::uint64_t K, std::uint64_t d_max = 0, std::uint64_t m = 5);
// Works on a given truncation; truncations of finite families have no witness families.
StarApprox bstar_approx(const BTruncation& base, std::uint64_t d_max, std::uint64_t m);

struct BehrendScale {
  std::uint64_t c = 0;
  DensityEnclosure gauge;  // d(M of the quotients b/c)
};

struct PrimeApprox {
  BTruncation base;
  std::vector<BehrendScale> found_C;
  BTruncation result;
  std::uint64_t c_max = 0;
  Rational epsilon;
};

// c_max = 0 means c_max = K.
PrimeApprox bprime_approx(const BSpec& spec, std::uint64_t K, std::uint64_t c_max = 0,
                          const Rational& epsilon = Rational(1, 20));

// B* used for eta* windows: a stable bstar_approx result is trusted as complete.
struct StarModel {
  BTruncation elements;
  bool assumed_complete = false;
  std::uint64_t search_K = 0;
  std::uint64_t m = 0;
  StarApprox approx;
};

StarModel star_model(const BSpec& spec, std::uint64_t search_K, std::uint64_t m = 5);
StarModel star_model_from(std::vector<std::uint64_t> bstar);  // a known finite B*

// Indicator of F_{B*} on [a, a+L); tagged eta-star-upper unless the model is complete.
Window eta_star_window(const StarModel& star, std::int64_t a, std::uint64_t L);

struct OrderWitness {
  std::int64_t position = 0;
  std::string kind;  // "eta_C>eta" or "eta*>eta_C"
  bool in_window = false;
};

struct OrderVerdict {
  std::uint64_t K = 0, L = 0;
  std::vector<std::uint64_t> bstar;
  bool a_clause1 = true;  // every b has a divisor in C
  bool a_clause2 = true;  // every c has a divisor in B*
  std::vector<std::uint64_t> clause1_failures;
  std::vector<std::uint64_t> clause2_failures;
  bool b_star_le_C = true;  // eta* <= eta_C on [1, L]
  bool b_C_le_eta = true;   // eta_C <= eta on [1, L]
  std::vector<std::int64_t> star_le_C_violations;
  std::vector<std::int64_t> C_le_eta_violations;
  std::vector<OrderWitness> witnesses;  // verified positions refuting (b)

  bool a_holds() const { return a_clause1 && a_clause2; }
  bool b_holds() const { return b_star_le_C && b_C_le_eta; }
};

OrderVerdict divisibility_order_check(const BSpec& B, const BSpec& C, std::uint64_t K, std::uint64_t L,
                                 std::uint64_t star_K = 1000, std::uint64_t m = 5);
OrderVerdict divisibility_order_check(const BSpec& B, const BSpec& C, const StarModel& star, std::uint64_t K,
                                 std::uint64_t L);

}  // namespace bfree
