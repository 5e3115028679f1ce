#include "bfree/density.hpp"

#include "bfree/core.hpp"
#include "bfree/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace bfree {

std::string method_name(DensityMethod m) {
  switch (m) {
    case DensityMethod::exact_ie: return "exact-IE";
    case DensityMethod::exact_period: return "exact-period";
    case DensityMethod::enclosure_pruned: return "enclosure-pruned";
    case DensityMethod::empirical: return "empirical";
  }
  return "?";
}

DensityEnclosure DensityEnclosure::exact(const Rational& v, DensityMethod m) {
  DensityEnclosure e;
  e.value = v;
  e.lower = v;
  e.upper = v;
  e.method = m;
  return e;
}

DensityEnclosure DensityEnclosure::interval(const Rational& lo, const Rational& hi, DensityMethod m) {
  DensityEnclosure e;
  e.lower = lo;
  e.upper = hi;
  e.method = m;
  if (lo == hi) e.value = lo;
  return e;
}

DensityEnclosure DensityEnclosure::complement() const {
  DensityEnclosure e;
  e.method = method;
  e.lower = 1 - upper;
  e.upper = 1 - lower;
  if (value) e.value = Rational(1 - *value);
  return e;
}

namespace {

Natural nat(std::uint64_t v) { return Natural(static_cast<unsigned long>(v)); }

struct BudgetExhausted {};

// d(F_S) for primitive S. Splits S into components with no common prime;
// inside a component, conditions on divisibility by the most frequent prime p:
//   d(F_S) = (1 - 1/p) d(F_{S without p-multiples}) + (1/p) d(F_{prim{s/gcd(s,p)}}).
class FreeSolver {
 public:
  explicit FreeSolver(std::size_t budget) : budget_(budget) {}

  Rational solve(const std::vector<std::uint64_t>& S) {
    if (S.empty()) return 1;
    if (S.front() == 1) return 0;
    if (S.size() == 1) return make_rational(S[0] - 1, S[0]);
    auto it = memo_.find(S);
    if (it != memo_.end()) return it->second;
    if (++nodes_ > budget_) throw BudgetExhausted{};
    Rational r = split(S);
    memo_.emplace(S, r);
    return r;
  }

 private:
  const std::vector<std::uint64_t>& primes_of(std::uint64_t b) {
    auto it = pcache_.find(b);
    if (it != pcache_.end()) return it->second;
    return pcache_.emplace(b, prime_divisors(b)).first->second;
  }

  Rational split(const std::vector<std::uint64_t>& S) {
    std::size_t n = S.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    std::unordered_map<std::uint64_t, std::size_t> owner;
    std::unordered_map<std::uint64_t, std::size_t> freq;
    for (std::size_t i = 0; i < n; ++i) {
      for (auto p : primes_of(S[i])) {
        ++freq[p];
        auto [o, fresh] = owner.emplace(p, i);
        if (!fresh) parent[find(i)] = find(o->second);
      }
    }
    std::map<std::size_t, std::vector<std::uint64_t>> comps;
    for (std::size_t i = 0; i < n; ++i) comps[find(i)].push_back(S[i]);
    if (comps.size() > 1) {
      std::vector<std::uint64_t> nums, dens;
      Rational acc = 1;
      for (auto& [root, c] : comps) {
        if (c.size() == 1) {
          nums.push_back(c[0] - 1);
          dens.push_back(c[0]);
        } else {
          acc *= solve(c);
        }
      }
      acc *= make_rational(product_tree(nums), product_tree(dens));
      return acc;
    }
    std::uint64_t p = 0;
    std::size_t best = 0;
    for (auto& [q, c] : freq)
      if (c > best || (c == best && q < p)) {
        best = c;
        p = q;
      }
    std::vector<std::uint64_t> coprime, reduced;
    for (auto s : S) {
      if (s % p == 0) {
        reduced.push_back(s / p);
      } else {
        coprime.push_back(s);
        reduced.push_back(s);
      }
    }
    reduced = primitive_subset(std::move(reduced));
    Rational r = make_rational(p - 1, p) * solve(coprime) + solve(reduced) / nat(p);
    return r;
  }

  std::size_t budget_;
  std::size_t nodes_ = 0;
  std::map<std::vector<std::uint64_t>, Rational> memo_;
  std::unordered_map<std::uint64_t, std::vector<std::uint64_t>> pcache_;
};

}  // namespace

std::optional<Rational> free_density_recursive(const std::vector<std::uint64_t>& elements,
                                               std::size_t node_budget) {
  auto S = primitive_subset(elements);
  FreeSolver solver(node_budget);
  try {
    return solver.solve(S);
  } catch (const BudgetExhausted&) {
    return std::nullopt;
  }
}

Rational inclusion_exclusion_density(const std::vector<std::uint64_t>& elements) {
  std::vector<std::uint64_t> S = elements;
  std::sort(S.begin(), S.end());
  S.erase(std::unique(S.begin(), S.end()), S.end());
  std::size_t n = S.size();
  if (n == 0) return 0;
  if (n > 62) throw CapExceeded("subset enumeration over more than 62 elements");
  Natural all = BTruncation::of(S).exact_lcm();

  // the first f elements fix a membership pattern per task; the rest are enumerated by DFS
  std::size_t f = std::min<std::size_t>(n, 6);
  std::size_t tasks = std::size_t{1} << f;
  std::vector<Natural> partial(tasks, 0);
  parallel_for(tasks, [&](std::size_t mask) {
    Natural acc = 0, q;
    bool odd = false;
    std::uint64_t l = 1;
    bool big = false;
    Natural lb = 1;
    for (std::size_t j = 0; j < f; ++j) {
      if (!((mask >> j) & 1)) continue;
      odd = !odd;
      if (!big) {
        auto nl = lcm_capped(l, S[j], UINT64_MAX);
        if (nl) {
          l = *nl;
          continue;
        }
        big = true;
        lb = nat(l);
      }
      mpz_lcm(lb.get_mpz_t(), lb.get_mpz_t(), nat(S[j]).get_mpz_t());
    }
    auto add_term = [&](bool odd_size, bool is_big, std::uint64_t small, const Natural& large) {
      if (is_big)
        mpz_divexact(q.get_mpz_t(), all.get_mpz_t(), large.get_mpz_t());
      else
        mpz_divexact_ui(q.get_mpz_t(), all.get_mpz_t(), small);
      if (odd_size)
        acc += q;
      else
        acc -= q;
    };
    if (mask != 0) add_term(odd, big, l, lb);
    // explicit stack DFS over elements f..n-1
    struct Frame {
      std::size_t next;
      std::uint64_t l;
      bool big;
      Natural lb;
      bool odd;
    };
    std::vector<Frame> stack;
    stack.push_back({f, l, big, lb, odd});
    while (!stack.empty()) {
      Frame& top = stack.back();
      if (top.next >= n) {
        stack.pop_back();
        continue;
      }
      std::size_t j = top.next++;
      Frame child{j + 1, top.l, top.big, Natural(), !top.odd};
      if (!child.big) {
        auto nl = lcm_capped(top.l, S[j], UINT64_MAX);
        if (nl) {
          child.l = *nl;
        } else {
          child.big = true;
          child.lb = nat(top.l);
          mpz_lcm(child.lb.get_mpz_t(), child.lb.get_mpz_t(), nat(S[j]).get_mpz_t());
        }
      } else {
        child.lb = top.lb;
        mpz_lcm(child.lb.get_mpz_t(), child.lb.get_mpz_t(), nat(S[j]).get_mpz_t());
      }
      add_term(child.odd, child.big, child.l, child.lb);
      if (child.next < n) stack.push_back(std::move(child));
    }
    partial[mask] = acc;
  });
  Natural total = 0;
  for (auto& p : partial) total += p;
  return make_rational(total, all);
}

DensityEnclosure exact_density_multiples(const BTruncation& trunc, const DensityOptions& opt) {
  const auto& S = trunc.elements();
  if (S.size() <= opt.subset_cap)
    return DensityEnclosure::exact(inclusion_exclusion_density(S), DensityMethod::exact_ie);
  if (!opt.enclosure)
    throw CapExceeded("truncation has " + std::to_string(S.size()) + " elements, above the subset cap " +
                      std::to_string(opt.subset_cap) + "; enable enclosure mode");
  if (auto f = free_density_recursive(S, opt.node_budget))
    return DensityEnclosure::exact(1 - *f, DensityMethod::exact_ie);
  // bracket with the longest prefix that fits the budget plus a union bound on the tail
  std::size_t len = S.size();
  while (len > 0) {
    len /= 2;
    std::vector<std::uint64_t> head(S.begin(), S.begin() + len);
    auto f = free_density_recursive(head, opt.node_budget);
    if (!f) continue;
    Rational lower = 1 - *f;
    std::vector<std::uint64_t> tail(S.begin() + len, S.end());
    Rational upper = lower + reciprocal_sum_upper(tail);
    if (upper > 1) upper = 1;
    return DensityEnclosure::interval(lower, upper, DensityMethod::enclosure_pruned);
  }
  Rational upper = reciprocal_sum_upper(S);
  if (upper > 1) upper = 1;
  return DensityEnclosure::interval(0, upper, DensityMethod::enclosure_pruned);
}

DensityEnclosure exact_density_free(const BTruncation& trunc, const DensityOptions& opt) {
  return exact_density_multiples(trunc, opt).complement();
}

DensityEnclosure period_density_multiples(const BTruncation& trunc, std::uint64_t period_cap) {
  if (trunc.overflowed() || trunc.lcm() > period_cap)
    throw OverflowError("period too long for an exact period count");
  std::uint64_t P = trunc.lcm();
  Window m = sieve_multiples(trunc, 1, P);
  return DensityEnclosure::exact(make_rational(m.count(), P), DensityMethod::exact_period);
}

DensitySeries davenport_erdos_profile(const BSpec& spec, const std::vector<std::uint64_t>& K_grid,
                                      const DensityOptions& opt) {
  if (!std::is_sorted(K_grid.begin(), K_grid.end()))
    throw PreconditionError("davenport_erdos_profile: K grid must be increasing");
  DensitySeries s;
  std::optional<Rational> prev_exact;
  for (auto K : K_grid) {
    auto e = exact_density_multiples(truncate(spec, K), opt);
    if (e.is_exact()) {
      if (prev_exact && *e.value < *prev_exact) {
        s.certified_monotone = false;
        s.monotonicity_violations.push_back(K);
      }
      prev_exact = *e.value;
    }
    s.entries.emplace_back(K, e);
  }
  if (!s.entries.empty()) {
    s.extrapolated = s.entries.back().second.lower;
    if (s.entries.size() >= 2) s.error_bar = s.extrapolated - s.entries[s.entries.size() - 2].second.lower;
  }
  return s;
}

std::string to_csv(const DensitySeries& s) {
  std::ostringstream out;
  out << "K,lower,upper,value,method\n";
  for (auto& [K, e] : s.entries)
    out << K << ',' << to_string(e.lower) << ',' << to_string(e.upper) << ',' << (e.value ? to_string(*e.value) : "")
        << ',' << method_name(e.method) << '\n';
  return out.str();
}

EllSequence ell_from_multiples(const Window& m, std::uint64_t burn_in) {
  if (m.offset() != 1) throw PreconditionError("ell sequence needs a window starting at 1");
  EllSequence e;
  e.L_max = m.length();
  e.burn_in = burn_in;
  std::uint64_t lo = std::max<std::uint64_t>(burn_in, 1);
  if (lo > m.length()) return e;
  // scan backwards keeping the minimum ratio of all later prefixes
  std::uint64_t c = m.count();
  std::uint64_t best_c = 0, best_l = 0;
  std::vector<std::uint64_t> pre, cnt;
  for (std::uint64_t l = m.length(); l >= lo; --l) {
    // ratio c/l vs best_c/best_l
    bool record = best_l == 0;
    bool tie = false;
    if (!record) {
      unsigned __int128 lhs = static_cast<unsigned __int128>(c) * best_l;
      unsigned __int128 rhs = static_cast<unsigned __int128>(best_c) * l;
      record = lhs < rhs;
      tie = lhs == rhs;
    }
    if (record) {
      pre.push_back(l);
      cnt.push_back(c);
      best_c = c;
      best_l = l;
    } else if (tie) {
      pre.back() = l;
      cnt.back() = c;
      best_c = c;
      best_l = l;
    }
    if (m.get(l - 1)) --c;
    if (l == lo) break;
  }
  e.prefixes.assign(pre.rbegin(), pre.rend());
  e.counts.assign(cnt.rbegin(), cnt.rend());
  return e;
}

EllSequence lower_density_sequence(const BSpec& spec, std::uint64_t K, std::uint64_t L_max, std::uint64_t burn_in) {
  if (K < L_max) throw PreconditionError("lower_density_sequence: K must be >= L_max");
  auto m = sieve_multiples(truncate(spec, K), 1, L_max);
  auto e = ell_from_multiples(m, burn_in);
  e.K = K;
  return e;
}

std::string to_csv(const EllSequence& e) {
  std::ostringstream out;
  out << "ell,ratio_num,ratio_den\n";
  for (std::size_t i = 0; i < e.size(); ++i) {
    Rational r = e.ratio(i);
    out << e.prefixes[i] << ',' << r.get_num().get_str() << ',' << r.get_den().get_str() << '\n';
  }
  return out.str();
}

LogDensityEstimate logarithmic_density_estimate(const BSpec& spec, std::uint64_t K, std::uint64_t L) {
  if (K < L) throw PreconditionError("logarithmic_density_estimate: K must be >= L");
  if (L < 2) throw PreconditionError("logarithmic_density_estimate: L must be >= 2");
  auto m = sieve_multiples(truncate(spec, K), 1, L);
  LogDensityEstimate r;
  r.L = L;
  r.L0 = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(L)));
  // Neumaier-compensated sum in increasing order
  long double sum = 0, comp = 0, at_L0 = 0;
  for (std::uint64_t i = 0; i < L; ++i) {
    if (m.get(i)) {
      long double t = 1.0L / static_cast<long double>(i + 1);
      long double s = sum + t;
      comp += std::fabs(sum) >= std::fabs(t) ? (sum - s) + t : (t - s) + sum;
      sum = s;
    }
    if (i + 1 == r.L0) at_L0 = sum + comp;
  }
  r.harmonic_sum = sum + comp;
  r.value = r.harmonic_sum / std::log(static_cast<long double>(L));
  if (r.L0 >= 2 && r.L0 < L)
    r.two_scale = (r.harmonic_sum - at_L0) / std::log(static_cast<long double>(L) / static_cast<long double>(r.L0));
  return r;
}

namespace {
template <class Better>
PrefixRatio prefix_ratio(const Window& w, std::uint64_t burn_in, Better better) {
  if (w.offset() != 1) throw PreconditionError("prefix ratios need a window starting at 1");
  PrefixRatio best;
  std::uint64_t lo = std::max<std::uint64_t>(burn_in, 1);
  if (lo > w.length()) throw PreconditionError("burn-in exceeds window length");
  std::uint64_t c = w.count_range(0, lo - 1);
  for (std::uint64_t n = lo; n <= w.length(); ++n) {
    if (w.get(n - 1)) ++c;
    if (best.prefix == 0 ||
        better(static_cast<unsigned __int128>(c) * best.prefix, static_cast<unsigned __int128>(best.count) * n)) {
      best.count = c;
      best.prefix = n;
    }
  }
  best.value = make_rational(best.count, best.prefix);
  return best;
}
}  // namespace

PrefixRatio max_prefix_ratio(const Window& w, std::uint64_t burn_in) {
  return prefix_ratio(w, burn_in, [](auto a, auto b) { return a > b; });
}

PrefixRatio min_prefix_ratio(const Window& w, std::uint64_t burn_in) {
  return prefix_ratio(w, burn_in, [](auto a, auto b) { return a < b; });
}

PrefixRatio upper_density_estimate(const BSpec& spec, std::uint64_t K, std::uint64_t L, std::uint64_t burn_in) {
  if (K < L) throw PreconditionError("upper_density_estimate: K must be >= L");
  return max_prefix_ratio(eta_window(truncate(spec, K), 1, L), burn_in);
}

Rational upper_density_along(const Window& set, const EllSequence& ell, double tail) {
  if (set.offset() != 1) throw PreconditionError("upper_density_along needs a window starting at 1");
  if (ell.size() == 0) throw PreconditionError("empty ell sequence");
  if (set.length() < ell.last()) throw PreconditionError("window shorter than the last prefix");
  auto from = static_cast<std::uint64_t>(std::ceil(tail * static_cast<double>(ell.last())));
  // running count over increasing prefixes; compare ratios by cross-multiplication
  std::uint64_t prev = 0, ones = 0, best_c = 0, best_l = 0;
  for (auto l : ell.prefixes) {
    ones += set.count_range(prev, l);
    prev = l;
    if (l < from) continue;
    if (best_l == 0 || static_cast<unsigned __int128>(ones) * best_l > static_cast<unsigned __int128>(best_c) * l) {
      best_c = ones;
      best_l = l;
    }
  }
  return make_rational(best_c, best_l);
}

}  // namespace bfree
