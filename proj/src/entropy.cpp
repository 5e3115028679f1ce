#include "bfree/entropy.hpp"

#include "bfree/core.hpp"
#include "bfree/parallel.hpp"
#include "bfree/rng.hpp"
#include "bfree/toeplitz.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>
#include <unordered_set>

namespace bfree {

namespace {

constexpr std::uint64_t kChunk = std::uint64_t{1} << 20;
constexpr std::size_t kSketchSize = 4096;

// Sorted distinct keys of one chunk of starting positions.
template <class Key, class KeyFn>
std::vector<std::vector<Key>> chunk_partials(std::uint64_t start, std::uint64_t count, CountMode mode, KeyFn key) {
  std::uint64_t chunks = (count + kChunk - 1) / kChunk;
  std::vector<std::vector<Key>> parts(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    std::uint64_t lo = start + c * kChunk, hi = std::min(start + count, lo + kChunk);
    std::vector<Key> v;
    if (mode == CountMode::exact_set) {
      std::unordered_set<Key> set;
      for (std::uint64_t i = lo; i < hi; ++i) set.insert(key(i));
      v.assign(set.begin(), set.end());
    } else {
      v.reserve(hi - lo);
      for (std::uint64_t i = lo; i < hi; ++i) v.push_back(key(i));
    }
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    parts[c] = std::move(v);
  });
  return parts;
}

// Distinct keys across sorted partials by a k-way merge.
template <class Key>
std::uint64_t merge_count(const std::vector<std::vector<Key>>& parts) {
  using Item = std::pair<const Key*, std::size_t>;  // current key, partial index
  auto greater = [](const Item& a, const Item& b) { return *a.first > *b.first; };
  std::priority_queue<Item, std::vector<Item>, decltype(greater)> heap(greater);
  std::vector<std::size_t> pos(parts.size(), 0);
  for (std::size_t i = 0; i < parts.size(); ++i)
    if (!parts[i].empty()) heap.push({&parts[i][0], i});
  std::uint64_t distinct = 0;
  const Key* last = nullptr;
  while (!heap.empty()) {
    auto [k, i] = heap.top();
    heap.pop();
    if (!last || *last != *k) {
      ++distinct;
      last = k;
    }
    if (++pos[i] < parts[i].size()) heap.push({&parts[i][pos[i]], i});
  }
  return distinct;
}

std::string packed_key(const Window& w, std::uint64_t i, unsigned n) {
  std::string s((n + 7) / 8, '\0');
  for (unsigned j = 0; j < n; j += 64) {
    unsigned take = std::min(64u, n - j);
    std::uint64_t x = w.extract(i + j, take);
    for (unsigned b = 0; b < take; b += 8) s[(j + b) / 8] = static_cast<char>((x >> b) & 0xff);
  }
  return s;
}

BlockCount sketch_count(const Window& w, std::uint64_t start, std::uint64_t count, unsigned n) {
  // k minimum values of a 64-bit hash of each block
  std::uint64_t chunks = (count + kChunk - 1) / kChunk;
  std::vector<std::vector<std::uint64_t>> parts(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    std::uint64_t lo = start + c * kChunk, hi = std::min(start + count, lo + kChunk);
    std::vector<std::uint64_t> v;
    for (std::uint64_t i = lo; i < hi; ++i) {
      std::uint64_t h;
      if (n <= 64) {
        h = mix64(w.extract(i, n) ^ (std::uint64_t{n} << 56));
      } else {
        h = n;
        for (unsigned j = 0; j < n; j += 64) h = mix64(h ^ w.extract(i + j, std::min(64u, n - j)));
      }
      v.push_back(h);
      if (v.size() > 4 * kSketchSize) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        if (v.size() > kSketchSize) v.resize(kSketchSize);
      }
    }
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    if (v.size() > kSketchSize) v.resize(kSketchSize);
    parts[c] = std::move(v);
  });
  std::vector<std::uint64_t> all;
  for (auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  BlockCount r;
  r.mode = CountMode::sketch;
  if (all.size() < kSketchSize) {
    r.value = all.size();  // every hash kept; exact up to hash collisions
    r.exact = false;
    return r;
  }
  long double kth = static_cast<long double>(all[kSketchSize - 1]) / 18446744073709551616.0L;
  r.value = static_cast<std::uint64_t>(std::llround((kSketchSize - 1) / kth));
  r.exact = false;
  r.relative_error = 1.0 / std::sqrt(static_cast<double>(kSketchSize - 2));
  return r;
}

}  // namespace

std::string mode_name(CountMode m) {
  switch (m) {
    case CountMode::exact_set: return "exact-set";
    case CountMode::sort_merge: return "sort-merge";
    case CountMode::sketch: return "approximate-sketch";
  }
  return "?";
}

CountMode parse_count_mode(std::string_view s) {
  if (s == "exact-set") return CountMode::exact_set;
  if (s == "sort-merge") return CountMode::sort_merge;
  if (s == "approximate-sketch" || s == "sketch") return CountMode::sketch;
  throw InputError("unknown counting mode: " + std::string(s));
}

BlockCount block_count_range(const Window& w, std::uint64_t start, std::uint64_t count, unsigned n, CountMode mode,
                             std::uint64_t key_budget) {
  if (n == 0) throw PreconditionError("block length must be >= 1");
  if (count == 0) return {0, mode, true, 0};
  if (start + count + n - 1 > w.length()) throw PreconditionError("blocks run past the window");
  if (mode == CountMode::sketch) return sketch_count(w, start, count, n);
  BlockCount r;
  r.mode = mode;
  auto check_budget = [&](const auto& parts) {
    if (mode != CountMode::exact_set) return;
    std::uint64_t held = 0;
    for (auto& p : parts) held += p.size();
    if (held > key_budget)
      throw MemoryBudgetExceeded("exact-set block count holds " + std::to_string(held) +
                                 " keys, over the budget; use sort-merge");
  };
  if (n <= 64) {
    auto parts = chunk_partials<std::uint64_t>(start, count, mode, [&](std::uint64_t i) { return w.extract(i, n); });
    check_budget(parts);
    r.value = merge_count(parts);
  } else {
    auto parts = chunk_partials<std::string>(start, count, mode, [&](std::uint64_t i) { return packed_key(w, i, n); });
    check_budget(parts);
    r.value = merge_count(parts);
  }
  return r;
}

BlockCount block_count(const Window& w, unsigned n, CountMode mode, std::uint64_t key_budget) {
  if (n == 0 || n > w.length()) throw PreconditionError("block_count needs 1 <= n <= window length");
  return block_count_range(w, 0, w.length() - n + 1, n, mode, key_budget);
}

const EntropyEntry& EntropyProfile::at(unsigned n) const {
  for (auto& e : entries)
    if (e.n == n) return e;
  throw std::out_of_range("no profile entry for n = " + std::to_string(n));
}

EntropyProfile entropy_profile(const Window& w, const std::vector<unsigned>& n_grid, CountMode mode) {
  EntropyProfile p;
  p.L = w.length();
  p.mode = mode;
  for (unsigned n : n_grid) {
    EntropyEntry e;
    e.n = n;
    BlockCount full = block_count(w, n, mode);
    e.p_n = full.value;
    e.exact = full.exact;
    e.h_hat = e.p_n > 0 ? std::log2(static_cast<double>(e.p_n)) / n : 0.0;
    std::uint64_t half = w.length() / 2;
    e.p_half = half >= n ? block_count_range(w, 0, half - n + 1, n, mode).value : 0;
    e.saturated = static_cast<double>(e.p_n - std::min(e.p_half, e.p_n)) <= 0.01 * static_cast<double>(e.p_n);
    p.entries.push_back(e);
  }
  return p;
}

EntropyProfile entropy_profile(const BSpec& spec, std::uint64_t K, std::uint64_t L, const std::vector<unsigned>& n_grid,
                               CountMode mode) {
  BTruncation t = truncate(spec, K);
  if (!eta_window_is_exact(t, 1, L))
    throw PreconditionError("entropy_profile: B_K does not determine eta on [1, L]; raise K to at least L");
  EntropyProfile p = entropy_profile(eta_window(t, 1, L), n_grid, mode);
  p.K = K;
  return p;
}

std::string to_csv(const EntropyProfile& p) {
  std::ostringstream out;
  out << "n,p_n,h_hat,mode,saturated\n";
  out.precision(10);
  for (auto& e : p.entries)
    out << e.n << ',' << e.p_n << ',' << e.h_hat << ',' << mode_name(p.mode) << ',' << (e.saturated ? "true" : "false")
        << '\n';
  return out.str();
}

namespace {

Window exact_eta(const BSpec& spec, std::uint64_t K, std::uint64_t L) {
  return eta_window(truncate(spec, std::max(K, L)), 1, L);
}

// Distinct n-blocks of a periodic sequence given by one period starting at 0.
std::uint64_t periodic_block_count(const Window& period_plus, std::uint64_t P, unsigned n) {
  return block_count_range(period_plus, 0, P, n).value;
}

}  // namespace

LowerBoundVerdict lower_bound_check(const BSpec& spec, const StarModel& star, const Window& eta, unsigned n,
                                    const std::string& tautness) {
  if (eta.offset() != 1) throw PreconditionError("lower_bound_check: eta window must start at 1");
  LowerBoundVerdict v;
  v.n = n;
  v.L = eta.length();
  v.free_count = eta_window(truncate(spec, n), 1, n).count();
  v.star_free_count = eta_star_window(star, 1, n).count();
  v.exponent = v.free_count > v.star_free_count ? v.free_count - v.star_free_count : 0;
  mpz_ui_pow_ui(v.lhs.get_mpz_t(), 2, v.exponent);
  v.measured = block_count(eta, n).value;
  std::uint64_t half = eta.length() / 2;
  v.measured_half = half >= n ? block_count_range(eta, 0, half - n + 1, n).value : 0;
  v.tautness = tautness;
  return v;
}

LowerBoundVerdict lower_bound_check(const BSpec& spec, std::uint64_t K, unsigned n, std::uint64_t L,
                                    std::uint64_t taut_K) {
  StarModel star = star_model(spec, 1000);
  return lower_bound_check(spec, star, exact_eta(spec, K, L), n, taut_check(spec, taut_K).label());
}

UpperBoundVerdict upper_bound_check(const BSpec& spec, const StarModel& star, std::uint64_t K, unsigned n,
                                    const Window& eta, std::uint64_t period_cap) {
  UpperBoundVerdict v;
  v.n = n;
  v.K = K;
  v.L = eta.length();
  v.measured = block_count(eta, n).value;

  Window upper = eta_K_window(spec, K, eta.offset(), eta.length());
  Window lower = eta_star_window(star, eta.offset(), eta.length());
  std::int64_t gap = 0, best = 0;
  for (unsigned j = 0; j < n; ++j) gap += static_cast<int>(upper.get(j)) - static_cast<int>(lower.get(j));
  best = gap;
  for (std::uint64_t i = 1; i + n <= eta.length(); ++i) {
    gap += static_cast<int>(upper.get(i + n - 1)) - static_cast<int>(lower.get(i + n - 1));
    gap -= static_cast<int>(upper.get(i - 1)) - static_cast<int>(lower.get(i - 1));
    best = std::max(best, gap);
  }
  v.sup_gap = static_cast<std::uint64_t>(std::max<std::int64_t>(best, 0));

  const BTruncation& st = star.elements;
  if (star.assumed_complete && !st.overflowed() && st.lcm() <= period_cap) {
    std::uint64_t P = st.lcm();
    v.p_star = periodic_block_count(eta_star_window(star, 0, P + n - 1), P, n);
    v.p_star_periodic = true;
  } else {
    v.p_star = block_count(lower, n).value;
  }
  BTruncation tk = truncate(spec, K);
  if (!tk.overflowed() && tk.lcm() <= period_cap) {
    std::uint64_t P = tk.lcm();
    v.p_K = periodic_block_count(eta_K_window(spec, K, 0, P + n - 1), P, n);
    v.p_K_periodic = true;
  } else {
    v.p_K = block_count(upper, n).value;
  }
  Natural pow2;
  mpz_ui_pow_ui(pow2.get_mpz_t(), 2, v.sup_gap);
  v.rhs = Natural(static_cast<unsigned long>(v.p_star)) * Natural(static_cast<unsigned long>(v.p_K)) * pow2;
  return v;
}

UpperBoundVerdict upper_bound_check(const BSpec& spec, std::uint64_t K, unsigned n, std::uint64_t L) {
  return upper_bound_check(spec, star_model(spec, 1000), K, n, exact_eta(spec, K, L));
}

bool EntropyReport::bounds_hold() const {
  for (auto& l : lower)
    if (!l.passes()) return false;
  for (auto& u : upper)
    if (!u.passes()) return false;
  return true;
}

std::string EntropyReport::to_json() const {
  nlohmann::json j;
  j["family"] = family;
  j["params"] = {{"K", params.K},
                 {"L", params.L},
                 {"n_grid", params.n_grid},
                 {"mode", mode_name(params.mode)},
                 {"burn_in", params.burn_in},
                 {"star_K", params.star_K},
                 {"m", params.m},
                 {"bound_K", params.bound_K},
                 {"taut_K", params.taut_K},
                 {"zero_tolerance", params.zero_tolerance}};
  auto prof = nlohmann::json::array();
  for (auto& e : profile.entries)
    prof.push_back({{"n", e.n}, {"p_n", e.p_n}, {"h_hat", e.h_hat}, {"p_half", e.p_half}, {"saturated", e.saturated}});
  j["profile"] = prof;
  j["upper_density_est"] = to_string(upper_density_est);
  j["star_density"] = to_string(star_density);
  j["star_complete"] = star_complete;
  j["h_est"] = h_est;
  j["density_gap"] = density_gap;
  j["zero_entropy_flag"] = zero_entropy_flag;
  auto lo = nlohmann::json::array();
  for (auto& l : lower)
    lo.push_back({{"n", l.n},
                  {"free_count", l.free_count},
                  {"star_free_count", l.star_free_count},
                  {"lhs", l.lhs.get_str()},
                  {"measured", l.measured},
                  {"measured_half", l.measured_half},
                  {"tautness", l.tautness},
                  {"pass", l.passes()}});
  j["lower_bound"] = lo;
  auto up = nlohmann::json::array();
  for (auto& u : upper)
    up.push_back({{"n", u.n},
                  {"K", u.K},
                  {"measured", u.measured},
                  {"p_star", u.p_star},
                  {"p_star_periodic", u.p_star_periodic},
                  {"p_K", u.p_K},
                  {"p_K_periodic", u.p_K_periodic},
                  {"sup_gap", u.sup_gap},
                  {"rhs", u.rhs.get_str()},
                  {"pass", u.passes()}});
  j["upper_bound"] = up;
  j["bounds_hold"] = bounds_hold();
  return j.dump(2);
}

EntropyReport entropy_report(const BSpec& spec, const EntropyReportParams& params) {
  EntropyReport r;
  r.family = spec.describe();
  r.params = params;
  BTruncation t = truncate(spec, params.K);
  if (!eta_window_is_exact(t, 1, params.L))
    throw PreconditionError("entropy_report: B_K does not determine eta on [1, L]; raise K to at least L");
  Window eta = eta_window(t, 1, params.L);
  r.profile = entropy_profile(eta, params.n_grid, params.mode);
  r.profile.K = params.K;
  r.upper_density_est = max_prefix_ratio(eta, params.burn_in).value;
  StarModel star = star_model(spec, params.star_K, params.m);
  r.star_complete = star.assumed_complete;
  DensityEnclosure ds = exact_density_free(star.elements, enclosure_options());
  r.star_density = ds.value ? *ds.value : ds.upper;
  r.h_est = r.profile.entries.empty() ? 0.0 : r.profile.entries.back().h_hat;
  r.density_gap = to_double(r.upper_density_est - r.star_density);
  r.zero_entropy_flag = std::abs(r.density_gap) <= params.zero_tolerance;
  std::string taut = taut_check(spec, params.taut_K).label();
  std::uint64_t bound_K = params.bound_K ? params.bound_K : params.K;
  for (unsigned n : params.n_grid) {
    r.lower.push_back(lower_bound_check(spec, star, eta, n, taut));
    r.upper.push_back(upper_bound_check(spec, star, bound_K, n, eta));
  }
  return r;
}

}  // namespace bfree
