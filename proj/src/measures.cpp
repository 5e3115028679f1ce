#include "bfree/measures.hpp"

#include "bfree/core.hpp"
#include "bfree/parallel.hpp"
#include "bfree/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <unordered_map>

namespace bfree {

namespace {

constexpr std::uint64_t kChunk = std::uint64_t{1} << 20;

std::string word_of(std::uint64_t key, unsigned n) {
  std::string s(n, '0');
  for (unsigned j = 0; j < n; ++j)
    if ((key >> j) & 1) s[j] = '1';
  return s;
}

std::string word_at(const Window& w, std::uint64_t i, unsigned n) {
  std::string s(n, '0');
  for (unsigned j = 0; j < n; ++j)
    if (w.get(i + j)) s[j] = '1';
  return s;
}

nlohmann::json provenance_json(const Provenance& p) {
  nlohmann::json j;
  j["kind"] = p.kind;
  if (p.kind == "exact-period") j["period"] = p.period;
  if (p.kind == "empirical") j["ell"] = p.ell;
  if (p.kind == "sampled") {
    j["seed"] = p.seed;
    j["samples"] = p.samples;
    j["rng"] = p.rng;
  }
  return j;
}

}  // namespace

std::map<std::string, std::uint64_t> count_blocks(const Window& w, std::uint64_t start, std::uint64_t count,
                                                  unsigned n) {
  if (n == 0) throw PreconditionError("block length must be >= 1");
  if (start + count + n - 1 > w.length()) throw PreconditionError("blocks run past the window");
  std::map<std::string, std::uint64_t> out;
  if (n > 64) {
    for (std::uint64_t i = start; i < start + count; ++i) ++out[word_at(w, i, n)];
    return out;
  }
  std::uint64_t chunks = (count + kChunk - 1) / kChunk;
  std::vector<std::unordered_map<std::uint64_t, std::uint64_t>> parts(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    std::uint64_t lo = start + c * kChunk, hi = std::min(start + count, lo + kChunk);
    auto& m = parts[c];
    for (std::uint64_t i = lo; i < hi; ++i) ++m[w.extract(i, n)];
  });
  std::map<std::uint64_t, std::uint64_t> merged;
  for (auto& m : parts)
    for (auto& [k, v] : m) merged[k] += v;
  for (auto& [k, v] : merged) out[word_of(k, n)] += v;
  return out;
}

Rational FreqTable::freq(const std::string& word) const {
  auto it = counts.find(word);
  if (it == counts.end() || total == 0) return 0;
  return make_rational(it->second, total);
}

Rational FreqTable::one_frequency(unsigned i) const {
  std::uint64_t c = 0;
  for (auto& [w, v] : counts)
    if (w[i] == '1') c += v;
  return total ? make_rational(c, total) : Rational(0);
}

FreqTable FreqTable::drop_last() const {
  FreqTable t;
  t.n = n - 1;
  t.provenance = provenance;
  t.total = total;
  for (auto& [w, v] : counts) t.counts[w.substr(0, n - 1)] += v;
  return t;
}

FreqTable FreqTable::drop_first() const {
  FreqTable t;
  t.n = n - 1;
  t.provenance = provenance;
  t.total = total;
  for (auto& [w, v] : counts) t.counts[w.substr(1)] += v;
  return t;
}

std::string FreqTable::to_json() const {
  nlohmann::json j;
  j["n"] = n;
  j["provenance"] = provenance_json(provenance);
  auto entries = nlohmann::json::array();
  for (auto& [w, v] : counts) {
    nlohmann::json e;
    e["word"] = w;
    if (provenance.kind == "exact-period") {
      Rational q = make_rational(v, total);
      e["num"] = q.get_num().get_str();
      e["den"] = q.get_den().get_str();
    } else {
      e["float"] = static_cast<double>(v) / static_cast<double>(total);
    }
    entries.push_back(e);
  }
  j["entries"] = entries;
  return j.dump(2);
}

FreqTable PairFreqTable::first_marginal() const {
  FreqTable t;
  t.n = n;
  t.provenance = provenance;
  t.total = total;
  for (auto& [k, v] : counts) t.counts[k.first] += v;
  return t;
}

FreqTable PairFreqTable::second_marginal() const {
  FreqTable t;
  t.n = n;
  t.provenance = provenance;
  t.total = total;
  for (auto& [k, v] : counts) t.counts[k.second] += v;
  return t;
}

Rational PairFreqTable::freq(const std::string& first, const std::string& second) const {
  auto it = counts.find({first, second});
  if (it == counts.end() || total == 0) return 0;
  return make_rational(it->second, total);
}

std::string PairFreqTable::to_json() const {
  nlohmann::json j;
  j["n"] = n;
  j["provenance"] = provenance_json(provenance);
  j["uncertified_mass"] = uncertified_mass;
  auto entries = nlohmann::json::array();
  for (auto& [k, v] : counts) {
    nlohmann::json e;
    e["first"] = k.first;
    e["second"] = k.second;
    e["float"] = static_cast<double>(v) / static_cast<double>(total);
    entries.push_back(e);
  }
  j["entries"] = entries;
  return j.dump(2);
}

FreqTable mirsky_exact(const BTruncation& trunc, unsigned n, std::uint64_t period_cap) {
  if (trunc.overflowed() || trunc.lcm() > period_cap)
    throw OverflowError("lcm of truncation too large for exact period frequencies");
  std::uint64_t P = trunc.lcm();
  Window w = eta_window(trunc, 0, P + n - 1);
  FreqTable t;
  t.n = n;
  t.provenance.kind = "exact-period";
  t.provenance.period = P;
  t.counts = count_blocks(w, 0, P, n);
  t.total = P;
  return t;
}

FreqTable quasi_generic_freq(const BSpec& spec, std::uint64_t K, const EllSequence& ell, unsigned n) {
  if (ell.size() == 0) throw PreconditionError("quasi_generic_freq: empty ell sequence");
  std::uint64_t l = ell.last();
  std::uint64_t reach = l + n - 1;
  Window w = eta_window(truncate(spec, std::max(K, reach)), 1, reach);
  FreqTable t;
  t.n = n;
  t.provenance.kind = "empirical";
  t.provenance.ell = l;
  t.counts = count_blocks(w, 0, l, n);
  t.total = l;
  return t;
}

PairFreqTable pair_joining_freq(const SystemModel& sys, const EllSequence& ell, unsigned n,
                                double uncertified_tolerance) {
  if (ell.size() == 0) throw PreconditionError("pair_joining_freq: empty ell sequence");
  std::uint64_t l = ell.last();
  std::uint64_t len = l + n - 1;
  Window eta = sys.eta(1, len);
  Window star = sys.eta_star(1, len);
  PairFreqTable t;
  t.n = n;
  t.provenance.kind = "empirical";
  t.provenance.ell = l;
  if (!sys.star.assumed_complete) {
    // ones of the upper approximation beyond the search cutoff are not certified
    std::uint64_t from = std::min<std::uint64_t>(sys.star.search_K, len);
    t.uncertified_mass = static_cast<double>(star.count_range(from, len)) / static_cast<double>(len);
    if (t.uncertified_mass > uncertified_tolerance)
      throw PreconditionError("pair_joining_freq: uncertified eta* mass " + std::to_string(t.uncertified_mass) +
                              " exceeds tolerance");
  }
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::uint64_t> packed;
  if (n <= 64) {
    for (std::uint64_t i = 0; i < l; ++i) ++packed[{star.extract(i, n), eta.extract(i, n)}];
    for (auto& [k, v] : packed) t.counts[{word_of(k.first, n), word_of(k.second, n)}] += v;
  } else {
    for (std::uint64_t i = 0; i < l; ++i) ++t.counts[{word_at(star, i, n), word_at(eta, i, n)}];
  }
  t.total = l;
  return t;
}

namespace {

std::uint64_t draw_offset(const CounterRng& rng, std::uint64_t i, std::uint64_t span) { return rng.below(i, span); }

template <class BlockFn>
FreqTable sample_blocks(unsigned n, std::uint64_t samples, std::uint64_t seed, std::uint64_t span, BlockFn block) {
  if (n > 64) throw PreconditionError("sampled tables support n <= 64");
  CounterRng offsets(seed, 0);
  std::uint64_t chunks = (samples + kChunk - 1) / kChunk;
  std::vector<std::unordered_map<std::uint64_t, std::uint64_t>> parts(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    std::uint64_t lo = c * kChunk, hi = std::min(samples, lo + kChunk);
    for (std::uint64_t i = lo; i < hi; ++i) ++parts[c][block(i, draw_offset(offsets, i, span))];
  });
  std::map<std::uint64_t, std::uint64_t> merged;
  for (auto& m : parts)
    for (auto& [k, v] : m) merged[k] += v;
  FreqTable t;
  t.n = n;
  t.provenance.kind = "sampled";
  t.provenance.seed = seed;
  t.provenance.samples = samples;
  t.provenance.rng = kRngAlgorithm;
  for (auto& [k, v] : merged) t.counts[word_of(k, n)] += v;
  t.total = samples;
  return t;
}

}  // namespace

FreqTable max_entropy_sampler(const SystemModel& sys, std::uint64_t L, unsigned n, std::uint64_t samples,
                              std::uint64_t seed, FairBits mode) {
  if (L <= n) throw PreconditionError("max_entropy_sampler: L must exceed n");
  Window eta = sys.eta_K(1, L);
  Window star = sys.eta_star(1, L);
  if (!star.leq(eta)) throw PreconditionError("max_entropy_sampler: eta* <= eta_K violated on the window");
  CounterRng bits(seed, 1);
  std::uint64_t mask = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  // offsets u in [1, L - n], i.e. window index u - 1 in [0, L - n)
  return sample_blocks(n, samples, seed, L - n, [&](std::uint64_t i, std::uint64_t idx) {
    std::uint64_t w = star.extract(idx, n), x = eta.extract(idx, n);
    std::uint64_t y = mode == FairBits::zeros ? 0 : mode == FairBits::ones ? mask : (bits.draw(i) & mask);
    return w | (x & y);
  });
}

FreqTable sampled_block_table(const Window& w, unsigned n, std::uint64_t samples, std::uint64_t seed) {
  if (w.offset() != 1) throw PreconditionError("sampled_block_table: window must start at 1");
  if (w.length() <= n) throw PreconditionError("sampled_block_table: window too short");
  return sample_blocks(n, samples, seed, w.length() - n,
                       [&](std::uint64_t, std::uint64_t idx) { return w.extract(idx, n); });
}

EtaPrimeDiscrepancy eta_vs_etaprime_discrepancy(const BSpec& spec, std::uint64_t K, const EllSequence& ell,
                                                std::uint64_t c_max, const Rational& epsilon) {
  if (ell.size() == 0) throw PreconditionError("eta_vs_etaprime_discrepancy: empty ell sequence");
  EtaPrimeDiscrepancy r;
  r.prime = bprime_approx(spec, K, c_max, epsilon);
  std::uint64_t l = ell.last();
  // both sides from B_K so only the added scales can differ
  Window eta = eta_window(truncate(spec, K), 1, l);
  Window eta_p = eta_window(r.prime.result, 1, l);
  r.value = upper_density_along((eta ^ eta_p).with_tag(Tag::generic), ell);
  return r;
}

namespace {
Window mismatch_from_one(const Window& x, const Window& y) {
  require_same_geometry(x, y, "premetric");
  Window d = x ^ y;
  return d.shifted(d.offset() - 1);
}
}  // namespace

Rational dlow_premetric(const Window& x, const Window& y, std::uint64_t burn_in) {
  return min_prefix_ratio(mismatch_from_one(x, y), burn_in).value;
}

Rational dupper_premetric(const Window& x, const Window& y, std::uint64_t burn_in) {
  return max_prefix_ratio(mismatch_from_one(x, y), burn_in).value;
}

}  // namespace bfree
