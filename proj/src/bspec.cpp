#include "bfree/bspec.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_set>

namespace bfree {

struct BSpec::Node {
  FamilyKind kind = FamilyKind::explicit_list;
  std::vector<std::uint64_t> list;  // explicit elements
  std::uint64_t scale = 1;          // scaled-primes factor
  std::string path;                 // file-list path
  std::vector<BSpec> parts;         // composed
};

BSpec::BSpec() : node_(std::make_shared<Node>()) {}
BSpec::BSpec(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

BSpec BSpec::explicit_list(std::vector<std::uint64_t> elements) {
  for (auto b : elements)
    if (b == 0) throw InputError("B must contain positive integers only (got 0)");
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  auto n = std::make_shared<Node>();
  n->kind = FamilyKind::explicit_list;
  n->list = std::move(elements);
  return BSpec(n);
}

BSpec BSpec::prime_squares() {
  auto n = std::make_shared<Node>();
  n->kind = FamilyKind::prime_squares;
  return BSpec(n);
}

BSpec BSpec::scaled_primes(std::uint64_t c) {
  if (c == 0) throw InputError("scaled-primes factor must be positive");
  auto n = std::make_shared<Node>();
  n->kind = FamilyKind::scaled_primes;
  n->scale = c;
  return BSpec(n);
}

BSpec BSpec::file_list(std::string path) {
  auto n = std::make_shared<Node>();
  n->kind = FamilyKind::file_list;
  n->path = std::move(path);
  return BSpec(n);
}

BSpec BSpec::composed(std::vector<BSpec> parts) {
  auto n = std::make_shared<Node>();
  n->kind = FamilyKind::composed;
  n->parts = std::move(parts);
  return BSpec(n);
}

FamilyKind BSpec::kind() const { return node_->kind; }

std::string BSpec::describe() const {
  const Node& n = *node_;
  switch (n.kind) {
    case FamilyKind::explicit_list: {
      std::string s = "{";
      for (std::size_t i = 0; i < n.list.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(n.list[i]);
      }
      return s + "}";
    }
    case FamilyKind::prime_squares:
      return "prime-squares";
    case FamilyKind::scaled_primes:
      return n.scale == 1 ? "primes" : "scaled-primes(" + std::to_string(n.scale) + ")";
    case FamilyKind::file_list:
      return "file(" + n.path + ")";
    case FamilyKind::composed: {
      std::string s = "union(";
      for (std::size_t i = 0; i < n.parts.size(); ++i) {
        if (i) s += ",";
        s += n.parts[i].describe();
      }
      return s + ")";
    }
  }
  return "?";
}

bool BSpec::is_finite() const {
  const Node& n = *node_;
  switch (n.kind) {
    case FamilyKind::explicit_list:
    case FamilyKind::file_list:
      return true;
    case FamilyKind::prime_squares:
    case FamilyKind::scaled_primes:
      return false;
    case FamilyKind::composed:
      return std::all_of(n.parts.begin(), n.parts.end(), [](const BSpec& p) { return p.is_finite(); });
  }
  return true;
}

namespace {

std::vector<std::uint64_t> read_list_file(const std::string& path, std::uint64_t K) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read B list file '" + path + "'");
  std::vector<std::uint64_t> out;
  std::string line;
  std::size_t lineno = 0;
  std::uint64_t prev = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    std::string extra;
    if (ls >> extra) throw InputError(path + ":" + std::to_string(lineno) + ": one number per line expected");
    if (!std::all_of(tok.begin(), tok.end(), [](unsigned char c) { return std::isdigit(c); }))
      throw InputError(path + ":" + std::to_string(lineno) + ": not a natural number: " + tok);
    std::uint64_t v = 0;
    try {
      v = std::stoull(tok);
    } catch (const std::exception&) {
      throw InputError(path + ":" + std::to_string(lineno) + ": number out of range: " + tok);
    }
    if (v == 0) throw InputError(path + ":" + std::to_string(lineno) + ": elements must be positive");
    if (v <= prev) throw InputError(path + ":" + std::to_string(lineno) + ": list must be strictly increasing");
    prev = v;
    if (v <= K) out.push_back(v);
  }
  return out;
}

}  // namespace

std::vector<std::uint64_t> BSpec::elements_up_to(std::uint64_t K) const {
  const Node& n = *node_;
  std::vector<std::uint64_t> out;
  switch (n.kind) {
    case FamilyKind::explicit_list:
      for (auto b : n.list)
        if (b <= K) out.push_back(b);
      break;
    case FamilyKind::prime_squares: {
      std::uint64_t r = 1;
      while ((r + 1) <= K / (r + 1)) ++r;
      for (auto p : primes_up_to(r)) out.push_back(p * p);
      break;
    }
    case FamilyKind::scaled_primes:
      for (auto p : primes_up_to(K / n.scale)) out.push_back(p * n.scale);
      break;
    case FamilyKind::file_list:
      out = read_list_file(n.path, K);
      break;
    case FamilyKind::composed: {
      for (const auto& part : n.parts) {
        auto e = part.elements_up_to(K);
        std::vector<std::uint64_t> merged;
        merged.reserve(out.size() + e.size());
        std::set_union(out.begin(), out.end(), e.begin(), e.end(), std::back_inserter(merged));
        out.swap(merged);
      }
      break;
    }
  }
  return out;
}

namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

// Splits on commas that are not nested inside parentheses or braces.
std::vector<std::string> split_top(std::string_view s) {
  std::vector<std::string> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == '(' || c == '{') ++depth;
    if (c == ')' || c == '}') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  auto last = trim(s.substr(start));
  if (!last.empty() || !out.empty()) out.push_back(last);
  return out;
}

std::uint64_t parse_natural(const std::string& tok, std::string_view ctx) {
  if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](unsigned char c) { return std::isdigit(c); }))
    throw InputError("bad number '" + tok + "' in B description '" + std::string(ctx) + "'");
  try {
    return std::stoull(tok);
  } catch (const std::exception&) {
    throw InputError("number out of range '" + tok + "'");
  }
}

}  // namespace

BSpec BSpec::parse(std::string_view text) {
  std::string s = trim(text);
  auto inner = [&](std::size_t open) {
    if (s.back() != ')') throw InputError("unbalanced parentheses in B description '" + s + "'");
    return s.substr(open + 1, s.size() - open - 2);
  };
  if (s.empty()) throw InputError("empty B description");
  if (s.front() == '{') {
    if (s.back() != '}') throw InputError("unbalanced braces in B description '" + s + "'");
    std::vector<std::uint64_t> v;
    for (auto& tok : split_top(s.substr(1, s.size() - 2))) v.push_back(parse_natural(tok, s));
    return explicit_list(v);
  }
  if (s == "prime-squares") return prime_squares();
  if (s == "primes") return scaled_primes(1);
  auto open = s.find('(');
  if (open == std::string::npos) throw InputError("unknown B family '" + s + "'");
  std::string head = trim(s.substr(0, open));
  std::string body = inner(open);
  if (head == "scaled-primes") return scaled_primes(parse_natural(trim(body), s));
  if (head == "explicit") {
    std::vector<std::uint64_t> v;
    for (auto& tok : split_top(body)) v.push_back(parse_natural(tok, s));
    return explicit_list(v);
  }
  if (head == "file") return file_list(trim(body));
  if (head == "union") {
    std::vector<BSpec> parts;
    for (auto& tok : split_top(body)) parts.push_back(parse(tok));
    return composed(parts);
  }
  throw InputError("unknown B family '" + head + "'");
}

// ---------------------------------------------------------------------------

BTruncation::BTruncation(std::vector<std::uint64_t> elements, std::uint64_t cutoff, bool infinite_source,
                         std::uint64_t lcm_cap, bool complete)
    : elements_(std::move(elements)),
      cutoff_(cutoff),
      infinite_source_(infinite_source),
      complete_(complete && !infinite_source),
      lcm_cap_(lcm_cap) {
  std::sort(elements_.begin(), elements_.end());
  elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
  std::uint64_t l = 1;
  for (auto b : elements_) {
    if (b == 0) throw InputError("truncation elements must be positive");
    auto next = lcm_capped(l, b, lcm_cap_);
    if (!next) {
      lcm_.reset();
      return;
    }
    l = *next;
  }
  lcm_ = l;
}

BTruncation BTruncation::of(std::vector<std::uint64_t> elements) {
  std::uint64_t k = elements.empty() ? 1 : *std::max_element(elements.begin(), elements.end());
  return BTruncation(std::move(elements), k, false, kDefaultLcmCap, true);
}

std::uint64_t BTruncation::lcm() const {
  if (!lcm_) throw OverflowError("lcm of truncation exceeds cap " + std::to_string(lcm_cap_));
  return *lcm_;
}

Natural BTruncation::exact_lcm() const {
  if (lcm_) {
    Natural z;
    std::uint64_t v = *lcm_;
    mpz_import(z.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
    return z;
  }
  std::map<std::uint64_t, int> top;
  for (auto b : elements_)
    for (auto& [p, e] : factorize(b)) top[p] = std::max(top[p], e);
  std::vector<std::uint64_t> factors;
  for (auto& [p, e] : top)
    for (int i = 0; i < e; ++i) factors.push_back(p);
  return product_tree(factors);
}

bool BTruncation::contains(std::uint64_t b) const {
  return std::binary_search(elements_.begin(), elements_.end(), b);
}

BTruncation truncate(const BSpec& spec, std::uint64_t K, std::uint64_t lcm_cap) {
  if (K < 1) throw PreconditionError("truncate: K must be >= 1");
  auto elems = spec.elements_up_to(K);
  bool complete = false;
  if (spec.is_finite()) complete = spec.elements_up_to(UINT64_MAX).size() == elems.size();
  return BTruncation(std::move(elems), K, !spec.is_finite(), lcm_cap, complete);
}

std::vector<std::uint64_t> primitive_subset(std::vector<std::uint64_t> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  if (v.empty()) return v;
  if (v.front() == 1) return {1};
  std::vector<std::uint64_t> kept;
  std::uint64_t top = v.back();
  if (top <= (std::uint64_t{1} << 27)) {
    // mark multiples of kept elements in a bitmap
    std::vector<bool> hit(top + 1, false);
    for (auto b : v) {
      if (hit[b]) continue;
      kept.push_back(b);
      for (std::uint64_t m = 2 * b; m <= top; m += b) hit[m] = true;
    }
    return kept;
  }
  std::unordered_set<std::uint64_t> present;
  for (auto b : v) {
    bool divisible = false;
    for (auto d : divisors(b)) {
      if (d == b) break;
      if (present.count(d)) {
        divisible = true;
        break;
      }
    }
    if (!divisible) {
      kept.push_back(b);
      present.insert(b);
    }
  }
  return kept;
}

BTruncation primitivize(const BTruncation& trunc) {
  return BTruncation(primitive_subset(trunc.elements()), trunc.cutoff(), trunc.infinite_source(), trunc.lcm_cap(),
                     trunc.complete());
}

}  // namespace bfree
