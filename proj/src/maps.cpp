#include "bfree/maps.hpp"

#include "bfree/core.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace bfree {

namespace {
constexpr std::uint64_t kExactReachCap = std::uint64_t{1} << 32;

std::uint64_t mod_inverse(std::uint64_t a, std::uint64_t m) {
  // extended Euclid on signed 128-bit values
  __int128 t = 0, nt = 1, r = m, nr = a % m;
  while (nr != 0) {
    __int128 q = r / nr;
    __int128 tmp = t - q * nt;
    t = nt;
    nt = tmp;
    tmp = r - q * nr;
    r = nr;
    nr = tmp;
  }
  if (t < 0) t += m;
  return static_cast<std::uint64_t>(t);
}
}  // namespace

HPoint HPoint::delta(std::shared_ptr<const BTruncation> trunc, std::int64_t n) {
  std::uint64_t m = trunc->lcm();
  return HPoint(trunc, floor_mod(n, m), m);
}

HPoint HPoint::rotate(std::int64_t k) const {
  std::uint64_t step = floor_mod(k, modulus_);
  std::uint64_t v = static_cast<std::uint64_t>((static_cast<unsigned __int128>(n_) + step) % modulus_);
  return HPoint(trunc_, v, modulus_);
}

HPoint HPoint::operator+(const HPoint& o) const {
  if (modulus_ != o.modulus_) throw GeometryError("HPoints over different truncations");
  std::uint64_t v = static_cast<std::uint64_t>((static_cast<unsigned __int128>(n_) + o.n_) % modulus_);
  return HPoint(trunc_, v, modulus_);
}

std::optional<HPoint> theta_point(const Window& w, std::shared_ptr<const BTruncation> trunc) {
  std::uint64_t x = 0, M = 1;
  for (auto b : trunc->elements()) {
    auto miss = theta_window(w, b);
    if (miss.size() != 1) return std::nullopt;
    // the window misses n = -h_b mod b
    std::uint64_t hb = (b - miss[0]) % b;
    // solve x + M t = h_b (mod b)
    std::uint64_t g = std::gcd(M, b);
    std::uint64_t diff = floor_mod(static_cast<std::int64_t>(hb) - static_cast<std::int64_t>(x % b), b);
    if (diff % g != 0) return std::nullopt;
    std::uint64_t bg = b / g;
    std::uint64_t t = bg == 1 ? 0
                              : static_cast<std::uint64_t>(static_cast<unsigned __int128>(diff / g) *
                                                               mod_inverse((M / g) % bg, bg) % bg);
    auto newM = lcm_capped(M, b, trunc->lcm_cap());
    if (!newM) return std::nullopt;
    x = static_cast<std::uint64_t>((static_cast<unsigned __int128>(M) * t + x) % *newM);
    M = *newM;
  }
  return HPoint::delta(trunc, static_cast<std::int64_t>(x));
}

Window phi_K(const HPoint& h, std::int64_t a, std::uint64_t L) {
  Window w = sieve_multiples(h.trunc(), a + static_cast<std::int64_t>(h.residue()), L).complement();
  w = w.shifted(static_cast<std::int64_t>(h.residue()));
  w.set_tag(Tag::eta_K);
  return w;
}

HPoint gamma_star(const HPoint& h, std::shared_ptr<const BTruncation> bstar) {
  for (auto bs : bstar->elements()) {
    const auto& e = h.trunc().elements();
    bool covered = std::any_of(e.begin(), e.end(), [&](std::uint64_t b) { return b % bs == 0; });
    if (!covered) throw PreconditionError("gamma_star: b* = " + std::to_string(bs) + " divides no element of the truncation");
  }
  return HPoint::delta(bstar, static_cast<std::int64_t>(h.residue() % bstar->lcm()));
}

Window map_M(const Window& x, const Window& y) {
  require_same_geometry(x, y, "map_M");
  return x & y;
}

Window map_N(const Window& w, const Window& x, const Window& y) {
  require_same_geometry(w, x, "map_N");
  require_same_geometry(w, y, "map_N");
  if (!w.leq(x)) {
    auto p = w.excess_positions(x, 1);
    throw PreconditionError("map_N: w <= x violated at position " + std::to_string(p.front()));
  }
  Window out = w | (x & y);
  if (w.tag() == Tag::eta_star_upper || x.tag() == Tag::eta_star_upper || y.tag() == Tag::eta_star_upper)
    out.set_tag(Tag::eta_star_upper);
  return out;
}

MHEnclosure map_M_H(const SystemModel& sys, const HPoint& h, const Window& y) {
  std::int64_t a = y.offset();
  std::uint64_t L = y.length();
  auto n = static_cast<std::int64_t>(h.residue());
  auto bstar = std::make_shared<const BTruncation>(BTruncation::of([&] {
    std::vector<std::uint64_t> head;
    for (auto b : sys.star.elements.elements())
      if (b <= sys.K) head.push_back(b);
    return head;
  }()));
  if (bstar->overflowed()) throw OverflowError("lcm(B*_K) exceeds the cap");
  HPoint hs = gamma_star(h, bstar);
  auto ns = static_cast<std::int64_t>(hs.residue());
  // underline-eta_K is lcm(B*_K)-periodic, so shifting by the H* residue suffices
  Window low_cert = sys.underline_eta_K(a + ns, L).bits.shifted(ns);
  Window upper_phi = phi_K(h, a, L);
  Window phi_evidence = sys.eta(a + n, L).shifted(n);
  Window low_upper = sys.eta_star(a + n, L).shifted(n);
  MHEnclosure r;
  r.lower = map_N(low_cert.with_tag(Tag::generic), phi_evidence.with_tag(Tag::generic), y);
  r.upper = map_N(low_upper, upper_phi.with_tag(Tag::generic), y);
  r.mask = (low_cert ^ low_upper) | (phi_evidence ^ upper_phi);
  r.mask.set_tag(Tag::generic);
  return r;
}

HatWord hat_read(const Window& x, const Window& z) {
  require_same_geometry(x, z, "hat_read");
  if (z.offset() > 0) throw PreconditionError("hat_read: window must contain position 0 to anchor the reading");
  auto supp = z.support();
  auto anchor = std::lower_bound(supp.begin(), supp.end(), std::int64_t{0});
  if (anchor == supp.end()) throw PreconditionError("hat_read: z has no support point at or after 0");
  HatWord h;
  h.first_index = -static_cast<std::int64_t>(anchor - supp.begin());
  h.positions = supp;
  h.bits.reserve(supp.size());
  for (auto p : supp) h.bits.push_back(x.at(p));
  return h;
}

Assembled assemble_phi(const Window& lower, const Window& upper, const Window& xs) {
  require_same_geometry(lower, upper, "assemble_phi");
  if (!lower.leq(upper)) throw PreconditionError("assemble_phi: lower <= upper violated");
  Window z = upper ^ lower;
  Assembled r{lower.with_tag(Tag::generic), Window::ones(lower.offset(), lower.length())};
  if (z.count() == 0) return r;
  if (z.offset() > 0) throw PreconditionError("assemble_phi: window must contain position 0");
  auto supp = z.support();
  auto anchor = std::lower_bound(supp.begin(), supp.end(), std::int64_t{0});
  auto base = static_cast<std::int64_t>(anchor - supp.begin());
  for (std::size_t k = 0; k < supp.size(); ++k) {
    std::int64_t j = static_cast<std::int64_t>(k) - base;
    auto i = static_cast<std::uint64_t>(supp[k] - lower.offset());
    if (xs.covers(j))
      r.y.set(i, xs.at(j));
    else
      r.defined.set(i, false);
  }
  return r;
}

std::string Trajectory::to_csv() const {
  std::ostringstream out;
  out << "step,h_residue,shifted,certified\n";
  for (auto& s : steps) out << s.step << ',' << s.residue << ',' << (s.shifted ? 1 : 0) << ',' << (s.certified ? 1 : 0) << '\n';
  return out.str();
}

Trajectory skew_orbit(const SystemModel& sys, const HPoint& h, const Window& x, std::uint64_t steps) {
  Trajectory tr;
  tr.final_x = x;
  // integer representative closest to zero keeps the exact windows short
  std::int64_t m0 = static_cast<std::int64_t>(h.residue());
  if (h.residue() > h.modulus() / 2) m0 -= static_cast<std::int64_t>(h.modulus());
  tr.start = m0;
  if (steps == 0) return tr;
  std::uint64_t reach = std::max<std::uint64_t>(static_cast<std::uint64_t>(m0 < 0 ? -m0 : m0),
                                                static_cast<std::uint64_t>(std::llabs(m0 + static_cast<std::int64_t>(steps))));
  if (!sys.star.assumed_complete || reach > kExactReachCap) {
    tr.halted = true;
    tr.halt_reason = !sys.star.assumed_complete ? "B* approximation not certified complete"
                                                : "orbit leaves the range where eta is computed exactly";
    return tr;
  }
  Window up = sys.eta(m0, steps);
  Window low = sys.eta_star(m0, steps);
  if (up.tag() != Tag::eta) {
    tr.halted = true;
    tr.halt_reason = "eta window not exact";
    return tr;
  }
  HPoint cur = h;
  for (std::uint64_t t = 0; t < steps; ++t) {
    bool lo = low.get(t), hi = up.get(t);
    SkewStep s;
    s.step = t;
    s.residue = cur.residue();
    s.certified = true;
    s.shifted = !lo && hi;
    if (s.shifted) ++tr.shifts;
    tr.steps.push_back(s);
    cur = cur.rotate(1);
  }
  tr.final_x = x.shifted(tr.shifts);
  return tr;
}

}  // namespace bfree
