#include "bfree/report.hpp"

#include <fstream>
#include <sstream>

namespace bfree {

namespace {
Json elements_json(const BTruncation& t) {
  Json a = Json::array();
  for (auto b : t.elements()) a.push_back(b);
  return a;
}
}  // namespace

Json to_json(const DensityEnclosure& d) {
  Json j;
  j["method"] = method_name(d.method);
  if (d.value) {
    j["value"] = to_string(*d.value);
    j["float"] = to_double(*d.value);
  } else {
    j["lower"] = to_string(d.lower);
    j["upper"] = to_string(d.upper);
    j["lower_float"] = to_double(d.lower);
    j["upper_float"] = to_double(d.upper);
  }
  return j;
}

Json to_json(const DensitySeries& s) {
  Json j;
  Json e = Json::array();
  for (auto& [K, d] : s.entries) {
    Json x = to_json(d);
    x["K"] = K;
    e.push_back(x);
  }
  j["entries"] = e;
  j["extrapolated"] = to_string(s.extrapolated);
  j["extrapolated_float"] = to_double(s.extrapolated);
  j["error_bar"] = to_double(s.error_bar);
  j["certified_monotone"] = s.certified_monotone;
  j["monotonicity_violations"] = s.monotonicity_violations;
  return j;
}

Json to_json(const EllSequence& e, std::size_t max_entries) {
  Json j;
  j["K"] = e.K;
  j["L_max"] = e.L_max;
  j["burn_in"] = e.burn_in;
  j["size"] = e.size();
  Json tail = Json::array();
  std::size_t from = e.size() > max_entries ? e.size() - max_entries : 0;
  for (std::size_t i = from; i < e.size(); ++i)
    tail.push_back({{"ell", e.prefixes[i]}, {"count", e.counts[i]}, {"ratio", to_double(e.ratio(i))}});
  j["last_entries"] = tail;
  return j;
}

Json to_json(const LogDensityEstimate& e) {
  Json j;
  j["L"] = e.L;
  j["harmonic_sum"] = static_cast<double>(e.harmonic_sum);
  j["value"] = static_cast<double>(e.value);
  j["L0"] = e.L0;
  j["two_scale"] = static_cast<double>(e.two_scale);
  return j;
}

Json to_json(const TautReport& r) {
  Json j;
  j["family"] = r.family;
  j["K"] = r.K;
  j["label"] = r.label();
  Json e = Json::array();
  for (auto& t : r.entries) {
    e.push_back({{"b", t.b}, {"verdict", verdict_name(t.verdict)}, {"without", to_json(t.without)}, {"with", to_json(t.with)}});
  }
  j["entries"] = e;
  return j;
}

Json to_json(const BehrendGauge& g) {
  Json j;
  j["series"] = to_json(g.series);
  j["epsilon"] = to_string(g.epsilon);
  j["behrend_likely"] = g.behrend_likely;
  return j;
}

Json to_json(const StarApprox& s) {
  Json j;
  j["d_max"] = s.d_max;
  j["m"] = s.m;
  Json D = Json::array();
  for (auto& c : s.found_D) D.push_back({{"d", c.d}, {"witnesses", c.witnesses}});
  j["found_D"] = D;
  j["result"] = elements_json(s.result);
  return j;
}

Json to_json(const PrimeApprox& p) {
  Json j;
  j["c_max"] = p.c_max;
  j["epsilon"] = to_string(p.epsilon);
  Json C = Json::array();
  for (auto& c : p.found_C) C.push_back({{"c", c.c}, {"gauge", to_json(c.gauge)}});
  j["found_C"] = C;
  Json r = elements_json(p.result);
  if (r.size() > 200) {
    j["result_size"] = r.size();
    r.erase(r.begin() + 200, r.end());
  }
  j["result"] = r;
  return j;
}

Json to_json(const StarModel& s) {
  Json j;
  j["elements"] = elements_json(s.elements);
  j["assumed_complete"] = s.assumed_complete;
  j["search_K"] = s.search_K;
  j["m"] = s.m;
  j["approx"] = to_json(s.approx);
  return j;
}

Json to_json(const OrderVerdict& v) {
  Json j;
  j["K"] = v.K;
  j["L"] = v.L;
  j["bstar"] = v.bstar;
  j["a_clause1"] = v.a_clause1;
  j["a_clause2"] = v.a_clause2;
  j["clause1_failures"] = v.clause1_failures;
  j["clause2_failures"] = v.clause2_failures;
  j["a_holds"] = v.a_holds();
  j["b_star_le_C"] = v.b_star_le_C;
  j["b_C_le_eta"] = v.b_C_le_eta;
  j["b_holds"] = v.b_holds();
  j["star_le_C_violations"] = v.star_le_C_violations;
  j["C_le_eta_violations"] = v.C_le_eta_violations;
  Json w = Json::array();
  for (auto& x : v.witnesses) w.push_back({{"position", x.position}, {"kind", x.kind}, {"in_window", x.in_window}});
  j["witnesses"] = w;
  return j;
}

Json to_json(const SandwichVerdict& v) {
  Json j;
  j["K"] = v.K;
  j["K_prime"] = v.K_prime;
  j["a"] = v.a;
  j["L"] = v.L;
  j["eta_exact"] = v.eta_exact;
  j["star_exact"] = v.star_exact;
  j["lower_above_star"] = v.lower_above_star;
  j["star_above_eta"] = v.star_above_eta;
  j["eta_above_upper"] = v.eta_above_upper;
  j["first_failures"] = v.first_failures;
  j["strict_lower"] = v.strict_lower;
  j["strict_upper"] = v.strict_upper;
  j["passes"] = v.passes();
  return j;
}

Json to_json(const std::vector<RegularityEntry>& r) {
  Json a = Json::array();
  for (auto& e : r) {
    Json x;
    x["K"] = e.K;
    if (e.s)
      x["s"] = *e.s;
    else
      x["s"] = nullptr;
    x["outside_per"] = to_json(e.outside_per);
    a.push_back(x);
  }
  return a;
}

Json to_json(const std::vector<DiscrepancyEntry>& d) {
  Json a = Json::array();
  for (auto& e : d)
    a.push_back({{"K", e.K},
                 {"value", to_double(e.value)},
                 {"lower_side", to_double(e.lower_side)},
                 {"upper_side", to_double(e.upper_side)}});
  return a;
}

Json to_json(const Trajectory& t) {
  Json j;
  j["start"] = t.start;
  j["steps"] = t.steps.size();
  j["shifts"] = t.shifts;
  j["halted"] = t.halted;
  j["halt_reason"] = t.halt_reason;
  return j;
}

Json to_json(const LowerBoundVerdict& v) {
  return {{"n", v.n},
          {"L", v.L},
          {"free_count", v.free_count},
          {"star_free_count", v.star_free_count},
          {"exponent", v.exponent},
          {"lhs", v.lhs.get_str()},
          {"measured", v.measured},
          {"measured_half", v.measured_half},
          {"tautness", v.tautness},
          {"pass", v.passes()}};
}

Json to_json(const UpperBoundVerdict& v) {
  return {{"n", v.n},
          {"K", v.K},
          {"L", v.L},
          {"measured", v.measured},
          {"p_star", v.p_star},
          {"p_star_periodic", v.p_star_periodic},
          {"p_K", v.p_K},
          {"p_K_periodic", v.p_K_periodic},
          {"sup_gap", v.sup_gap},
          {"rhs", v.rhs.get_str()},
          {"pass", v.passes()}};
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << content;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string comment_lines(const std::string& text) {
  std::istringstream in(text);
  std::string line, out;
  while (std::getline(in, line)) out += "# " + line + "\n";
  return out;
}

}  // namespace bfree
