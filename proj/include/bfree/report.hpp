// JSON views of the structured results and small file helpers for report bundles.
#pragma once

#include "bfree/density.hpp"
#include "bfree/entropy.hpp"
#include "bfree/maps.hpp"
#include "bfree/measures.hpp"
#include "bfree/structure.hpp"
#include "bfree/toeplitz.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace bfree {

using Json = nlohmann::ordered_json;

Json to_json(const DensityEnclosure& d);
Json to_json(const DensitySeries& s);
Json to_json(const EllSequence& e, std::size_t max_entries = 64);
Json to_json(const LogDensityEstimate& e);
Json to_json(const TautReport& r);
Json to_json(const BehrendGauge& g);
Json to_json(const StarApprox& s);
Json to_json(const PrimeApprox& p);
Json to_json(const StarModel& s);
Json to_json(const OrderVerdict& v);
Json to_json(const SandwichVerdict& v);
Json to_json(const std::vector<RegularityEntry>& r);
Json to_json(const std::vector<DiscrepancyEntry>& d);
Json to_json(const Trajectory& t);
Json to_json(const LowerBoundVerdict& v);
Json to_json(const UpperBoundVerdict& v);

// Writes content to path, creating parent directories.
void write_file(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

// Prefixes every line of text with "# ".
std::string comment_lines(const std::string& text);

}  // namespace bfree
