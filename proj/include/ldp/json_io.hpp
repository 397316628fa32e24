#pragma once

// Canonical JSON forms. Alphabets are arrays, measures are key/value arrays
// in canonical key order, profiles are integer arrays aligned with the
// alphabet. Graph vertices are 1-based on the wire. +inf is written as the
// string "inf"; big integers as decimal strings.

#include <filesystem>

#include <json.hpp>

#include "ldp/extended.hpp"
#include "ldp/measures.hpp"
#include "ldp/samplers.hpp"

namespace ldp::io {

using nlohmann::json;

json to_json(const Alphabet& a);
json to_json(const SymbolMeasure& nu);
json to_json(const PairMeasure& pi);
json to_json(const NeighbourhoodMeasure& mu);
json to_json(const DegreeMeasure& d);
json to_json(const ProfileCounts& c);
json to_json(const Extended& e);
json to_json(const ColoredGraph& g);
json to_json(const AllocationOutcome& a);
json to_json(const CoupledSample& s);

Alphabet alphabet_from_json(const json& j);
/// Accepts "weights" as [[symbol, w], ...], [w, ...] or {symbol: w}.
SymbolMeasure symbol_measure_from_json(const json& j);
/// Accepts "entries" as [[b, a, w], ...] or "matrix" as rows indexed by b.
PairMeasure pair_measure_from_json(const json& j);
NeighbourhoodMeasure neighbourhood_from_json(const json& j);
DegreeMeasure degree_from_json(const json& j);
ColoredGraph graph_from_json(const json& j);
AllocationOutcome allocation_from_json(const json& j);

/// Parse a file; FormatError names the file on failure.
json read_json_file(const std::filesystem::path& path);

}  // namespace ldp::io
