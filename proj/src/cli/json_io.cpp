#include "ldp/json_io.hpp"

#include <algorithm>
#include <fstream>

namespace ldp::io {
namespace {

const json& field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) {
    throw FormatError(std::string("missing field '") + name + "'");
  }
  return j.at(name);
}

double number(const json& j, const char* what) {
  if (!j.is_number()) throw FormatError(std::string(what) + " must be a number");
  return j.get<double>();
}

std::uint32_t count(const json& j, const char* what) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0 ||
      j.get<std::int64_t>() > std::numeric_limits<std::uint32_t>::max()) {
    throw FormatError(std::string(what) + " must be a non-negative integer");
  }
  return j.get<std::uint32_t>();
}

LocalProfile profile_from_json(const json& j, std::size_t m) {
  if (!j.is_array() || j.size() != m) {
    throw FormatError("profiles must be integer arrays aligned with the alphabet");
  }
  std::vector<std::uint32_t> c(m);
  for (std::size_t b = 0; b < m; ++b) c[b] = count(j[b], "profile entry");
  return LocalProfile(std::move(c));
}

json profile_to_json(const LocalProfile& l) {
  return json(std::vector<std::uint32_t>(l.counts().begin(), l.counts().end()));
}

std::vector<std::uint32_t> symbols_from_json(const json& j, const Alphabet& al) {
  if (!j.is_array()) throw FormatError("'symbols' must be an array");
  std::vector<std::uint32_t> out;
  out.reserve(j.size());
  for (const auto& s : j) {
    if (!s.is_string()) throw FormatError("vertex symbols must be strings");
    out.push_back(static_cast<std::uint32_t>(al.require_index(s.get<std::string>())));
  }
  return out;
}

json symbols_to_json(const std::vector<std::uint32_t>& s, const Alphabet& al) {
  json out = json::array();
  for (auto x : s) out.push_back(al.symbol(x));
  return out;
}

// Graph files may omit the alphabet; it is then the sorted set of symbols used.
Alphabet alphabet_or_inferred(const json& j) {
  if (j.contains("alphabet")) return alphabet_from_json(j.at("alphabet"));
  std::vector<std::string> seen;
  for (const auto& s : field(j, "symbols")) {
    if (!s.is_string()) throw FormatError("vertex symbols must be strings");
    seen.push_back(s.get<std::string>());
  }
  std::sort(seen.begin(), seen.end());
  seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
  return Alphabet(std::move(seen));
}

std::int64_t size_field(const json& j) {
  const auto& n = field(j, "n");
  if (!n.is_number_integer() || n.get<std::int64_t>() < 1) throw FormatError("'n' must be a positive integer");
  return n.get<std::int64_t>();
}

}  // namespace

json to_json(const Alphabet& a) { return json(a.symbols()); }

json to_json(const SymbolMeasure& nu) {
  json w = json::array();
  for (std::size_t a = 0; a < nu.alphabet().size(); ++a) w.push_back({nu.alphabet().symbol(a), nu[a]});
  return {{"alphabet", to_json(nu.alphabet())}, {"weights", w}};
}

json to_json(const PairMeasure& pi) {
  json e = json::array();
  const auto& al = pi.alphabet();
  for (std::size_t b = 0; b < al.size(); ++b) {
    for (std::size_t a = 0; a < al.size(); ++a) e.push_back({al.symbol(b), al.symbol(a), pi(b, a)});
  }
  return {{"alphabet", to_json(al)}, {"entries", e}};
}

json to_json(const NeighbourhoodMeasure& mu) {
  json s = json::array();
  for (const auto& [key, w] : mu.support()) {
    s.push_back({{"symbol", mu.alphabet().symbol(key.symbol)},
                 {"profile", profile_to_json(key.profile)},
                 {"weight", w}});
  }
  return {{"alphabet", to_json(mu.alphabet())}, {"support", s}};
}

json to_json(const DegreeMeasure& d) {
  return {{"weights", std::vector<double>(d.weights().begin(), d.weights().end())}};
}

json to_json(const ProfileCounts& c) {
  json s = json::array();
  for (const auto& [key, k] : c.counts()) {
    s.push_back({{"symbol", c.alphabet().symbol(key.symbol)},
                 {"profile", profile_to_json(key.profile)},
                 {"count", k}});
  }
  return {{"alphabet", to_json(c.alphabet())}, {"n", c.n()}, {"support", s}};
}

json to_json(const Extended& e) { return e.is_infinite() ? json("inf") : json(e.value()); }

json to_json(const ColoredGraph& g) {
  json edges = json::array();
  for (const auto& [u, v] : g.edges) edges.push_back({u + 1, v + 1});
  return {{"n", g.n},
          {"alphabet", to_json(g.alphabet)},
          {"symbols", symbols_to_json(g.symbols, g.alphabet)},
          {"edges", edges}};
}

json to_json(const AllocationOutcome& a) {
  json profiles = json::array();
  for (const auto& p : a.profiles) profiles.push_back(profile_to_json(p));
  return {{"n", a.n},
          {"alphabet", to_json(a.alphabet)},
          {"symbols", symbols_to_json(a.symbols, a.alphabet)},
          {"profiles", profiles}};
}

json to_json(const CoupledSample& s) {
  const std::size_t m = s.graph.alphabet.size();
  json b = json::array();
  for (std::size_t r = 0; r < m; ++r) {
    b.push_back(std::vector<std::int64_t>(s.discrepancies.begin() + static_cast<std::ptrdiff_t>(r * m),
                                          s.discrepancies.begin() + static_cast<std::ptrdiff_t>((r + 1) * m)));
  }
  return {{"graph", to_json(s.graph)}, {"allocation", to_json(s.allocation)}, {"discrepancies", b}};
}

Alphabet alphabet_from_json(const json& j) {
  if (!j.is_array()) throw FormatError("'alphabet' must be an array of strings");
  std::vector<std::string> s;
  for (const auto& x : j) {
    if (!x.is_string()) throw FormatError("'alphabet' must be an array of strings");
    s.push_back(x.get<std::string>());
  }
  try {
    return Alphabet(std::move(s));
  } catch (const DomainError& e) {
    throw FormatError(e.what());
  }
}

SymbolMeasure symbol_measure_from_json(const json& j) {
  const Alphabet al = alphabet_from_json(field(j, "alphabet"));
  const auto& w = field(j, "weights");
  std::vector<double> out(al.size(), 0.0);
  if (w.is_object()) {
    for (const auto& [sym, x] : w.items()) out[al.require_index(sym)] = number(x, "weight");
  } else if (w.is_array() && !w.empty() && w[0].is_array()) {
    for (const auto& kv : w) {
      if (kv.size() != 2 || !kv[0].is_string()) throw FormatError("weights must be [symbol, weight] pairs");
      out[al.require_index(kv[0].get<std::string>())] = number(kv[1], "weight");
    }
  } else if (w.is_array()) {
    if (w.size() != al.size()) throw FormatError("one weight per symbol required");
    for (std::size_t a = 0; a < al.size(); ++a) out[a] = number(w[a], "weight");
  } else {
    throw FormatError("'weights' has an unsupported shape");
  }
  return SymbolMeasure(al, std::move(out));
}

PairMeasure pair_measure_from_json(const json& j) {
  const Alphabet al = alphabet_from_json(field(j, "alphabet"));
  const std::size_t m = al.size();
  std::vector<double> out(m * m, 0.0);
  if (j.contains("matrix")) {
    const auto& rows = j.at("matrix");
    if (!rows.is_array() || rows.size() != m) throw FormatError("'matrix' must have one row per symbol");
    for (std::size_t b = 0; b < m; ++b) {
      if (!rows[b].is_array() || rows[b].size() != m) throw FormatError("'matrix' rows must have m entries");
      for (std::size_t a = 0; a < m; ++a) out[b * m + a] = number(rows[b][a], "pair entry");
    }
  } else {
    for (const auto& e : field(j, "entries")) {
      if (!e.is_array() || e.size() != 3 || !e[0].is_string() || !e[1].is_string()) {
        throw FormatError("pair entries must be [b, a, weight] triples");
      }
      out[al.require_index(e[0].get<std::string>()) * m + al.require_index(e[1].get<std::string>())] =
          number(e[2], "pair entry");
    }
  }
  return PairMeasure(al, std::move(out));
}

NeighbourhoodMeasure neighbourhood_from_json(const json& j) {
  const Alphabet al = alphabet_from_json(field(j, "alphabet"));
  std::map<ProfileKey, double> w;
  for (const auto& s : field(j, "support")) {
    const auto& sym = field(s, "symbol");
    if (!sym.is_string()) throw FormatError("support symbols must be strings");
    ProfileKey key{static_cast<std::uint32_t>(al.require_index(sym.get<std::string>())),
                   profile_from_json(field(s, "profile"), al.size())};
    if (!w.emplace(std::move(key), number(field(s, "weight"), "weight")).second) {
      throw FormatError("duplicate support point");
    }
  }
  return NeighbourhoodMeasure(al, std::move(w));
}

DegreeMeasure degree_from_json(const json& j) {
  const auto& w = j.is_array() ? j : field(j, "weights");
  if (!w.is_array()) throw FormatError("degree weights must be an array");
  std::vector<double> out;
  for (const auto& x : w) out.push_back(number(x, "degree weight"));
  return DegreeMeasure(std::move(out));
}

ColoredGraph graph_from_json(const json& j) {
  ColoredGraph g{alphabet_or_inferred(j), size_field(j), {}, {}};
  g.symbols = symbols_from_json(field(j, "symbols"), g.alphabet);
  if (static_cast<std::int64_t>(g.symbols.size()) != g.n) throw FormatError("'symbols' must have n entries");
  for (const auto& e : field(j, "edges")) {
    if (!e.is_array() || e.size() != 2) throw FormatError("edges must be [u, v] pairs");
    const auto u = count(e[0], "edge endpoint");
    const auto v = count(e[1], "edge endpoint");
    if (u < 1 || v < 1 || u > g.n || v > g.n) throw FormatError("edge endpoints must lie in 1..n");
    if (u == v) throw FormatError("loops are not allowed");
    g.edges.emplace_back(std::min(u, v) - 1, std::max(u, v) - 1);
  }
  std::sort(g.edges.begin(), g.edges.end());
  if (std::adjacent_find(g.edges.begin(), g.edges.end()) != g.edges.end()) {
    throw FormatError("duplicate edges are not allowed");
  }
  return g;
}

AllocationOutcome allocation_from_json(const json& j) {
  AllocationOutcome a{alphabet_or_inferred(j), size_field(j), {}, {}};
  a.symbols = symbols_from_json(field(j, "symbols"), a.alphabet);
  const auto& p = field(j, "profiles");
  if (static_cast<std::int64_t>(a.symbols.size()) != a.n || !p.is_array() ||
      static_cast<std::int64_t>(p.size()) != a.n) {
    throw FormatError("'symbols' and 'profiles' must have n entries");
  }
  for (const auto& x : p) a.profiles.push_back(profile_from_json(x, a.alphabet.size()));
  return a;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw FormatError("cannot read " + path.string());
  try {
    return json::parse(f);
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace ldp::io
