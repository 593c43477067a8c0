#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "spectra/error.hpp"
#include "spectra/graph.hpp"
#include "spectra/operator.hpp"
#include "spectra/rlimits.hpp"

namespace spectra {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Graphs

/// Graph JSON: {"vertex_count", "root", "edges" (sorted [u, v], u < v),
/// optional "labels", optional "boundary" (only when the boundary was marked
/// explicitly)}. Keys are emitted in sorted order, so the text is a function
/// of the graph alone.
inline json graph_to_json(const RootedGraph& g) {
  json j;
  j["vertex_count"] = g.vertex_count();
  j["root"] = g.root();
  json edges = json::array();
  for (auto [u, v] : g.edges()) edges.push_back({u, v});
  j["edges"] = std::move(edges);
  if (g.has_labels()) j["labels"] = g.labels();
  if (g.boundary_marked()) {
    auto b = g.boundary();
    j["boundary"] = std::vector<vertex_id>(b.begin(), b.end());
  }
  return j;
}

inline std::string graph_to_string(const RootedGraph& g) { return graph_to_json(g).dump() + "\n"; }

inline RootedGraph graph_from_json(const json& j) {
  if (!j.is_object()) throw parameter_error("graph JSON: expected an object");
  for (const char* key : {"vertex_count", "root", "edges"})
    if (!j.contains(key)) throw parameter_error(std::string("graph JSON: missing key '") + key + "'");
  const auto n = j.at("vertex_count").get<std::size_t>();
  GraphBuilder b(n);
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2) throw parameter_error("graph JSON: edges must be [u, v] pairs");
    b.add_edge(e[0].get<vertex_id>(), e[1].get<vertex_id>());
  }
  if (j.contains("labels")) {
    const auto& labels = j.at("labels");
    if (labels.size() != n) throw parameter_error("graph JSON: labels length differs from vertex_count");
    for (std::size_t v = 0; v < n; ++v) b.set_label(v, labels[v].get<std::string>());
  }
  if (j.contains("boundary")) {
    b.mark_boundary_empty();
    for (const auto& v : j.at("boundary")) {
      auto id = v.get<vertex_id>();
      if (id >= n) throw parameter_error("graph JSON: boundary vertex out of range");
      b.mark_boundary(id);
    }
  }
  return std::move(b).finish(j.at("root").get<vertex_id>());
}

inline RootedGraph graph_from_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw parameter_error(std::string("graph JSON: ") + e.what());
  }
  return graph_from_json(j);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

inline RootedGraph read_graph(const std::string& path) { return graph_from_string(read_text_file(path)); }

inline void write_graph(const std::string& path, const RootedGraph& g) { write_text_file(path, graph_to_string(g)); }

// ---------------------------------------------------------------------------
// Potential rules

/// {"rule": "sparse-squares", "alpha": 2.0} | {"rule": "constant", "c": 0.0}
/// | {"rule": "radial", "values": [...]} | {"rule": "explicit", "values": [...]}
inline PotentialRule potential_from_json(const json& j) {
  if (!j.is_object() || !j.contains("rule")) throw parameter_error("potential JSON: expected {\"rule\": ...}");
  PotentialRule p;
  p.rule = j.at("rule").get<std::string>();
  if (p.rule == "constant") {
    p.c = j.value("c", 0.0);
  } else if (p.rule == "sparse-squares") {
    if (!j.contains("alpha")) throw parameter_error("potential JSON: sparse-squares needs alpha");
    p.alpha = j.at("alpha").get<double>();
  } else if (p.rule == "radial" || p.rule == "explicit") {
    if (!j.contains("values")) throw parameter_error("potential JSON: " + p.rule + " needs values");
    p.values = j.at("values").get<std::vector<double>>();
  } else {
    throw parameter_error("unknown potential rule '" + p.rule + "'");
  }
  return p;
}

inline json potential_to_json(const PotentialRule& p) {
  json j;
  j["rule"] = p.rule;
  if (p.rule == "constant") j["c"] = p.c;
  if (p.rule == "sparse-squares") j["alpha"] = p.alpha;
  if (p.rule == "radial" || p.rule == "explicit") j["values"] = p.values;
  return j;
}

/// Potential from the command line: a JSON object, or the shorthands
/// "free", "constant:C", "sparse-squares:ALPHA", "radial:q0,q1,...".
inline PotentialRule parse_potential(const std::string& text) {
  if (!text.empty() && text.front() == '{') {
    try {
      return potential_from_json(json::parse(text));
    } catch (const json::parse_error& e) {
      throw parameter_error(std::string("potential JSON: ") + e.what());
    }
  }
  if (text == "free") return PotentialRule::constant(0.0);
  auto colon = text.find(':');
  if (colon == std::string::npos) throw parameter_error("potential '" + text + "': expected RULE:VALUE or JSON");
  std::string name = text.substr(0, colon), rest = text.substr(colon + 1);
  auto number = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      double x = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return x;
    } catch (const std::exception&) {
      throw parameter_error("potential '" + text + "': bad number '" + s + "'");
    }
  };
  if (name == "constant") return PotentialRule::constant(number(rest));
  if (name == "sparse-squares") return PotentialRule::sparse_squares(number(rest));
  if (name == "radial") {
    std::vector<double> q;
    std::stringstream ss(rest);
    for (std::string item; std::getline(ss, item, ',');) q.push_back(number(item));
    return PotentialRule::radial(std::move(q));
  }
  throw parameter_error("unknown potential rule '" + name + "'");
}

// ---------------------------------------------------------------------------
// Reports

inline json intervals_to_json(const std::vector<Interval>& ivs) {
  json out = json::array();
  for (const auto& iv : ivs) out.push_back({iv.lo, iv.hi});
  return out;
}

/// {"radius", "witnesses", "canonical_hash", "spectrum": {"intervals"}} plus
/// the catalogue identification and the model used for the spectrum.
inline json candidate_to_json(const RLimitCandidate& c, const CandidateModel& model, double gap_threshold) {
  json j;
  j["radius"] = c.radius();
  j["witnesses"] = c.witnesses;
  j["stability_count"] = c.stability_count;
  j["observations"] = c.observations;
  j["canonical_hash"] = c.hash_hex();
  j["pattern_size"] = c.patterns.empty() ? 0 : c.patterns.back().size();
  j["catalog"] = c.catalog.kind == CatalogEntry::Kind::none ? json(nullptr) : json(c.catalog.name());
  json spectrum;
  spectrum["model"] = model.model;
  spectrum["model_radius"] = model.radius;
  spectrum["intervals"] = intervals_to_json(cluster_intervals(model.eigenvalues, gap_threshold));
  j["spectrum"] = std::move(spectrum);
  return j;
}

/// printf("%.12g") for CSV cells and human-readable numbers.
inline std::string format_g12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace spectra
