/*
 * Copyright 2026 The relim Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "relim/analysis.hpp"
#include "relim/families.hpp"
#include "relim/labeling.hpp"
#include "relim/problem_io.hpp"
#include "relim/sim/check.hpp"
#include "relim/sim/generate.hpp"
#include "relim/sim/trace.hpp"

namespace relim {

using json = nlohmann::json;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write '" + path + "'");
  out << text;
}

inline json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("malformed JSON: ") + e.what());
  }
}

// ---- problems ----

inline json problem_json(const Problem& p, bool condensed = false) {
  return {{"handle", problem_handle(p)},
          {"delta", p.delta()},
          {"rank", p.rank()},
          {"sigma", p.names()},
          {"node_count", p.node().size()},
          {"edge_count", p.edge().size()},
          {"text", render_problem(p, condensed)}};
}

inline json diagram_json(const Problem& p, bool edge_side) {
  const Constraint& c = edge_side ? p.edge() : p.node();
  Diagram d = diagram(c, p.num_labels());
  json groups = json::array(), edges = json::array();
  for (const auto& g : d.groups) {
    json names = json::array();
    for (Label l : g) names.push_back(p.name(l));
    groups.push_back(names);
  }
  // Hasse edges by representative name, weaker -> stronger
  for (auto [a, b] : d.edges) edges.push_back({p.name(d.groups[a][0]), p.name(d.groups[b][0])});
  return {{"side", edge_side ? "edge" : "node"}, {"groups", groups}, {"edges", edges}};
}

inline json step_json(const StepResult& st, bool condensed = false) {
  json j = problem_json(st.problem, condensed);
  json prov = json::object();
  for (const auto& [n, s] : st.provenance) prov[n] = s;
  j["provenance"] = prov;
  j["re_labels"] = st.re.problem.num_labels();
  return j;
}

inline json renaming_json(const std::map<std::string, std::string>& m) {
  json j = json::object();
  for (const auto& [a, b] : m) j[a] = b;
  return j;
}

inline std::map<std::string, std::string> renaming_from_json(const json& j) {
  if (!j.is_object()) throw InvalidArgument("renaming must be an object of name pairs");
  std::map<std::string, std::string> m;
  for (const auto& [k, v] : j.items()) {
    if (!v.is_string()) throw InvalidArgument("renaming targets must be strings");
    m[k] = v.get<std::string>();
  }
  return m;
}

inline json relaxation_json(const Problem& p1, const Problem& p2, const RelaxationResult& r) {
  json j = {{"ok", r.ok}};
  if (!r.ok) j["failure"] = r.failure;
  auto side = [&](const std::vector<ConfigMatch>& ms) {
    json a = json::array();
    for (const auto& m : ms)
      a.push_back({{"source", render_configuration(p1, m.source)}, {"target", render_configuration(p2, m.target)}});
    return a;
  };
  j["node_matches"] = side(r.node_matches);
  j["edge_matches"] = side(r.edge_matches);
  return j;
}

inline json zero_round_json(const Problem& p, const ZeroRoundResult& z) {
  json j = {{"solvable", z.solvable}};
  if (z.witness) j["witness"] = render_configuration(p, *z.witness);
  return j;
}

inline json chain_json(const ChainReport& rep) {
  json steps = json::array();
  for (const auto& s : rep.steps)
    steps.push_back({{"directive", s.directive},
                     {"stepped_labels", s.stepped.num_labels()},
                     {"problem", problem_json(s.problem)},
                     {"relaxation_ok", s.relaxation.ok},
                     {"zero_round", s.zero_round}});
  json j = {{"start", problem_json(rep.start)},
            {"start_zero_round", rep.start_zero_round},
            {"length", rep.length()},
            {"steps", steps},
            {"stop_reason", rep.stop_reason},
            {"warnings", rep.warnings}};
  if (!rep.detail.empty()) j["detail"] = rep.detail;
  if (rep.size_reached) j["size_reached"] = rep.size_reached;
  return j;
}

inline json fixed_point_json(const FixedPointResult& r) {
  return {{"ok", r.ok},
          {"renaming", renaming_json(r.renaming)},
          {"re_labels", r.re_labels},
          {"stepped_labels", r.stepped_labels}};
}

inline json onestep_json(const OneStepResult& r) {
  json j = {{"ok", r.ok},
            {"next_z", r.next_z.z},
            {"next_s", r.next_z.s},
            {"re_alphabet_matches", r.re_alphabet_matches},
            {"star_distinct", r.star_distinct},
            {"estar_agree", r.estar_agree},
            {"estar_size", r.estar_size},
            {"estar_characterization_size", r.estar_char_size},
            {"relaxes_to_star", r.relaxes_to_star},
            {"renamed_equal", r.renamed_equal},
            {"renaming", renaming_json(r.renaming)}};
  if (!r.failure.empty()) j["failure"] = r.failure;
  j["witness_ok"] = r.witness.ok;
  j["next"] = problem_json(r.next);
  return j;
}

// ---- hypergraphs and labelings ----

inline sim::Hypergraph hypergraph_from_json(const json& j) {
  sim::Hypergraph h;
  try {
    for (const auto& v : j.at("nodes")) h.add_node(v.get<sim::NodeId>());
    for (const auto& e : j.at("hyperedges")) {
      std::vector<int> pins;
      for (const auto& v : e.at("pins")) pins.push_back(h.node_index(v.get<sim::NodeId>()));
      h.add_edge(e.at("id").get<std::uint64_t>(), pins);
    }
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed hypergraph: ") + e.what());
  }
  return h;
}

inline json hypergraph_json(const sim::Hypergraph& h) {
  json nodes = json::array(), edges = json::array();
  for (int v = 0; v < h.num_nodes(); ++v) nodes.push_back(h.node_id(v));
  for (int e = 0; e < h.num_edges(); ++e) {
    json pins = json::array();
    for (int v : h.pins(e)) pins.push_back(h.node_id(v));
    edges.push_back({{"id", h.edge_id(e)}, {"pins", pins}});
  }
  return {{"nodes", nodes}, {"hyperedges", edges}};
}

inline Labeling labeling_from_json(const json& j) {
  Labeling l;
  try {
    for (const auto& x : j.at("labels"))
      l[{x.at("node").get<sim::NodeId>(), x.at("edge").get<std::uint64_t>()}] = x.at("label").get<std::string>();
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed labeling: ") + e.what());
  }
  return l;
}

inline json labeling_json(const Labeling& l) {
  json a = json::array();
  for (const auto& [k, v] : l) a.push_back({{"node", k.first}, {"edge", k.second}, {"label", v}});
  return a;
}

inline json labeling_report_json(const LabelingReport& r) {
  json v = json::array();
  for (const auto& x : r.violations)
    v.push_back({{"kind", x.kind == Violation::Kind::Node ? "node" : "edge"}, {"id", x.id}, {"configuration", x.configuration}});
  return {{"ok", r.ok()},
          {"violations", v},
          {"unconstrained_edges", r.unconstrained_edges},
          {"unconstrained_nodes", r.unconstrained_nodes}};
}

inline json trace_json(const sim::RoundTrace& t) {
  json ev = json::array();
  for (const auto& e : t.events) ev.push_back({{"round", e.round}, {"kind", e.kind}, {"detail", e.detail}});
  json c = json::object();
  for (const auto& [k, v] : t.counters) c[k] = v;
  return {{"algorithm", t.algorithm},
          {"rounds", t.rounds},
          {"phases", t.phases},
          {"messages", t.messages},
          {"counters", c},
          {"events", ev}};
}

inline json check_report_json(const sim::CheckReport& r) {
  json v = json::array();
  for (const auto& x : r.violations) v.push_back({{"kind", x.kind}, {"on", x.on_edge ? "edge" : "node"}, {"id", x.id}});
  return {{"ok", r.ok()}, {"violations", v}};
}

// kind: random | linear-hypertree | single-edge | from-file
inline sim::Hypergraph generate_hypergraph(const std::string& kind, std::size_t n, std::size_t delta, std::size_t rank,
                                           std::uint64_t seed, std::size_t depth = 2, const std::string& path = "") {
  if (kind == "random") return sim::random_hypergraph(n, delta, rank, seed);
  if (kind == "linear-hypertree") return sim::linear_hypertree(delta, rank, depth, n);
  if (kind == "single-edge") return sim::single_edge(rank);
  if (kind == "from-file") return hypergraph_from_json(parse_json(read_file(path)));
  throw InvalidArgument("unknown generator '" + kind + "'");
}

}  // namespace relim
