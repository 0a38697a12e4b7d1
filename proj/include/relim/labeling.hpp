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

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "relim/problem_io.hpp"
#include "relim/sim/hypergraph.hpp"

namespace relim {

// One label per (node id, hyperedge id) incidence.
using Labeling = std::map<std::pair<sim::NodeId, std::uint64_t>, std::string>;

struct Violation {
  enum class Kind { Node, Edge };
  Kind kind;
  std::uint64_t id;
  std::string configuration;
};

struct LabelingReport {
  std::vector<Violation> violations;
  std::vector<std::uint64_t> unconstrained_edges;  // rank < r, logged
  std::size_t unconstrained_nodes = 0;              // degree < Delta
  bool ok() const { return violations.empty(); }
};

inline LabelingReport validate_labeling(const Problem& p, const sim::Hypergraph& h, const Labeling& l) {
  if (static_cast<std::size_t>(h.max_degree()) > p.delta())
    throw InvalidArgument("hypergraph degree exceeds delta");
  if (static_cast<std::size_t>(h.max_rank()) > p.rank())
    throw InvalidArgument("hypergraph rank exceeds r");
  std::size_t incidences = 0;
  for (int e = 0; e < h.num_edges(); ++e) incidences += h.pins(e).size();
  if (l.size() != incidences) {
    // find the culprit for a precise message
    for (const auto& [key, name] : l) {
      if (!h.has_node_id(key.first)) throw InvalidArgument("labeling names unknown node");
      int v = h.node_index(key.first);
      int e = h.edge_index(key.second);
      const auto& inc = h.incident(v);
      if (std::find(inc.begin(), inc.end(), e) == inc.end())
        throw InvalidArgument("labeling names a non-incident pair");
    }
    throw InvalidArgument("labeling does not cover every incidence");
  }
  auto get = [&](int v, int e) {
    auto it = l.find({h.node_id(v), h.edge_id(e)});
    if (it == l.end()) throw InvalidArgument("labeling does not cover every incidence");
    if (!p.has_label(it->second)) throw InvalidArgument("label '" + it->second + "' is outside sigma");
    return p.label(it->second);
  };
  LabelingReport rep;
  for (int v = 0; v < h.num_nodes(); ++v) {
    std::vector<Label> ls;
    for (int e : h.incident(v)) ls.push_back(get(v, e));
    if (ls.size() < p.delta()) {
      ++rep.unconstrained_nodes;
      continue;
    }
    Configuration c(std::move(ls));
    if (!p.node().contains(c))
      rep.violations.push_back({Violation::Kind::Node, h.node_id(v), render_configuration(p, c)});
  }
  for (int e = 0; e < h.num_edges(); ++e) {
    std::vector<Label> ls;
    for (int v : h.pins(e)) ls.push_back(get(v, e));
    if (ls.size() < p.rank()) {
      rep.unconstrained_edges.push_back(h.edge_id(e));
      continue;
    }
    Configuration c(std::move(ls));
    if (!p.edge().contains(c))
      rep.violations.push_back({Violation::Kind::Edge, h.edge_id(e), render_configuration(p, c)});
  }
  return rep;
}

}  // namespace relim
