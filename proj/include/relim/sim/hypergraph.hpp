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

#include <algorithm>
#include <cstdint>
#include <queue>
#include <string>
#include <unordered_map>
#include <vector>

#include "relim/common.hpp"

namespace relim::sim {

using NodeId = std::uint64_t;

// Hypergraph with port numbering. Internal indices are dense; ids are the
// external unique identifiers. Ports are the positions in `incident(v)` and
// `pins(e)`.
class Hypergraph {
 public:
  int add_node(NodeId id) {
    if (node_index_.count(id)) throw InvalidArgument("duplicate node id " + std::to_string(id));
    int v = static_cast<int>(node_ids_.size());
    node_ids_.push_back(id);
    node_index_.emplace(id, v);
    incident_.emplace_back();
    return v;
  }

  // pins are internal node indices
  int add_edge(std::uint64_t id, std::vector<int> pins) {
    if (edge_index_.count(id)) throw InvalidArgument("duplicate hyperedge id " + std::to_string(id));
    if (pins.empty()) throw InvalidArgument("hyperedge " + std::to_string(id) + " has no pins");
    auto sorted = pins;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw InvalidArgument("hyperedge " + std::to_string(id) + " repeats a pin");
    int e = static_cast<int>(edge_ids_.size());
    for (int v : pins) {
      if (v < 0 || v >= num_nodes()) throw InvalidArgument("pin out of range");
      incident_[static_cast<std::size_t>(v)].push_back(e);
    }
    edge_ids_.push_back(id);
    edge_index_.emplace(id, e);
    pins_.push_back(std::move(pins));
    return e;
  }

  int num_nodes() const { return static_cast<int>(node_ids_.size()); }
  int num_edges() const { return static_cast<int>(edge_ids_.size()); }
  const std::vector<int>& pins(int e) const { return pins_[static_cast<std::size_t>(e)]; }
  const std::vector<int>& incident(int v) const { return incident_[static_cast<std::size_t>(v)]; }
  int degree(int v) const { return static_cast<int>(incident(v).size()); }
  int rank(int e) const { return static_cast<int>(pins(e).size()); }
  NodeId node_id(int v) const { return node_ids_[static_cast<std::size_t>(v)]; }
  std::uint64_t edge_id(int e) const { return edge_ids_[static_cast<std::size_t>(e)]; }
  int node_index(NodeId id) const {
    auto it = node_index_.find(id);
    if (it == node_index_.end()) throw InvalidArgument("unknown node id " + std::to_string(id));
    return it->second;
  }
  int edge_index(std::uint64_t id) const {
    auto it = edge_index_.find(id);
    if (it == edge_index_.end()) throw InvalidArgument("unknown hyperedge id " + std::to_string(id));
    return it->second;
  }
  bool has_node_id(NodeId id) const { return node_index_.count(id) != 0; }

  int max_degree() const {
    int d = 0;
    for (int v = 0; v < num_nodes(); ++v) d = std::max(d, degree(v));
    return d;
  }
  int max_rank() const {
    int r = 0;
    for (int e = 0; e < num_edges(); ++e) r = std::max(r, rank(e));
    return r;
  }

  // Nodes sharing a hyperedge with v (distance 2 in the incidence graph), sorted.
  std::vector<int> neighbors(int v) const {
    std::vector<int> out;
    for (int e : incident(v))
      for (int u : pins(e))
        if (u != v) out.push_back(u);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  // True iff the bipartite incidence graph is a forest.
  bool incidence_is_forest() const {
    std::size_t vertices = static_cast<std::size_t>(num_nodes() + num_edges());
    std::size_t edges = 0;
    for (int e = 0; e < num_edges(); ++e) edges += pins(e).size();
    // count components by union-find
    std::vector<std::size_t> parent(vertices);
    for (std::size_t i = 0; i < vertices; ++i) parent[i] = i;
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    std::size_t comps = vertices;
    for (int e = 0; e < num_edges(); ++e)
      for (int v : pins(e)) {
        auto a = find(static_cast<std::size_t>(v));
        auto b = find(static_cast<std::size_t>(num_nodes() + e));
        if (a == b) return false;
        parent[a] = b;
        --comps;
      }
    return edges + comps == vertices;
  }

  // Sub-hypergraph on `keep` nodes with the given edges restricted to them;
  // edges that become empty are dropped. Ids are preserved.
  Hypergraph induced(const std::vector<bool>& keep_node, const std::vector<bool>& keep_edge,
                     std::vector<int>* node_map = nullptr, std::vector<int>* edge_map = nullptr) const {
    Hypergraph out;
    std::vector<int> nm(static_cast<std::size_t>(num_nodes()), -1);
    for (int v = 0; v < num_nodes(); ++v)
      if (keep_node[static_cast<std::size_t>(v)]) nm[static_cast<std::size_t>(v)] = out.add_node(node_id(v));
    std::vector<int> back_nodes;
    for (int v = 0; v < num_nodes(); ++v)
      if (nm[static_cast<std::size_t>(v)] >= 0) back_nodes.push_back(v);
    std::vector<int> back_edges;
    for (int e = 0; e < num_edges(); ++e) {
      if (!keep_edge[static_cast<std::size_t>(e)]) continue;
      std::vector<int> ps;
      for (int v : pins(e))
        if (nm[static_cast<std::size_t>(v)] >= 0) ps.push_back(nm[static_cast<std::size_t>(v)]);
      if (ps.empty()) continue;
      out.add_edge(edge_id(e), std::move(ps));
      back_edges.push_back(e);
    }
    if (node_map) *node_map = std::move(back_nodes);
    if (edge_map) *edge_map = std::move(back_edges);
    return out;
  }

 private:
  std::vector<NodeId> node_ids_;
  std::vector<std::uint64_t> edge_ids_;
  std::vector<std::vector<int>> pins_;
  std::vector<std::vector<int>> incident_;
  std::unordered_map<NodeId, int> node_index_;
  std::unordered_map<std::uint64_t, int> edge_index_;
};

}  // namespace relim::sim
