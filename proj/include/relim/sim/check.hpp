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

#include <cstdint>
#include <string>
#include <vector>

#include "relim/sim/hypergraph.hpp"

namespace relim::sim {

enum class SolutionKind { Mis, MatchingMaximal, Coloring, Colorful, UniqueMaximum };

inline SolutionKind parse_solution_kind(const std::string& s) {
  if (s == "mis") return SolutionKind::Mis;
  if (s == "matching-maximal") return SolutionKind::MatchingMaximal;
  if (s == "coloring") return SolutionKind::Coloring;
  if (s == "colorful") return SolutionKind::Colorful;
  if (s == "unique-maximum") return SolutionKind::UniqueMaximum;
  throw InvalidArgument("unknown solution kind '" + s + "'");
}

struct CheckViolation {
  std::string kind;  // independence, maximality, disjointness, monochromatic, ...
  bool on_edge;
  std::uint64_t id;
};

struct CheckReport {
  std::vector<CheckViolation> violations;
  bool ok() const { return violations.empty(); }
};

// `in` is indexed by internal node index (Mis) or edge index (MatchingMaximal).
inline CheckReport check_set(const Hypergraph& h, SolutionKind kind, const std::vector<bool>& in) {
  CheckReport rep;
  if (kind == SolutionKind::Mis) {
    if (in.size() != static_cast<std::size_t>(h.num_nodes())) throw InvalidArgument("node set has wrong size");
    for (int e = 0; e < h.num_edges(); ++e) {
      bool all = true;
      for (int v : h.pins(e)) all = all && in[static_cast<std::size_t>(v)];
      if (all) rep.violations.push_back({"independence", true, h.edge_id(e)});
    }
    for (int v = 0; v < h.num_nodes(); ++v) {
      if (in[static_cast<std::size_t>(v)]) continue;
      bool blocked = false;
      for (int e : h.incident(v)) {
        bool rest = true;
        for (int u : h.pins(e))
          if (u != v && !in[static_cast<std::size_t>(u)]) rest = false;
        blocked = blocked || rest;
      }
      if (!blocked) rep.violations.push_back({"maximality", false, h.node_id(v)});
    }
    return rep;
  }
  if (kind == SolutionKind::MatchingMaximal) {
    if (in.size() != static_cast<std::size_t>(h.num_edges())) throw InvalidArgument("edge set has wrong size");
    std::vector<int> owner(static_cast<std::size_t>(h.num_nodes()), -1);
    for (int e = 0; e < h.num_edges(); ++e) {
      if (!in[static_cast<std::size_t>(e)]) continue;
      bool clash = false;
      for (int v : h.pins(e)) {
        if (owner[static_cast<std::size_t>(v)] >= 0) clash = true;
        owner[static_cast<std::size_t>(v)] = e;
      }
      if (clash) rep.violations.push_back({"disjointness", true, h.edge_id(e)});
    }
    for (int e = 0; e < h.num_edges(); ++e) {
      if (in[static_cast<std::size_t>(e)]) continue;
      bool touches = false;
      for (int v : h.pins(e)) touches = touches || owner[static_cast<std::size_t>(v)] >= 0;
      if (!touches) rep.violations.push_back({"maximality", true, h.edge_id(e)});
    }
    return rep;
  }
  throw InvalidArgument("set value given for a coloring kind");
}

// `color` is indexed by internal node index; colors are positive.
inline CheckReport check_coloring(const Hypergraph& h, SolutionKind kind, const std::vector<std::uint64_t>& color) {
  if (color.size() != static_cast<std::size_t>(h.num_nodes())) throw InvalidArgument("coloring has wrong size");
  for (auto c : color)
    if (c == 0) throw InvalidArgument("colors must be positive");
  CheckReport rep;
  for (int e = 0; e < h.num_edges(); ++e) {
    std::vector<std::uint64_t> cs;
    for (int v : h.pins(e)) cs.push_back(color[static_cast<std::size_t>(v)]);
    std::sort(cs.begin(), cs.end());
    switch (kind) {
      case SolutionKind::Coloring:
        if (cs.size() >= 2 && cs.front() == cs.back()) rep.violations.push_back({"monochromatic", true, h.edge_id(e)});
        break;
      case SolutionKind::Colorful:
        if (std::adjacent_find(cs.begin(), cs.end()) != cs.end())
          rep.violations.push_back({"repeated-color", true, h.edge_id(e)});
        break;
      case SolutionKind::UniqueMaximum:
        if (cs.size() >= 2 && cs[cs.size() - 1] == cs[cs.size() - 2])
          rep.violations.push_back({"shared-maximum", true, h.edge_id(e)});
        break;
      default:
        throw InvalidArgument("coloring value given for a set kind");
    }
  }
  return rep;
}

inline CheckReport check_solution(const Hypergraph& h, SolutionKind kind, const std::vector<bool>& in) {
  return check_set(h, kind, in);
}

inline CheckReport check_solution(const Hypergraph& h, SolutionKind kind, const std::vector<std::uint64_t>& color) {
  return check_coloring(h, kind, color);
}

}  // namespace relim::sim
