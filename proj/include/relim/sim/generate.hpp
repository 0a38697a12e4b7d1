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
#include <deque>
#include <random>
#include <string>
#include <vector>

#include "relim/sim/hypergraph.hpp"

namespace relim::sim {

inline Hypergraph single_edge(std::size_t r) {
  if (r < 1) throw InvalidArgument("single-edge needs r >= 1");
  Hypergraph h;
  std::vector<int> pins;
  for (std::size_t i = 1; i <= r; ++i) pins.push_back(h.add_node(i));
  h.add_edge(1, pins);
  return h;
}

// Every node has degree delta except leaves, every edge has rank r, and two
// edges share at most one node. `depth` counts edge layers below the root.
inline Hypergraph linear_hypertree(std::size_t delta, std::size_t r, std::size_t depth, std::size_t max_nodes = 0) {
  if (delta < 1 || r < 2) throw InvalidArgument("linear hypertree needs delta >= 1 and r >= 2");
  Hypergraph h;
  std::deque<std::pair<int, std::size_t>> queue;  // node, layer
  queue.emplace_back(h.add_node(1), 0);
  std::uint64_t next_edge = 1;
  while (!queue.empty()) {
    auto [v, layer] = queue.front();
    queue.pop_front();
    if (layer >= depth) continue;
    while (static_cast<std::size_t>(h.degree(v)) < delta) {
      if (max_nodes && static_cast<std::size_t>(h.num_nodes()) + r - 1 > max_nodes) return h;
      std::vector<int> pins{v};
      for (std::size_t i = 1; i < r; ++i) {
        int u = h.add_node(static_cast<NodeId>(h.num_nodes() + 1));
        pins.push_back(u);
        queue.emplace_back(u, layer + 1);
      }
      h.add_edge(next_edge++, pins);
    }
  }
  return h;
}

// Random hypergraph with n nodes, degree at most delta and ranks in [2, r]
// (rank 1 only if r == 1). Deterministic per seed.
inline Hypergraph random_hypergraph(std::size_t n, std::size_t delta, std::size_t r, std::uint64_t seed) {
  if (n < 1 || delta < 1 || r < 1) throw InvalidArgument("random hypergraph needs n, delta, r >= 1");
  std::mt19937_64 rng(seed);
  Hypergraph h;
  for (std::size_t i = 1; i <= n; ++i) h.add_node(i);
  const std::size_t lo = std::min<std::size_t>(2, r);
  std::uniform_int_distribution<std::size_t> rank_dist(lo, r);
  const std::size_t target = n * delta / ((lo + r) / 2 == 0 ? 1 : (lo + r) / 2);
  std::uint64_t next_edge = 1;
  std::size_t failures = 0;
  while (next_edge <= target && failures < 32) {
    std::vector<int> open;
    for (int v = 0; v < h.num_nodes(); ++v)
      if (static_cast<std::size_t>(h.degree(v)) < delta) open.push_back(v);
    std::size_t k = std::min(rank_dist(rng), open.size());
    if (k < lo) break;
    std::shuffle(open.begin(), open.end(), rng);
    open.resize(k);
    std::sort(open.begin(), open.end());
    // avoid exact duplicates so the instance stays simple
    bool dup = false;
    for (int e : h.incident(open[0]))
      if (static_cast<std::size_t>(h.rank(e)) == k) {
        auto p = h.pins(e);
        std::sort(p.begin(), p.end());
        if (p == open) dup = true;
      }
    if (dup) {
      ++failures;
      continue;
    }
    h.add_edge(next_edge++, open);
  }
  return h;
}

}  // namespace relim::sim
