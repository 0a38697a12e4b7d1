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
#include <cmath>
#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "relim/sim/hypergraph.hpp"
#include "relim/sim/trace.hpp"

namespace relim::sim {

// Simple undirected conflict graph over dense indices.
struct ConflictGraph {
  std::vector<std::vector<int>> adj;

  explicit ConflictGraph(std::size_t n = 0) : adj(n) {}
  std::size_t size() const { return adj.size(); }
  void connect(int a, int b) {
    if (a == b) return;
    adj[static_cast<std::size_t>(a)].push_back(b);
    adj[static_cast<std::size_t>(b)].push_back(a);
  }
  void finalize() {
    for (auto& a : adj) {
      std::sort(a.begin(), a.end());
      a.erase(std::unique(a.begin(), a.end()), a.end());
    }
  }
  std::size_t max_degree() const {
    std::size_t d = 0;
    for (const auto& a : adj) d = std::max(d, a.size());
    return d;
  }
  std::size_t edge_endpoints() const {
    std::size_t s = 0;
    for (const auto& a : adj) s += a.size();
    return s;
  }
};

// Nodes adjacent iff they share a hyperedge (distance 2 in the incidence graph).
inline ConflictGraph node_conflicts(const Hypergraph& h) {
  ConflictGraph g(static_cast<std::size_t>(h.num_nodes()));
  for (int v = 0; v < h.num_nodes(); ++v) g.adj[static_cast<std::size_t>(v)] = h.neighbors(v);
  return g;
}

// Each hyperedge split into pairs of pins by increasing id: (1st,2nd), (3rd,4th), ...
inline ConflictGraph virtual_pair_graph(const Hypergraph& h, const std::vector<std::vector<int>>& edge_pins) {
  ConflictGraph g(static_cast<std::size_t>(h.num_nodes()));
  for (const auto& pins : edge_pins) {
    auto ps = pins;
    std::sort(ps.begin(), ps.end(), [&](int a, int b) { return h.node_id(a) < h.node_id(b); });
    for (std::size_t i = 0; i + 1 < ps.size(); i += 2) g.connect(ps[i], ps[i + 1]);
  }
  g.finalize();
  return g;
}

inline bool is_proper(const ConflictGraph& g, const std::vector<std::uint64_t>& color) {
  for (std::size_t v = 0; v < g.size(); ++v)
    for (int u : g.adj[v])
      if (color[v] == color[static_cast<std::size_t>(u)]) return false;
  return true;
}

namespace detail {

inline bool is_prime(std::uint64_t q) {
  if (q < 2) return false;
  for (std::uint64_t d = 2; d * d <= q; ++d)
    if (q % d == 0) return false;
  return true;
}

inline std::uint64_t next_prime_above(std::uint64_t x) {
  std::uint64_t q = x + 1;
  while (!is_prime(q)) ++q;
  return q;
}

// q^(k+1) >= m without overflow
inline bool power_covers(std::uint64_t q, std::size_t k, std::uint64_t m) {
  unsigned __int128 p = 1;
  for (std::size_t i = 0; i <= k; ++i) {
    p *= q;
    if (p >= m) return true;
  }
  return p >= m;
}

}  // namespace detail

// Iterated Linial color reduction. A color x < q^(k+1) is read as a polynomial
// of degree k over F_q (base-q digits); with q > k*d some point a separates it
// from all neighbors, and (a, p(a)) is the new color. One round per iteration.
// From distinct ids this ends with at most q^2 colors, q the least prime above
// 2d, so at most 16*d^2 colors (Bertrand).
inline std::vector<std::uint64_t> linial_reduce(const ConflictGraph& g, std::vector<std::uint64_t> color,
                                                RoundTrace& trace) {
  const std::size_t d = g.max_degree();
  if (g.size() == 0) return color;
  ensure(is_proper(g, color), "initial coloring is proper");
  if (d == 0) {
    std::fill(color.begin(), color.end(), 0);
    return color;
  }
  std::uint64_t m = *std::max_element(color.begin(), color.end()) + 1;
  while (true) {
    std::uint64_t best_q = 0;
    std::size_t best_k = 0;
    for (std::size_t k = 1; k < 64; ++k) {
      if (best_q != 0 && k * d >= best_q) break;
      std::uint64_t root = static_cast<std::uint64_t>(std::pow(static_cast<long double>(m), 1.0L / (k + 1)));
      while (root > 1 && detail::power_covers(root - 1, k, m)) --root;
      while (!detail::power_covers(root, k, m)) ++root;
      std::uint64_t q = detail::next_prime_above(std::max<std::uint64_t>(k * d, root - 1));
      if (best_q == 0 || q < best_q) {
        best_q = q;
        best_k = k;
      }
    }
    if (best_q * best_q >= m) break;
    const std::uint64_t q = best_q;
    const std::size_t k = best_k;
    auto eval = [&](std::uint64_t x, std::uint64_t a) {
      std::uint64_t res = 0, pw = 1;
      for (std::size_t i = 0; i <= k; ++i) {
        res = (res + (x % q) * pw) % q;
        x /= q;
        pw = pw * a % q;
      }
      return res;
    };
    std::vector<std::uint64_t> next(color.size());
    for (std::size_t v = 0; v < g.size(); ++v) {
      std::uint64_t pick = q;
      for (std::uint64_t a = 0; a < q && pick == q; ++a) {
        std::uint64_t pv = eval(color[v], a);
        bool ok = true;
        for (int u : g.adj[v])
          if (eval(color[static_cast<std::size_t>(u)], a) == pv) ok = false;
        if (ok) pick = a;
      }
      ensure(pick < q, "a separating point exists");
      next[v] = pick * q + eval(color[v], pick);
    }
    color = std::move(next);
    m = q * q;
    trace.tick(1, g.edge_endpoints());
    trace.bump("linial_iterations");
  }
  ensure(is_proper(g, color), "reduced coloring is proper");
  return color;
}

// Removes one color class per round until at most d+1 colors remain.
inline std::vector<std::uint64_t> reduce_to_degree_plus_one(const ConflictGraph& g, std::vector<std::uint64_t> color,
                                                            RoundTrace& trace) {
  if (g.size() == 0) return color;
  const std::uint64_t d = g.max_degree();
  std::uint64_t top = *std::max_element(color.begin(), color.end());
  for (std::uint64_t c = top; c > d; --c) {
    bool any = false;
    for (std::size_t v = 0; v < g.size(); ++v) {
      if (color[v] != c) continue;
      any = true;
      std::vector<bool> used(d + 1, false);
      for (int u : g.adj[v])
        if (color[static_cast<std::size_t>(u)] <= d) used[color[static_cast<std::size_t>(u)]] = true;
      std::uint64_t f = 0;
      while (used[f]) ++f;
      color[v] = f;
    }
    if (any) trace.tick(1, g.edge_endpoints());
  }
  ensure(is_proper(g, color), "degree+1 coloring is proper");
  return color;
}

enum class ColoringTarget { NodesDist2, VirtualGraph };

// Proper coloring of the requested conflict graph, starting from node ids.
// NodesDist2: O((delta r)^2) colors. VirtualGraph: pairs split as in
// virtual_pair_graph, reduced further to max degree + 1 colors.
inline std::vector<std::uint64_t> linial_coloring(const Hypergraph& h, ColoringTarget target, RoundTrace& trace) {
  std::vector<std::uint64_t> ids(static_cast<std::size_t>(h.num_nodes()));
  for (int v = 0; v < h.num_nodes(); ++v) ids[static_cast<std::size_t>(v)] = h.node_id(v);
  if (target == ColoringTarget::NodesDist2) return linial_reduce(node_conflicts(h), ids, trace);
  std::vector<std::vector<int>> edges;
  for (int e = 0; e < h.num_edges(); ++e) edges.push_back(h.pins(e));
  auto g = virtual_pair_graph(h, edges);
  return reduce_to_degree_plus_one(g, linial_reduce(g, ids, trace), trace);
}

// Documented constant: linial_coloring(NodesDist2) uses at most
// kLinialConstant * (delta*r)^2 colors.
inline constexpr std::uint64_t kLinialConstant = 16;

// Greedy ruling set by color classes: an element joins iff no selected element
// lies within distance beta. Same-colored elements are never adjacent, so the
// result is independent, and every element ends within distance beta of it.
inline std::vector<bool> ruling_set(const ConflictGraph& g, std::size_t beta, const std::vector<std::uint64_t>& color,
                                    RoundTrace& trace) {
  ensure(is_proper(g, color), "ruling-set precoloring is proper");
  std::vector<bool> sel(g.size(), false);
  std::vector<std::uint64_t> classes(color.begin(), color.end());
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  auto near_selected = [&](std::size_t s) {
    std::vector<std::size_t> dist(g.size(), SIZE_MAX);
    std::deque<std::size_t> q{s};
    dist[s] = 0;
    while (!q.empty()) {
      auto v = q.front();
      q.pop_front();
      if (sel[v]) return true;
      if (dist[v] == beta) continue;
      for (int u : g.adj[v])
        if (dist[static_cast<std::size_t>(u)] == SIZE_MAX) {
          dist[static_cast<std::size_t>(u)] = dist[v] + 1;
          q.push_back(static_cast<std::size_t>(u));
        }
    }
    return false;
  };
  for (auto c : classes) {
    std::vector<std::size_t> joins;
    for (std::size_t v = 0; v < g.size(); ++v)
      if (color[v] == c && !near_selected(v)) joins.push_back(v);
    for (auto v : joins) sel[v] = true;
    trace.tick(beta, g.edge_endpoints());
  }
  return sel;
}

// Distance of every element to the nearest selected one (SIZE_MAX if none).
inline std::vector<std::size_t> distances_to(const ConflictGraph& g, const std::vector<bool>& sel) {
  std::vector<std::size_t> dist(g.size(), SIZE_MAX);
  std::deque<std::size_t> q;
  for (std::size_t v = 0; v < g.size(); ++v)
    if (sel[v]) {
      dist[v] = 0;
      q.push_back(v);
    }
  while (!q.empty()) {
    auto v = q.front();
    q.pop_front();
    for (int u : g.adj[v])
      if (dist[static_cast<std::size_t>(u)] == SIZE_MAX) {
        dist[static_cast<std::size_t>(u)] = dist[v] + 1;
        q.push_back(static_cast<std::size_t>(u));
      }
  }
  return dist;
}

// Breadth-first verification of an (alpha, beta)-ruling set with alpha = 2.
inline bool is_ruling_set(const ConflictGraph& g, const std::vector<bool>& sel, std::size_t beta) {
  for (std::size_t v = 0; v < g.size(); ++v)
    if (sel[v])
      for (int u : g.adj[v])
        if (sel[static_cast<std::size_t>(u)]) return false;
  for (auto d : distances_to(g, sel))
    if (d > beta) return false;
  return true;
}

}  // namespace relim::sim
