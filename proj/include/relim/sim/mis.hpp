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
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "relim/sim/check.hpp"
#include "relim/sim/coloring.hpp"
#include "relim/sim/hypergraph.hpp"
#include "relim/sim/trace.hpp"

namespace relim::sim {

struct MisRun {
  std::vector<bool> in;  // by internal node index
  RoundTrace trace;
};

namespace detail {

enum : char { kActive = 0, kIn = 1, kOut = 2 };

inline std::size_t ceil_half(std::size_t x) { return (x + 1) / 2; }

// Pins of rank-1 hyperedges can never be selected; they leave first.
inline std::vector<char> force_rank_one(const Hypergraph& h, RoundTrace& trace) {
  std::vector<char> st(static_cast<std::size_t>(h.num_nodes()), kActive);
  for (int e = 0; e < h.num_edges(); ++e)
    if (h.rank(e) == 1) {
      st[static_cast<std::size_t>(h.pins(e)[0])] = kOut;
      trace.bump("forced_out");
    }
  return st;
}

inline bool has_pin(const Hypergraph& h, int e, const std::vector<char>& st, char s) {
  for (int v : h.pins(e))
    if (st[static_cast<std::size_t>(v)] == s) return true;
  return false;
}

inline std::size_t count_pins(const Hypergraph& h, int e, const std::vector<char>& st, char s) {
  std::size_t c = 0;
  for (int v : h.pins(e)) c += st[static_cast<std::size_t>(v)] == s ? 1 : 0;
  return c;
}

// The hypergraph left to solve: active nodes, and the hyperedges without a
// decided-out pin restricted to them. Nodes of this residual that end up with
// no hyperedge are set to kIn.
inline Hypergraph residual(const Hypergraph& h, std::vector<char>& st, std::vector<int>& node_map) {
  std::vector<bool> keep_node(static_cast<std::size_t>(h.num_nodes()));
  std::vector<bool> keep_edge(static_cast<std::size_t>(h.num_edges()));
  for (int v = 0; v < h.num_nodes(); ++v) keep_node[static_cast<std::size_t>(v)] = st[static_cast<std::size_t>(v)] == kActive;
  for (int e = 0; e < h.num_edges(); ++e) {
    bool live = !has_pin(h, e, st, kOut);
    keep_edge[static_cast<std::size_t>(e)] = live;
    if (live) ensure(has_pin(h, e, st, kActive), "live hyperedge keeps an undecided pin");
  }
  Hypergraph r = h.induced(keep_node, keep_edge, &node_map);
  for (int v = 0; v < r.num_nodes(); ++v)
    if (r.degree(v) == 0) st[static_cast<std::size_t>(node_map[static_cast<std::size_t>(v)])] = kIn;
  return r;
}

inline std::vector<std::uint64_t> restrict_colors(const std::vector<std::uint64_t>& c, const std::vector<int>& node_map) {
  std::vector<std::uint64_t> out;
  for (int v : node_map) out.push_back(c[static_cast<std::size_t>(v)]);
  return out;
}

inline std::vector<bool> to_set(const std::vector<char>& st) {
  std::vector<bool> in(st.size());
  for (std::size_t i = 0; i < st.size(); ++i) in[i] = st[i] == kIn;
  return in;
}

}  // namespace detail

// Go through the classes of a distance-2 coloring; a node joins unless some
// incident hyperedge already has rank-1 selected pins.
inline MisRun trivial_mis(const Hypergraph& h) {
  MisRun run;
  run.trace.algorithm = "trivial";
  auto st = detail::force_rank_one(h, run.trace);
  auto color = linial_coloring(h, ColoringTarget::NodesDist2, run.trace);
  std::vector<std::uint64_t> classes(color);
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  run.trace.counters["colors"] = classes.size();
  for (auto c : classes) {
    std::vector<int> batch;
    for (int v = 0; v < h.num_nodes(); ++v)
      if (color[static_cast<std::size_t>(v)] == c && st[static_cast<std::size_t>(v)] == detail::kActive) batch.push_back(v);
    std::vector<char> dec;
    for (int v : batch) {
      bool blocked = false;
      for (int e : h.incident(v))
        if (detail::count_pins(h, e, st, detail::kIn) + 1 == static_cast<std::size_t>(h.rank(e))) blocked = true;
      dec.push_back(blocked ? detail::kOut : detail::kIn);
    }
    for (std::size_t i = 0; i < batch.size(); ++i) st[static_cast<std::size_t>(batch[i])] = dec[i];
    run.trace.tick(1, batch.size());
  }
  run.in = detail::to_set(st);
  return run;
}

// Phases over the hypergraph of active nodes; each phase colors a virtual
// graph of pin pairs and processes its color classes.
inline MisRun slow_in_delta_mis(const Hypergraph& h) {
  MisRun run;
  run.trace.algorithm = "slow_in_delta";
  auto st = detail::force_rank_one(h, run.trace);
  auto base = linial_coloring(h, ColoringTarget::NodesDist2, run.trace);
  const std::size_t n = static_cast<std::size_t>(h.num_nodes());
  auto any_active = [&] { return std::find(st.begin(), st.end(), detail::kActive) != st.end(); };
  while (any_active()) {
    ++run.trace.phases;
    // H': hyperedges without an out pin, restricted to active pins
    std::vector<int> rel;
    std::vector<std::vector<int>> act;
    std::vector<std::size_t> prev(static_cast<std::size_t>(h.num_edges()), 0);
    for (int e = 0; e < h.num_edges(); ++e) {
      if (detail::has_pin(h, e, st, detail::kOut)) continue;
      std::vector<int> a;
      for (int v : h.pins(e))
        if (st[static_cast<std::size_t>(v)] == detail::kActive) a.push_back(v);
      ensure(!a.empty(), "hyperedge not fully selected");
      rel.push_back(e);
      act.push_back(a);
      prev[static_cast<std::size_t>(e)] = a.size();
    }
    std::vector<std::vector<int>> rel_of(n);
    for (std::size_t i = 0; i < rel.size(); ++i)
      for (int v : act[i]) rel_of[static_cast<std::size_t>(v)].push_back(static_cast<int>(i));
    run.trace.tick(1);
    auto g = virtual_pair_graph(h, act);
    RoundTrace sub;
    auto color = reduce_to_degree_plus_one(g, linial_reduce(g, base, sub), sub);
    run.trace.absorb(sub, "virtual_coloring");
    ensure(is_proper(g, color), "virtual-graph coloring is proper");
    for (const auto& a : act) {
      std::map<std::uint64_t, std::size_t> same;
      for (int v : a) ++same[color[static_cast<std::size_t>(v)]];
      for (auto [c, k] : same) ensure(k <= detail::ceil_half(a.size()), "at most ceil(rank/2) pins share a color");
    }
    std::uint64_t top = 0;
    for (std::size_t v = 0; v < n; ++v)
      if (st[v] == detail::kActive) top = std::max(top, color[v]);
    for (std::uint64_t c = 0; c <= top; ++c) {
      auto snap = st;
      std::size_t sent = 0;
      for (std::size_t v = 0; v < n; ++v) {
        if (snap[v] != detail::kActive || color[v] != c) continue;
        bool out = false, join = true;
        for (int i : rel_of[v]) {
          const auto& a = act[static_cast<std::size_t>(i)];
          std::size_t in = 0;
          bool other = false;
          for (int u : a) {
            if (snap[static_cast<std::size_t>(u)] == detail::kIn) ++in;
            if (u != static_cast<int>(v) && color[static_cast<std::size_t>(u)] != c &&
                snap[static_cast<std::size_t>(u)] != detail::kIn)
              other = true;
          }
          if (in + 1 == a.size()) out = true;
          if (!other) join = false;
          sent += a.size();
        }
        if (out)
          st[v] = detail::kOut;
        else if (join)
          st[v] = detail::kIn;
      }
      run.trace.tick(1, sent);
    }
    for (std::size_t v = 0; v < n; ++v) {
      if (st[v] != detail::kActive) continue;
      bool halved = false;
      for (int i : rel_of[v]) {
        const auto& a = act[static_cast<std::size_t>(i)];
        std::size_t now = 0;
        for (int u : a) now += st[static_cast<std::size_t>(u)] == detail::kActive ? 1 : 0;
        if (now <= detail::ceil_half(a.size())) halved = true;
      }
      ensure(halved, "an active node has an incident hyperedge whose active rank halved");
    }
    run.trace.event("phase", std::to_string(run.trace.phases));
  }
  run.in = detail::to_set(st);
  return run;
}

// Maximum degree <= 2. `precolor` must be proper on node conflicts.
inline MisRun delta2_mis(const Hypergraph& h, const std::vector<std::uint64_t>& precolor) {
  if (h.max_degree() > 2) throw InvalidArgument("delta2_mis needs maximum degree at most 2");
  if (precolor.size() != static_cast<std::size_t>(h.num_nodes())) throw InvalidArgument("precoloring has wrong size");
  MisRun run;
  run.trace.algorithm = "delta2";
  auto st = detail::force_rank_one(h, run.trace);
  std::vector<int> nm;
  Hypergraph r = detail::residual(h, st, nm);
  auto pc = detail::restrict_colors(precolor, nm);
  const std::size_t nv = static_cast<std::size_t>(r.num_edges());  // vertices of G
  // G-edges are degree-2 nodes; one representative per vertex pair
  std::vector<int> gedges;
  std::map<std::pair<int, int>, int> rep;
  for (int v = 0; v < r.num_nodes(); ++v) {
    if (r.degree(v) != 2) continue;
    gedges.push_back(v);
    int a = r.incident(v)[0], b = r.incident(v)[1];
    auto key = std::minmax(a, b);
    auto it = rep.find(key);
    if (it == rep.end() || r.node_id(v) < r.node_id(it->second)) rep[key] = v;
  }
  std::vector<int> kept;
  for (auto& [k, v] : rep) kept.push_back(v);
  std::sort(kept.begin(), kept.end());
  auto other_end = [&](int v, int x) { return r.incident(v)[0] == x ? r.incident(v)[1] : r.incident(v)[0]; };
  // line graph of the simple G
  ConflictGraph lg(kept.size());
  std::vector<std::vector<int>> kept_at(nv);
  for (std::size_t i = 0; i < kept.size(); ++i)
    for (int x : r.incident(kept[i])) kept_at[static_cast<std::size_t>(x)].push_back(static_cast<int>(i));
  for (const auto& at : kept_at)
    for (std::size_t a = 0; a < at.size(); ++a)
      for (std::size_t b = a + 1; b < at.size(); ++b) lg.connect(at[a], at[b]);
  lg.finalize();
  std::vector<std::uint64_t> lc;
  for (int v : kept) lc.push_back(pc[static_cast<std::size_t>(v)]);
  RoundTrace rs_trace;
  auto rs = ruling_set(lg, 2, lc, rs_trace);
  run.trace.absorb(rs_trace, "ruling_set");
  ensure(is_ruling_set(lg, rs, 2), "(2,2)-ruling edge set");
  // marks on G-vertices: distance to an endpoint of a ruling edge
  auto marks = [&]() {
    std::vector<std::size_t> m(nv, SIZE_MAX);
    std::deque<int> q;
    for (std::size_t i = 0; i < kept.size(); ++i)
      if (rs[i])
        for (int x : r.incident(kept[i]))
          if (m[static_cast<std::size_t>(x)] != 0) {
            m[static_cast<std::size_t>(x)] = 0;
            q.push_back(x);
          }
    while (!q.empty()) {
      int x = q.front();
      q.pop_front();
      for (int i : kept_at[static_cast<std::size_t>(x)]) {
        int y = other_end(kept[static_cast<std::size_t>(i)], x);
        if (m[static_cast<std::size_t>(y)] == SIZE_MAX) {
          m[static_cast<std::size_t>(y)] = m[static_cast<std::size_t>(x)] + 1;
          q.push_back(y);
        }
      }
    }
    return m;
  };
  auto mark = marks();
  run.trace.tick(2);
  for (std::size_t x = 0; x < nv; ++x)
    if (!kept_at[x].empty()) ensure(mark[x] <= 2, "every G-vertex within distance 2 of the ruling set");
  // 2-marked vertices propose to a 1-marked neighbor, smallest node id first
  std::map<int, int> best_proposal;  // 1-marked vertex -> kept index
  std::size_t twos = 0;
  for (std::size_t x = 0; x < nv; ++x) {
    if (kept_at[x].empty() || mark[x] != 2) continue;
    ++twos;
    int pick = -1;
    for (int i : kept_at[x]) {
      int y = other_end(kept[static_cast<std::size_t>(i)], static_cast<int>(x));
      ensure(mark[static_cast<std::size_t>(y)] == 1, "2-marked vertices only see 1-marked neighbors");
      if (pick < 0 || r.node_id(kept[static_cast<std::size_t>(i)]) < r.node_id(kept[static_cast<std::size_t>(pick)])) pick = i;
    }
    int y = other_end(kept[static_cast<std::size_t>(pick)], static_cast<int>(x));
    auto it = best_proposal.find(y);
    if (it == best_proposal.end() ||
        r.node_id(kept[static_cast<std::size_t>(pick)]) < r.node_id(kept[static_cast<std::size_t>(it->second)]))
      best_proposal[y] = pick;
  }
  run.trace.bump("two_marked", twos);
  for (auto& [y, i] : best_proposal) rs[static_cast<std::size_t>(i)] = true;
  run.trace.tick(3);
  ensure(is_ruling_set(lg, rs, 2), "still a (2,2)-ruling edge set after proposals");
  mark = marks();
  for (std::size_t x = 0; x < nv; ++x)
    if (!kept_at[x].empty()) ensure(mark[x] <= 1, "marks are 0 or 1 after proposals");
  // S over all G-edges, parallel copies included
  std::vector<bool> ruling_node(static_cast<std::size_t>(r.num_nodes()), false);
  for (std::size_t i = 0; i < kept.size(); ++i)
    if (rs[i]) ruling_node[static_cast<std::size_t>(kept[i])] = true;
  std::vector<std::vector<int>> at(nv);
  for (int v : gedges)
    for (int x : r.incident(v)) at[static_cast<std::size_t>(x)].push_back(v);
  std::vector<bool> in_s(static_cast<std::size_t>(r.num_nodes()), false);
  for (int v : gedges) in_s[static_cast<std::size_t>(v)] = !ruling_node[static_cast<std::size_t>(v)];
  for (std::size_t x = 0; x < nv; ++x) {
    if (kept_at[x].empty() || mark[x] != 1) continue;
    int pick = -1;
    for (int v : at[x])
      if (mark[static_cast<std::size_t>(other_end(v, static_cast<int>(x)))] == 0 &&
          (pick < 0 || r.node_id(v) < r.node_id(pick)))
        pick = v;
    ensure(pick >= 0, "a 1-marked vertex has a 0-marked neighbor");
    in_s[static_cast<std::size_t>(pick)] = false;
  }
  auto non_s = [&](int x) {
    std::size_t c = 0;
    for (int v : at[static_cast<std::size_t>(x)]) c += in_s[static_cast<std::size_t>(v)] ? 0 : 1;
    return c;
  };
  std::vector<int> add;
  for (int v : gedges)
    if (ruling_node[static_cast<std::size_t>(v)] && non_s(r.incident(v)[0]) >= 2 && non_s(r.incident(v)[1]) >= 2)
      add.push_back(v);
  for (int v : add) in_s[static_cast<std::size_t>(v)] = true;
  run.trace.tick(3);
  // the claim, verbatim
  for (std::size_t x = 0; x < nv; ++x)
    if (!at[x].empty()) ensure(non_s(static_cast<int>(x)) >= 1, "each vertex u has at most deg(u)-1 incident S-edges");
  for (int v : gedges) {
    if (in_s[static_cast<std::size_t>(v)]) continue;
    bool ok = non_s(r.incident(v)[0]) == 1 || non_s(r.incident(v)[1]) == 1;
    ensure(ok, "each non-S edge has an endpoint with all other incident edges in S");
  }
  run.trace.bump("claim_checks");
  // back to H: degree-2 nodes follow S, degree-1 nodes join unless they
  // would complete a hyperedge made only of such nodes
  for (int v : gedges) st[static_cast<std::size_t>(nm[static_cast<std::size_t>(v)])] = in_s[static_cast<std::size_t>(v)] ? detail::kIn : detail::kOut;
  for (int x = 0; x < r.num_edges(); ++x) {
    bool only_leaves = true;
    int smallest = -1;
    for (int v : r.pins(x)) {
      if (r.degree(v) != 1) {
        only_leaves = false;
        continue;
      }
      if (smallest < 0 || r.node_id(v) < r.node_id(smallest)) smallest = v;
    }
    for (int v : r.pins(x))
      if (r.degree(v) == 1) st[static_cast<std::size_t>(nm[static_cast<std::size_t>(v)])] = detail::kIn;
    if (only_leaves) st[static_cast<std::size_t>(nm[static_cast<std::size_t>(smallest)])] = detail::kOut;
  }
  run.trace.tick(1);
  run.in = detail::to_set(st);
  return run;
}

namespace detail {

inline std::vector<bool> indep_r_solve(const Hypergraph& h, std::size_t delta, const std::vector<std::uint64_t>& precolor,
                                       RoundTrace& trace, std::size_t depth) {
  trace.raise("depth", depth);
  if (delta <= 2) {
    auto run = delta2_mis(h, precolor);
    trace.absorb(run.trace, "delta2");
    return run.in;
  }
  auto st = force_rank_one(h, trace);
  std::vector<int> nm;
  Hypergraph r = residual(h, st, nm);
  auto pc = restrict_colors(precolor, nm);
  const std::size_t n = static_cast<std::size_t>(r.num_nodes());
  auto conf = node_conflicts(r);
  RoundTrace rs_trace;
  auto ruling = ruling_set(conf, delta + 4, pc, rs_trace);
  trace.absorb(rs_trace, "ruling_set");
  ensure(is_ruling_set(conf, ruling, delta + 4), "(2, delta+4)-ruling set");
  auto dist = distances_to(conf, ruling);
  std::vector<std::size_t> mark(static_cast<std::size_t>(r.num_edges()));
  for (int e = 0; e < r.num_edges(); ++e) {
    std::size_t m = SIZE_MAX;
    for (int v : r.pins(e)) m = std::min(m, dist[static_cast<std::size_t>(v)]);
    ensure(m <= delta + 4, "hyperedge marks lie in 0..delta+4");
    mark[static_cast<std::size_t>(e)] = m;
    trace.raise("mark_max", m);
  }
  trace.tick(delta + 4);
  std::vector<char> s(n);
  for (std::size_t v = 0; v < n; ++v) s[v] = st[static_cast<std::size_t>(nm[v])];
  for (std::size_t i = delta + 5; i-- > 0;) {
    trace.bump("loop_iterations");
    if (depth == 0) ++trace.phases;
    std::vector<bool> in_si(n, false), in_x(n, false);
    for (std::size_t v = 0; v < n; ++v) {
      if (s[v] != kActive) continue;
      bool some = false, all = true;
      for (int e : r.incident(static_cast<int>(v))) {
        bool mi = mark[static_cast<std::size_t>(e)] == i;
        some = some || mi;
        all = all && mi;
      }
      in_si[v] = some;
      in_x[v] = some && all;
    }
    auto relevant = [&](int e) { return mark[static_cast<std::size_t>(e)] == i && !has_pin(r, e, s, kOut); };
    if (i == 0) {
      // ruling nodes decide first: out iff some hyperedge would otherwise fill
      // up with selected and X pins
      std::vector<std::size_t> decide;
      for (std::size_t w = 0; w < n; ++w) {
        if (!ruling[w] || s[w] != kActive) continue;
        ensure(in_x[w], "an active ruling node has only 0-marked hyperedges");
        bool fills = false;
        for (int e : r.incident(static_cast<int>(w))) {
          if (!relevant(e)) continue;
          bool rest = true;
          for (int u : r.pins(e)) {
            if (u == static_cast<int>(w)) continue;
            ensure(!ruling[static_cast<std::size_t>(u)], "one ruling node per 0-marked hyperedge");
            if (s[static_cast<std::size_t>(u)] != kIn && !in_x[static_cast<std::size_t>(u)]) rest = false;
          }
          fills = fills || rest;
        }
        decide.push_back(w);
        s[w] = fills ? kOut : kIn;
      }
      trace.tick(1);
      for (auto w : decide) {
        in_x[w] = false;
        in_si[w] = false;
      }
    }
    // H^i on S^i \ X
    std::vector<bool> keep_node(n, false), keep_edge(static_cast<std::size_t>(r.num_edges()), false);
    for (std::size_t v = 0; v < n; ++v) keep_node[v] = in_si[v] && !in_x[v];
    for (int e = 0; e < r.num_edges(); ++e) {
      if (!relevant(e)) continue;
      bool any = false;
      for (int u : r.pins(e)) any = any || keep_node[static_cast<std::size_t>(u)];
      ensure(any, "every relevant hyperedge keeps a pin outside X");
      keep_edge[static_cast<std::size_t>(e)] = true;
    }
    std::vector<int> sub_map;
    Hypergraph hi = r.induced(keep_node, keep_edge, &sub_map);
    ensure(static_cast<std::size_t>(hi.max_degree()) <= delta - 1, "H^i has maximum degree at most delta-1");
    trace.raise("h_degree_max", static_cast<std::size_t>(hi.max_degree()));
    std::vector<bool> sub_in;
    if (hi.num_nodes() > 0) sub_in = indep_r_solve(hi, delta - 1, restrict_colors(pc, sub_map), trace, depth + 1);
    for (std::size_t v = 0; v < n; ++v)
      if (in_x[v]) s[v] = kIn;
    for (std::size_t j = 0; j < sub_map.size(); ++j) s[static_cast<std::size_t>(sub_map[j])] = sub_in[j] ? kIn : kOut;
    trace.tick(1);
    // active nodes next to a saturated hyperedge leave
    std::vector<std::size_t> leave;
    for (std::size_t v = 0; v < n; ++v) {
      if (s[v] != kActive) continue;
      for (int e : r.incident(static_cast<int>(v)))
        if (count_pins(r, e, s, kIn) + 1 == static_cast<std::size_t>(r.rank(e))) {
          leave.push_back(v);
          break;
        }
    }
    for (auto v : leave) s[v] = kOut;
    trace.tick(1);
  }
  for (std::size_t v = 0; v < n; ++v) ensure(s[v] != kActive, "every node decided after the loop");
  for (std::size_t v = 0; v < n; ++v) st[static_cast<std::size_t>(nm[v])] = s[v];
  return to_set(st);
}

}  // namespace detail

// Recursion on the degree bound with delta2_mis at the base.
inline MisRun indep_r_mis(const Hypergraph& h, const std::vector<std::uint64_t>& precolor) {
  if (precolor.size() != static_cast<std::size_t>(h.num_nodes())) throw InvalidArgument("precoloring has wrong size");
  MisRun run;
  run.trace.algorithm = "indep_r";
  std::size_t delta = std::max<std::size_t>(2, static_cast<std::size_t>(h.max_degree()));
  run.in = detail::indep_r_solve(h, delta, precolor, run.trace, 0);
  return run;
}

inline MisRun indep_r_mis(const Hypergraph& h) {
  RoundTrace pre;
  auto c = linial_coloring(h, ColoringTarget::NodesDist2, pre);
  auto run = indep_r_mis(h, c);
  run.trace.absorb(pre, "linial");
  return run;
}

inline MisRun delta2_mis(const Hypergraph& h) {
  RoundTrace pre;
  auto c = linial_coloring(h, ColoringTarget::NodesDist2, pre);
  auto run = delta2_mis(h, c);
  run.trace.absorb(pre, "linial");
  return run;
}

// Greedy over a unique-maximum coloring, smallest class first.
inline MisRun um_greedy_mis(const Hypergraph& h, const std::vector<std::uint64_t>& um) {
  if (!check_coloring(h, SolutionKind::UniqueMaximum, um).ok())
    throw InvalidArgument("coloring fails the unique-maximum check");
  MisRun run;
  run.trace.algorithm = "um_greedy";
  auto st = detail::force_rank_one(h, run.trace);
  std::vector<std::uint64_t> classes(um);
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  std::vector<std::size_t> decided(static_cast<std::size_t>(h.num_nodes()), 0);
  std::size_t round = 0;
  for (auto c : classes) {
    ++round;
    std::vector<int> batch;
    for (int v = 0; v < h.num_nodes(); ++v)
      if (um[static_cast<std::size_t>(v)] == c) batch.push_back(v);
    std::vector<char> dec;
    for (int v : batch) {
      if (st[static_cast<std::size_t>(v)] != detail::kActive) {
        dec.push_back(st[static_cast<std::size_t>(v)]);
        continue;
      }
      bool blocked = false;
      for (int e : h.incident(v))
        if (detail::count_pins(h, e, st, detail::kIn) + 1 == static_cast<std::size_t>(h.rank(e))) blocked = true;
      dec.push_back(blocked ? detail::kOut : detail::kIn);
    }
    for (std::size_t i = 0; i < batch.size(); ++i) {
      st[static_cast<std::size_t>(batch[i])] = dec[i];
      decided[static_cast<std::size_t>(batch[i])] = round;
    }
    run.trace.tick(1, batch.size());
  }
  for (int e = 0; e < h.num_edges(); ++e) {
    if (h.rank(e) < 2) continue;
    int top = h.pins(e)[0];
    for (int v : h.pins(e))
      if (um[static_cast<std::size_t>(v)] > um[static_cast<std::size_t>(top)]) top = v;
    for (int v : h.pins(e))
      if (v != top) ensure(decided[static_cast<std::size_t>(v)] < decided[static_cast<std::size_t>(top)], "the maximum of each hyperedge decides last");
  }
  run.in = detail::to_set(st);
  return run;
}

using MisSolver = std::function<MisRun(const Hypergraph&)>;

struct UmColoringRun {
  std::vector<std::uint64_t> color;  // 1-based classes, by internal node index
  std::size_t classes = 0;
  RoundTrace trace;
};

// Repeatedly: solve MIS on the residual, give the selected nodes the next
// class, remove them and every hyperedge left with rank at most 1.
inline UmColoringRun um_coloring_iterated(const Hypergraph& h, const MisSolver& solver) {
  UmColoringRun out;
  out.trace.algorithm = "um_coloring_iterated";
  const std::size_t n = static_cast<std::size_t>(h.num_nodes());
  out.color.assign(n, 0);
  std::vector<bool> keep_node(n, true);
  auto build = [&](std::vector<int>& map) {
    std::vector<bool> keep_edge(static_cast<std::size_t>(h.num_edges()), false);
    for (int e = 0; e < h.num_edges(); ++e) {
      std::size_t left = 0;
      for (int v : h.pins(e)) left += keep_node[static_cast<std::size_t>(v)] ? 1 : 0;
      keep_edge[static_cast<std::size_t>(e)] = left >= 2;
    }
    return h.induced(keep_node, keep_edge, &map);
  };
  std::vector<int> map;
  Hypergraph res = build(map);
  std::uint64_t cls = 0;
  while (res.num_nodes() > 0) {
    ++cls;
    auto run = solver(res);
    out.trace.absorb(run.trace, "mis");
    auto rep = check_set(res, SolutionKind::Mis, run.in);
    ensure(rep.ok(), "the MIS solver returned a valid MIS");
    std::vector<int> before(n, -1);
    for (int v = 0; v < res.num_nodes(); ++v) before[static_cast<std::size_t>(map[static_cast<std::size_t>(v)])] = res.degree(v);
    for (int v = 0; v < res.num_nodes(); ++v)
      if (run.in[static_cast<std::size_t>(v)]) {
        out.color[static_cast<std::size_t>(map[static_cast<std::size_t>(v)])] = cls;
        keep_node[static_cast<std::size_t>(map[static_cast<std::size_t>(v)])] = false;
      }
    res = build(map);
    for (int v = 0; v < res.num_nodes(); ++v)
      ensure(res.degree(v) < before[static_cast<std::size_t>(map[static_cast<std::size_t>(v)])],
             "the residual degree of every remaining node decreases");
    out.trace.bump("iterations");
  }
  out.classes = cls;
  out.trace.phases = cls;
  return out;
}

}  // namespace relim::sim
