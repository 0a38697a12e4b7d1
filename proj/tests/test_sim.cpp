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
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "relim/sim/check.hpp"
#include "relim/sim/coloring.hpp"
#include "relim/sim/generate.hpp"
#include "relim/sim/mis.hpp"
#include "relim/sim/runner.hpp"

namespace {

using namespace relim;
using namespace relim::sim;

// Reference MIS test written against the definition only.
bool naive_is_mis(const Hypergraph& h, const std::vector<bool>& in) {
  for (int e = 0; e < h.num_edges(); ++e) {
    bool all = true;
    for (int v : h.pins(e)) all = all && in[static_cast<std::size_t>(v)];
    if (all) return false;
  }
  for (int v = 0; v < h.num_nodes(); ++v) {
    if (in[static_cast<std::size_t>(v)]) continue;
    bool blocked = false;
    for (int e : h.incident(v)) {
      bool others = true;
      for (int u : h.pins(e))
        if (u != v) others = others && in[static_cast<std::size_t>(u)];
      blocked = blocked || others;
    }
    if (!blocked) return false;
  }
  return true;
}

Hypergraph from_lists(std::size_t n, const std::vector<std::vector<int>>& edges) {
  Hypergraph h;
  for (std::size_t i = 1; i <= n; ++i) h.add_node(i);
  std::uint64_t id = 1;
  for (const auto& e : edges) {
    std::vector<int> pins;
    for (int v : e) pins.push_back(v - 1);
    h.add_edge(id++, pins);
  }
  return h;
}

TEST(Generate, SingleEdge) {
  Hypergraph h = single_edge(4);
  EXPECT_EQ(h.num_nodes(), 4);
  EXPECT_EQ(h.num_edges(), 1);
  EXPECT_EQ(h.max_rank(), 4);
}

TEST(Generate, LinearHypertree) {
  Hypergraph h = linear_hypertree(3, 4, 2);
  EXPECT_TRUE(h.incidence_is_forest());
  EXPECT_EQ(h.max_degree(), 3);
  EXPECT_EQ(h.max_rank(), 4);
  for (int e = 0; e < h.num_edges(); ++e) EXPECT_EQ(h.rank(e), 4);
  EXPECT_EQ(h.degree(0), 3);
  Hypergraph small = linear_hypertree(3, 4, 5, 30);
  EXPECT_LE(small.num_nodes(), 30);
}

TEST(Generate, RandomRespectsBoundsAndSeed) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Hypergraph h = random_hypergraph(80, 3, 5, seed);
    EXPECT_EQ(h.num_nodes(), 80);
    EXPECT_LE(h.max_degree(), 3);
    EXPECT_LE(h.max_rank(), 5);
    Hypergraph again = random_hypergraph(80, 3, 5, seed);
    ASSERT_EQ(h.num_edges(), again.num_edges());
    for (int e = 0; e < h.num_edges(); ++e) EXPECT_EQ(h.pins(e), again.pins(e));
  }
}

TEST(Check, MisViolations) {
  Hypergraph h = from_lists(3, {{1, 2, 3}});
  EXPECT_FALSE(check_set(h, SolutionKind::Mis, {true, true, true}).ok());
  EXPECT_FALSE(check_set(h, SolutionKind::Mis, {true, false, false}).ok());
  EXPECT_TRUE(check_set(h, SolutionKind::Mis, {true, true, false}).ok());
  auto rep = check_set(h, SolutionKind::Mis, {false, false, false});
  EXPECT_EQ(rep.violations.size(), 3u);
  EXPECT_EQ(rep.violations[0].kind, "maximality");
}

TEST(Check, Matching) {
  Hypergraph h = from_lists(4, {{1, 2}, {2, 3}, {3, 4}});
  EXPECT_TRUE(check_set(h, SolutionKind::MatchingMaximal, {true, false, true}).ok());
  EXPECT_FALSE(check_set(h, SolutionKind::MatchingMaximal, {true, true, false}).ok());
  EXPECT_FALSE(check_set(h, SolutionKind::MatchingMaximal, {true, false, false}).ok());
}

TEST(Check, Colorings) {
  Hypergraph h = from_lists(3, {{1, 2, 3}});
  EXPECT_TRUE(check_coloring(h, SolutionKind::Coloring, {1, 1, 2}).ok());
  EXPECT_FALSE(check_coloring(h, SolutionKind::Coloring, {1, 1, 1}).ok());
  EXPECT_FALSE(check_coloring(h, SolutionKind::Colorful, {1, 1, 2}).ok());
  EXPECT_TRUE(check_coloring(h, SolutionKind::Colorful, {1, 3, 2}).ok());
  EXPECT_TRUE(check_coloring(h, SolutionKind::UniqueMaximum, {1, 1, 2}).ok());
  EXPECT_FALSE(check_coloring(h, SolutionKind::UniqueMaximum, {2, 1, 2}).ok());
  EXPECT_THROW(check_coloring(h, SolutionKind::Coloring, {0, 1, 2}), InvalidArgument);
}

TEST(Linial, ProperAndBoundedPalette) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    Hypergraph h = random_hypergraph(150, 3, 4, seed);
    RoundTrace t;
    ConflictGraph g = node_conflicts(h);
    std::vector<std::uint64_t> ids;
    for (int v = 0; v < h.num_nodes(); ++v) ids.push_back(h.node_id(v) * 1000003);  // spread-out ids
    auto c = linial_reduce(g, ids, t);
    EXPECT_TRUE(is_proper(g, c));
    const std::uint64_t d = g.max_degree();
    std::set<std::uint64_t> palette(c.begin(), c.end());
    EXPECT_LE(*palette.rbegin(), kLinialConstant * std::max<std::uint64_t>(1, d) * std::max<std::uint64_t>(1, d));
    auto c2 = reduce_to_degree_plus_one(g, c, t);
    EXPECT_TRUE(is_proper(g, c2));
    EXPECT_LE(*std::max_element(c2.begin(), c2.end()), d + 1);
  }
}

TEST(Linial, PrimeHelpers) {
  EXPECT_TRUE(detail::is_prime(2));
  EXPECT_FALSE(detail::is_prime(91));
  EXPECT_EQ(detail::next_prime_above(13), 17u);
  // q^(k+1) >= m
  EXPECT_TRUE(detail::power_covers(3, 2, 27));
  EXPECT_FALSE(detail::power_covers(3, 2, 28));
}

TEST(RulingSet, DominationAndIndependence) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Hypergraph h = random_hypergraph(120, 3, 3, seed);
    ConflictGraph g = node_conflicts(h);
    RoundTrace t;
    auto c = linial_coloring(h, ColoringTarget::NodesDist2, t);
    for (std::size_t beta : {1, 2, 3}) {
      auto sel = ruling_set(g, beta, c, t);
      EXPECT_TRUE(is_ruling_set(g, sel, beta));
      auto dist = distances_to(g, sel);
      for (auto x : dist) EXPECT_LE(x, beta);
    }
  }
}

TEST(Algorithms, RankOneEdgesForceOut) {
  Hypergraph h = from_lists(3, {{1}, {1, 2}, {2, 3}});
  for (const char* alg : {"trivial", "slowdelta", "delta2", "indep-r", "um-greedy"}) {
    AlgorithmRun run = run_algorithm(alg, h);
    EXPECT_FALSE(run.in[0]) << alg;
    EXPECT_TRUE(run.check.ok()) << alg;
  }
}

TEST(Algorithms, SlowDeltaOnePhaseForMatchingsOfRankTwo) {
  Hypergraph h = from_lists(6, {{1, 2}, {3, 4}, {5, 6}});
  MisRun run = slow_in_delta_mis(h);
  EXPECT_EQ(run.trace.phases, 1u);
  EXPECT_TRUE(naive_is_mis(h, run.in));
}

TEST(Algorithms, Delta2HandlesParallelEdgesAndLeaves) {
  std::vector<Hypergraph> cases{
      from_lists(3, {{1, 2, 3}, {1, 2, 3}}),
      from_lists(4, {{1, 2}, {2, 3}, {3, 4}}),
      from_lists(5, {{1, 2, 3}, {3, 4, 5}, {5, 1}}),
      from_lists(4, {{1, 2}, {1, 2}, {3, 4}, {3, 4}}),
      from_lists(6, {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 1}}),
      from_lists(2, {{1, 2}}),
  };
  for (const auto& h : cases) {
    MisRun run = delta2_mis(h);
    EXPECT_TRUE(naive_is_mis(h, run.in));
    EXPECT_GT(run.trace.counters.at("claim_checks"), 0u);
  }
}

TEST(Algorithms, UmGreedyRejectsNonUniqueMaximum) {
  Hypergraph h = from_lists(3, {{1, 2, 3}});
  EXPECT_THROW(um_greedy_mis(h, {2, 1, 2}), InvalidArgument);
}

TEST(Algorithms, Deterministic) {
  Hypergraph h = random_hypergraph(100, 3, 4, 5);
  for (const char* alg : {"trivial", "slowdelta", "indep-r", "um-greedy"}) {
    auto a = run_algorithm(alg, h), b = run_algorithm(alg, h);
    EXPECT_EQ(a.in, b.in);
    EXPECT_EQ(a.trace.rounds, b.trace.rounds);
  }
}

TEST(Algorithms, LinearHypertrees) {
  for (std::size_t delta : {2, 3})
    for (std::size_t rank : {2, 3, 5}) {
      Hypergraph h = linear_hypertree(delta, rank, 3, 400);
      for (const char* alg : {"trivial", "slowdelta", "indep-r", "um-greedy"})
        EXPECT_TRUE(naive_is_mis(h, run_algorithm(alg, h).in)) << alg;
      if (delta == 2) EXPECT_TRUE(naive_is_mis(h, run_algorithm("delta2", h).in));
    }
}

// Property sweep: every algorithm yields an MIS (by two independent checks)
// and stays within its structural bounds.
TEST(AlgorithmsProperty, RandomSweep) {
  for (std::size_t delta : {2, 3, 4})
    for (std::size_t rank : {2, 4, 8})
      for (std::uint64_t seed = 1; seed <= 15; ++seed) {
        std::size_t n = 20 + (seed * 37) % 150;
        Hypergraph h = random_hypergraph(n, delta, rank, seed);
        std::vector<const char*> algs{"trivial", "slowdelta", "indep-r", "um-greedy"};
        if (delta <= 2) algs.push_back("delta2");
        for (const char* alg : algs) {
          AlgorithmRun run = run_algorithm(alg, h);
          ASSERT_TRUE(run.check.ok()) << alg << " seed " << seed;
          ASSERT_TRUE(naive_is_mis(h, run.in)) << alg << " seed " << seed;
          if (std::string(alg) == "slowdelta") {
            std::size_t bound = 2 * delta * (static_cast<std::size_t>(std::ceil(std::log2(double(rank)))) + 1);
            EXPECT_LE(run.trace.phases, bound);
          }
          if (std::string(alg) == "indep-r" && run.trace.counters.count("h_degree_max"))
            EXPECT_LE(run.trace.counters.at("h_degree_max"), delta - 1);
          if (std::string(alg) == "um-greedy") EXPECT_LE(run.classes, delta + 1);
        }
        AlgorithmRun um = run_algorithm("um-build", h);
        EXPECT_TRUE(um.check.ok());
        EXPECT_LE(um.classes, delta + 1);
      }
}

TEST(Trace, AbsorbTakesMaxOfMaxCounters) {
  RoundTrace a, b;
  b.tick(3, 7);
  b.raise("deg_max", 4);
  b.bump("steps", 2);
  a.raise("sub.deg_max", 6);
  a.absorb(b, "sub");
  EXPECT_EQ(a.rounds, 3u);
  EXPECT_EQ(a.messages, 7u);
  EXPECT_EQ(a.counters.at("sub.deg_max"), 6u);
  EXPECT_EQ(a.counters.at("sub.steps"), 2u);
}

}  // namespace
