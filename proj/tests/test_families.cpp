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
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "relim/families.hpp"
#include "relim/labeling.hpp"
#include "relim/sim/check.hpp"
#include "relim/sim/generate.hpp"

namespace {

using namespace relim;

std::vector<ZVector> small_family(std::size_t k, std::size_t lo, std::size_t hi) {
  std::vector<ZVector> out;
  std::vector<std::size_t> z(k, lo);
  while (true) {
    for (std::size_t s = 1; s <= k; ++s) out.push_back({z, s});
    std::size_t i = 0;
    while (i < k && ++z[i] > hi) z[i++] = lo;
    if (i == k) break;
  }
  return out;
}

TEST(Generators, Shapes) {
  EXPECT_THROW(mis_graph_problem(1), InvalidArgument);
  EXPECT_EQ(plain_hypergraph_coloring(3, 2, 3).edge().size(), 10u - 3u);
  EXPECT_EQ(colorful_coloring(4, 2, 3).edge().size(), 4u);
  EXPECT_THROW(colorful_coloring(2, 2, 3), InvalidArgument);
  EXPECT_THROW(plain_hypergraph_coloring(1, 2, 3), InvalidArgument);
  EXPECT_EQ(ell_name(0), "l{}");
  EXPECT_EQ(ell_name(0b101), "l{1,3}");
}

TEST(FixedPoint, NodeConstraintShape) {
  Problem fp = coloring_fixed_point(3, 2);
  EXPECT_EQ(fp.num_labels(), 8u);
  EXPECT_EQ(fp.node().size(), 7u);
  EXPECT_TRUE(fp.node().contains(fp.config({"l{1,2}", "l{1,2}", "l{}"})));
  EXPECT_TRUE(fp.node().contains(fp.config({"l{1,2,3}", "l{}", "l{}"})));
  EXPECT_TRUE(fp.node().contains(fp.config({"l{2}", "l{2}", "l{2}"})));
}

// Oracle: an edge is allowed iff no color lies in every position.
TEST(FixedPoint, EdgePredicateExhaustive) {
  for (std::size_t d : {2, 3})
    for (std::size_t r : {2, 3}) {
      Problem fp = coloring_fixed_point(d, r);
      const unsigned full = (1u << d) - 1;
      std::size_t allowed = 0;
      oracle::multisets(full + 1, r, [&](const std::vector<std::size_t>& ms) {
        unsigned common = full;
        std::vector<std::string> w;
        for (auto m : ms) {
          common &= static_cast<unsigned>(m);
          w.push_back(ell_name(static_cast<unsigned>(m)));
        }
        EXPECT_EQ(fp.edge().contains(fp.config(w)), common == 0);
        allowed += common == 0;
      });
      EXPECT_EQ(fp.edge().size(), allowed);
    }
}

TEST(FixedPoint, StepsToItself) {
  for (std::size_t d : {2, 3})
    for (std::size_t r : {2, 3}) {
      FixedPointResult res = verify_fixed_point(d, r);
      ASSERT_TRUE(res.ok) << d << "," << r;
      Problem fp = coloring_fixed_point(d, r);
      EXPECT_EQ(res.stepped_labels, fp.num_labels());
      EXPECT_EQ(res.renaming.size(), fp.num_labels());
      std::set<std::string> targets;
      for (const auto& [a, b] : res.renaming) targets.insert(b);
      EXPECT_EQ(targets.size(), fp.num_labels());
    }
}

TEST(PiFamily, AlphabetSize) {
  for (std::size_t k : {2, 3}) {
    std::size_t delta = k + 1, rank = 3;
    for (const auto& zv : small_family(k, 1, 2)) EXPECT_EQ(pi_family(zv, delta, rank).num_labels(), 5 + (1u << k) - 1);
  }
}

TEST(PiFamily, NodeConstraint) {
  Problem p = pi_family({{1, 2}, 1}, 3, 3);
  std::set<std::vector<std::string>> want{
      {"M", "M", "M"}, {"P", "U", "U"}, {"D", "D", "X"}, {"l{1}", "l{1}", "l{1}"},
      {"l{2}", "l{2}", "l{2}"}, {"U", "l{1,2}", "l{1,2}"}};
  EXPECT_EQ(oracle::words(p, p.node()), want);
}

TEST(PiFamily, ParameterChecks) {
  EXPECT_THROW(pi_family({{1, 1}, 1}, 2, 3), InvalidArgument);
  EXPECT_THROW(pi_family({{1, 1, 1}, 1}, 3, 3), InvalidArgument);
  EXPECT_THROW(pi_family({{1, 3}, 1}, 3, 3), InvalidArgument);
  EXPECT_THROW(pi_family({{1, 1}, 3}, 3, 3), InvalidArgument);
}

// The constructive enumerator agrees with the membership predicate.
TEST(PiFamily, EnumeratorMatchesPredicate) {
  struct Case {
    std::size_t k, delta, rank, lo, hi;
  };
  for (auto c : {Case{2, 3, 3, 0, 2}, Case{2, 3, 4, 0, 3}, Case{3, 4, 4, 1, 3}}) {
    auto sigma = pi_alphabet(c.k);
    for (const auto& zv : small_family(c.k, c.lo, c.hi)) {
      Problem p = pi_family(zv, c.delta, c.rank);
      std::size_t n = 0;
      oracle::multisets(sigma.size(), c.rank, [&](const std::vector<std::size_t>& ms) {
        std::vector<PiLabel> cfg;
        std::vector<std::string> w;
        for (auto i : ms) {
          cfg.push_back(sigma[i]);
          w.push_back(sigma[i].name());
        }
        bool want = pi_edge_allows(cfg, zv);
        n += want;
        bool have = true;
        for (const auto& x : w) have = have && p.has_label(x);
        EXPECT_EQ(have && p.edge().contains(p.config(w)), want) << z_text(zv) << " s=" << zv.s;
      });
      EXPECT_EQ(p.edge().size(), n);
    }
  }
}

// Edge strength relations: exactly the listed ones plus reflexivity.
TEST(PiFamily, EdgeStrengthRelations) {
  struct Case {
    std::size_t k, delta, rank;
  };
  for (auto c : {Case{2, 3, 3}, Case{2, 3, 4}, Case{3, 4, 4}}) {
    for (const auto& zv : small_family(c.k, 1, c.rank - 1)) {
      Problem p = pi_family(zv, c.delta, c.rank);
      StrengthOrder o = strength_order(p.edge(), p.num_labels());
      auto mask_of = [](const std::string& n) -> int {
        if (n.rfind("l{", 0) != 0) return -1;
        unsigned m = 0;
        for (const auto& part : detail::split_on(n.substr(2, n.size() - 3), ',')) m |= 1u << (std::stoul(part) - 1);
        return static_cast<int>(m);
      };
      for (const auto& a : p.names())
        for (const auto& b : p.names()) {
          int ma = mask_of(a), mb = mask_of(b);
          bool want = a == b || b == "X" || (a == "P" && (mb > 0 || b == "U")) ||
                      (ma > 0 && (b == "U" || (mb > 0 && (static_cast<unsigned>(mb) & ~static_cast<unsigned>(ma)) == 0 && ma != mb))) ||
                      (a == "D" && (b == "M" || b == "U" || b == ell_name(1u << (zv.s - 1))));
          EXPECT_EQ(o.leq(p.label(a), p.label(b)), want) << a << " <= " << b << " at z=" << z_text(zv) << " s=" << zv.s;
        }
    }
  }
}

TEST(OneStep, AllSmallInstances) {
  std::size_t count = 0;
  for (const auto& zv : small_family(2, 0, 2)) {
    std::size_t q = zv.s == 1 ? 2 : 1;
    if (zv.z[q - 1] > 1) continue;
    OneStepResult r = verify_onestep(zv, q, 3, 3);
    EXPECT_TRUE(r.ok) << z_text(zv) << " s=" << zv.s << ": " << r.failure;
    EXPECT_TRUE(r.estar_agree);
    EXPECT_EQ(r.estar_size, r.estar_char_size);
    EXPECT_TRUE(r.relaxes_to_star);
    EXPECT_TRUE(r.renamed_equal);
    EXPECT_EQ(r.next_z.s, q);
    EXPECT_EQ(r.next_z.z[q - 1], zv.z[q - 1] + 1);
    ++count;
  }
  EXPECT_EQ(count, 12u);
}

TEST(OneStep, RankFour) {
  for (const auto& zv : small_family(2, 1, 2)) {
    std::size_t q = zv.s == 1 ? 2 : 1;
    OneStepResult r = verify_onestep(zv, q, 3, 4);
    EXPECT_TRUE(r.ok) << z_text(zv) << " s=" << zv.s << ": " << r.failure;
    EXPECT_TRUE(r.estar_agree);
  }
}

TEST(OneStep, Preconditions) {
  EXPECT_THROW(verify_onestep({{1, 1}, 1}, 1, 3, 3), InvalidArgument);
  EXPECT_THROW(verify_onestep({{1, 2}, 1}, 2, 3, 3), InvalidArgument);
  EXPECT_THROW(verify_onestep({{1, 1}, 1}, 3, 3, 3), InvalidArgument);
}

TEST(Schedule, MatchesTheChainLength) {
  for (std::size_t delta : {3, 4})
    for (std::size_t rank : {3, 4, 5}) {
      for (std::size_t s = 1; s < delta; ++s) {
        ZVector start{std::vector<std::size_t>(delta - 1, 1), s};
        auto qs = pi_schedule(start, rank);
        EXPECT_EQ(qs.size(), (delta - 1) * (rank - 2)) << delta << "," << rank << " s=" << s;
        for (std::size_t i = 0; i < qs.size(); ++i) EXPECT_NE(qs[i], i == 0 ? s : qs[i - 1]);
      }
    }
  EXPECT_EQ(pi_schedule({{1, 1}, 1}, 3), (std::vector<std::size_t>{2, 1}));
}

TEST(Schedule, DirectiveTextRoundTrips) {
  auto ext = pi_directive_extension(3, 3);
  auto d = ext("pi-onestep z=1,1 s=1 q=2");
  ASSERT_TRUE(d.has_value());
  EXPECT_EQ(d->script, "pi-onestep z=1,1 s=1 q=2");
  EXPECT_FALSE(ext("equiv").has_value());
  EXPECT_THROW(ext("pi-onestep z=1,x s=1 q=2"), std::exception);
}

TEST(Colorful, ConversionValidatesOnSmallTrees) {
  std::mt19937_64 rng(41);
  const std::size_t delta = 2, rank = 3;
  Problem fp = coloring_fixed_point(delta, rank);
  sim::Hypergraph h = sim::linear_hypertree(delta, rank, 3);
  for (int it = 0; it < 10; ++it) {
    auto col = oracle::colorful_backtrack(h, delta * (rank - 1), rng);
    ASSERT_FALSE(col.empty());
    std::vector<std::uint64_t> c64(col.begin(), col.end());
    ASSERT_TRUE(sim::check_coloring(h, sim::SolutionKind::Colorful, c64).ok());
    LabelingReport rep = validate_labeling(fp, h, colorful_to_fixed_point_labeling(h, col, delta, rank));
    EXPECT_TRUE(rep.ok());
  }
}

TEST(Colorful, GroupMap) {
  auto g = colorful_to_plain_map(3, 4);
  ASSERT_EQ(g.size(), 10u);
  EXPECT_EQ(g[1], 1u);
  EXPECT_EQ(g[3], 1u);
  EXPECT_EQ(g[4], 2u);
  EXPECT_EQ(g[9], 3u);
}

// A proper but non-colorful input breaks the conversion.
TEST(Colorful, NonColorfulInputIsCaught) {
  Problem fp = coloring_fixed_point(2, 3);
  sim::Hypergraph h = sim::single_edge(3);
  std::vector<std::size_t> col{1, 2, 1};  // colors 1 and 2 share group 1
  LabelingReport rep = validate_labeling(fp, h, colorful_to_fixed_point_labeling(h, col, 2, 3));
  EXPECT_FALSE(rep.ok());
}

}  // namespace
