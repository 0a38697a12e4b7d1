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
#include "relim/analysis.hpp"
#include "relim/families.hpp"
#include "relim/re_engine.hpp"

namespace {

using namespace relim;

TEST(ReStep, MisIntermediateProblem) {
  SetProblem sp = re_step(mis_graph_problem(3));
  Problem expected = parse_problem(
      "[{M} {M,O}]^3\n"
      "{O,P} [{O} {O,P} {M,O}]^2\n"
      "---\n"
      "{M} {O,P}\n"
      "{O} {M,O}\n");
  EXPECT_EQ(sp.problem, expected) << render_problem(sp.problem, true);
  ASSERT_EQ(sp.members.size(), 4u);
  for (std::size_t i = 0; i < sp.members.size(); ++i)
    EXPECT_EQ(detail::set_name(*sp.base, sp.members[i]), sp.problem.name(static_cast<Label>(i)));
}

// The regex given for the fully stepped MIS problem, with two typos fixed:
// the edge label U reads O and the node word X A^2 reads A X^2.
TEST(FullStep, MisMatchesCorrectedRegex) {
  StepResult st = full_step(mis_graph_problem(3));
  EXPECT_EQ(st.problem.num_labels(), 6u);
  Problem corrected = parse_problem(
      "M^3\nP O^2\nA X^2\nC^3\n"
      "---\n"
      "[M A] [P C A O]\n"
      "[X M C A O] O\n");
  auto eq = find_renaming_equivalence(st.problem, corrected);
  ASSERT_TRUE(eq.has_value()) << render_problem(st.problem, true);
  EXPECT_EQ(rename_labels(st.problem, *eq), corrected);
}

TEST(FullStep, MisLiteralRegexIsNotEquivalent) {
  StepResult st = full_step(mis_graph_problem(3));
  Problem literal = parse_problem(
      "M^3\nP O^2\nX A^2\nC^3\n"
      "---\n"
      "[M A] [P C A U]\n"
      "[X M C A U] U\n");
  EXPECT_FALSE(find_renaming_equivalence(st.problem, literal).has_value());
}

TEST(FullStep, ProvenanceNamesNestedSets) {
  StepResult st = full_step(mis_graph_problem(3));
  ASSERT_EQ(st.provenance.size(), st.problem.num_labels());
  EXPECT_EQ(st.provenance.front().first, "A");
  for (const auto& [name, nested] : st.provenance) {
    EXPECT_TRUE(st.problem.has_label(name));
    EXPECT_EQ(nested.substr(0, 2), "{{");
  }
}

TEST(FreshNames, SpreadsToTwoLetters) {
  EXPECT_EQ(detail::fresh_name(0, 5), "A");
  EXPECT_EQ(detail::fresh_name(25, 26), "Z");
  EXPECT_EQ(detail::fresh_name(0, 27), "AA");
  EXPECT_EQ(detail::fresh_name(27, 40), "BB");
}

TEST(StrengthOrder, MisEdgeDiagram) {
  Problem p = mis_graph_problem(3);
  StrengthOrder o = strength_order(p.edge(), p.num_labels());
  Label M = p.label("M"), O = p.label("O"), P = p.label("P");
  EXPECT_TRUE(o.less(P, O));
  EXPECT_FALSE(o.leq(M, O));
  EXPECT_FALSE(o.leq(O, M));
  Diagram d = diagram(p.edge(), p.num_labels());
  EXPECT_EQ(d.groups.size(), 3u);
  ASSERT_EQ(d.edges.size(), 1u);
  EXPECT_EQ(d.groups[d.edges[0].first][0], P);
  EXPECT_EQ(d.groups[d.edges[0].second][0], O);
}

TEST(ReEngine, CapAbortsEnumeration) {
  EngineOptions o;
  o.cap = 3;
  EXPECT_THROW(full_step(coloring_fixed_point(3, 3), o), ResourceLimitError);
}

TEST(ReEngine, JobsDoNotChangeResults) {
  EngineOptions one, four;
  four.jobs = 4;
  for (Problem p : {mis_graph_problem(3), coloring_fixed_point(3, 2), pi_family({{1, 1}, 1}, 3, 3)})
    EXPECT_EQ(full_step(p, one).problem, full_step(p, four).problem);
}

// Oracle: naive quantifiers over all subsets against the engine.
TEST(ReEngineOracle, ReStepMatchesNaiveQuantifiers) {
  std::mt19937_64 rng(21);
  int checked = 0;
  for (int it = 0; it < 250; ++it) {
    std::size_t k = 1 + rng() % 4, d = 1 + rng() % 3, r = 1 + rng() % 3;
    Problem p = oracle::random_problem(rng, k, d, r, 0.5);
    oracle::Quantified want = oracle::quantify(p, true);
    SetProblem got = re_step(p);
    EXPECT_EQ(oracle::words(got.problem, got.problem.edge()), want.universal) << render_problem(p, false);
    EXPECT_EQ(oracle::words(got.problem, got.problem.node()), want.existential) << render_problem(p, false);
    ++checked;
  }
  EXPECT_EQ(checked, 250);
}

TEST(ReEngineOracle, RereStepMatchesNaiveQuantifiers) {
  std::mt19937_64 rng(22);
  int checked = 0;
  for (int it = 0; it < 400 && checked < 120; ++it) {
    std::size_t k = 2 + rng() % 3, d = 1 + rng() % 3, r = 1 + rng() % 3;
    Problem p = oracle::random_problem(rng, k, d, r, 0.5);
    SetProblem re = re_step(p);
    if (re.problem.num_labels() > 5 || re.problem.num_labels() == 0) continue;
    oracle::Quantified want = oracle::quantify(re.problem, false);
    SetProblem got = rere_step(re);
    EXPECT_EQ(oracle::words(got.problem, got.problem.node()), want.universal) << render_problem(p, false);
    EXPECT_EQ(oracle::words(got.problem, got.problem.edge()), want.existential) << render_problem(p, false);
    ++checked;
  }
  EXPECT_GE(checked, 60);
}

TEST(ReEngineOracle, MisFullStepMatchesNaiveQuantifiers) {
  Problem p = mis_graph_problem(3);
  SetProblem re = re_step(p);
  oracle::Quantified want = oracle::quantify(re.problem, false);
  SetProblem got = rere_step(re);
  EXPECT_EQ(oracle::words(got.problem, got.problem.node()), want.universal);
  EXPECT_EQ(oracle::words(got.problem, got.problem.edge()), want.existential);
}

// Property: labels of the intermediate problem are right-closed sets.
TEST(ReEngineProperty, IntermediateLabelsAreRightClosed) {
  std::mt19937_64 rng(23);
  for (int it = 0; it < 200; ++it) {
    Problem p = oracle::random_problem(rng, 1 + rng() % 5, 1 + rng() % 3, 1 + rng() % 3, 0.5);
    SetProblem re = re_step(p);
    StrengthOrder o = strength_order(p.edge(), p.num_labels());
    for (const auto& m : re.members) EXPECT_TRUE(is_right_closed(m, o));
    if (re.problem.num_labels() > 6) continue;
    StepResult st = full_step(p);
    StrengthOrder o2 = strength_order(re.problem.node(), re.problem.num_labels());
    for (const auto& m : st.members) EXPECT_TRUE(is_right_closed(m, o2));
  }
}

// Property: the strength order is a preorder and the diagram groups partition sigma.
TEST(ReEngineProperty, StrengthIsPreorder) {
  std::mt19937_64 rng(24);
  for (int it = 0; it < 200; ++it) {
    Problem p = oracle::random_problem(rng, 1 + rng() % 5, 1 + rng() % 3, 1 + rng() % 3, 0.5);
    for (const auto* c : {&p.node(), &p.edge()}) {
      StrengthOrder o = strength_order(*c, p.num_labels());
      const std::size_t n = p.num_labels();
      for (Label a = 0; a < n; ++a) {
        EXPECT_TRUE(o.leq(a, a));
        for (Label b = 0; b < n; ++b)
          for (Label x = 0; x < n; ++x)
            if (o.leq(a, b) && o.leq(b, x)) EXPECT_TRUE(o.leq(a, x));
      }
      Diagram d = diagram(o);
      std::vector<int> seen(n, 0);
      for (const auto& g : d.groups)
        for (Label l : g) ++seen[l];
      for (auto s : seen) EXPECT_EQ(s, 1);
    }
  }
}

// Property: a 0-round solvable problem stays 0-round solvable after a step.
TEST(ReEngineProperty, ZeroRoundSolvabilityIsPreserved) {
  std::mt19937_64 rng(25);
  int solvable = 0;
  for (int it = 0; it < 300; ++it) {
    Problem p = oracle::random_problem(rng, 1 + rng() % 4, 1 + rng() % 3, 1 + rng() % 3, 0.6);
    if (!zero_round_solvable(p).solvable) continue;
    ++solvable;
    EXPECT_TRUE(zero_round_solvable(full_step(p).problem).solvable) << render_problem(p, false);
  }
  EXPECT_GT(solvable, 20);
}

}  // namespace
