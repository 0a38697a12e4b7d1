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
#include "relim/problem_io.hpp"

namespace {

using namespace relim;

TEST(ProblemIo, ParsesMisAndCanonicalizes) {
  Problem p = parse_problem("M M M\nP O O\n---\nM [P O]\nO O\n");
  EXPECT_EQ(p.delta(), 3u);
  EXPECT_EQ(p.rank(), 2u);
  EXPECT_EQ(p.names(), (std::vector<std::string>{"M", "O", "P"}));
  EXPECT_EQ(p.node().size(), 2u);
  EXPECT_EQ(p.edge().size(), 3u);
  EXPECT_EQ(p, mis_graph_problem(3));
}

TEST(ProblemIo, ExponentsAndBrackets) {
  Problem p = parse_problem("a^2 b\n---\n[a b]^2\n");
  EXPECT_EQ(p.node().size(), 1u);
  EXPECT_EQ(p.edge().size(), 3u);  // aa ab bb
  EXPECT_TRUE(p.edge().contains(p.config({"b", "a"})));
}

TEST(ProblemIo, EmptyConstraintRoundTrips) {
  Problem p = parse_problem("a b\n---\n(empty)^3\n");
  EXPECT_TRUE(p.edge().empty());
  EXPECT_EQ(p.rank(), 3u);
  EXPECT_EQ(render_problem(p, false), "a b\n---\n(empty)^3\n");
  EXPECT_EQ(parse_problem(render_problem(p, false)), p);
}

TEST(ProblemIo, UnusedLabelsDropOut) {
  // c only appears in a configuration that is never produced
  Problem p = Problem::from_names(1, 1, {{"a"}}, {{"a"}});
  EXPECT_EQ(p.num_labels(), 1u);
}

TEST(ProblemIo, NaturalOrderOfNames) {
  Problem p = parse_problem("x10 x2 x1\n---\nx10\nx2\nx1\n");
  EXPECT_EQ(p.names(), (std::vector<std::string>{"x1", "x2", "x10"}));
}

TEST(ProblemIo, Errors) {
  EXPECT_THROW(parse_problem("a b\n---\na\n---\nb\n"), ParseError);
  EXPECT_THROW(parse_problem("a b\nc\n---\na a\n"), ParseError);  // arity mismatch
  EXPECT_THROW(parse_problem("a^0 b\n---\na a\n"), ParseError);
  EXPECT_THROW(parse_problem("[a b\n---\na a\n"), ParseError);
  EXPECT_THROW(parse_problem("a b\n"), ParseError);
  EXPECT_THROW(parse_problem("---\na a\n"), ParseError);
  EXPECT_THROW(parse_problem("a\n---\n(empty)^0\n"), ParseError);
}

TEST(ProblemIo, ParseErrorsCarryLineNumbers) {
  try {
    parse_problem("a b\n---\na a\na\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 4);
  }
}

TEST(ProblemIo, ExpansionRespectsCap) {
  EngineOptions o;
  o.cap = 10;
  EXPECT_THROW(parse_problem("[a b c d e]^4\n---\na a\n", o), ResourceLimitError);
}

TEST(ProblemIo, HandleIsContentHash) {
  Problem a = parse_problem("M^3\nP O^2\n---\nM P\nM O\nO O\n");
  Problem b = parse_problem("O O P\nM M M\n---\nO O\nO M\nP M\n");
  EXPECT_EQ(problem_handle(a), problem_handle(b));
  Problem c = parse_problem("M^3\nP O^2\n---\nM P\nO O\n");
  EXPECT_NE(problem_handle(a), problem_handle(c));
  EXPECT_EQ(problem_handle(a).size(), 16u);
}

// Property: render then parse is the identity, in both renderings.
TEST(ProblemIoProperty, RenderParseRoundTrip) {
  std::mt19937_64 rng(11);
  for (int it = 0; it < 300; ++it) {
    std::size_t k = 1 + rng() % 5, d = 1 + rng() % 3, r = 1 + rng() % 3;
    Problem p = oracle::random_problem(rng, k, d, r, 0.4);
    EXPECT_EQ(parse_problem(render_problem(p, false)), p);
    EXPECT_EQ(parse_problem(render_problem(p, true)), p) << render_problem(p, true);
  }
}

// Property: the handle does not depend on the order configurations are given in.
TEST(ProblemIoProperty, HandleIgnoresLineOrder) {
  std::mt19937_64 rng(12);
  for (int it = 0; it < 100; ++it) {
    Problem p = oracle::random_problem(rng, 4, 2, 3, 0.5);
    std::vector<std::string> nl, el;
    for (const auto& c : p.node()) nl.push_back(render_configuration(p, c));
    for (const auto& c : p.edge()) el.push_back(render_configuration(p, c));
    std::shuffle(nl.begin(), nl.end(), rng);
    std::shuffle(el.begin(), el.end(), rng);
    std::string text;
    for (const auto& l : nl) text += l + "\n";
    text += "---\n";
    for (const auto& l : el) text += l + "\n";
    EXPECT_EQ(problem_handle(parse_problem(text)), problem_handle(p));
  }
}

TEST(Configuration, EntriesAndReplace) {
  Configuration c{2, 0, 2, 1};
  EXPECT_EQ(c.arity(), 4u);
  EXPECT_EQ(c.count(2), 2u);
  auto e = c.entries();
  ASSERT_EQ(e.size(), 3u);
  EXPECT_EQ(e[2], std::make_pair(Label{2}, std::size_t{2}));
  EXPECT_EQ(c.replaced(2, 0), (Configuration{0, 0, 1, 2}));  // one occurrence only
}

}  // namespace
