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
// Runs every MIS algorithm on one random hypergraph and prints round counts.

#include <iostream>

#include "relim/sim/generate.hpp"
#include "relim/sim/runner.hpp"

int main() {
  using namespace relim::sim;
  Hypergraph h = random_hypergraph(120, 3, 4, 11);
  std::cout << "n=" << h.num_nodes() << " m=" << h.num_edges() << " degree=" << h.max_degree()
            << " rank=" << h.max_rank() << "\n";
  for (const char* alg : {"trivial", "slowdelta", "indep-r", "um-greedy", "um-build"}) {
    AlgorithmRun run = run_algorithm(alg, h);
    std::cout << alg << ": rounds=" << run.trace.rounds << " phases=" << run.trace.phases
              << " valid=" << (run.check.ok() ? "yes" : "no");
    if (run.classes) std::cout << " classes=" << run.classes;
    std::cout << "\n";
  }
}
