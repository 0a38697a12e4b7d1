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
// Steps MIS on degree-3 graphs once and prints the intermediate and final
// problems with the set each new label stands for.

#include <iostream>

#include "relim/analysis.hpp"
#include "relim/families.hpp"
#include "relim/re_engine.hpp"

int main() {
  using namespace relim;
  Problem mis = mis_graph_problem(3);
  std::cout << render_problem(mis, false) << "\n";

  SetProblem re = re_step(mis);
  std::cout << "# re\n" << render_problem(re.problem, true) << "\n";

  StepResult st = full_step(mis);
  std::cout << "# rere(re)\n" << render_problem(st.problem, true);
  for (const auto& [name, set] : st.provenance) std::cout << "# " << name << " = " << set << "\n";
  std::cout << "zero-round solvable: " << (zero_round_solvable(st.problem).solvable ? "yes" : "no") << "\n";
}
