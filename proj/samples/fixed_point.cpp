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
// Checks that the hypergraph coloring problem below steps to itself.

#include <cstdlib>
#include <iostream>

#include "relim/families.hpp"

int main(int argc, char** argv) {
  using namespace relim;
  std::size_t delta = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 3;
  std::size_t rank = argc > 2 ? std::strtoul(argv[2], nullptr, 10) : 3;
  std::cout << render_problem(coloring_fixed_point(delta, rank), true) << "\n";
  FixedPointResult r = verify_fixed_point(delta, rank);
  std::cout << (r.ok ? "fixed point" : "not a fixed point") << " (re labels " << r.re_labels << ")\n";
  for (const auto& [from, to] : r.renaming) std::cout << "  " << from << " -> " << to << "\n";
  return r.ok ? 0 : 1;
}
