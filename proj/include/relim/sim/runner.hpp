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

#include <string>
#include <vector>

#include "relim/sim/check.hpp"
#include "relim/sim/mis.hpp"

namespace relim::sim {

struct AlgorithmRun {
  std::string algorithm;
  bool is_coloring = false;
  std::vector<bool> in;              // MIS algorithms
  std::vector<std::uint64_t> color;  // um-build
  std::size_t classes = 0;
  RoundTrace trace;
  CheckReport check;
};

inline MisSolver mis_solver(const std::string& name) {
  if (name == "trivial") return [](const Hypergraph& h) { return trivial_mis(h); };
  if (name == "slowdelta") return [](const Hypergraph& h) { return slow_in_delta_mis(h); };
  if (name == "delta2") return [](const Hypergraph& h) { return delta2_mis(h); };
  if (name == "indep-r") return [](const Hypergraph& h) { return indep_r_mis(h); };
  throw InvalidArgument("unknown MIS solver '" + name + "'");
}

// alg: trivial | slowdelta | delta2 | indep-r | um-greedy | um-build.
// The UM coloring for um-greedy and um-build comes from `um_solver`.
inline AlgorithmRun run_algorithm(const std::string& alg, const Hypergraph& h, const std::string& um_solver = "trivial") {
  AlgorithmRun out;
  out.algorithm = alg;
  if (alg == "um-build" || alg == "um-greedy") {
    UmColoringRun um = um_coloring_iterated(h, mis_solver(um_solver));
    if (alg == "um-build") {
      out.is_coloring = true;
      out.color = um.color;
      out.classes = um.classes;
      out.trace = um.trace;
      out.check = check_solution(h, SolutionKind::UniqueMaximum, um.color);
      return out;
    }
    MisRun run = um_greedy_mis(h, um.color);
    out.in = run.in;
    out.classes = um.classes;
    out.trace = um.trace;
    out.trace.algorithm = "um_greedy_mis";
    out.trace.absorb(run.trace, "greedy");
    out.check = check_solution(h, SolutionKind::Mis, out.in);
    return out;
  }
  if (alg == "delta2" && h.max_degree() > 2) throw InvalidArgument("delta2 needs maximum degree at most 2");
  MisRun run = mis_solver(alg)(h);
  out.in = run.in;
  out.trace = run.trace;
  out.check = check_solution(h, SolutionKind::Mis, out.in);
  return out;
}

}  // namespace relim::sim
