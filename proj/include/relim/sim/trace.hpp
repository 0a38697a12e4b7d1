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

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace relim::sim {

// Thrown when an algorithm's internal invariant fails. Never expected.
class InvariantViolation : public std::logic_error {
 public:
  explicit InvariantViolation(const std::string& what) : std::logic_error("invariant violated: " + what) {}
};

inline void ensure(bool cond, const std::string& what) {
  if (!cond) throw InvariantViolation(what);
}

struct TraceEvent {
  std::size_t round;
  std::string kind;
  std::string detail;
};

// Round accounting for one run. Counters only grow.
struct RoundTrace {
  std::string algorithm;
  std::size_t rounds = 0;
  std::size_t phases = 0;
  std::size_t messages = 0;
  std::map<std::string, std::size_t> counters;
  std::vector<TraceEvent> events;
  bool verbose = false;

  void tick(std::size_t n_rounds, std::size_t n_messages = 0) {
    rounds += n_rounds;
    messages += n_messages;
  }
  void bump(const std::string& key, std::size_t by = 1) { counters[key] += by; }
  void raise(const std::string& key, std::size_t value) {
    auto& c = counters[key];
    if (value > c) c = value;
  }
  void event(const std::string& kind, const std::string& detail) {
    if (verbose) events.push_back({rounds, kind, detail});
  }
  // Folds a sub-run into this trace; its rounds count as ours.
  void absorb(const RoundTrace& sub, const std::string& prefix) {
    rounds += sub.rounds;
    messages += sub.messages;
    counters[prefix + ".rounds"] += sub.rounds;
    for (const auto& [k, v] : sub.counters) {
      if (k.ends_with("_max") || k == "depth")
        raise(prefix + "." + k, v);
      else
        counters[prefix + "." + k] += v;
    }
    if (verbose)
      for (const auto& e : sub.events) events.push_back({e.round, prefix + "." + e.kind, e.detail});
  }
};

}  // namespace relim::sim
