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

#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "relim/problem.hpp"

namespace relim {

namespace detail {

struct Slot {
  std::vector<std::string> alternatives;
  std::size_t count = 1;
  bool has_exponent = false;
};

inline std::vector<Slot> tokenize_line(const std::string& line, int lineno) {
  std::vector<Slot> items;
  std::size_t i = 0;
  auto is_stop = [](char c) {
    return std::isspace(static_cast<unsigned char>(c)) || c == '[' || c == ']' || c == '^';
  };
  while (i < line.size()) {
    char c = line[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '[') {
      std::size_t close = line.find(']', i);
      if (close == std::string::npos) throw ParseError("unterminated bracket group", lineno);
      std::istringstream in(line.substr(i + 1, close - i - 1));
      Slot s;
      std::string tok;
      while (in >> tok) {
        if (tok.find_first_of("[^") != std::string::npos)
          throw ParseError("unexpected character in bracket group", lineno);
        s.alternatives.push_back(tok);
      }
      if (s.alternatives.empty()) throw ParseError("empty bracket group", lineno);
      std::sort(s.alternatives.begin(), s.alternatives.end());
      s.alternatives.erase(std::unique(s.alternatives.begin(), s.alternatives.end()),
                           s.alternatives.end());
      items.push_back(std::move(s));
      i = close + 1;
    } else if (c == ']') {
      throw ParseError("unmatched ']'", lineno);
    } else if (c == '^') {
      std::size_t j = i + 1;
      while (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j]))) ++j;
      if (j == i + 1 || items.empty() || items.back().has_exponent ||
          (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])) && line[j] != '['))
        throw ParseError("malformed exponent", lineno);
      std::size_t k = std::stoul(line.substr(i + 1, j - i - 1));
      if (k == 0) throw ParseError("malformed exponent", lineno);
      items.back().count = k;
      items.back().has_exponent = true;
      i = j;
    } else {
      std::size_t j = i;
      while (j < line.size() && !is_stop(line[j])) ++j;
      Slot s;
      s.alternatives.push_back(line.substr(i, j - i));
      items.push_back(std::move(s));
      i = j;
    }
  }
  return items;
}

// Calls f on every multiset (as a sorted index vector) of size k over [0, n).
template <class F>
void for_each_multiset(std::size_t n, std::size_t k, F&& f) {
  std::vector<std::size_t> cur;
  cur.reserve(k);
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (cur.size() == k) {
      f(cur);
      return;
    }
    for (std::size_t x = start; x < n; ++x) {
      cur.push_back(x);
      self(self, x);
      cur.pop_back();
    }
  };
  rec(rec, 0);
}

inline std::size_t multiset_count(std::size_t n, std::size_t k, std::size_t limit) {
  // C(n+k-1, k), saturating at limit+1.
  if (n == 0) return k == 0 ? 1 : 0;
  long double v = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    v = v * static_cast<long double>(n - 1 + i) / static_cast<long double>(i);
    if (v > static_cast<long double>(limit)) return limit + 1;
  }
  return static_cast<std::size_t>(v + 0.5L);
}

struct Section {
  std::size_t arity = 0;
  std::vector<std::vector<std::string>> configs;
};

inline Section expand_section(const std::vector<std::pair<int, std::string>>& lines,
                              std::size_t cap) {
  Section sec;
  bool have_arity = false;
  std::set<std::vector<std::string>> seen;
  for (const auto& [lineno, text] : lines) {
    std::istringstream probe(text);
    std::string first;
    probe >> first;
    if (first.rfind("(empty)", 0) == 0) {
      std::string rest = text.substr(text.find("(empty)") + 7);
      std::size_t a = 0;
      if (rest.size() < 2 || rest[0] != '^') throw ParseError("malformed empty marker", lineno);
      try {
        std::size_t pos = 0;
        a = std::stoul(rest.substr(1), &pos);
        if (pos + 1 != rest.size()) throw ParseError("malformed empty marker", lineno);
      } catch (const std::logic_error&) {
        throw ParseError("malformed empty marker", lineno);
      }
      if (a == 0 || lines.size() != 1) throw ParseError("malformed empty marker", lineno);
      sec.arity = a;
      return sec;
    }
    auto items = tokenize_line(text, lineno);
    std::size_t arity = 0;
    for (const auto& it : items) arity += it.count;
    if (!have_arity) {
      sec.arity = arity;
      have_arity = true;
    } else if (arity != sec.arity) {
      throw ParseError("arity mismatch: expected " + std::to_string(sec.arity) + ", got " +
                           std::to_string(arity),
                       lineno);
    }
    // Cartesian product over slots of multisets within each slot.
    std::vector<std::string> cur;
    auto rec = [&](auto&& self, std::size_t idx) -> void {
      if (idx == items.size()) {
        std::vector<std::string> w = cur;
        std::sort(w.begin(), w.end());
        if (seen.insert(w).second) {
          sec.configs.push_back(std::move(w));
          if (sec.configs.size() > cap)
            throw ResourceLimitError("expanding constraint", sec.configs.size(), cap);
        }
        return;
      }
      const auto& it = items[idx];
      for_each_multiset(it.alternatives.size(), it.count, [&](const std::vector<std::size_t>& ms) {
        for (auto x : ms) cur.push_back(it.alternatives[x]);
        self(self, idx + 1);
        cur.resize(cur.size() - ms.size());
      });
    };
    rec(rec, 0);
  }
  return sec;
}

}  // namespace detail

// Parses the problem text format: node section, a "---" line, edge section.
inline Problem parse_problem(const std::string& text, const EngineOptions& opts = {}) {
  std::vector<std::pair<int, std::string>> sections[2];
  int which = 0;
  bool saw_delim = false;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    auto b = raw.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    auto e = raw.find_last_not_of(" \t\r");
    std::string line = raw.substr(b, e - b + 1);
    if (line == "---") {
      if (saw_delim) throw ParseError("more than one section delimiter", lineno);
      saw_delim = true;
      which = 1;
      continue;
    }
    sections[which].emplace_back(lineno, line);
  }
  if (!saw_delim) throw ParseError("missing '---' section delimiter", lineno);
  if (sections[0].empty()) throw ParseError("empty node section", lineno);
  if (sections[1].empty()) throw ParseError("empty edge section", lineno);
  auto node = detail::expand_section(sections[0], opts.cap);
  auto edge = detail::expand_section(sections[1], opts.cap);
  try {
    return Problem::from_names(node.arity, edge.arity, node.configs, edge.configs);
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what(), 0);
  }
}

namespace detail {

inline std::string render_config(const Problem& p, const Configuration& c) {
  std::string out;
  for (auto [l, m] : c.entries()) {
    if (!out.empty()) out += ' ';
    out += p.name(l);
    if (m > 1) out += "^" + std::to_string(m);
  }
  return out;
}

struct GroupSlot {
  LabelSet set;
  std::size_t count;
};

inline std::size_t slots_size(const std::vector<GroupSlot>& slots, std::size_t limit) {
  std::size_t total = 1;
  for (const auto& s : slots) {
    std::size_t m = multiset_count(s.set.size(), s.count, limit);
    if (m > limit || total * m > limit) return limit + 1;
    total *= m;
  }
  return total;
}

template <class F>
void for_each_expansion(const std::vector<GroupSlot>& slots, F&& f) {
  std::vector<Label> cur;
  std::vector<std::vector<Label>> mems;
  for (const auto& s : slots) mems.push_back(s.set.members());
  auto rec = [&](auto&& self, std::size_t idx) -> bool {
    if (idx == slots.size()) return f(Configuration(cur));
    bool ok = true;
    for_each_multiset(mems[idx].size(), slots[idx].count, [&](const std::vector<std::size_t>& ms) {
      if (!ok) return;
      for (auto x : ms) cur.push_back(mems[idx][x]);
      ok = self(self, idx + 1);
      cur.resize(cur.size() - ms.size());
    });
    return ok;
  };
  rec(rec, 0);
}

inline std::vector<GroupSlot> merge_equal_slots(std::vector<GroupSlot> slots) {
  std::vector<GroupSlot> out;
  for (auto& s : slots) {
    auto it = std::find_if(out.begin(), out.end(), [&](const GroupSlot& o) { return o.set == s.set; });
    if (it != out.end())
      it->count += s.count;
    else
      out.push_back(std::move(s));
  }
  return out;
}

inline std::vector<std::string> condensed_lines(const Problem& p, const Constraint& c) {
  constexpr std::size_t kLimit = 20000;
  std::vector<std::string> lines;
  ConfigSet uncovered = c.as_set();
  for (const auto& start : c) {
    if (!uncovered.count(start)) continue;
    std::vector<GroupSlot> slots;
    for (auto [l, m] : start.entries()) slots.push_back({LabelSet(p.num_labels(), {l}), m});
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t i = 0; i < slots.size(); ++i) {
        for (Label l = 0; l < p.num_labels(); ++l) {
          if (slots[i].set.contains(l)) continue;
          auto trial = slots;
          trial[i].set.insert(l);
          if (slots_size(trial, kLimit) > kLimit) continue;
          bool ok = true;
          for_each_expansion(trial, [&](const Configuration& cfg) {
            ok = c.contains(cfg);
            return ok;
          });
          if (ok) slots = std::move(trial);
        }
      }
      slots = merge_equal_slots(std::move(slots));
    }
    std::sort(slots.begin(), slots.end(), [](const GroupSlot& a, const GroupSlot& b) {
      if (a.set.size() != b.set.size()) return a.set.size() < b.set.size();
      return a.set < b.set;
    });
    for_each_expansion(slots, [&](const Configuration& cfg) {
      uncovered.erase(cfg);
      return true;
    });
    std::string line;
    for (const auto& s : slots) {
      if (!line.empty()) line += ' ';
      auto ms = s.set.members();
      if (ms.size() == 1) {
        line += p.name(ms[0]);
      } else {
        line += '[';
        for (std::size_t k = 0; k < ms.size(); ++k) {
          if (k) line += ' ';
          line += p.name(ms[k]);
        }
        line += ']';
      }
      if (s.count > 1) line += "^" + std::to_string(s.count);
    }
    lines.push_back(line);
  }
  return lines;
}

inline void render_section(std::string& out, const Problem& p, const Constraint& c, bool condensed) {
  if (c.empty()) {
    out += "(empty)^" + std::to_string(c.arity()) + "\n";
    return;
  }
  if (condensed) {
    for (const auto& l : condensed_lines(p, c)) out += l + "\n";
  } else {
    for (const auto& cfg : c) out += render_config(p, cfg) + "\n";
  }
}

}  // namespace detail

inline std::string render_problem(const Problem& p, bool condensed = false) {
  std::string out;
  detail::render_section(out, p, p.node(), condensed);
  out += "---\n";
  detail::render_section(out, p, p.edge(), condensed);
  return out;
}

inline std::string render_configuration(const Problem& p, const Configuration& c) {
  return detail::render_config(p, c);
}

// Content hash of the canonical rendering.
inline std::string problem_handle(const Problem& p) { return hex64(fnv1a64(render_problem(p))); }

}  // namespace relim
