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

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "relim/re_engine.hpp"

namespace relim {

namespace detail {

// Kuhn's augmenting paths; adj[i] lists right vertices allowed for left i.
inline bool perfect_matching(const std::vector<std::vector<std::size_t>>& adj, std::size_t right,
                             std::vector<std::size_t>* match_left = nullptr) {
  std::vector<std::size_t> owner(right, SIZE_MAX);
  for (std::size_t i = 0; i < adj.size(); ++i) {
    std::vector<char> seen(right, 0);
    auto augment = [&](auto&& self, std::size_t u) -> bool {
      for (std::size_t v : adj[u]) {
        if (seen[v]) continue;
        seen[v] = 1;
        if (owner[v] == SIZE_MAX || self(self, owner[v])) {
          owner[v] = u;
          return true;
        }
      }
      return false;
    };
    if (!augment(augment, i)) return false;
  }
  if (match_left) {
    match_left->assign(adj.size(), SIZE_MAX);
    for (std::size_t v = 0; v < right; ++v)
      if (owner[v] != SIZE_MAX) (*match_left)[owner[v]] = v;
  }
  return true;
}

}  // namespace detail

// True iff some permutation rho has b[i] subset of b2[rho(i)] for all i.
inline bool is_relaxation_config(const SetConfiguration& b, const SetConfiguration& b2) {
  if (b.size() != b2.size()) return false;
  std::vector<std::vector<std::size_t>> adj(b.size());
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = 0; j < b2.size(); ++j)
      if (b[i].subset_of(b2[j])) adj[i].push_back(j);
  return detail::perfect_matching(adj, b2.size());
}

// For each source label, the target labels it may become.
using RelaxationMap = std::vector<LabelSet>;

inline RelaxationMap relaxation_from_renaming(const Problem& p1, const Problem& p2,
                                              const std::map<std::string, std::string>& m) {
  RelaxationMap out(p1.num_labels(), LabelSet(p2.num_labels()));
  for (Label l = 0; l < p1.num_labels(); ++l) {
    auto it = m.find(p1.name(l));
    if (it == m.end()) throw InvalidArgument("map is not total: missing '" + p1.name(l) + "'");
    if (!p2.has_label(it->second)) continue;
    out[l].insert(p2.label(it->second));
  }
  return out;
}

inline RelaxationMap identity_relaxation(const Problem& p1, const Problem& p2) {
  std::map<std::string, std::string> m;
  for (const auto& n : p1.names()) m[n] = n;
  return relaxation_from_renaming(p1, p2, m);
}

struct ConfigMatch {
  Configuration source;
  Configuration target;
};

struct RelaxationResult {
  bool ok = false;
  std::vector<ConfigMatch> node_matches;
  std::vector<ConfigMatch> edge_matches;
  std::string failure;  // rendering of the first source config without a target
  explicit operator bool() const { return ok; }
};

namespace detail {

inline std::optional<Configuration> relax_one(const Configuration& src, const Constraint& target,
                                              const RelaxationMap& map) {
  constexpr std::size_t kProductLimit = 4096;
  std::size_t prod = 1;
  for (Label l : src.labels()) {
    prod *= std::max<std::size_t>(1, map[l].size());
    if (prod > kProductLimit) break;
  }
  if (prod <= kProductLimit) {
    std::vector<std::vector<Label>> opts;
    for (Label l : src.labels()) {
      opts.push_back(map[l].members());
      if (opts.back().empty()) return std::nullopt;
    }
    std::vector<Label> cur;
    std::optional<Configuration> hit;
    auto rec = [&](auto&& self, std::size_t i) -> void {
      if (hit) return;
      if (i == opts.size()) {
        Configuration c(cur);
        if (target.contains(c)) hit = c;
        return;
      }
      for (Label l : opts[i]) {
        cur.push_back(l);
        self(self, i + 1);
        cur.pop_back();
        if (hit) return;
      }
    };
    rec(rec, 0);
    return hit;
  }
  for (const auto& t : target) {
    std::vector<std::vector<std::size_t>> adj(src.arity());
    for (std::size_t i = 0; i < src.arity(); ++i)
      for (std::size_t j = 0; j < t.arity(); ++j)
        if (map[src.labels()[i]].contains(t.labels()[j])) adj[i].push_back(j);
    if (perfect_matching(adj, t.arity())) return t;
  }
  return std::nullopt;
}

// Every choice of images must be allowed. Returns the image under the
// smallest choice, or nothing.
inline std::optional<Configuration> relax_all(const Configuration& src, const Constraint& target,
                                              const RelaxationMap& map) {
  constexpr std::size_t kProductLimit = 200000;
  std::vector<std::vector<Label>> opts;
  std::size_t prod = 1;
  for (Label l : src.labels()) {
    opts.push_back(map[l].members());
    if (opts.back().empty()) return std::nullopt;
    prod *= opts.back().size();
    if (prod > kProductLimit) throw ResourceLimitError("relaxation products", prod, kProductLimit);
  }
  std::vector<Label> cur;
  bool ok = true;
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (!ok) return;
    if (i == opts.size()) {
      if (!target.contains(Configuration(cur))) ok = false;
      return;
    }
    for (Label l : opts[i]) {
      cur.push_back(l);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  if (!ok) return std::nullopt;
  std::vector<Label> first;
  for (const auto& o : opts) first.push_back(o.front());
  return Configuration(first);
}

}  // namespace detail

// Checks that p1 relaxes to p2 through `map`: each node configuration needs
// one allowed image, each edge configuration needs all images allowed.
inline RelaxationResult is_relaxation(const Problem& p1, const Problem& p2, const RelaxationMap& map) {
  if (map.size() != p1.num_labels()) throw InvalidArgument("relaxation map is not total");
  RelaxationResult r;
  if (p1.delta() != p2.delta() || p1.rank() != p2.rank()) {
    r.failure = "arity mismatch";
    return r;
  }
  for (const auto& c : p1.node()) {
    auto t = detail::relax_one(c, p2.node(), map);
    if (!t) {
      r.failure = "node " + render_configuration(p1, c);
      return r;
    }
    r.node_matches.push_back({c, *t});
  }
  for (const auto& c : p1.edge()) {
    auto t = detail::relax_all(c, p2.edge(), map);
    if (!t) {
      r.failure = "edge " + render_configuration(p1, c);
      return r;
    }
    r.edge_matches.push_back({c, *t});
  }
  r.ok = true;
  return r;
}

inline Problem substitute(const Problem& p, const std::vector<std::string>& new_names) {
  std::vector<Configuration> node(p.node().begin(), p.node().end());
  std::vector<Configuration> edge(p.edge().begin(), p.edge().end());
  // Labels sharing a new name collapse to one id.
  std::map<std::string, Label> ids;
  std::vector<std::string> names;
  std::vector<Label> remap(p.num_labels());
  for (Label l = 0; l < p.num_labels(); ++l) {
    auto [it, inserted] = ids.emplace(new_names[l], static_cast<Label>(names.size()));
    if (inserted) names.push_back(new_names[l]);
    remap[l] = it->second;
  }
  auto conv = [&](const std::vector<Configuration>& cs) {
    std::vector<Configuration> out;
    for (const auto& c : cs) {
      std::vector<Label> ls;
      for (Label l : c.labels()) ls.push_back(remap[l]);
      out.emplace_back(std::move(ls));
    }
    return out;
  };
  return Problem(names, p.delta(), p.rank(), Constraint(p.delta(), conv(node)),
                 Constraint(p.rank(), conv(edge)));
}

// Bijective renaming; throws if m is not a bijection on sigma.
inline Problem rename_labels(const Problem& p, const std::map<std::string, std::string>& m) {
  std::vector<std::string> names;
  std::set<std::string> targets;
  for (const auto& n : p.names()) {
    auto it = m.find(n);
    if (it == m.end()) throw InvalidArgument("renaming is not total: missing '" + n + "'");
    if (!targets.insert(it->second).second)
      throw InvalidArgument("renaming is not injective: '" + it->second + "' used twice");
    names.push_back(it->second);
  }
  for (const auto& [from, to] : m)
    if (!p.has_label(from)) throw InvalidArgument("renaming mentions unknown label '" + from + "'");
  return substitute(p, names);
}

struct MergeResult {
  Problem problem;
  std::map<std::string, std::string> map;  // old name -> representative
};

// Each group collapses onto its smallest name; groups must partition sigma.
inline MergeResult merge_labels(const Problem& p, const std::vector<std::vector<std::string>>& groups) {
  std::map<std::string, std::string> rep;
  for (const auto& g : groups) {
    if (g.empty()) throw InvalidArgument("empty merge group");
    std::string r = *std::min_element(g.begin(), g.end(),
                                      [](const std::string& a, const std::string& b) { return natural_less(a, b); });
    for (const auto& n : g) {
      if (!p.has_label(n)) throw InvalidArgument("merge group mentions unknown label '" + n + "'");
      if (!rep.emplace(n, r).second) throw InvalidArgument("label '" + n + "' appears in two groups");
    }
  }
  if (rep.size() != p.num_labels()) throw InvalidArgument("merge groups do not cover sigma");
  std::vector<std::string> names;
  for (const auto& n : p.names()) names.push_back(rep.at(n));
  return {substitute(p, names), rep};
}

// Adds configurations (given in problem text line syntax) to either side.
inline Problem add_configurations(const Problem& p, const std::vector<std::string>& node_lines,
                                  const std::vector<std::string>& edge_lines,
                                  const EngineOptions& opts = {}) {
  std::string text;
  auto section = [&](const Constraint& c, const std::vector<std::string>& extra) {
    if (!c.empty())
      for (const auto& cfg : c) text += render_configuration(p, cfg) + "\n";
    for (const auto& l : extra) text += l + "\n";
    if (c.empty() && extra.empty()) text += "(empty)^" + std::to_string(c.arity()) + "\n";
  };
  section(p.node(), node_lines);
  text += "---\n";
  section(p.edge(), edge_lines);
  Problem q = parse_problem(text, opts);
  if (q.delta() != p.delta() || q.rank() != p.rank()) throw InvalidArgument("added configuration has the wrong arity");
  return q;
}

namespace detail {

// Colour refinement over labels of p1 and p2 jointly.
inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>> refine_colors(const Problem& p1,
                                                                                   const Problem& p2) {
  auto initial = [](const Problem& p) {
    std::vector<std::vector<std::size_t>> sig(p.num_labels());
    StrengthOrder on = strength_order(p.node(), p.num_labels());
    StrengthOrder oe = strength_order(p.edge(), p.num_labels());
    Diagram dn = diagram(on), de = diagram(oe);
    auto degs = [&](const Diagram& d, std::size_t base) {
      for (std::size_t g = 0; g < d.groups.size(); ++g) {
        std::size_t in = 0, out = 0;
        for (auto [x, y] : d.edges) {
          if (y == g) ++in;
          if (x == g) ++out;
        }
        for (Label l : d.groups[g]) {
          sig[l].push_back(base + in);
          sig[l].push_back(base + 1000 + out);
          sig[l].push_back(base + 2000 + d.groups[g].size());
        }
      }
    };
    degs(dn, 0);
    degs(de, 10000);
    auto occ = [&](const Constraint& c, std::size_t base) {
      std::vector<std::map<std::size_t, std::size_t>> prof(p.num_labels());
      for (const auto& cfg : c)
        for (auto [l, m] : cfg.entries()) ++prof[l][m];
      for (Label l = 0; l < p.num_labels(); ++l) {
        sig[l].push_back(base + prof[l].size());
        for (auto [m, k] : prof[l]) {
          sig[l].push_back(m);
          sig[l].push_back(k);
        }
      }
    };
    occ(p.node(), 20000);
    occ(p.edge(), 30000);
    return sig;
  };
  std::map<std::vector<std::size_t>, std::size_t> dict;
  auto compress = [&](const std::vector<std::vector<std::size_t>>& sig) {
    std::vector<std::size_t> out;
    for (const auto& s : sig) out.push_back(dict.emplace(s, dict.size()).first->second);
    return out;
  };
  auto c1 = compress(initial(p1));
  auto c2 = compress(initial(p2));
  auto count_classes = [](const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    std::set<std::size_t> s(a.begin(), a.end());
    s.insert(b.begin(), b.end());
    return s.size();
  };
  std::size_t classes = count_classes(c1, c2);
  while (true) {
    auto step = [](const Problem& p, const std::vector<std::size_t>& col) {
      std::vector<std::vector<std::size_t>> sig(p.num_labels());
      for (Label l = 0; l < p.num_labels(); ++l) sig[l].push_back(col[l]);
      auto side = [&](const Constraint& c, std::size_t tag) {
        std::vector<std::vector<std::vector<std::size_t>>> per(p.num_labels());
        for (const auto& cfg : c) {
          std::vector<std::size_t> cc;
          for (Label x : cfg.labels()) cc.push_back(col[x]);
          std::sort(cc.begin(), cc.end());
          for (auto [l, m] : cfg.entries()) {
            auto v = cc;
            v.push_back(tag + m);
            per[l].push_back(std::move(v));
          }
        }
        for (Label l = 0; l < p.num_labels(); ++l) {
          std::sort(per[l].begin(), per[l].end());
          sig[l].push_back(tag);
          for (const auto& v : per[l]) sig[l].insert(sig[l].end(), v.begin(), v.end());
        }
      };
      side(p.node(), 1u << 30);
      side(p.edge(), 1u << 31);
      return sig;
    };
    dict.clear();
    auto n1 = compress(step(p1, c1));
    auto n2 = compress(step(p2, c2));
    std::size_t nc = count_classes(n1, n2);
    c1 = std::move(n1);
    c2 = std::move(n2);
    if (nc == classes) break;
    classes = nc;
  }
  return {c1, c2};
}

}  // namespace detail

// A bijection m with rename_labels(p1, m) == p2, or nothing.
inline std::optional<std::map<std::string, std::string>> find_renaming_equivalence(const Problem& p1,
                                                                                 const Problem& p2) {
  if (p1.num_labels() != p2.num_labels() || p1.delta() != p2.delta() || p1.rank() != p2.rank() ||
      p1.node().size() != p2.node().size() || p1.edge().size() != p2.edge().size())
    return std::nullopt;
  const std::size_t n = p1.num_labels();
  auto [c1, c2] = detail::refine_colors(p1, p2);
  {
    auto a = c1, b = c2;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) return std::nullopt;
  }
  // configs of p1 touching each label, per side
  std::vector<std::vector<std::pair<int, std::size_t>>> touching(n);
  const std::vector<Configuration>* sides[2] = {&p1.node().configs(), &p1.edge().configs()};
  const Constraint* targets[2] = {&p2.node(), &p2.edge()};
  for (int s = 0; s < 2; ++s)
    for (std::size_t i = 0; i < sides[s]->size(); ++i)
      for (auto [l, m] : (*sides[s])[i].entries()) touching[l].emplace_back(s, i);
  std::vector<Label> order(n);
  for (Label l = 0; l < n; ++l) order[l] = l;
  std::map<std::size_t, std::size_t> class_size;
  for (auto c : c1) ++class_size[c];
  std::stable_sort(order.begin(), order.end(),
                   [&](Label a, Label b) { return class_size[c1[a]] < class_size[c1[b]]; });
  std::vector<Label> assign(n, UINT32_MAX);
  std::vector<char> used(n, 0);
  auto consistent = [&](Label l) {
    for (auto [s, i] : touching[l]) {
      const auto& cfg = (*sides[s])[i];
      std::vector<Label> mapped;
      bool complete = true;
      for (Label x : cfg.labels()) {
        if (assign[x] == UINT32_MAX) {
          complete = false;
          break;
        }
        mapped.push_back(assign[x]);
      }
      if (complete && !targets[s]->contains(Configuration(mapped))) return false;
    }
    return true;
  };
  auto rec = [&](auto&& self, std::size_t k) -> bool {
    if (k == n) return true;
    Label l = order[k];
    for (Label t = 0; t < n; ++t) {
      if (used[t] || c2[t] != c1[l]) continue;
      assign[l] = t;
      used[t] = 1;
      if (consistent(l) && self(self, k + 1)) return true;
      used[t] = 0;
      assign[l] = UINT32_MAX;
    }
    return false;
  };
  if (!rec(rec, 0)) return std::nullopt;
  std::map<std::string, std::string> m;
  for (Label l = 0; l < n; ++l) m[p1.name(l)] = p2.name(assign[l]);
  if (!(rename_labels(p1, m) == p2)) return std::nullopt;
  return m;
}

struct ZeroRoundResult {
  bool solvable = false;
  std::optional<Configuration> witness;
};

// Deterministic port-numbering 0-round solvability on regular uniform instances.
inline ZeroRoundResult zero_round_solvable(const Problem& p) {
  ZeroRoundResult out;
  for (const auto& c : p.node()) {
    auto sup = c.support().members();
    bool ok = true;
    detail::for_each_multiset(sup.size(), p.rank(), [&](const std::vector<std::size_t>& ms) {
      if (!ok) return;
      std::vector<Label> ls;
      for (auto i : ms) ls.push_back(sup[i]);
      if (!p.edge().contains(Configuration(ls))) ok = false;
    });
    if (ok) {
      out.solvable = true;
      out.witness = c;
      return out;
    }
  }
  return out;
}

// ---- chain runner ----

struct DirectiveOutcome {
  Problem next;
  RelaxationMap map;  // stepped-problem labels -> next labels
};

struct ChainDirective {
  std::string script;  // replayable text
  std::function<DirectiveOutcome(const StepResult&)> apply;
};

struct ChainStep {
  std::string directive;
  Problem stepped;
  Problem problem;
  RelaxationResult relaxation;
  bool zero_round = false;
};

struct ChainReport {
  Problem start;
  bool start_zero_round = false;
  std::vector<ChainStep> steps;
  std::string stop_reason;  // "cap", "zero-round", "resource", "non-relaxation", "directive-error"
  std::string detail;
  std::size_t size_reached = 0;
  std::vector<std::string> warnings;
  std::size_t length() const { return steps.size(); }
};

namespace detail {

inline std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

inline std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

inline std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace detail

// Optional hook for directive kinds defined outside this module.
using DirectiveExtension = std::function<std::optional<ChainDirective>(const std::string& line)>;

// Parses one directive line: ';'-separated ops among
//   equiv | rename A=B ... | merge A,B C,D ... | add node: <line> | add edge: <line>
inline ChainDirective parse_directive(const std::string& line, const Problem& start,
                                      const DirectiveExtension& ext = nullptr,
                                      const EngineOptions& opts = {}) {
  std::string text = detail::trim(line);
  if (ext) {
    if (auto d = ext(text)) return *d;
  }
  struct Op {
    std::string kind;
    std::vector<std::string> args;
    std::string rest;
  };
  std::vector<Op> ops;
  for (const auto& raw : detail::split_on(text, ';')) {
    std::string part = detail::trim(raw);
    if (part.empty()) continue;
    auto words = detail::split_ws(part);
    Op op;
    op.kind = words[0];
    op.args.assign(words.begin() + 1, words.end());
    if (op.kind == "add") {
      auto colon = part.find(':');
      if (colon == std::string::npos || op.args.empty() || (op.args[0] != "node:" && op.args[0] != "edge:"))
        throw InvalidArgument("malformed add directive: " + part);
      op.rest = detail::trim(part.substr(colon + 1));
      op.args = {op.args[0] == "node:" ? "node" : "edge"};
    } else if (op.kind != "equiv" && op.kind != "rename" && op.kind != "merge") {
      throw InvalidArgument("unknown directive '" + op.kind + "'");
    }
    ops.push_back(std::move(op));
  }
  if (ops.empty()) throw InvalidArgument("empty directive");
  auto target = std::make_shared<const Problem>(start);
  ChainDirective d;
  d.script = text;
  d.apply = [ops, target, opts](const StepResult& step) {
    Problem cur = step.problem;
    // current name for each stepped label
    std::vector<std::string> where(step.problem.names());
    for (const auto& op : ops) {
      std::map<std::string, std::string> m;
      if (op.kind == "equiv") {
        auto eq = find_renaming_equivalence(cur, *target);
        if (!eq) throw InvalidArgument("equiv: no renaming equivalence to the chain start");
        m = *eq;
        cur = rename_labels(cur, m);
      } else if (op.kind == "rename") {
        for (const auto& n : cur.names()) m[n] = n;
        for (const auto& a : op.args) {
          auto eqpos = a.find('=');
          if (eqpos == std::string::npos) throw InvalidArgument("malformed rename pair '" + a + "'");
          m[a.substr(0, eqpos)] = a.substr(eqpos + 1);
        }
        cur = rename_labels(cur, m);
      } else if (op.kind == "merge") {
        std::vector<std::vector<std::string>> groups;
        std::set<std::string> seen;
        for (const auto& a : op.args) {
          groups.push_back(detail::split_on(a, ','));
          for (const auto& n : groups.back()) seen.insert(n);
        }
        for (const auto& n : cur.names())
          if (!seen.count(n)) groups.push_back({n});
        auto mr = merge_labels(cur, groups);
        m = mr.map;
        cur = mr.problem;
      } else {
        for (const auto& n : cur.names()) m[n] = n;
        std::vector<std::string> nl, el;
        (op.args[0] == "node" ? nl : el).push_back(op.rest);
        cur = add_configurations(cur, nl, el, opts);
      }
      for (auto& w : where) w = m.at(w);
    }
    DirectiveOutcome out{cur, RelaxationMap(step.problem.num_labels(), LabelSet(cur.num_labels()))};
    for (Label l = 0; l < step.problem.num_labels(); ++l)
      if (cur.has_label(where[l])) out.map[l].insert(cur.label(where[l]));
    return out;
  };
  return d;
}

// Steps the chain: full_step, then the directive, then a verified relaxation
// check. The last directive repeats when the list is shorter than `cap`.
inline ChainReport run_chain(const Problem& start, const std::vector<ChainDirective>& directives,
                             std::size_t cap, const EngineOptions& opts = {}) {
  ChainReport rep;
  rep.start = start;
  rep.start_zero_round = zero_round_solvable(start).solvable;
  if (rep.start_zero_round) {
    rep.stop_reason = "zero-round";
    return rep;
  }
  if (directives.empty() || cap == 0) {
    rep.stop_reason = "cap";
    return rep;
  }
  Problem cur = start;
  for (std::size_t i = 0; i < cap; ++i) {
    const auto& d = directives[std::min(i, directives.size() - 1)];
    StepResult st;
    try {
      st = full_step(cur, opts);
    } catch (const ResourceLimitError& e) {
      rep.stop_reason = "resource";
      rep.detail = e.what();
      rep.size_reached = e.reached();
      return rep;
    }
    DirectiveOutcome out;
    try {
      out = d.apply(st);
    } catch (const ResourceLimitError& e) {
      rep.stop_reason = "resource";
      rep.detail = e.what();
      rep.size_reached = e.reached();
      return rep;
    } catch (const std::exception& e) {
      rep.stop_reason = "directive-error";
      rep.detail = e.what();
      return rep;
    }
    ChainStep step{d.script, st.problem, out.next, is_relaxation(st.problem, out.next, out.map), false};
    if (!step.relaxation.ok) {
      rep.stop_reason = "non-relaxation";
      rep.detail = step.relaxation.failure;
      return rep;
    }
    step.zero_round = zero_round_solvable(out.next).solvable;
    std::size_t dr = start.delta() * start.rank();
    if (dr < 20 && st.problem.num_labels() > (std::size_t{1} << dr))
      rep.warnings.push_back("step " + std::to_string(i + 1) + ": " + std::to_string(st.problem.num_labels()) +
                             " labels exceeds 2^(delta*r)");
    bool zero = step.zero_round;
    cur = out.next;
    rep.steps.push_back(std::move(step));
    if (zero) {
      rep.stop_reason = "zero-round";
      return rep;
    }
  }
  rep.stop_reason = "cap";
  return rep;
}

}  // namespace relim
