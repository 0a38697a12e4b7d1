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

#include <algorithm>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "relim/problem_io.hpp"

namespace relim {

// A <= B ("B is at least as strong as A") over the labels of one constraint.
class StrengthOrder {
 public:
  StrengthOrder() = default;
  explicit StrengthOrder(std::vector<LabelSet> up) : up_(std::move(up)) {}

  std::size_t size() const { return up_.size(); }
  bool leq(Label a, Label b) const { return up_[a].contains(b); }
  bool equivalent(Label a, Label b) const { return leq(a, b) && leq(b, a); }
  bool less(Label a, Label b) const { return leq(a, b) && !leq(b, a); }
  const LabelSet& up(Label a) const { return up_[a]; }

  friend bool operator==(const StrengthOrder&, const StrengthOrder&) = default;

 private:
  std::vector<LabelSet> up_;
};

inline StrengthOrder strength_order(const Constraint& c, std::size_t num_labels) {
  ConfigSet all = c.as_set();
  std::vector<std::vector<char>> leq(num_labels, std::vector<char>(num_labels, 1));
  for (const auto& cfg : c) {
    for (auto [a, m] : cfg.entries()) {
      for (Label b = 0; b < num_labels; ++b) {
        if (b == a || !leq[a][b]) continue;
        if (!all.count(cfg.replaced(a, b))) leq[a][b] = 0;
      }
    }
  }
  std::vector<LabelSet> up;
  for (Label a = 0; a < num_labels; ++a) {
    LabelSet s(num_labels);
    for (Label b = 0; b < num_labels; ++b)
      if (leq[a][b]) s.insert(b);
    up.push_back(std::move(s));
  }
  return StrengthOrder(std::move(up));
}

// Upward closure gen<ls>.
inline LabelSet successors(const LabelSet& ls, const StrengthOrder& order) {
  LabelSet out(order.size());
  ls.for_each([&](Label a) { out |= order.up(a); });
  return out;
}

inline bool is_right_closed(const LabelSet& ls, const StrengthOrder& order) {
  return successors(ls, order) == ls;
}

struct Diagram {
  // Equal-strength labels share a group; groups are ordered by smallest member.
  std::vector<std::vector<Label>> groups;
  // Hasse edges (weaker group, stronger group).
  std::vector<std::pair<std::size_t, std::size_t>> edges;
};

inline Diagram diagram(const StrengthOrder& order) {
  Diagram d;
  std::size_t n = order.size();
  std::vector<std::size_t> group_of(n, SIZE_MAX);
  for (Label a = 0; a < n; ++a) {
    if (group_of[a] != SIZE_MAX) continue;
    group_of[a] = d.groups.size();
    d.groups.push_back({a});
    for (Label b = a + 1; b < n; ++b)
      if (group_of[b] == SIZE_MAX && order.equivalent(a, b)) {
        group_of[b] = group_of[a];
        d.groups.back().push_back(b);
      }
  }
  std::size_t g = d.groups.size();
  auto lt = [&](std::size_t x, std::size_t y) {
    return order.less(d.groups[x][0], d.groups[y][0]);
  };
  for (std::size_t x = 0; x < g; ++x)
    for (std::size_t y = 0; y < g; ++y) {
      if (!lt(x, y)) continue;
      bool covered = true;
      for (std::size_t z = 0; z < g && covered; ++z)
        if (lt(x, z) && lt(z, y)) covered = false;
      if (covered) d.edges.emplace_back(x, y);
    }
  return d;
}

inline Diagram diagram(const Constraint& c, std::size_t num_labels) {
  return diagram(strength_order(c, num_labels));
}

// All nonempty right-closed sets, in canonical order.
inline std::vector<LabelSet> right_closed_sets(const StrengthOrder& order, std::size_t cap) {
  std::size_t n = order.size();
  // Equivalence classes, strongest first (a stronger class has a smaller up-set).
  std::vector<Label> reps;
  std::vector<LabelSet> cls;
  std::vector<char> seen(n, 0);
  for (Label a = 0; a < n; ++a) {
    if (seen[a]) continue;
    LabelSet s(n);
    for (Label b = 0; b < n; ++b)
      if (order.equivalent(a, b)) {
        s.insert(b);
        seen[b] = 1;
      }
    reps.push_back(a);
    cls.push_back(std::move(s));
  }
  std::vector<std::size_t> idx(reps.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
    return order.up(reps[x]).size() < order.up(reps[y]).size();
  });
  std::vector<LabelSet> out;
  LabelSet cur(n);
  auto rec = [&](auto&& self, std::size_t k) -> void {
    if (k == idx.size()) {
      if (!cur.empty()) {
        out.push_back(cur);
        if (out.size() > cap) throw ResourceLimitError("enumerating right-closed sets", out.size(), cap);
      }
      return;
    }
    Label a = reps[idx[k]];
    // exclude
    self(self, k + 1);
    // include only if every stronger label is already in
    LabelSet strictly_up = order.up(a);
    if (strictly_up.subset_of(cur | cls[idx[k]])) {
      LabelSet saved = cur;
      cur |= cls[idx[k]];
      self(self, k + 1);
      cur = std::move(saved);
    }
  };
  rec(rec, 0);
  std::sort(out.begin(), out.end());
  return out;
}

namespace detail {

// For every sub-multiset m (size < arity) of some configuration, the labels l
// such that m + l is again a sub-multiset of some configuration.
class ExtensionTable {
 public:
  ExtensionTable(const Constraint& c, std::size_t num_labels) : arity_(c.arity()), n_(num_labels) {
    for (const auto& cfg : c) {
      auto ents = cfg.entries();
      std::vector<std::size_t> take(ents.size(), 0);
      while (true) {
        std::vector<Label> sub;
        std::size_t size = 0;
        for (std::size_t i = 0; i < ents.size(); ++i) {
          for (std::size_t k = 0; k < take[i]; ++k) sub.push_back(ents[i].first);
          size += take[i];
        }
        if (size < arity_) {
          auto& ext = table_.try_emplace(Configuration(sub), LabelSet(n_)).first->second;
          for (std::size_t i = 0; i < ents.size(); ++i)
            if (take[i] < ents[i].second) ext.insert(ents[i].first);
        }
        std::size_t i = 0;
        while (i < ents.size() && take[i] == ents[i].second) take[i++] = 0;
        if (i == ents.size()) break;
        ++take[i];
      }
    }
  }

  const LabelSet& ext(const Configuration& m) const {
    auto it = table_.find(m);
    return it == table_.end() ? empty_ : it->second;
  }

  std::size_t arity() const { return arity_; }
  std::size_t num_labels() const { return n_; }

 private:
  std::size_t arity_;
  std::size_t n_;
  std::unordered_map<Configuration, LabelSet, ConfigurationHash> table_;
  LabelSet empty_;
};

inline Configuration plus(const Configuration& m, Label l) {
  std::vector<Label> v = m.labels();
  v.push_back(l);
  return Configuration(std::move(v));
}

inline std::vector<Configuration> extend_all(const std::vector<Configuration>& ms, const LabelSet& s,
                                             const ExtensionTable* filter) {
  std::vector<Configuration> out;
  for (const auto& m : ms) {
    if (filter != nullptr) {
      (s & filter->ext(m)).for_each([&](Label l) { out.push_back(plus(m, l)); });
    } else {
      s.for_each([&](Label l) { out.push_back(plus(m, l)); });
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline LabelSet allowed_after(const std::vector<Configuration>& ms, const ExtensionTable& t) {
  LabelSet a = LabelSet::full(t.num_labels());
  for (const auto& m : ms) {
    a &= t.ext(m);
    if (a.empty()) break;
  }
  return a;
}

// Runs body(i) for i in [0, n) on `jobs` threads, round robin.
template <class F>
void parallel_for(std::size_t n, unsigned jobs, F&& body) {
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i, 0u);
    return;
  }
  unsigned workers = static_cast<unsigned>(std::min<std::size_t>(jobs, n));
  std::vector<std::thread> ts;
  std::vector<std::exception_ptr> errs(workers);
  for (unsigned w = 0; w < workers; ++w)
    ts.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) body(i, w);
      } catch (...) {
        errs[w] = std::current_exception();
      }
    });
  for (auto& t : ts) t.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

}  // namespace detail

using SetConfiguration = std::vector<LabelSet>;  // sorted canonically

struct SetConfigLess {
  bool operator()(const SetConfiguration& a, const SetConfiguration& b) const {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  }
};

// Maximal configurations of nonempty label sets whose every choice lies in c.
inline std::vector<SetConfiguration> apply_universal(const Constraint& c, std::size_t num_labels,
                                                     const EngineOptions& opts = {}) {
  const std::size_t a = c.arity();
  std::vector<SetConfiguration> result;
  if (c.empty() || a == 0) return result;
  detail::ExtensionTable table(c, num_labels);
  StrengthOrder order = strength_order(c, num_labels);
  const Configuration root;
  if (a == 1) {
    LabelSet all = table.ext(root);
    if (!all.empty()) result.push_back({all});
    return result;
  }
  std::vector<LabelSet> cands = right_closed_sets(order, opts.cap);

  // allowed set for a position given the other positions' sets
  auto allowed_for = [&](const SetConfiguration& others) {
    std::vector<Configuration> ms{root};
    for (const auto& s : others) {
      ms = detail::extend_all(ms, s, &table);
      if (ms.empty()) return LabelSet(num_labels);
    }
    return detail::allowed_after(ms, table);
  };

  std::vector<std::vector<SetConfiguration>> per_worker(std::max(1u, opts.jobs));
  std::mutex count_mu;
  std::size_t found = 0;

  auto search_from = [&](std::size_t first, unsigned worker) {
    SetConfiguration chosen;
    auto rec = [&](auto&& self, std::size_t last, const std::vector<Configuration>& ms) -> void {
      LabelSet allowed = detail::allowed_after(ms, table);
      if (allowed.empty()) return;
      if (chosen.size() == a - 1) {
        if (allowed < chosen.back()) return;
        SetConfiguration x = chosen;
        x.push_back(allowed);
        for (std::size_t i = 0; i + 1 < a; ++i) {
          SetConfiguration others;
          for (std::size_t j = 0; j < a; ++j)
            if (j != i) others.push_back(x[j]);
          if (!(allowed_for(others) == x[i])) return;
        }
        per_worker[worker].push_back(std::move(x));
        std::lock_guard<std::mutex> lk(count_mu);
        if (++found > opts.cap) throw ResourceLimitError("universal step", found, opts.cap);
        return;
      }
      for (std::size_t k = last; k < cands.size(); ++k) {
        if (!cands[k].subset_of(allowed)) continue;
        auto next = detail::extend_all(ms, cands[k], nullptr);
        chosen.push_back(cands[k]);
        self(self, k, next);
        chosen.pop_back();
      }
    };
    if (!cands[first].subset_of(table.ext(root))) return;
    chosen.push_back(cands[first]);
    rec(rec, first, detail::extend_all({root}, cands[first], nullptr));
  };
  detail::parallel_for(cands.size(), std::max(1u, opts.jobs), search_from);
  for (auto& v : per_worker)
    for (auto& x : v) result.push_back(std::move(x));
  std::sort(result.begin(), result.end(), SetConfigLess{});
  result.erase(std::unique(result.begin(), result.end()), result.end());
  return result;
}

struct ExistentialConfig {
  std::vector<std::size_t> sets;  // sorted indices into the alphabet
  std::vector<Label> witness;     // witness[i] is chosen from alphabet[sets[i]]
};

// All multisets over `alphabet` of size `arity` admitting a choice in c.
inline std::vector<ExistentialConfig> apply_existential(const Constraint& c, std::size_t num_labels,
                                                        const std::vector<LabelSet>& alphabet,
                                                        std::size_t arity,
                                                        const EngineOptions& opts = {}) {
  std::vector<ExistentialConfig> result;
  if (c.empty() || alphabet.empty() || arity != c.arity()) return result;
  detail::ExtensionTable table(c, num_labels);
  const Configuration root;
  std::vector<std::vector<ExistentialConfig>> per_worker(std::max(1u, opts.jobs));
  std::mutex count_mu;
  std::size_t found = 0;

  auto witness_for = [&](const std::vector<std::size_t>& sets) {
    std::vector<Label> w;
    auto rec = [&](auto&& self, const Configuration& m) -> bool {
      if (w.size() == sets.size()) return true;
      LabelSet opts_here = alphabet[sets[w.size()]] & table.ext(m);
      bool ok = false;
      opts_here.for_each([&](Label l) {
        if (ok) return;
        w.push_back(l);
        if (self(self, detail::plus(m, l)))
          ok = true;
        else
          w.pop_back();
      });
      return ok;
    };
    rec(rec, root);
    return w;
  };

  auto search_from = [&](std::size_t first, unsigned worker) {
    std::vector<std::size_t> chosen{first};
    auto rec = [&](auto&& self, const std::vector<Configuration>& ms) -> void {
      if (ms.empty()) return;
      if (chosen.size() == arity) {
        per_worker[worker].push_back({chosen, witness_for(chosen)});
        std::lock_guard<std::mutex> lk(count_mu);
        if (++found > opts.cap) throw ResourceLimitError("existential step", found, opts.cap);
        return;
      }
      for (std::size_t k = chosen.back(); k < alphabet.size(); ++k) {
        chosen.push_back(k);
        self(self, detail::extend_all(ms, alphabet[k], &table));
        chosen.pop_back();
      }
    };
    rec(rec, detail::extend_all({root}, alphabet[first], &table));
  };
  detail::parallel_for(alphabet.size(), std::max(1u, opts.jobs), search_from);
  for (auto& v : per_worker)
    for (auto& x : v) result.push_back(std::move(x));
  std::sort(result.begin(), result.end(),
            [](const ExistentialConfig& x, const ExistentialConfig& y) { return x.sets < y.sets; });
  return result;
}

// Problem whose labels are sets of labels of a base problem.
struct SetProblem {
  Problem problem;
  std::vector<LabelSet> members;  // members[id] over base label ids
  std::shared_ptr<const Problem> base;
};

namespace detail {

inline std::string set_name(const Problem& base, const LabelSet& s) {
  std::string out = "{";
  bool first = true;
  s.for_each([&](Label l) {
    if (!first) out += ',';
    out += base.name(l);
    first = false;
  });
  return out + "}";
}

inline void check_universal(const Constraint& c, const std::vector<SetConfiguration>& out,
                            const StrengthOrder& order) {
  constexpr std::size_t kProductLimit = 200000;
  for (const auto& x : out) {
    std::size_t prod = 1;
    for (const auto& s : x) {
      if (!is_right_closed(s, order)) throw std::logic_error("universal step produced a set that is not right-closed");
      prod *= s.size();
      if (prod > kProductLimit) break;
    }
    if (prod > kProductLimit) continue;
    std::vector<std::vector<Label>> ms;
    for (const auto& s : x) ms.push_back(s.members());
    std::vector<Label> cur;
    auto rec = [&](auto&& self, std::size_t i) -> void {
      if (i == ms.size()) {
        if (!c.contains(Configuration(cur))) throw std::logic_error("universal step is unsound");
        return;
      }
      for (Label l : ms[i]) {
        cur.push_back(l);
        self(self, i + 1);
        cur.pop_back();
      }
    };
    rec(rec, 0);
  }
}

inline void check_existential(const Constraint& c, const std::vector<LabelSet>& alphabet,
                              const std::vector<ExistentialConfig>& out) {
  for (const auto& x : out) {
    if (x.witness.size() != x.sets.size()) throw std::logic_error("existential step lost a witness");
    for (std::size_t i = 0; i < x.sets.size(); ++i)
      if (!alphabet[x.sets[i]].contains(x.witness[i]))
        throw std::logic_error("existential witness outside its set");
    if (!c.contains(Configuration(x.witness))) throw std::logic_error("existential witness not allowed");
  }
}

// Universal on `uni`, existential on `exi`; `uni_is_edge` selects the side.
inline SetProblem quantify(const std::shared_ptr<const Problem>& base, bool uni_is_edge,
                           const EngineOptions& opts) {
  const Problem& p = *base;
  const Constraint& uni = uni_is_edge ? p.edge() : p.node();
  const Constraint& exi = uni_is_edge ? p.node() : p.edge();
  auto ucfgs = apply_universal(uni, p.num_labels(), opts);
  check_universal(uni, ucfgs, strength_order(uni, p.num_labels()));
  std::vector<LabelSet> sigma;
  for (const auto& x : ucfgs)
    for (const auto& s : x) sigma.push_back(s);
  std::sort(sigma.begin(), sigma.end());
  sigma.erase(std::unique(sigma.begin(), sigma.end()), sigma.end());
  std::unordered_map<LabelSet, Label, LabelSetHash> idx;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    idx.emplace(sigma[i], static_cast<Label>(i));
    names.push_back(set_name(p, sigma[i]));
  }
  std::vector<Configuration> ucs;
  for (const auto& x : ucfgs) {
    std::vector<Label> ls;
    for (const auto& s : x) ls.push_back(idx.at(s));
    ucs.emplace_back(std::move(ls));
  }
  auto ecfgs = apply_existential(exi, p.num_labels(), sigma, exi.arity(), opts);
  check_existential(exi, sigma, ecfgs);
  std::vector<Configuration> ecs;
  for (const auto& x : ecfgs) {
    std::vector<Label> ls;
    for (auto i : x.sets) ls.push_back(static_cast<Label>(i));
    ecs.emplace_back(std::move(ls));
  }
  Constraint uc(uni.arity(), std::move(ucs));
  Constraint ec(exi.arity(), std::move(ecs));
  SetProblem out;
  out.problem = uni_is_edge ? Problem(names, p.delta(), p.rank(), std::move(ec), std::move(uc))
                            : Problem(names, p.delta(), p.rank(), std::move(uc), std::move(ec));
  std::unordered_map<std::string, LabelSet> by_name;
  for (std::size_t i = 0; i < sigma.size(); ++i) by_name.emplace(names[i], sigma[i]);
  for (const auto& n : out.problem.names()) out.members.push_back(by_name.at(n));
  out.base = base;
  return out;
}

inline std::string fresh_name(std::size_t i, std::size_t n) {
  std::size_t width = 1;
  for (std::size_t cap = 26; cap < n; cap *= 26) ++width;
  std::string s(width, 'A');
  for (std::size_t k = width; k-- > 0;) {
    s[k] = static_cast<char>('A' + i % 26);
    i /= 26;
  }
  return s;
}

}  // namespace detail

inline SetProblem re_step(const Problem& p, const EngineOptions& opts = {}) {
  return detail::quantify(std::make_shared<const Problem>(p), true, opts);
}

inline SetProblem rere_step(const SetProblem& ip, const EngineOptions& opts = {}) {
  return detail::quantify(std::make_shared<const Problem>(ip.problem), false, opts);
}

struct StepResult {
  Problem problem;                // opaque fresh labels
  std::vector<LabelSet> members;  // members[id] over re-label ids of `re`
  SetProblem re;
  SetProblem rere;
  std::vector<std::pair<std::string, std::string>> provenance;  // fresh name -> nested set
};

inline StepResult full_step(const Problem& p, const EngineOptions& opts = {}) {
  StepResult r;
  r.re = re_step(p, opts);
  r.rere = rere_step(r.re, opts);
  const Problem& rp = r.rere.problem;
  std::vector<Label> order(rp.num_labels());
  for (Label i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](Label x, Label y) { return r.rere.members[x] < r.rere.members[y]; });
  std::vector<std::string> names(rp.num_labels());
  for (std::size_t k = 0; k < order.size(); ++k) names[order[k]] = detail::fresh_name(k, order.size());
  r.problem = Problem(names, rp.delta(), rp.rank(), rp.node(), rp.edge());
  for (const auto& n : r.problem.names()) {
    Label old = static_cast<Label>(std::find(names.begin(), names.end(), n) - names.begin());
    r.members.push_back(r.rere.members[old]);
    r.provenance.emplace_back(n, rp.name(old));
  }
  return r;
}

}  // namespace relim
