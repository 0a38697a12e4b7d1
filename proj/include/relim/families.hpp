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
#include <bit>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "relim/analysis.hpp"
#include "relim/labeling.hpp"

namespace relim {

// ---- generators ----

inline Problem mis_graph_problem(std::size_t delta) {
  if (delta < 2) throw InvalidArgument("MIS encoding needs delta >= 2");
  std::vector<std::string> pou{"P"};
  for (std::size_t i = 1; i < delta; ++i) pou.push_back("O");
  return Problem::from_names(delta, 2, {std::vector<std::string>(delta, "M"), pou},
                             {{"P", "M"}, {"O", "M"}, {"O", "O"}});
}

inline std::string color_name(std::size_t c) { return std::to_string(c); }

inline Problem plain_hypergraph_coloring(std::size_t colors, std::size_t delta, std::size_t rank) {
  if (colors < 2) throw InvalidArgument("coloring needs at least 2 colors");
  if (rank < 2) throw InvalidArgument("coloring needs rank >= 2");
  std::vector<std::vector<std::string>> node, edge;
  for (std::size_t c = 1; c <= colors; ++c) node.push_back(std::vector<std::string>(delta, color_name(c)));
  detail::for_each_multiset(colors, rank, [&](const std::vector<std::size_t>& ms) {
    if (ms.front() == ms.back()) return;
    std::vector<std::string> w;
    for (auto x : ms) w.push_back(color_name(x + 1));
    edge.push_back(w);
  });
  return Problem::from_names(delta, rank, node, edge);
}

inline Problem colorful_coloring(std::size_t colors, std::size_t delta, std::size_t rank) {
  if (colors < rank) throw InvalidArgument("colorful coloring needs at least r colors");
  std::vector<std::vector<std::string>> node, edge;
  for (std::size_t c = 1; c <= colors; ++c) node.push_back(std::vector<std::string>(delta, color_name(c)));
  detail::for_each_multiset(colors, rank, [&](const std::vector<std::size_t>& ms) {
    for (std::size_t i = 1; i < ms.size(); ++i)
      if (ms[i] == ms[i - 1]) return;
    std::vector<std::string> w;
    for (auto x : ms) w.push_back(color_name(x + 1));
    edge.push_back(w);
  });
  return Problem::from_names(delta, rank, node, edge);
}

// Display name of l(C) for a color set given as a bitmask over colors 1..k.
inline std::string ell_name(unsigned mask) {
  std::string s = "l{";
  bool first = true;
  for (unsigned i = 0; i < 32; ++i)
    if (mask & (1u << i)) {
      if (!first) s += ',';
      s += std::to_string(i + 1);
      first = false;
    }
  return s + "}";
}

inline Problem coloring_fixed_point(std::size_t delta, std::size_t rank) {
  if (delta < 2 || rank < 2) throw InvalidArgument("fixed point needs delta, r >= 2");
  if (delta > 16) throw InvalidArgument("delta too large for the fixed point generator");
  const unsigned full = (1u << delta) - 1;
  std::vector<std::vector<std::string>> node, edge;
  for (unsigned c = 1; c <= full; ++c) {
    std::size_t sz = static_cast<std::size_t>(std::popcount(c));
    std::vector<std::string> w(delta - sz + 1, ell_name(c));
    for (std::size_t i = 1; i < sz; ++i) w.push_back(ell_name(0));
    node.push_back(w);
  }
  // A configuration is allowed iff no color lies in every position.
  detail::for_each_multiset(std::size_t{full} + 1, rank, [&](const std::vector<std::size_t>& ms) {
    unsigned common = full;
    for (auto x : ms) common &= static_cast<unsigned>(x);
    if (common != 0) return;
    std::vector<std::string> w;
    for (auto x : ms) w.push_back(ell_name(static_cast<unsigned>(x)));
    edge.push_back(w);
  });
  return Problem::from_names(delta, rank, node, edge);
}

struct ZVector {
  std::vector<std::size_t> z;  // z[i-1] = z_i
  std::size_t s = 1;
  std::size_t k() const { return z.size(); }
};

inline void check_pi_params(const ZVector& zv, std::size_t delta, std::size_t rank) {
  if (delta < 3 || rank < 3) throw InvalidArgument("the family needs delta >= 3 and r >= 3");
  if (zv.k() < 2 || zv.k() > delta - 1) throw InvalidArgument("len(z) must lie in [2, delta-1]");
  if (zv.s < 1 || zv.s > zv.k()) throw InvalidArgument("s must lie in [1, len(z)]");
  for (auto x : zv.z)
    if (x > rank - 1) throw InvalidArgument("entries of z must be at most r-1");
}

// Label of Pi(z,s) viewed structurally: kind is one of D,M,P,U,X,L (with mask).
struct PiLabel {
  char kind;
  unsigned mask = 0;
  std::string name() const { return kind == 'L' ? ell_name(mask) : std::string(1, kind); }
};

inline std::vector<PiLabel> pi_alphabet(std::size_t k) {
  std::vector<PiLabel> out{{'D'}, {'M'}, {'P'}, {'U'}, {'X'}};
  for (unsigned c = 1; c < (1u << k); ++c) out.push_back({'L', c});
  return out;
}

// Membership predicate for the edge constraint, straight from the three conditions.
inline bool pi_edge_allows(const std::vector<PiLabel>& cfg, const ZVector& zv) {
  const std::size_t r = cfg.size();
  auto dm = [](const PiLabel& l) { return l.kind == 'D' || l.kind == 'M'; };
  std::size_t n_dm = 0;
  for (const auto& l : cfg) n_dm += dm(l) ? 1 : 0;
  // condition 1
  for (std::size_t j = 0; j < r; ++j)
    if (cfg[j].kind == 'M' && n_dm == 1) return true;
  // condition 2
  for (std::size_t j = 0; j < r; ++j) {
    if (cfg[j].kind != 'X') continue;
    for (std::size_t j2 = 0; j2 < r; ++j2) {
      if (j2 == j) continue;
      std::size_t others = n_dm - (dm(cfg[j2]) ? 1 : 0);
      if (others == 0) return true;
    }
  }
  // condition 3
  for (const auto& l : cfg)
    if (l.kind == 'P') return false;
  if (n_dm > 1) return false;
  const unsigned sbit = 1u << (zv.s - 1);
  std::size_t cs = 0;
  for (const auto& l : cfg)
    if (l.kind == 'D' || (l.kind == 'L' && (l.mask & sbit))) ++cs;
  if (cs > zv.z[zv.s - 1]) return false;
  for (std::size_t i = 1; i <= zv.k(); ++i) {
    if (i == zv.s) continue;
    std::size_t ci = 0;
    for (const auto& l : cfg)
      if (l.kind == 'L' && (l.mask & (1u << (i - 1)))) ++ci;
    if (ci > zv.z[i - 1]) return false;
  }
  return true;
}

namespace detail {

// Constructive enumeration of the edge constraint, one condition at a time.
inline std::vector<std::vector<std::size_t>> pi_edge_enumerate(const std::vector<PiLabel>& sigma,
                                                               const ZVector& zv, std::size_t r) {
  std::set<std::vector<std::size_t>> out;
  std::vector<std::size_t> not_dm, not_p;
  std::size_t idx_m = 0, idx_x = 0;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    char k = sigma[i].kind;
    if (k == 'M') idx_m = i;
    if (k == 'X') idx_x = i;
    if (k != 'D' && k != 'M') not_dm.push_back(i);
    if (k != 'P') not_p.push_back(i);
  }
  auto add = [&](std::vector<std::size_t> w) {
    std::sort(w.begin(), w.end());
    out.insert(std::move(w));
  };
  // 1: M plus r-1 labels outside {D,M}
  for_each_multiset(not_dm.size(), r - 1, [&](const std::vector<std::size_t>& ms) {
    std::vector<std::size_t> w{idx_m};
    for (auto x : ms) w.push_back(not_dm[x]);
    add(w);
  });
  // 2: X, one arbitrary label, r-2 labels outside {D,M}
  for (std::size_t any = 0; any < sigma.size(); ++any)
    for_each_multiset(not_dm.size(), r - 2, [&](const std::vector<std::size_t>& ms) {
      std::vector<std::size_t> w{idx_x, any};
      for (auto x : ms) w.push_back(not_dm[x]);
      add(w);
    });
  // 3: budgeted search over labels other than P
  std::vector<std::size_t> budget(zv.k());
  for (std::size_t i = 0; i < zv.k(); ++i) budget[i] = zv.z[i];
  std::size_t dm_left = 1;
  std::vector<std::size_t> cur;
  const std::size_t s0 = zv.s - 1;
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (cur.size() == r) {
      add(cur);
      return;
    }
    for (std::size_t t = start; t < not_p.size(); ++t) {
      const PiLabel& l = sigma[not_p[t]];
      bool is_dm = l.kind == 'D' || l.kind == 'M';
      if (is_dm && dm_left == 0) continue;
      std::vector<std::size_t> need(zv.k(), 0);
      if (l.kind == 'D') need[s0] = 1;
      if (l.kind == 'L')
        for (std::size_t i = 0; i < zv.k(); ++i)
          if (l.mask & (1u << i)) need[i] = 1;
      bool fits = true;
      for (std::size_t i = 0; i < zv.k(); ++i)
        if (need[i] > budget[i]) fits = false;
      if (!fits) continue;
      for (std::size_t i = 0; i < zv.k(); ++i) budget[i] -= need[i];
      if (is_dm) --dm_left;
      cur.push_back(not_p[t]);
      self(self, t);
      cur.pop_back();
      if (is_dm) ++dm_left;
      for (std::size_t i = 0; i < zv.k(); ++i) budget[i] += need[i];
    }
  };
  rec(rec, 0);
  return {out.begin(), out.end()};
}

}  // namespace detail

inline Problem pi_family(const ZVector& zv, std::size_t delta, std::size_t rank) {
  check_pi_params(zv, delta, rank);
  auto sigma = pi_alphabet(zv.k());
  std::vector<std::string> names;
  for (const auto& l : sigma) names.push_back(l.name());
  std::map<std::string, Label> id;
  for (std::size_t i = 0; i < names.size(); ++i) id[names[i]] = static_cast<Label>(i);
  std::vector<Configuration> node;
  auto word = [&](std::vector<std::pair<std::string, std::size_t>> parts) {
    std::vector<Label> ls;
    for (auto& [n, m] : parts)
      for (std::size_t i = 0; i < m; ++i) ls.push_back(id.at(n));
    return Configuration(ls);
  };
  node.push_back(word({{"M", delta}}));
  node.push_back(word({{"P", 1}, {"U", delta - 1}}));
  node.push_back(word({{"D", delta - 1}, {"X", 1}}));
  for (unsigned c = 1; c < (1u << zv.k()); ++c) {
    std::size_t sz = static_cast<std::size_t>(std::popcount(c));
    node.push_back(word({{ell_name(c), delta - sz + 1}, {"U", sz - 1}}));
  }
  std::vector<Configuration> edge;
  for (const auto& w : detail::pi_edge_enumerate(sigma, zv, rank)) {
    std::vector<Label> ls(w.begin(), w.end());
    edge.emplace_back(std::vector<Label>(ls.begin(), ls.end()));
  }
  return Problem(names, delta, rank, Constraint(delta, node), Constraint(rank, edge));
}

// ---- colorful to plain conversion ----

// Color c in 1..delta*(r-1) goes to group 1 + (c-1)/(r-1).
inline std::vector<std::size_t> colorful_to_plain_map(std::size_t delta, std::size_t rank) {
  if (rank < 2) throw InvalidArgument("conversion needs r >= 2");
  std::vector<std::size_t> g(delta * (rank - 1) + 1, 0);
  for (std::size_t c = 1; c < g.size(); ++c) g[c] = 1 + (c - 1) / (rank - 1);
  return g;
}

// Every node of color c outputs l({group(c)}) on all incidences.
inline Labeling colorful_to_fixed_point_labeling(const sim::Hypergraph& h, const std::vector<std::size_t>& color,
                                                 std::size_t delta, std::size_t rank) {
  auto g = colorful_to_plain_map(delta, rank);
  Labeling l;
  for (int v = 0; v < h.num_nodes(); ++v) {
    std::size_t c = color[static_cast<std::size_t>(v)];
    if (c == 0 || c >= g.size()) throw InvalidArgument("color out of range for conversion");
    for (int e : h.incident(v)) l[{h.node_id(v), h.edge_id(e)}] = ell_name(1u << (g[c] - 1));
  }
  return l;
}

// ---- verifiers ----

struct FixedPointResult {
  bool ok = false;
  std::map<std::string, std::string> renaming;  // stepped label -> fixed point label
  std::size_t re_labels = 0;
  std::size_t stepped_labels = 0;
};

inline FixedPointResult verify_fixed_point(std::size_t delta, std::size_t rank, const EngineOptions& opts = {}) {
  Problem fp = coloring_fixed_point(delta, rank);
  StepResult st = full_step(fp, opts);
  FixedPointResult out;
  out.re_labels = st.re.problem.num_labels();
  out.stepped_labels = st.problem.num_labels();
  auto m = find_renaming_equivalence(st.problem, fp);
  if (m) {
    out.ok = true;
    out.renaming = *m;
  }
  return out;
}

struct OneStepResult {
  bool ok = false;
  std::string failure;
  bool re_alphabet_matches = false;  // Sigma_re = {<L>, <L>'}
  bool star_distinct = false;        // the star labels are pairwise different sets
  bool estar_agree = false;          // both constructions of E*_q coincide
  std::size_t estar_size = 0;
  std::size_t estar_char_size = 0;
  bool relaxes_to_star = false;      // rere(re(Pi)) relaxes to Pi*_q
  bool renamed_equal = false;        // renamed Pi*_q == Pi(z',q)
  ZVector next_z;
  Problem pistar;
  Problem next;
  std::map<std::string, std::string> renaming;  // Pi*_q label -> Pi(z',q) label
  RelaxationMap map;                            // stepped labels -> Pi(z',q) labels
  RelaxationResult witness;
};

namespace detail {

struct StarLabel {
  std::string name;    // structural name
  std::string target;  // name in Pi(z',q)
  LabelSet set;        // over re-label ids
  char kind;           // P,U,D(U'),X,M(X'),F(-),G(+)
  unsigned mask = 0;
};

}  // namespace detail

// Checks that rere(re(Pi(z,s))) relaxes to Pi(z',q), given its full step.
inline OneStepResult verify_onestep_from_step(const ZVector& zv, std::size_t q, std::size_t delta,
                                              std::size_t rank, const StepResult& st,
                                              const EngineOptions& opts = {}) {
  OneStepResult out;
  const std::size_t k = zv.k();
  const Problem& base = *st.re.base;
  const Problem& rep = st.re.problem;
  // re-level generators <L>, <L>'
  StrengthOrder oe = strength_order(base.edge(), base.num_labels());
  auto one = [&](const std::string& n) { return LabelSet(base.num_labels(), {base.label(n)}); };
  std::unordered_map<LabelSet, Label, LabelSetHash> re_id;
  for (Label i = 0; i < rep.num_labels(); ++i) re_id.emplace(st.re.members[i], i);
  const std::string ls_name = ell_name(1u << (zv.s - 1));
  auto gen = [&](const std::string& n) { return successors(one(n), oe); };
  auto genp = [&](const std::string& n) {
    LabelSet s = one(n);
    s.insert(oe.leq(base.label(n), base.label(ls_name)) ? base.label("D") : base.label("M"));
    return successors(s, oe);
  };
  auto ell = [&](unsigned mask) { return mask == 0 ? std::string("U") : ell_name(mask); };
  std::vector<std::string> gens{"P", "U", "X"};
  for (unsigned c = 1; c < (1u << k); ++c) gens.push_back(ell_name(c));
  LabelSet expected(rep.num_labels());
  std::map<std::string, LabelSet> g_set, gp_set;
  bool all_found = true;
  for (const auto& n : gens) {
    g_set.emplace(n, gen(n));
    gp_set.emplace(n, genp(n));
    auto a = re_id.find(g_set.at(n));
    auto b = re_id.find(gp_set.at(n));
    if (a == re_id.end() || b == re_id.end()) {
      all_found = false;
      continue;
    }
    expected.insert(a->second);
    expected.insert(b->second);
  }
  out.re_alphabet_matches = all_found && expected.size() == rep.num_labels() && expected.size() == 2 * gens.size();
  // rere-level closures: re labels at least as strong as one containing the generator
  StrengthOrder on = strength_order(rep.node(), rep.num_labels());
  auto gg = [&](std::initializer_list<LabelSet> gs) {
    LabelSet seed(rep.num_labels());
    for (const auto& g : gs)
      for (Label i = 0; i < rep.num_labels(); ++i)
        if (g.subset_of(st.re.members[i])) seed.insert(i);
    return successors(seed, on);
  };
  std::vector<detail::StarLabel> star;
  star.push_back({"<<P>>", "P", gg({g_set.at("P")}), 'P'});
  star.push_back({"<<U>>", "U", gg({g_set.at("U")}), 'U'});
  star.push_back({"<<U>'>", "D", gg({gp_set.at("U")}), 'D'});
  star.push_back({"<<X>>", "X", gg({g_set.at("X")}), 'X'});
  star.push_back({"<<X>'>", "M", gg({gp_set.at("X")}), 'M'});
  const unsigned qbit = 1u << (q - 1);
  for (unsigned c = 1; c < (1u << k); ++c) {
    if (c & qbit) {
      std::string inner = "<" + ell_name(c) + ">,<" + ell(c & ~qbit) + ">'";
      star.push_back({"<" + inner + ">", ell_name(c), gg({g_set.at(ell_name(c)), gp_set.at(ell(c & ~qbit))}), 'G', c});
    } else {
      star.push_back({"<<" + ell_name(c) + ">>", ell_name(c), gg({g_set.at(ell_name(c))}), 'F', c});
    }
  }
  out.star_distinct = true;
  for (std::size_t i = 0; i < star.size(); ++i)
    for (std::size_t j = i + 1; j < star.size(); ++j)
      if (star[i].set == star[j].set) out.star_distinct = false;
  auto sid = [&](char kind, unsigned mask = 0) {
    for (std::size_t i = 0; i < star.size(); ++i)
      if (star[i].kind == kind && star[i].mask == mask) return static_cast<Label>(i);
    if (kind == 'L') {
      for (std::size_t i = 0; i < star.size(); ++i)
        if ((star[i].kind == 'F' || star[i].kind == 'G') && star[i].mask == mask) return static_cast<Label>(i);
    }
    throw std::logic_error("missing star label");
  };
  // node constraint per definition
  std::vector<Configuration> nstar;
  auto word = [&](std::vector<std::pair<Label, std::size_t>> parts) {
    std::vector<Label> ls;
    for (auto [l, m] : parts)
      for (std::size_t i = 0; i < m; ++i) ls.push_back(l);
    return Configuration(ls);
  };
  nstar.push_back(word({{sid('M'), delta}}));
  nstar.push_back(word({{sid('P'), 1}, {sid('U'), delta - 1}}));
  nstar.push_back(word({{sid('D'), delta - 1}, {sid('X'), 1}}));
  for (unsigned c = 1; c < (1u << k); ++c) {
    std::size_t sz = static_cast<std::size_t>(std::popcount(c));
    nstar.push_back(word({{sid('L', c), delta - sz + 1}, {sid('U'), sz - 1}}));
  }
  // edge constraint, route A: existential over E_re
  std::vector<LabelSet> sets;
  for (const auto& s : star) sets.push_back(s.set);
  auto ex = apply_existential(rep.edge(), rep.num_labels(), sets, rank, opts);
  std::vector<Configuration> estar_a;
  for (const auto& x : ex) {
    std::vector<Label> ls;
    for (auto i : x.sets) ls.push_back(static_cast<Label>(i));
    estar_a.emplace_back(ls);
  }
  // route B: the characterization
  std::vector<Configuration> estar_b;
  detail::for_each_multiset(star.size(), rank, [&](const std::vector<std::size_t>& ms) {
    std::vector<const detail::StarLabel*> cfg;
    for (auto i : ms) cfg.push_back(&star[i]);
    auto heavy = [](const detail::StarLabel* l) { return l->kind == 'D' || l->kind == 'M'; };
    std::size_t n_heavy = 0;
    for (auto* l : cfg) n_heavy += heavy(l) ? 1 : 0;
    bool ok = false;
    for (auto* l : cfg)
      if (l->kind == 'M' && n_heavy == 1) ok = true;
    for (std::size_t j = 0; j < cfg.size() && !ok; ++j) {
      if (cfg[j]->kind != 'X') continue;
      for (std::size_t j2 = 0; j2 < cfg.size() && !ok; ++j2)
        if (j2 != j && n_heavy - (heavy(cfg[j2]) ? 1 : 0) == 0) ok = true;
    }
    if (!ok) {
      bool c3 = n_heavy <= 1;
      for (auto* l : cfg)
        if (l->kind == 'P') c3 = false;
      std::size_t cq = 0;
      for (auto* l : cfg)
        if (l->kind == 'D' || l->kind == 'G') ++cq;
      if (cq > zv.z[q - 1] + 1) c3 = false;
      for (std::size_t i = 1; i <= k && c3; ++i) {
        if (i == q) continue;
        std::size_t ci = 0;
        for (auto* l : cfg)
          if ((l->kind == 'F' || l->kind == 'G') && (l->mask & (1u << (i - 1)))) ++ci;
        if (ci > zv.z[i - 1]) c3 = false;
      }
      ok = c3;
    }
    if (ok) {
      std::vector<Label> ls;
      for (auto i : ms) ls.push_back(static_cast<Label>(i));
      estar_b.emplace_back(ls);
    }
  });
  std::sort(estar_b.begin(), estar_b.end());
  out.estar_size = estar_a.size();
  out.estar_char_size = estar_b.size();
  out.estar_agree = estar_a == estar_b;
  std::vector<std::string> names;
  for (const auto& s : star) names.push_back(s.name);
  out.pistar = Problem(names, delta, rank, Constraint(delta, nstar), Constraint(rank, estar_a));
  // rere labels -> Pi*_q labels containing them
  RelaxationMap to_star(st.problem.num_labels(), LabelSet(out.pistar.num_labels()));
  for (Label l = 0; l < st.problem.num_labels(); ++l)
    for (std::size_t i = 0; i < star.size(); ++i)
      if (st.members[l].subset_of(star[i].set) && out.pistar.has_label(star[i].name))
        to_star[l].insert(out.pistar.label(star[i].name));
  auto rs = is_relaxation(st.problem, out.pistar, to_star);
  out.relaxes_to_star = rs.ok;
  out.next_z = zv;
  out.next_z.z[q - 1] += 1;
  out.next_z.s = q;
  out.next = pi_family(out.next_z, delta, rank);
  for (const auto& s : star) out.renaming[s.name] = s.target;
  out.renamed_equal = rename_labels(out.pistar, out.renaming) == out.next;
  out.map.assign(st.problem.num_labels(), LabelSet(out.next.num_labels()));
  for (Label l = 0; l < st.problem.num_labels(); ++l)
    to_star[l].for_each([&](Label t) {
      out.map[l].insert(out.next.label(out.renaming.at(out.pistar.name(t))));
    });
  out.witness = is_relaxation(st.problem, out.next, out.map);
  if (!out.estar_agree)
    out.failure = "the two constructions of the star edge constraint differ";
  else if (!out.relaxes_to_star)
    out.failure = "stepped problem does not relax to the star problem: " + rs.failure;
  else if (!out.renamed_equal)
    out.failure = "renamed star problem differs from the next family member";
  else if (!out.witness.ok)
    out.failure = "composed relaxation fails: " + out.witness.failure;
  out.ok = out.failure.empty();
  return out;
}

inline OneStepResult verify_onestep(const ZVector& zv, std::size_t q, std::size_t delta, std::size_t rank,
                                    const EngineOptions& opts = {}) {
  check_pi_params(zv, delta, rank);
  if (q < 1 || q > zv.k()) throw InvalidArgument("q must lie in [1, len(z)]");
  if (q == zv.s) throw InvalidArgument("q must differ from s");
  if (zv.z[q - 1] > rank - 2) throw InvalidArgument("z_q must be at most r-2");
  Problem p = pi_family(zv, delta, rank);
  StepResult st = full_step(p, opts);
  return verify_onestep_from_step(zv, q, delta, rank, st, opts);
}

// The chain of the lower-bound proof: from (z, s), raise one entry per step.
// Each step picks, among q != s with z_q <= r-2, the least raised entry
// (smallest index on ties). Picking the smallest index alone can strand the
// last entry once it becomes s.
inline std::vector<std::size_t> pi_schedule(ZVector zv, std::size_t rank) {
  std::vector<std::size_t> qs;
  while (true) {
    std::size_t pick = 0;
    for (std::size_t q = 1; q <= zv.k(); ++q)
      if (q != zv.s && zv.z[q - 1] + 2 <= rank && (pick == 0 || zv.z[q - 1] < zv.z[pick - 1])) pick = q;
    if (pick == 0) break;
    qs.push_back(pick);
    zv.z[pick - 1] += 1;
    zv.s = pick;
  }
  return qs;
}

inline std::string z_text(const ZVector& zv) {
  std::string s;
  for (std::size_t i = 0; i < zv.k(); ++i) s += (i ? "," : "") + std::to_string(zv.z[i]);
  return s;
}

// Directive "pi-onestep z=1,1 s=2 q=1".
inline ChainDirective pi_onestep_directive(const ZVector& zv, std::size_t q, std::size_t delta, std::size_t rank,
                                           const EngineOptions& opts = {}) {
  ChainDirective d;
  d.script = "pi-onestep z=" + z_text(zv) + " s=" + std::to_string(zv.s) + " q=" + std::to_string(q);
  d.apply = [=](const StepResult& st) {
    auto r = verify_onestep_from_step(zv, q, delta, rank, st, opts);
    if (!r.ok) throw InvalidArgument("pi-onestep: " + r.failure);
    return DirectiveOutcome{r.next, r.map};
  };
  return d;
}

inline std::vector<std::size_t> parse_size_list(const std::string& s) {
  std::vector<std::size_t> out;
  for (const auto& part : detail::split_on(s, ',')) {
    if (part.empty()) throw InvalidArgument("malformed list '" + s + "'");
    std::size_t pos = 0;
    unsigned long v = std::stoul(part, &pos);
    if (pos != part.size()) throw InvalidArgument("malformed list '" + s + "'");
    out.push_back(v);
  }
  return out;
}

// Extension recognizing "pi-onestep z=.. s=.. q=.." lines.
inline DirectiveExtension pi_directive_extension(std::size_t delta, std::size_t rank, const EngineOptions& opts = {}) {
  return [=](const std::string& line) -> std::optional<ChainDirective> {
    auto words = detail::split_ws(line);
    if (words.empty() || words[0] != "pi-onestep") return std::nullopt;
    ZVector zv;
    std::size_t q = 0;
    for (std::size_t i = 1; i < words.size(); ++i) {
      auto eq = words[i].find('=');
      if (eq == std::string::npos) throw InvalidArgument("malformed pi-onestep argument");
      std::string key = words[i].substr(0, eq), val = words[i].substr(eq + 1);
      if (key == "z")
        zv.z = parse_size_list(val);
      else if (key == "s")
        zv.s = std::stoul(val);
      else if (key == "q")
        q = std::stoul(val);
      else
        throw InvalidArgument("unknown pi-onestep argument '" + key + "'");
    }
    check_pi_params(zv, delta, rank);
    return pi_onestep_directive(zv, q, delta, rank, opts);
  };
}

inline std::vector<ChainDirective> pi_chain_directives(ZVector zv, std::size_t delta, std::size_t rank,
                                                       const EngineOptions& opts = {}) {
  std::vector<ChainDirective> ds;
  for (auto q : pi_schedule(zv, rank)) {
    ds.push_back(pi_onestep_directive(zv, q, delta, rank, opts));
    zv.z[q - 1] += 1;
    zv.s = q;
  }
  return ds;
}

}  // namespace relim
