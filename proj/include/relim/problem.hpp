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
#include <map>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "relim/common.hpp"
#include "relim/label_set.hpp"

namespace relim {

// A multiset of labels, stored as a sorted id sequence.
class Configuration {
 public:
  Configuration() = default;
  explicit Configuration(std::vector<Label> ls) : labels_(std::move(ls)) {
    std::sort(labels_.begin(), labels_.end());
  }
  Configuration(std::initializer_list<Label> ls) : Configuration(std::vector<Label>(ls)) {}

  std::size_t arity() const { return labels_.size(); }
  const std::vector<Label>& labels() const { return labels_; }

  // (label, multiplicity) pairs in id order.
  std::vector<std::pair<Label, std::size_t>> entries() const {
    std::vector<std::pair<Label, std::size_t>> out;
    for (Label l : labels_) {
      if (!out.empty() && out.back().first == l)
        ++out.back().second;
      else
        out.emplace_back(l, 1);
    }
    return out;
  }
  std::size_t count(Label l) const {
    auto [lo, hi] = std::equal_range(labels_.begin(), labels_.end(), l);
    return static_cast<std::size_t>(hi - lo);
  }
  bool contains(Label l) const { return std::binary_search(labels_.begin(), labels_.end(), l); }

  // Replace one occurrence of `from` with `to`. Precondition: contains(from).
  Configuration replaced(Label from, Label to) const {
    std::vector<Label> v = labels_;
    *std::find(v.begin(), v.end(), from) = to;
    return Configuration(std::move(v));
  }

  LabelSet support() const {
    LabelSet s;
    for (Label l : labels_) s.insert(l);
    return s;
  }

  friend bool operator==(const Configuration&, const Configuration&) = default;
  friend auto operator<=>(const Configuration& a, const Configuration& b) {
    return a.labels_ <=> b.labels_;
  }

  std::size_t hash() const {
    std::size_t h = 0xcbf29ce484222325ull;
    for (Label l : labels_) h = (h ^ l) * 0x100000001b3ull;
    return h;
  }

 private:
  std::vector<Label> labels_;
};

struct ConfigurationHash {
  std::size_t operator()(const Configuration& c) const { return c.hash(); }
};

using ConfigSet = std::unordered_set<Configuration, ConfigurationHash>;

// A set of configurations sharing one arity, kept sorted and duplicate free.
class Constraint {
 public:
  Constraint() = default;
  explicit Constraint(std::size_t arity) : arity_(arity) {}
  Constraint(std::size_t arity, std::vector<Configuration> cs) : arity_(arity), configs_(std::move(cs)) {
    for (const auto& c : configs_)
      if (c.arity() != arity_)
        throw InvalidArgument("configuration arity " + std::to_string(c.arity()) +
                              " does not match constraint arity " + std::to_string(arity_));
    std::sort(configs_.begin(), configs_.end());
    configs_.erase(std::unique(configs_.begin(), configs_.end()), configs_.end());
  }

  std::size_t arity() const { return arity_; }
  const std::vector<Configuration>& configs() const { return configs_; }
  std::size_t size() const { return configs_.size(); }
  bool empty() const { return configs_.empty(); }
  bool contains(const Configuration& c) const {
    return std::binary_search(configs_.begin(), configs_.end(), c);
  }
  auto begin() const { return configs_.begin(); }
  auto end() const { return configs_.end(); }

  ConfigSet as_set() const { return ConfigSet(configs_.begin(), configs_.end()); }

  LabelSet used_labels() const {
    LabelSet s;
    for (const auto& c : configs_)
      for (Label l : c.labels()) s.insert(l);
    return s;
  }

  friend bool operator==(const Constraint&, const Constraint&) = default;

 private:
  std::size_t arity_ = 0;
  std::vector<Configuration> configs_;
};

inline bool valid_label_name(const std::string& s) {
  if (s.empty()) return false;
  for (char ch : s) {
    if (ch == '[' || ch == ']' || ch == '^' || ch == '#' || std::isspace(static_cast<unsigned char>(ch)))
      return false;
  }
  return s != "---" && s.rfind("(empty)", 0) != 0;
}

// A locally checkable problem (sigma, node constraint, edge constraint).
//
// Canonical form: sigma is exactly the set of labels used by some
// configuration, and label ids follow the natural order of display names.
// Two problems are equal iff they agree on names and on both constraints.
class Problem {
 public:
  Problem() = default;

  Problem(std::vector<std::string> names, std::size_t delta, std::size_t rank, Constraint node,
          Constraint edge)
      : delta_(delta), rank_(rank) {
    if (delta == 0 || rank == 0) throw InvalidArgument("delta and rank must be positive");
    if (node.arity() != delta) throw InvalidArgument("node constraint arity differs from delta");
    if (edge.arity() != rank) throw InvalidArgument("edge constraint arity differs from rank");
    {
      std::unordered_set<std::string> seen;
      for (const auto& n : names) {
        if (!valid_label_name(n)) throw InvalidArgument("invalid label name '" + n + "'");
        if (!seen.insert(n).second) throw InvalidArgument("duplicate label name '" + n + "'");
      }
    }
    LabelSet used = node.used_labels() | edge.used_labels();
    used.for_each([&](Label l) {
      if (l >= names.size()) throw InvalidArgument("configuration uses an unnamed label id");
    });
    std::vector<Label> keep = used.members();
    std::sort(keep.begin(), keep.end(),
              [&](Label a, Label b) { return natural_less(names[a], names[b]); });
    std::vector<Label> remap(names.size(), 0);
    for (std::size_t i = 0; i < keep.size(); ++i) {
      remap[keep[i]] = static_cast<Label>(i);
      names_.push_back(names[keep[i]]);
    }
    node_ = remapped(node, remap);
    edge_ = remapped(edge, remap);
    for (std::size_t i = 0; i < names_.size(); ++i) index_[names_[i]] = static_cast<Label>(i);
  }

  // Builds from configurations given as name lists.
  static Problem from_names(std::size_t delta, std::size_t rank,
                            const std::vector<std::vector<std::string>>& node,
                            const std::vector<std::vector<std::string>>& edge) {
    std::vector<std::string> names;
    std::unordered_map<std::string, Label> idx;
    auto intern = [&](const std::string& n) {
      auto it = idx.find(n);
      if (it != idx.end()) return it->second;
      Label id = static_cast<Label>(names.size());
      names.push_back(n);
      idx.emplace(n, id);
      return id;
    };
    auto build = [&](std::size_t arity, const std::vector<std::vector<std::string>>& cs) {
      std::vector<Configuration> out;
      for (const auto& c : cs) {
        std::vector<Label> ls;
        for (const auto& n : c) ls.push_back(intern(n));
        out.emplace_back(std::move(ls));
      }
      return Constraint(arity, std::move(out));
    };
    Constraint n = build(delta, node);
    Constraint e = build(rank, edge);
    return Problem(std::move(names), delta, rank, std::move(n), std::move(e));
  }

  std::size_t delta() const { return delta_; }
  std::size_t rank() const { return rank_; }
  std::size_t num_labels() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(Label l) const { return names_.at(l); }
  const Constraint& node() const { return node_; }
  const Constraint& edge() const { return edge_; }

  bool has_label(const std::string& n) const { return index_.count(n) != 0; }
  Label label(const std::string& n) const {
    auto it = index_.find(n);
    if (it == index_.end()) throw InvalidArgument("unknown label '" + n + "'");
    return it->second;
  }
  Configuration config(const std::vector<std::string>& ns) const {
    std::vector<Label> ls;
    for (const auto& n : ns) ls.push_back(label(n));
    return Configuration(std::move(ls));
  }

  friend bool operator==(const Problem& a, const Problem& b) {
    return a.delta_ == b.delta_ && a.rank_ == b.rank_ && a.names_ == b.names_ &&
           a.node_ == b.node_ && a.edge_ == b.edge_;
  }

 private:
  static Constraint remapped(const Constraint& c, const std::vector<Label>& remap) {
    std::vector<Configuration> out;
    out.reserve(c.size());
    for (const auto& cfg : c) {
      std::vector<Label> ls;
      ls.reserve(cfg.arity());
      for (Label l : cfg.labels()) ls.push_back(remap[l]);
      out.emplace_back(std::move(ls));
    }
    return Constraint(c.arity(), std::move(out));
  }

  std::size_t delta_ = 0;
  std::size_t rank_ = 0;
  std::vector<std::string> names_;
  Constraint node_;
  Constraint edge_;
  std::map<std::string, Label> index_;
};

}  // namespace relim
