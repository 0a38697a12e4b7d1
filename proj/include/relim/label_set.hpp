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
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <vector>

namespace relim {

using Label = std::uint32_t;

// Set of label ids backed by a dynamic bitset.
class LabelSet {
 public:
  LabelSet() = default;
  explicit LabelSet(std::size_t universe) : words_((universe + 63) / 64, 0) {}
  LabelSet(std::size_t universe, std::initializer_list<Label> ls) : LabelSet(universe) {
    for (Label l : ls) insert(l);
  }

  static LabelSet full(std::size_t universe) {
    LabelSet s(universe);
    for (std::size_t l = 0; l < universe; ++l) s.insert(static_cast<Label>(l));
    return s;
  }

  std::size_t universe_words() const { return words_.size(); }

  void insert(Label l) {
    grow(l);
    words_[l / 64] |= (std::uint64_t{1} << (l % 64));
  }
  void erase(Label l) {
    if (l / 64 < words_.size()) words_[l / 64] &= ~(std::uint64_t{1} << (l % 64));
  }
  bool contains(Label l) const {
    return l / 64 < words_.size() && ((words_[l / 64] >> (l % 64)) & 1u) != 0;
  }
  bool empty() const {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
  }
  std::size_t size() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  LabelSet& operator|=(const LabelSet& o) {
    if (o.words_.size() > words_.size()) words_.resize(o.words_.size(), 0);
    for (std::size_t i = 0; i < o.words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  LabelSet& operator&=(const LabelSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i)
      words_[i] &= (i < o.words_.size() ? o.words_[i] : 0);
    return *this;
  }
  friend LabelSet operator|(LabelSet a, const LabelSet& b) { return a |= b; }
  friend LabelSet operator&(LabelSet a, const LabelSet& b) { return a &= b; }

  bool subset_of(const LabelSet& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::uint64_t ow = i < o.words_.size() ? o.words_[i] : 0;
      if ((words_[i] & ~ow) != 0) return false;
    }
    return true;
  }
  bool intersects(const LabelSet& o) const {
    std::size_t n = std::min(words_.size(), o.words_.size());
    for (std::size_t i = 0; i < n; ++i)
      if ((words_[i] & o.words_[i]) != 0) return true;
    return false;
  }

  std::vector<Label> members() const {
    std::vector<Label> out;
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::uint64_t w = words_[i];
      while (w != 0) {
        int b = std::countr_zero(w);
        out.push_back(static_cast<Label>(i * 64 + static_cast<std::size_t>(b)));
        w &= w - 1;
      }
    }
    return out;
  }

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::uint64_t w = words_[i];
      while (w != 0) {
        int b = std::countr_zero(w);
        f(static_cast<Label>(i * 64 + static_cast<std::size_t>(b)));
        w &= w - 1;
      }
    }
  }

  friend bool operator==(const LabelSet& a, const LabelSet& b) {
    std::size_t n = std::max(a.words_.size(), b.words_.size());
    for (std::size_t i = 0; i < n; ++i) {
      std::uint64_t x = i < a.words_.size() ? a.words_[i] : 0;
      std::uint64_t y = i < b.words_.size() ? b.words_[i] : 0;
      if (x != y) return false;
    }
    return true;
  }

  // Canonical order: lexicographic on the sorted member lists.
  friend bool operator<(const LabelSet& a, const LabelSet& b) {
    auto ma = a.members(), mb = b.members();
    return std::lexicographical_compare(ma.begin(), ma.end(), mb.begin(), mb.end());
  }

  std::size_t hash() const {
    std::size_t h = 0x9e3779b97f4a7c15ull;
    std::size_t last = words_.size();
    while (last > 0 && words_[last - 1] == 0) --last;
    for (std::size_t i = 0; i < last; ++i) h = (h ^ words_[i]) * 0x100000001b3ull + (h >> 29);
    return h;
  }

 private:
  void grow(Label l) {
    if (l / 64 >= words_.size()) words_.resize(l / 64 + 1, 0);
  }
  std::vector<std::uint64_t> words_;
};

struct LabelSetHash {
  std::size_t operator()(const LabelSet& s) const { return s.hash(); }
};

}  // namespace relim
