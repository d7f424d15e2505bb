// Copyright 2026 The jtree Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef JTREE_VAR_SET_H_
#define JTREE_VAR_SET_H_

#include <algorithm>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iterator>
#include <vector>

namespace jtree {

// Index of a variable inside a BeliefNetwork. Ids are never reused.
struct VarId {
  uint32_t value = 0;
  friend constexpr auto operator<=>(VarId, VarId) = default;
};

// Stable identifier of a cluster. Fresh ids are handed out monotonically.
struct ClusterId {
  uint32_t value = 0;
  friend constexpr auto operator<=>(ClusterId, ClusterId) = default;
};

// A set of variables stored as a bitset. Iteration is in increasing id
// order. Trailing zero words are always trimmed so that equality is plain
// word comparison.
class VarSet {
 public:
  class Iterator {
   public:
    using iterator_category = std::forward_iterator_tag;
    using value_type = VarId;
    using difference_type = std::ptrdiff_t;
    using pointer = const VarId*;
    using reference = VarId;

    Iterator() = default;
    Iterator(const std::vector<uint64_t>* words, size_t word)
        : words_(words), word_(word) {
      if (word_ < words_->size()) bits_ = (*words_)[word_];
      Settle();
    }

    VarId operator*() const {
      return VarId{static_cast<uint32_t>(word_ * 64 + std::countr_zero(bits_))};
    }
    Iterator& operator++() {
      bits_ &= bits_ - 1;
      Settle();
      return *this;
    }
    Iterator operator++(int) {
      Iterator tmp = *this;
      ++*this;
      return tmp;
    }
    friend bool operator==(const Iterator& a, const Iterator& b) {
      return a.word_ == b.word_ && a.bits_ == b.bits_;
    }

   private:
    void Settle() {
      while (bits_ == 0 && word_ < words_->size()) {
        ++word_;
        bits_ = word_ < words_->size() ? (*words_)[word_] : 0;
      }
    }

    const std::vector<uint64_t>* words_ = nullptr;
    size_t word_ = 0;
    uint64_t bits_ = 0;
  };

  VarSet() = default;
  VarSet(std::initializer_list<VarId> vars) {
    for (VarId v : vars) Insert(v);
  }
  template <typename Range>
  static VarSet FromRange(const Range& range) {
    VarSet s;
    for (VarId v : range) s.Insert(v);
    return s;
  }

  bool Contains(VarId v) const {
    size_t w = v.value / 64;
    return w < words_.size() && ((words_[w] >> (v.value % 64)) & 1u);
  }
  void Insert(VarId v) {
    size_t w = v.value / 64;
    if (w >= words_.size()) words_.resize(w + 1, 0);
    words_[w] |= uint64_t{1} << (v.value % 64);
  }
  void Erase(VarId v) {
    size_t w = v.value / 64;
    if (w >= words_.size()) return;
    words_[w] &= ~(uint64_t{1} << (v.value % 64));
    Trim();
  }

  bool Empty() const { return words_.empty(); }
  size_t Size() const {
    size_t n = 0;
    for (uint64_t w : words_) n += std::popcount(w);
    return n;
  }

  bool IsSubsetOf(const VarSet& other) const {
    if (words_.size() > other.words_.size()) return false;
    for (size_t i = 0; i < words_.size(); ++i) {
      if (words_[i] & ~other.words_[i]) return false;
    }
    return true;
  }
  bool Intersects(const VarSet& other) const {
    size_t n = std::min(words_.size(), other.words_.size());
    for (size_t i = 0; i < n; ++i) {
      if (words_[i] & other.words_[i]) return true;
    }
    return false;
  }

  VarSet& operator|=(const VarSet& other) {
    if (other.words_.size() > words_.size()) words_.resize(other.words_.size(), 0);
    for (size_t i = 0; i < other.words_.size(); ++i) words_[i] |= other.words_[i];
    return *this;
  }
  VarSet& operator&=(const VarSet& other) {
    if (words_.size() > other.words_.size()) words_.resize(other.words_.size());
    for (size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
    Trim();
    return *this;
  }
  VarSet& operator-=(const VarSet& other) {
    size_t n = std::min(words_.size(), other.words_.size());
    for (size_t i = 0; i < n; ++i) words_[i] &= ~other.words_[i];
    Trim();
    return *this;
  }
  friend VarSet operator|(VarSet a, const VarSet& b) { return a |= b; }
  friend VarSet operator&(VarSet a, const VarSet& b) { return a &= b; }
  friend VarSet operator-(VarSet a, const VarSet& b) { return a -= b; }
  friend bool operator==(const VarSet&, const VarSet&) = default;

  Iterator begin() const { return Iterator(&words_, 0); }
  Iterator end() const { return Iterator(&words_, words_.size()); }

  std::vector<VarId> ToVector() const { return std::vector<VarId>(begin(), end()); }

 private:
  void Trim() {
    while (!words_.empty() && words_.back() == 0) words_.pop_back();
  }

  std::vector<uint64_t> words_;
};

}  // namespace jtree

#endif  // JTREE_VAR_SET_H_
