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

#ifndef JTREE_COMMON_H_
#define JTREE_COMMON_H_

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace jtree {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or cyclic network, unknown variable, duplicate id.
class NetworkError : public Error {
 public:
  using Error::Error;
};

// An operation was called outside its precondition. The graph is left
// untouched.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A structural invariant (family/path property, tree-building audit) was
// found broken after an operation.
class InvariantError : public Error {
 public:
  using Error::Error;
};

// Potential sizes. Arithmetic saturates at the maximum instead of wrapping.
using Cost = uint64_t;
inline constexpr Cost kCostSaturated = std::numeric_limits<Cost>::max();

inline Cost SaturatingMul(Cost a, Cost b) {
  Cost out;
  if (__builtin_mul_overflow(a, b, &out)) return kCostSaturated;
  return out;
}
inline Cost SaturatingAdd(Cost a, Cost b) {
  Cost out;
  if (__builtin_add_overflow(a, b, &out)) return kCostSaturated;
  return out;
}
inline int64_t CostDelta(Cost before, Cost after) {
  constexpr Cost kMax = static_cast<Cost>(std::numeric_limits<int64_t>::max());
  if (after >= before) return static_cast<int64_t>(std::min(after - before, kMax));
  return -static_cast<int64_t>(std::min(before - after, kMax));
}

// Seedable generator used for every randomized choice. The draw helpers are
// written out here (rather than using <random> distributions) so that results
// do not depend on the standard library implementation.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t Next() { return engine_(); }

  // Uniform in [0, n). n must be positive.
  size_t Index(size_t n) {
    const uint64_t limit = std::numeric_limits<uint64_t>::max() -
                           std::numeric_limits<uint64_t>::max() % n;
    uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return static_cast<size_t>(x % n);
  }

  // Uniform in [lo, hi].
  int64_t Between(int64_t lo, int64_t hi) {
    return lo + static_cast<int64_t>(Index(static_cast<size_t>(hi - lo + 1)));
  }

  template <typename T>
  void Shuffle(T& container) {
    for (size_t i = container.size(); i > 1; --i) {
      std::swap(container[i - 1], container[Index(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// Derives an independent seed for sub-run `index` of a seeded job.
inline uint64_t DeriveSeed(uint64_t seed, uint64_t index) {
  uint64_t z = seed + 0x9e3779b97f4a7c15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace jtree

#endif  // JTREE_COMMON_H_
