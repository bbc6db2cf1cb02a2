// Copyright 2026 The genaudio-eval Authors
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

#ifndef GENAUDIO_RANDOM_H_
#define GENAUDIO_RANDOM_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace genaudio {

using Rng = std::mt19937_64;

// FNV-1a, 64 bit. Stable across platforms, unlike std::hash.
constexpr uint64_t hash_id(std::string_view id) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : id) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// splitmix64 finalizer over (seed, stream); decorrelates nearby streams.
constexpr uint64_t mix_seed(uint64_t seed, uint64_t stream) {
  uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Independent generator for one work item. Parallel loops derive one per
/// item so results do not depend on scheduling.
inline Rng make_rng(uint64_t seed, uint64_t stream) {
  return Rng(mix_seed(seed, stream));
}

inline Rng make_rng(uint64_t seed, std::string_view item_id) {
  return make_rng(seed, hash_id(item_id));
}

}  // namespace genaudio

#endif  // GENAUDIO_RANDOM_H_
