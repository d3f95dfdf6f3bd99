// Copyright 2026 The noisespec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <random>

namespace noisespec {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of the independent stream owned by `index`: master XOR hash(index).
/// Any task can rebuild its stream from (master, index) alone, so serial and
/// parallel schedules draw identical numbers.
inline std::uint64_t split_seed(std::uint64_t master, std::uint64_t index) {
  return master ^ splitmix64(index);
}

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t master, std::uint64_t index) {
  return Rng(split_seed(master, index));
}

}  // namespace noisespec
