// Copyright (c) 2026 The cvaug Authors. All Rights Reserved.
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

#ifndef CVAUG_RNG_H_
#define CVAUG_RNG_H_

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace cvaug {

// Stable 64-bit FNV-1a over the bytes of `text`. Identical on every platform.
std::uint64_t fnv1a64(std::string_view text);

// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Derives an independent sub-seed from a global seed and a context id,
/// e.g. derive_seed(seed, "pitch/spk01"). Adding or removing one context
/// never changes the sub-seed of another.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view context);

/// Unbiased draw in [0, bound) from a mt19937_64 stream. Unlike
/// std::uniform_int_distribution the result does not depend on the standard
/// library implementation.
std::uint64_t uniform_below(std::mt19937_64& gen, std::uint64_t bound);

/// `count` distinct indices drawn uniformly from [0, population), in draw
/// order (partial Fisher-Yates).
std::vector<std::size_t> sample_without_replacement(std::mt19937_64& gen,
                                                    std::size_t population,
                                                    std::size_t count);

}  // namespace cvaug

#endif  // CVAUG_RNG_H_
