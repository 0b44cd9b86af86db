// Copyright 2026 The vchunk Authors.
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

#ifndef VCHUNK_METRICS_HPP
#define VCHUNK_METRICS_HPP

#include <span>
#include <vector>

#include "vchunk/rational.hpp"
#include "vchunk/scene.hpp"

namespace vchunk {

/// Mean over instances of the best candidate IoU; 0 with no candidates or
/// no instances.
Rational abo(std::span<const Chunk> candidates, std::span<const GroundTruthInstance> instances);

/// f(L[0:i]) for i = 1..k, padded with the last value when |L| < k. An
/// empty list scores 0 at every slot.
std::vector<Rational> slot_scores(std::span<const Chunk> list, std::span<const GroundTruthInstance> instances,
                                  std::size_t k);

/// f(L;G) / max(|L|, |G|); 0 when both are empty.
Rational instance_accuracy(std::span<const Chunk> list, std::span<const GroundTruthInstance> instances);

/// Every superpixel as its own chunk.
std::vector<Chunk> singleton_candidates(const Scene& scene);

enum class OracleMode {
    /// R(c*) by subset enumeration; scenes above kSubsetOracleMaxSuperpixels
    /// are rejected.
    Exact,
    /// R(c*) from the oracle grower's chain, which contains the optimum.
    Pool,
};

/// Per-slot ceilings for one scene: `optimum[i]` is the best f over lists
/// of i+1 per-instance optimal chunks, `grower[i]` the best f over lists of
/// i+1 chunks from the candidate pool.
struct OracleRows {
    std::vector<Rational> optimum;
    std::vector<Rational> grower;
};

/// Optimal chunk for every instance of the scene.
std::vector<Chunk> optimal_chunks(const Scene& scene, OracleMode mode);

OracleRows scene_oracle_rows(const Scene& scene, std::span<const Chunk> candidates, std::size_t k, OracleMode mode);

/// Means of the per-scene rows. No scenes gives all-zero rows.
OracleRows oracle_rows(std::span<const Scene> scenes, std::span<const std::vector<Chunk>> candidates, std::size_t k,
                       OracleMode mode);

}  // namespace vchunk

#endif  // VCHUNK_METRICS_HPP
