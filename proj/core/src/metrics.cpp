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

#include "vchunk/metrics.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "vchunk/assignment.hpp"
#include "vchunk/grower.hpp"

namespace vchunk {

Rational abo(std::span<const Chunk> candidates, std::span<const GroundTruthInstance> instances) {
    if (candidates.empty() || instances.empty()) return Rational(0);
    Rational total(0);
    for (const auto& g : instances) {
        PixelRatio best;
        for (const auto& c : candidates) best = std::max(best, iou(c, g));
        total += best.to_rational();
    }
    total /= static_cast<long>(instances.size());
    return total;
}

std::vector<Rational> slot_scores(std::span<const Chunk> list, std::span<const GroundTruthInstance> instances,
                                  std::size_t k) {
    std::vector<Rational> out;
    out.reserve(k);
    Rational last(0);
    for (std::size_t i = 1; i <= k; ++i) {
        if (i <= list.size()) last = f_of_list(list.first(i), instances);
        out.push_back(last);
    }
    return out;
}

Rational instance_accuracy(std::span<const Chunk> list, std::span<const GroundTruthInstance> instances) {
    const std::size_t denom = std::max(list.size(), instances.size());
    if (denom == 0) return Rational(0);
    Rational value = f_of_list(list, instances);
    value /= static_cast<long>(denom);
    return value;
}

std::vector<Chunk> singleton_candidates(const Scene& scene) {
    std::vector<Chunk> out;
    out.reserve(scene.n_superpixels());
    for (SuperpixelId s = 0; s < scene.n_superpixels(); ++s) {
        Chunk c(scene);
        c.add(scene, s);
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<Chunk> optimal_chunks(const Scene& scene, OracleMode mode) {
    if (mode == OracleMode::Exact && scene.n_superpixels() > kSubsetOracleMaxSuperpixels) {
        throw std::invalid_argument("exact oracle rows need at most " + std::to_string(kSubsetOracleMaxSuperpixels) +
                                    " superpixels, scene has " + std::to_string(scene.n_superpixels()));
    }
    std::vector<Chunk> out;
    for (InstanceId g = 0; g < scene.n_instances(); ++g) {
        if (mode == OracleMode::Exact) {
            out.push_back(best_chunk_bruteforce(scene, g).first);
        } else {
            out.push_back(best_in_chain(scene, grow_single(scene, g, GrowerPredictor::oracle(scene, g)), g).first);
        }
    }
    return out;
}

OracleRows scene_oracle_rows(const Scene& scene, std::span<const Chunk> candidates, std::size_t k, OracleMode mode) {
    OracleRows rows;
    const auto best = optimal_chunks(scene, mode);
    for (std::size_t i = 1; i <= k; ++i) {
        rows.optimum.push_back(best_list_value(best, scene.instances(), i));
        rows.grower.push_back(candidates.empty() ? Rational(0) : best_list_value(candidates, scene.instances(), i));
    }
    return rows;
}

OracleRows oracle_rows(std::span<const Scene> scenes, std::span<const std::vector<Chunk>> candidates, std::size_t k,
                       OracleMode mode) {
    if (scenes.size() != candidates.size()) throw std::invalid_argument("oracle_rows: scene/candidate count mismatch");
    OracleRows mean{std::vector<Rational>(k, Rational(0)), std::vector<Rational>(k, Rational(0))};
    if (scenes.empty()) return mean;
    for (std::size_t i = 0; i < scenes.size(); ++i) {
        const auto rows = scene_oracle_rows(scenes[i], candidates[i], k, mode);
        for (std::size_t j = 0; j < k; ++j) {
            mean.optimum[j] += rows.optimum[j];
            mean.grower[j] += rows.grower[j];
        }
    }
    for (std::size_t j = 0; j < k; ++j) {
        mean.optimum[j] /= static_cast<long>(scenes.size());
        mean.grower[j] /= static_cast<long>(scenes.size());
    }
    return mean;
}

}  // namespace vchunk
