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

#ifndef VCHUNK_LEARNER_HPP
#define VCHUNK_LEARNER_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "vchunk/channel.hpp"
#include "vchunk/features.hpp"
#include "vchunk/forest.hpp"
#include "vchunk/grower.hpp"

namespace vchunk {

struct GrowerDataConfig {
    int max_chunk_size = kDefaultMaxChunkSize;
    /// Rollouts per instance, seeded from its superpixels with the highest α.
    int seeds_per_instance = 3;
    /// A superpixel may seed a rollout for g only when α >= seed_alpha.
    double seed_alpha = 0.5;
    /// Each (θ, α) row is kept with this probability (counter-RNG decision,
    /// so the subsample is reproducible). 1 keeps every row.
    double row_fraction = 1.0;
    std::uint64_t seed = 1;
    unsigned threads = 0;
};

/// Seeds used for the rollouts of instance g, in rollout order.
std::vector<SuperpixelId> rollout_seeds(const Scene& scene, InstanceId g, const GrowerDataConfig& config);

/// Oracle-driven seeded rollouts. At every growth step of every rollout one
/// row (θ(s, c), |s ∩ g| / |s|) is emitted per superpixel not yet in c, then
/// the superpixel with the highest α joins c. Provenance is (scene
/// position, step) with step counting from 1 after the seed.
ImitationDataset collect_grower_data(std::span<const SceneBundle> scenes, const GrowerDataConfig& config);

/// Greedy list rollout with ground truth. At each of min(k, |C|) rounds
/// one row (Φ(c, L), y(c; G_re)) is emitted per candidate not yet in L.
ImitationDataset collect_list_data(std::span<const SceneBundle> scenes,
                                   std::span<const std::vector<Chunk>> candidates, std::size_t k,
                                   unsigned threads = 0);

/// Scores a candidate given its Φ and the list built so far (as indices
/// into the candidate set).
class ListScorer {
public:
    virtual ~ListScorer() = default;
    virtual std::size_t dim() const = 0;
    virtual double score(std::size_t candidate, std::span<const double> phi,
                         std::span<const std::size_t> list) const = 0;
};

class ForestListScorer final : public ListScorer {
public:
    explicit ForestListScorer(const RegressionForest& forest) : forest_(&forest) {}
    std::size_t dim() const override { return forest_->dim(); }
    double score(std::size_t, std::span<const double> phi, std::span<const std::size_t>) const override {
        return forest_->predict(phi);
    }

private:
    const RegressionForest* forest_;
};

/// Returns the true greedy marginal y(c; G_re), replaying the greedy
/// pairing of the list so far. Plugged into predict_list it reproduces
/// greedy_list exactly.
class GroundTruthListScorer final : public ListScorer {
public:
    GroundTruthListScorer(const Scene& scene, std::span<const Chunk> candidates, int n_classes);
    std::size_t dim() const override { return dim_; }
    double score(std::size_t candidate, std::span<const double> phi,
                 std::span<const std::size_t> list) const override;
    /// Exact marginal behind score().
    PixelRatio marginal(std::size_t candidate, std::span<const std::size_t> list) const;

private:
    const Scene* scene_;
    std::vector<PixelRatio> table_;  // candidates x instances
    std::size_t n_instances_ = 0;
    std::size_t dim_ = 0;
};

struct PredictedList {
    std::vector<std::size_t> order;  // candidate indices
    std::vector<double> scores;      // score at selection time
};

/// Greedy prediction without ground truth: min(k, |C|) rounds, each
/// appending the remaining candidate with the highest score (earliest
/// candidate on ties). Φ is recomputed every round. Throws
/// std::invalid_argument if scorer.dim() differs from phi_dim.
PredictedList predict_list(const FeatureContext& ctx, std::span<const Chunk> candidates, const ListScorer& scorer,
                           std::size_t k);

}  // namespace vchunk

#endif  // VCHUNK_LEARNER_HPP
