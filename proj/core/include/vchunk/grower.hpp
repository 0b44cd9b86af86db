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

#ifndef VCHUNK_GROWER_HPP
#define VCHUNK_GROWER_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vchunk/features.hpp"
#include "vchunk/forest.hpp"
#include "vchunk/scene.hpp"

namespace vchunk {

inline constexpr int kDefaultMaxChunkSize = 40;
/// Largest superpixel count for which the 2^n subset oracle is allowed.
inline constexpr int kSubsetOracleMaxSuperpixels = 20;

/// Sequence of superpixel additions; prefix i (0-based) is the chunk made of
/// steps[0..i]. For seeded chains steps[0] is the seed.
struct GrowthChain {
    std::optional<SuperpixelId> seed;
    std::vector<SuperpixelId> steps;
    std::vector<double> scores;  // predictor value that selected each step

    std::size_t size() const { return steps.size(); }
    Chunk prefix(const Scene& scene, std::size_t i) const;
};

enum class PredictorMode { Oracle, PerturbedOracle, Learned, Custom };

/// Estimates α̂ for a candidate superpixel given the current chunk.
class GrowerPredictor {
public:
    using CustomFn = std::function<double(SuperpixelId, const Chunk&, const RegionStats&)>;

    /// Exact α_i = |s_i ∩ g| / |s_i|.
    static GrowerPredictor oracle(const Scene& scene, InstanceId g);
    /// α_i + u_i clamped to [0, 1], u_i ~ U[-ε, ε] drawn once per superpixel
    /// from the stream keyed by `seed`.
    static GrowerPredictor perturbed(const Scene& scene, InstanceId g, double epsilon, std::uint64_t seed);
    /// Forest over θ(s, c). The forest and context must outlive the predictor.
    static GrowerPredictor learned(const RegressionForest& forest, const FeatureContext& ctx);
    static GrowerPredictor custom(CustomFn fn);

    PredictorMode mode() const { return mode_; }
    InstanceId instance() const { return instance_; }
    double epsilon() const { return epsilon_; }

    double estimate(SuperpixelId s, const Chunk& c, const RegionStats& c_stats) const;
    /// Context-free estimate against the empty chunk.
    double estimate(SuperpixelId s) const;

private:
    PredictorMode mode_ = PredictorMode::Oracle;
    const Scene* scene_ = nullptr;
    InstanceId instance_ = kDummyInstance;
    double epsilon_ = 0.0;
    std::vector<double> table_;  // oracle / perturbed values per superpixel
    const RegressionForest* forest_ = nullptr;
    const FeatureContext* ctx_ = nullptr;
    CustomFn custom_;
};

/// Chain of all n superpixels sorted by score descending, ties by id.
GrowthChain chain_from_scores(std::span<const double> scores);

/// Single-instance grower: sorts superpixels by α̂ (exact α under the
/// oracle) and returns the chain of n prefix chunks.
GrowthChain grow_single(const Scene& scene, InstanceId g, const GrowerPredictor& predictor);

/// IoU with g of every prefix of the chain, computed incrementally.
std::vector<PixelRatio> chain_ious(const Scene& scene, const GrowthChain& chain, InstanceId g);

/// Prefix with the highest IoU against g; the shortest prefix on ties.
std::pair<Chunk, PixelRatio> best_in_chain(const Scene& scene, const GrowthChain& chain, InstanceId g);

/// Exhaustive optimum over all 2^n - 1 non-empty superpixel subsets.
/// Throws std::invalid_argument above kSubsetOracleMaxSuperpixels.
std::pair<Chunk, PixelRatio> best_chunk_bruteforce(const Scene& scene, InstanceId g);

struct Theorem3Report {
    double epsilon = 0.0;
    PixelRatio optimum;
    double floor = 0.0;  // R(c*) - 2ε
    double min_slack = 0.0;
    int trials = 0;
    int violations = 0;
    /// One line per violating trial: trial index, best IoU and the
    /// perturbed scores in superpixel order.
    std::vector<std::string> failures;

    bool ok() const { return violations == 0; }
};

/// Runs the perturbed-oracle grower `trials` times and checks
/// best-in-chain IoU >= R(c*) - 2ε (inclusive).
Theorem3Report verify_theorem3(const Scene& scene, InstanceId g, double epsilon, int trials, std::uint64_t seed);

/// α̂ for every superpixel of a scene against one instance.
using AlphaEstimator = std::function<std::vector<double>(const Scene&, InstanceId)>;

struct CorollaryReport {
    double eta = 0.0;
    double delta_hat = 0.0;  // mean squared α error over all sampled superpixels
    int cases = 0;           // (scene, instance) pairs
    int violations = 0;
    double min_slack = 0.0;

    double violation_rate() const { return cases == 0 ? 0.0 : static_cast<double>(violations) / cases; }
    bool ok() const { return violation_rate() <= eta; }
};

/// Measures δ̂ for the estimator, then counts (scene, instance) cases whose
/// best-in-chain IoU falls below R(c*) - 2 η⁻¹ √(n δ̂).
CorollaryReport verify_corollary(std::span<const Scene> scenes, const AlphaEstimator& estimator, double eta);

/// Superpixels under a regular pixel grid of the given interval, offset by
/// half an interval, deduplicated in row-major order.
std::vector<SuperpixelId> seed_grid(const Scene& scene, int interval);

/// One seeded chain: c = {seed}, then repeatedly the remaining superpixel
/// with the highest estimate (lowest id on ties), until max_chunk_size
/// superpixels. Every remaining superpixel is rescored at each step.
GrowthChain grow_from_seed(const Scene& scene, const GrowerPredictor& predictor, SuperpixelId seed,
                           int max_chunk_size, const FeatureContext* ctx = nullptr);

struct Candidate {
    Chunk chunk;
    std::optional<SuperpixelId> seed;
};

/// Multi-instance grower: every prefix chunk (seed singleton included) of
/// every seed's chain, deduplicated by superpixel set in first-seen order.
/// Throws std::invalid_argument on an out-of-range seed or an empty seed
/// list.
std::vector<Candidate> grow_multi(const Scene& scene, const GrowerPredictor& predictor,
                                  std::span<const SuperpixelId> seeds, int max_chunk_size,
                                  const FeatureContext* ctx = nullptr);

/// `chunk <scene_id> <seed|-> <sorted ids...>` lines.
std::string write_candidates(const std::string& scene_id, std::span<const Candidate> candidates);
struct CandidateRecord {
    std::string scene_id;
    std::optional<SuperpixelId> seed;
    std::vector<SuperpixelId> ids;
};

std::vector<CandidateRecord> parse_candidates(std::string_view text);
Candidate to_candidate(const Scene& scene, const CandidateRecord& record);

}  // namespace vchunk

#endif  // VCHUNK_GROWER_HPP
