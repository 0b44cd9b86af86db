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

#include "vchunk/learner.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "vchunk/assignment.hpp"
#include "vchunk/parallel.hpp"
#include "vchunk/rng.hpp"

namespace vchunk {

std::vector<SuperpixelId> rollout_seeds(const Scene& scene, InstanceId g, const GrowerDataConfig& config) {
    const auto ratios = growth_ratios(scene, g);
    std::vector<SuperpixelId> seeds;
    const PixelRatio threshold(static_cast<std::int64_t>(config.seed_alpha * 1000000.0 + 0.5), 1000000);
    for (const auto s : order_by_alpha(ratios)) {
        if (static_cast<int>(seeds.size()) >= config.seeds_per_instance) break;
        if (ratios[s].alpha() < threshold || ratios[s].delta_x == 0) break;
        seeds.push_back(s);
    }
    return seeds;
}

ImitationDataset collect_grower_data(std::span<const SceneBundle> scenes, const GrowerDataConfig& config) {
    if (config.max_chunk_size <= 0) throw std::invalid_argument("max_chunk_size must be positive");
    std::vector<ImitationDataset> parts(scenes.size());
    const CounterRng master = CounterRng(config.seed).child("grower-rows");
    parallel_for(
        scenes.size(),
        [&](std::size_t i) {
            const auto& bundle = scenes[i];
            const Scene& scene = bundle.scene;
            const FeatureContext ctx(scene, bundle.channel);
            ImitationDataset part(theta_columns(ctx.n_classes()));
            std::vector<double> row;
            const CounterRng scene_rng = master.child(static_cast<std::uint64_t>(i));
            for (InstanceId g = 0; g < scene.n_instances(); ++g) {
                const auto oracle = GrowerPredictor::oracle(scene, g);
                std::vector<double> alpha(scene.n_superpixels());
                for (SuperpixelId s = 0; s < scene.n_superpixels(); ++s) alpha[s] = oracle.estimate(s);
                for (const auto seed : rollout_seeds(scene, g, config)) {
                    const CounterRng keep = scene_rng.child(static_cast<std::uint64_t>(g)).child(static_cast<std::uint64_t>(seed));
                    const auto chain = grow_from_seed(scene, oracle, seed, config.max_chunk_size, &ctx);
                    std::vector<char> used(scene.n_superpixels(), 0);
                    RegionStats stats = ctx.empty_stats();
                    used[seed] = 1;
                    stats.add(ctx.superpixel_stats(seed));
                    for (std::size_t step = 1; step < chain.steps.size(); ++step) {
                        for (SuperpixelId s = 0; s < scene.n_superpixels(); ++s) {
                            if (used[s]) continue;
                            if (config.row_fraction < 1.0) {
                                const std::uint64_t counter = step * static_cast<std::uint64_t>(scene.n_superpixels()) + s;
                                const double u = static_cast<double>(keep.at(counter) >> 11) * 0x1.0p-53;
                                if (u >= config.row_fraction) continue;
                            }
                            theta_into(ctx, s, stats, row);
                            part.add(row, alpha[s], static_cast<int>(i), static_cast<int>(step));
                        }
                        const auto next = chain.steps[step];
                        used[next] = 1;
                        stats.add(ctx.superpixel_stats(next));
                    }
                }
            }
            parts[i] = std::move(part);
        },
        config.threads);
    ImitationDataset out(theta_columns(scenes.empty() ? 1 : scenes.front().channel.n_classes));
    for (const auto& part : parts) out.append(part);
    return out;
}

ImitationDataset collect_list_data(std::span<const SceneBundle> scenes,
                                   std::span<const std::vector<Chunk>> candidates, std::size_t k,
                                   unsigned threads) {
    if (scenes.size() != candidates.size()) {
        throw std::invalid_argument("collect_list_data: " + std::to_string(scenes.size()) + " scenes but " +
                                    std::to_string(candidates.size()) + " candidate sets");
    }
    std::vector<ImitationDataset> parts(scenes.size());
    parallel_for(
        scenes.size(),
        [&](std::size_t i) {
            const Scene& scene = scenes[i].scene;
            const FeatureContext ctx(scene, scenes[i].channel);
            const auto& cands = candidates[i];
            ImitationDataset part(phi_columns(ctx.n_classes()));
            const auto greedy = greedy_list(cands, scene.instances(), k);
            std::vector<RegionStats> cand_stats;
            cand_stats.reserve(cands.size());
            for (const auto& c : cands) cand_stats.push_back(ctx.chunk_stats(c));
            const std::size_t m = static_cast<std::size_t>(scene.n_instances());
            std::vector<PixelRatio> table(cands.size() * m);
            for (std::size_t c = 0; c < cands.size(); ++c) {
                for (std::size_t j = 0; j < m; ++j) table[c * m + j] = iou(cands[c], scene.instance(static_cast<InstanceId>(j)));
            }
            std::vector<char> selected(cands.size(), 0);
            std::vector<char> remaining(m, 1);
            std::vector<Chunk> list;
            std::vector<RegionStats> list_stats;
            std::vector<double> row;
            for (std::size_t round = 0; round < greedy.size(); ++round) {
                for (std::size_t c = 0; c < cands.size(); ++c) {
                    if (selected[c]) continue;
                    PixelRatio y;
                    for (std::size_t j = 0; j < m; ++j) {
                        if (remaining[j] && table[c * m + j] > y) y = table[c * m + j];
                    }
                    phi_into(ctx, cands[c], cand_stats[c], list, list_stats, row);
                    part.add(row, y.to_double(), static_cast<int>(i), static_cast<int>(round));
                }
                const auto& entry = greedy.entries[round];
                selected[entry.candidate] = 1;
                if (entry.paired != kDummyInstance) remaining[entry.paired] = 0;
                list.push_back(cands[entry.candidate]);
                list_stats.push_back(cand_stats[entry.candidate]);
            }
            parts[i] = std::move(part);
        },
        threads);
    ImitationDataset out(phi_columns(scenes.empty() ? 1 : scenes.front().channel.n_classes));
    for (const auto& part : parts) out.append(part);
    return out;
}

GroundTruthListScorer::GroundTruthListScorer(const Scene& scene, std::span<const Chunk> candidates, int n_classes)
    : scene_(&scene), n_instances_(static_cast<std::size_t>(scene.n_instances())), dim_(phi_dim(n_classes)) {
    table_.resize(candidates.size() * n_instances_);
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        for (std::size_t j = 0; j < n_instances_; ++j) {
            table_[c * n_instances_ + j] = iou(candidates[c], scene.instance(static_cast<InstanceId>(j)));
        }
    }
}

PixelRatio GroundTruthListScorer::marginal(std::size_t candidate, std::span<const std::size_t> list) const {
    std::vector<char> remaining(n_instances_, 1);
    // Replay the greedy pairing: each listed chunk takes its best remaining
    // instance, smallest id on ties.
    for (const auto c : list) {
        std::size_t best = n_instances_;
        for (std::size_t j = 0; j < n_instances_; ++j) {
            if (!remaining[j]) continue;
            if (best == n_instances_ || table_[c * n_instances_ + j] > table_[c * n_instances_ + best]) best = j;
        }
        if (best < n_instances_) remaining[best] = 0;
    }
    PixelRatio y;
    for (std::size_t j = 0; j < n_instances_; ++j) {
        if (remaining[j] && table_[candidate * n_instances_ + j] > y) y = table_[candidate * n_instances_ + j];
    }
    return y;
}

double GroundTruthListScorer::score(std::size_t candidate, std::span<const double>,
                                    std::span<const std::size_t> list) const {
    return marginal(candidate, list).to_double();
}

PredictedList predict_list(const FeatureContext& ctx, std::span<const Chunk> candidates, const ListScorer& scorer,
                           std::size_t k) {
    const std::size_t expected = phi_dim(ctx.n_classes());
    if (scorer.dim() != expected) {
        throw std::invalid_argument("predict_list: scorer expects " + std::to_string(scorer.dim()) +
                                    " features, list features have " + std::to_string(expected));
    }
    PredictedList out;
    const std::size_t rounds = std::min(k, candidates.size());
    if (rounds == 0) return out;
    std::vector<RegionStats> cand_stats;
    cand_stats.reserve(candidates.size());
    for (const auto& c : candidates) cand_stats.push_back(ctx.chunk_stats(c));
    std::vector<char> selected(candidates.size(), 0);
    std::vector<Chunk> list;
    std::vector<RegionStats> list_stats;
    std::vector<double> row;
    for (std::size_t round = 0; round < rounds; ++round) {
        std::size_t best = candidates.size();
        double best_score = 0.0;
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            if (selected[c]) continue;
            phi_into(ctx, candidates[c], cand_stats[c], list, list_stats, row);
            const double v = scorer.score(c, row, out.order);
            if (best == candidates.size() || v > best_score) {
                best = c;
                best_score = v;
            }
        }
        selected[best] = 1;
        out.order.push_back(best);
        out.scores.push_back(best_score);
        list.push_back(candidates[best]);
        list_stats.push_back(cand_stats[best]);
    }
    return out;
}

}  // namespace vchunk
