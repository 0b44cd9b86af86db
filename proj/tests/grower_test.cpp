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

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "vchunk/grower.hpp"
#include "vchunk/rng.hpp"
#include "vchunk/synth.hpp"

using namespace vchunk;

namespace {

// |g| = 10. Superpixels (|s|, |s ∩ g|): (3,3), (5,3), (5,1), (30,3).
Scene four_superpixel_scene() {
    std::vector<SuperpixelId> labels;
    labels.insert(labels.end(), 3, 0);
    labels.insert(labels.end(), 5, 1);
    labels.insert(labels.end(), 5, 2);
    labels.insert(labels.end(), 30, 3);
    return Scene::build(fixtures::make_grid(43, 1, labels),
                        {fixtures::make_instance(0, {0, 1, 2, 3, 4, 5, 8, 13, 14, 15})});
}

}  // namespace

TEST_CASE("oracle chain on the four superpixel scene") {
    const auto scene = four_superpixel_scene();
    const auto chain = grow_single(scene, 0, GrowerPredictor::oracle(scene, 0));
    CHECK(chain.steps == std::vector<SuperpixelId>{0, 1, 2, 3});
    CHECK(chain_ious(scene, chain, 0) ==
          std::vector<PixelRatio>{{3, 10}, {6, 12}, {7, 16}, {10, 43}});
    const auto [best, value] = best_in_chain(scene, chain, 0);
    CHECK(best.key() == "0 1");
    CHECK(value == PixelRatio(1, 2));
    CHECK(best_chunk_bruteforce(scene, 0).second == PixelRatio(1, 2));
    CHECK(oracle::subset_optimum(scene, 0) == Rational(1, 2));
}

TEST_CASE("exact single superpixel cover") {
    const auto scene = fixtures::strip_scene({2, 4, 3}, {{2, 6}});
    const auto chain = grow_single(scene, 0, GrowerPredictor::oracle(scene, 0));
    CHECK(chain.steps.front() == 1);
    CHECK(chain_ious(scene, chain, 0).front() == PixelRatio(1, 1));
    CHECK(best_in_chain(scene, chain, 0).first.key() == "1");
}

TEST_CASE("best in chain prefers the shortest prefix on ties") {
    // g = pixels 2..5. {s0} and {s0, s1} both have IoU 1/3.
    const auto scene = fixtures::strip_scene({4, 8}, {{2, 6}});
    const auto chain = grow_single(scene, 0, GrowerPredictor::oracle(scene, 0));
    CHECK(chain_ious(scene, chain, 0) == std::vector<PixelRatio>{{1, 3}, {1, 3}});
    const auto [c, v] = best_in_chain(scene, chain, 0);
    CHECK(c.key() == "0");
    CHECK(v == PixelRatio(1, 3));

    GrowthChain single;
    single.steps = {1};
    CHECK(best_in_chain(scene, single, 0).first.key() == "1");
}

TEST_CASE("oracle chain reaches the subset optimum") {
    CounterRng rng(31);
    for (int t = 0; t < 60; ++t) {
        const auto n = static_cast<int>(rng.uniform_int(2, 15));
        const auto scene = random_small_scene(rng.child(static_cast<std::uint64_t>(t)), 12, 12, n, 3);
        for (InstanceId g = 0; g < scene.n_instances(); ++g) {
            const auto chain = grow_single(scene, g, GrowerPredictor::oracle(scene, g));
            CHECK(best_in_chain(scene, chain, g).second.to_rational() == oracle::subset_optimum(scene, g));
            CHECK(best_chunk_bruteforce(scene, g).second.to_rational() == oracle::subset_optimum(scene, g));
        }
    }
}

TEST_CASE("oracle chain iou rises then falls") {
    CounterRng rng(32);
    for (int t = 0; t < 60; ++t) {
        const auto scene = random_small_scene(rng.child(static_cast<std::uint64_t>(t)), 16, 12, 20, 3);
        for (InstanceId g = 0; g < scene.n_instances(); ++g) {
            const auto chain = grow_single(scene, g, GrowerPredictor::oracle(scene, g));
            const auto ious = chain_ious(scene, chain, g);
            const auto peak = std::max_element(ious.begin(), ious.end()) - ious.begin();
            for (long i = 1; i <= peak; ++i) CHECK(ious[i] >= ious[i - 1]);
            for (std::size_t i = static_cast<std::size_t>(peak) + 1; i < ious.size(); ++i) CHECK(ious[i] <= ious[i - 1]);
            const auto ratios = growth_ratios(scene, g);
            const auto by_ratio = order_by_ratio(ratios);
            for (std::size_t i = 0; i < chain.size(); ++i) {
                CHECK(ratios[chain.steps[i]].alpha() == ratios[by_ratio[i]].alpha());
            }
        }
    }
    CHECK_THROWS_AS(best_chunk_bruteforce(random_small_scene(rng, 20, 20, kSubsetOracleMaxSuperpixels + 1, 1), 0),
                    std::invalid_argument);
}

TEST_CASE("perturbed oracle stays within epsilon") {
    const auto scene = random_small_scene(CounterRng(33), 16, 12, 20, 3);
    const double eps = 0.1;
    const auto exact = GrowerPredictor::oracle(scene, 0);
    const auto noisy = GrowerPredictor::perturbed(scene, 0, eps, 5);
    const auto again = GrowerPredictor::perturbed(scene, 0, eps, 5);
    bool any_difference = false;
    for (SuperpixelId s = 0; s < scene.n_superpixels(); ++s) {
        const double a = exact.estimate(s);
        const double b = noisy.estimate(s);
        CHECK(std::abs(a - b) <= eps + 1e-12);
        CHECK(b >= 0.0);
        CHECK(b <= 1.0);
        CHECK(b == again.estimate(s));
        any_difference = any_difference || a != b;
    }
    CHECK(any_difference);
}

TEST_CASE("theorem 3 report") {
    const auto scene = four_superpixel_scene();
    const auto zero = verify_theorem3(scene, 0, 0.0, 5, 1);
    CHECK(zero.ok());
    CHECK(zero.min_slack == doctest::Approx(0.0));
    const auto r = verify_theorem3(scene, 0, 0.05, 20, 1);
    CHECK(r.optimum == PixelRatio(1, 2));
    CHECK(r.floor == doctest::Approx(0.4));
    CHECK(r.trials == 20);
    CHECK(r.ok());
    CHECK(r.min_slack >= 0.0);

    CounterRng rng(34);
    for (int t = 0; t < 40; ++t) {
        const auto s = random_small_scene(rng.child(static_cast<std::uint64_t>(t)), 12, 12, 12, 2);
        for (InstanceId g = 0; g < s.n_instances(); ++g) CHECK(verify_theorem3(s, g, 0.1, 10, t).ok());
    }
}

TEST_CASE("corollary with the exact oracle") {
    std::vector<Scene> scenes;
    CounterRng rng(35);
    for (int t = 0; t < 20; ++t) scenes.push_back(random_small_scene(rng.child(static_cast<std::uint64_t>(t)), 12, 12, 10, 2));
    const AlphaEstimator exact = [](const Scene& s, InstanceId g) {
        std::vector<double> out;
        const auto p = GrowerPredictor::oracle(s, g);
        for (SuperpixelId i = 0; i < s.n_superpixels(); ++i) out.push_back(p.estimate(i));
        return out;
    };
    const auto r = verify_corollary(scenes, exact, 0.5);
    CHECK(r.delta_hat == 0.0);
    CHECK(r.violations == 0);
    CHECK(r.cases > 0);
    CHECK(r.ok());

    const double eps = 0.2;
    const AlphaEstimator noisy = [eps](const Scene& s, InstanceId g) {
        std::vector<double> out;
        const auto p = GrowerPredictor::perturbed(s, g, eps, 77);
        for (SuperpixelId i = 0; i < s.n_superpixels(); ++i) out.push_back(p.estimate(i));
        return out;
    };
    const auto n = verify_corollary(scenes, noisy, 0.25);
    CHECK(n.delta_hat > 0.0);
    CHECK(n.delta_hat <= eps * eps / 3.0 * 1.5);
    CHECK(n.ok());
}

TEST_CASE("grow_multi with one seed follows the oracle order") {
    const auto scene = random_small_scene(CounterRng(36), 16, 12, 18, 2);
    const auto oracle_predictor = GrowerPredictor::oracle(scene, 0);
    const auto single = grow_single(scene, 0, oracle_predictor);
    const SuperpixelId seed = single.steps[3];
    const std::vector<SuperpixelId> seeds{seed};
    const auto cands = grow_multi(scene, oracle_predictor, seeds, 6);
    REQUIRE(cands.size() == 6);
    std::vector<SuperpixelId> rest;
    for (const auto s : single.steps) {
        if (s != seed) rest.push_back(s);
    }
    for (std::size_t i = 1; i < cands.size(); ++i) {
        CHECK(cands[i].chunk.contains(seed));
        CHECK(cands[i].chunk.size() == i + 1);
        CHECK(cands[i].chunk.contains(rest[i - 1]));
    }
}

TEST_CASE("grow_multi bounds, seeds and dedup") {
    const auto scene = random_small_scene(CounterRng(37), 16, 12, 18, 2);
    const auto p = GrowerPredictor::oracle(scene, 0);
    const std::vector<SuperpixelId> seeds{0, 5, 9, 5};
    const auto cands = grow_multi(scene, p, seeds, 5);
    CHECK(cands.size() <= seeds.size() * 5);
    std::set<std::string> keys;
    for (const auto& c : cands) {
        REQUIRE(c.seed.has_value());
        CHECK(c.chunk.contains(*c.seed));
        CHECK(keys.insert(c.chunk.key()).second);
    }
    const std::vector<SuperpixelId> bad{scene.n_superpixels()};
    CHECK_THROWS_AS(grow_multi(scene, p, bad, 5), std::invalid_argument);
    CHECK_THROWS_AS(grow_multi(scene, p, std::span<const SuperpixelId>(), 5), std::invalid_argument);
}

TEST_CASE("instance aware growth keeps two separated blobs apart") {
    // 6x2 blocks of 2x2 pixels. g0 = blocks 0,1,6,7 and g1 = blocks 4,5,10,11.
    const auto grid = fixtures::block_grid(6, 2, 2);
    const auto scene = Scene::build(grid, {fixtures::make_instance(0, fixtures::block_pixels(6, 2, {0, 1, 6, 7})),
                                           fixtures::make_instance(1, fixtures::block_pixels(6, 2, {4, 5, 10, 11}))});
    const auto predictor = GrowerPredictor::custom([&scene](SuperpixelId s, const Chunk& c, const RegionStats&) {
        InstanceId own = 0;
        for (InstanceId g = 1; g < scene.n_instances(); ++g) {
            if (c.intersection(g) > c.intersection(own)) own = g;
        }
        return static_cast<double>(scene.intersection(s, own)) / static_cast<double>(scene.superpixel(s).area);
    });
    const std::vector<std::pair<SuperpixelId, InstanceId>> seeds{{0, 0}, {11, 1}};
    for (const auto& [seed, own] : seeds) {
        const auto chain = grow_from_seed(scene, predictor, seed, 8);
        const auto [best, value] = best_in_chain(scene, chain, own);
        CHECK(value == PixelRatio(1, 1));
        for (std::size_t i = 0; i < chain.size(); ++i) {
            CHECK(iou(chain.prefix(scene, i), scene.instance(1 - own)) < value);
        }
    }
}

TEST_CASE("seed grid") {
    const auto grid = fixtures::block_grid(4, 3, 4);
    const auto scene = Scene::build(grid, {});
    CHECK(seed_grid(scene, 4) == std::vector<SuperpixelId>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11});
    CHECK(seed_grid(scene, 8) == std::vector<SuperpixelId>{5, 7});
    CHECK(seed_grid(scene, 100).empty());
    CHECK_THROWS_AS(seed_grid(scene, 0), std::invalid_argument);
}

TEST_CASE("candidate dump round trips") {
    const auto scene = random_small_scene(CounterRng(38), 16, 12, 18, 2);
    const std::vector<SuperpixelId> seeds{1, 7};
    const auto cands = grow_multi(scene, GrowerPredictor::oracle(scene, 0), seeds, 4);
    auto text = write_candidates("scene_00003", cands);
    Candidate unseeded;
    unseeded.chunk = Chunk::from_ids(scene, std::vector<SuperpixelId>{2, 4});
    text += write_candidates("scene_00003", std::vector<Candidate>{unseeded});
    CHECK(text.rfind("chunk scene_00003 1 1\n", 0) == 0);
    CHECK(text.find("chunk scene_00003 - 2 4\n") != std::string::npos);
    const auto records = parse_candidates(text);
    REQUIRE(records.size() == cands.size() + 1);
    for (std::size_t i = 0; i < cands.size(); ++i) {
        CHECK(records[i].scene_id == "scene_00003");
        CHECK(records[i].seed == cands[i].seed);
        CHECK(to_candidate(scene, records[i]).chunk == cands[i].chunk);
    }
    CHECK_FALSE(records.back().seed.has_value());
    CHECK_THROWS(parse_candidates("chunk only\n"));
}

TEST_CASE("default seed grid gives a few hundred candidates per scene") {
    const SynthConfig config;
    double total = 0.0;
    const int n_scenes = 4;
    for (int i = 0; i < n_scenes; ++i) {
        const auto bundle = generate_scene(config, i);
        const Scene& scene = bundle.scene;
        const FeatureContext ctx(scene, bundle.channel);
        // Compactness only: grow towards the nearest superpixel.
        const auto predictor = GrowerPredictor::custom([&scene](SuperpixelId s, const Chunk&, const RegionStats& st) {
            const auto& sp = scene.superpixel(s);
            const double dr = sp.centroid_row - st.centroid_row();
            const double dc = sp.centroid_col - st.centroid_col();
            return -std::sqrt(dr * dr + dc * dc);
        });
        const auto seeds = seed_grid(scene, 32);
        CHECK(seeds.size() == 20);
        const auto cands = grow_multi(scene, predictor, seeds, kDefaultMaxChunkSize, &ctx);
        CHECK(cands.size() <= 800);
        total += static_cast<double>(cands.size());
    }
    const double mean = total / n_scenes;
    MESSAGE("mean candidates per scene: " << mean);
    CHECK(mean >= 600.0);
    CHECK(mean <= 800.0);
}
