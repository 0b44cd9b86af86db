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

#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "vchunk/grower.hpp"
#include "vchunk/metrics.hpp"
#include "vchunk/rng.hpp"
#include "vchunk/synth.hpp"

using namespace vchunk;

namespace {

Chunk chunk(const Scene& scene, std::vector<SuperpixelId> ids) { return Chunk::from_ids(scene, ids); }

Rational q(int num, int den) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

}  // namespace

TEST_CASE("abo examples") {
    {
        const auto scene = fixtures::strip_scene({3, 4, 3, 5}, {{0, 10}});
        const std::vector<Chunk> cands{chunk(scene, {0}), chunk(scene, {0, 1})};
        CHECK(iou(cands[0], scene.instance(0)) == PixelRatio(3, 10));
        CHECK(abo(cands, scene.instances()) == q(7, 10));
        CHECK(abo({}, scene.instances()) == 0);
    }
    {
        const auto scene = fixtures::strip_scene({2, 2, 9, 1}, {{0, 4}, {4, 14}});
        const std::vector<Chunk> cands{chunk(scene, {0}), chunk(scene, {2})};
        CHECK(abo(cands, scene.instances()) == q(7, 10));
        const std::vector<Chunk> covers{chunk(scene, {0, 1}), chunk(scene, {2, 3})};
        CHECK(abo(covers, scene.instances()) == 1);
    }
}

TEST_CASE("slot scores and instance accuracy") {
    const auto scene = fixtures::strip_scene({2, 2, 9, 1}, {{0, 4}, {4, 14}});
    const std::vector<Chunk> perfect{chunk(scene, {0, 1}), chunk(scene, {2, 3})};
    CHECK(slot_scores(perfect, scene.instances(), 2) == std::vector<Rational>{1, 2});
    CHECK(instance_accuracy(perfect, scene.instances()) == 1);

    const std::vector<Chunk> one{chunk(scene, {2})};
    const Rational v = q(9, 10);
    CHECK(slot_scores(one, scene.instances(), 3) == std::vector<Rational>{v, v, v});
    CHECK(slot_scores({}, scene.instances(), 2) == std::vector<Rational>{0, 0});
    CHECK(instance_accuracy({}, scene.instances()) == 0);
    CHECK(instance_accuracy(one, scene.instances()) == q(9, 20));

    // A longer list is divided by its own length.
    const std::vector<Chunk> three{chunk(scene, {0, 1}), chunk(scene, {2, 3}), chunk(scene, {1})};
    CHECK(instance_accuracy(three, scene.instances()) == q(2, 3));
}

TEST_CASE("singleton candidates") {
    const auto scene = fixtures::strip_scene({2, 2, 9, 1}, {{0, 4}});
    const auto s = singleton_candidates(scene);
    REQUIRE(s.size() == 4);
    CHECK(s[2].key() == "2");
    CHECK(abo(s, scene.instances()) == q(1, 2));
}

TEST_CASE("oracle rows with exact covers in the pool") {
    const auto scene = fixtures::strip_scene({2, 2, 9, 1, 3}, {{0, 4}, {4, 14}});
    const std::vector<Chunk> pool{chunk(scene, {4}), chunk(scene, {0, 1}), chunk(scene, {2, 3}), chunk(scene, {1})};
    const auto rows = scene_oracle_rows(scene, pool, 3, OracleMode::Exact);
    CHECK(rows.optimum == std::vector<Rational>{1, 2, 2});
    CHECK(rows.grower == std::vector<Rational>{1, 2, 2});
    const auto empty = scene_oracle_rows(scene, {}, 2, OracleMode::Pool);
    CHECK(empty.grower == std::vector<Rational>{0, 0});
    const auto none = oracle_rows({}, {}, 2, OracleMode::Pool);
    CHECK(none.optimum == std::vector<Rational>{0, 0});
    CHECK(none.grower == std::vector<Rational>{0, 0});
}

TEST_CASE("oracle grower pools reach the optimum rows on small scenes") {
    CounterRng rng(61);
    std::vector<Scene> scenes;
    std::vector<std::vector<Chunk>> pools;
    for (int t = 0; t < 25; ++t) {
        const auto scene = random_small_scene(rng.child(static_cast<std::uint64_t>(t)), 12, 12, 12, 3);
        std::vector<Chunk> pool;
        for (InstanceId g = 0; g < scene.n_instances(); ++g) {
            const auto chain = grow_single(scene, g, GrowerPredictor::oracle(scene, g));
            for (std::size_t i = 0; i < chain.size(); ++i) pool.push_back(chain.prefix(scene, i));
        }
        const auto optimal = optimal_chunks(scene, OracleMode::Exact);
        REQUIRE(optimal.size() == static_cast<std::size_t>(scene.n_instances()));
        for (InstanceId g = 0; g < scene.n_instances(); ++g) {
            CHECK(iou(optimal[g], scene.instance(g)).to_rational() == oracle::subset_optimum(scene, g));
        }
        CHECK(abo(pool, scene.instances()) == abo(optimal, scene.instances()));
        const auto rows = scene_oracle_rows(scene, pool, 3, OracleMode::Exact);
        CHECK(rows.grower == rows.optimum);
        scenes.push_back(scene);
        pools.push_back(std::move(pool));
    }
    const auto mean = oracle_rows(scenes, pools, 3, OracleMode::Pool);
    CHECK(mean.grower == mean.optimum);
    for (std::size_t i = 1; i < mean.grower.size(); ++i) CHECK(mean.grower[i] >= mean.grower[i - 1]);

    CHECK_THROWS_AS(optimal_chunks(random_small_scene(rng, 20, 20, kSubsetOracleMaxSuperpixels + 1, 1), OracleMode::Exact),
                    std::invalid_argument);
}
