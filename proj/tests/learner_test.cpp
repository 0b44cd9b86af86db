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
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "vchunk/assignment.hpp"
#include "vchunk/forest.hpp"
#include "vchunk/grower.hpp"
#include "vchunk/learner.hpp"
#include "vchunk/rng.hpp"
#include "vchunk/synth.hpp"

using namespace vchunk;

namespace {

ImitationDataset noisy_plane(std::size_t n, std::uint64_t seed) {
    ImitationDataset data({"x0", "x1", "x2"});
    CounterRng rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        const double x0 = rng.uniform(), x1 = rng.uniform(), x2 = rng.uniform();
        const double y = std::clamp(0.6 * x0 + 0.3 * (x1 > 0.5 ? 1.0 : 0.0) + 0.1 * rng.uniform(), 0.0, 1.0);
        const double row[] = {x0, x1, x2};
        data.add(row, y, static_cast<int>(i % 7), static_cast<int>(i));
    }
    return data;
}

SynthConfig small_synth() {
    SynthConfig c;
    c.width = 48;
    c.height = 36;
    c.n_superpixels = 40;
    c.min_extent = 0.15;
    c.max_extent = 0.25;
    return c;
}

std::vector<SceneBundle> small_bundles(int first, int count) {
    std::vector<SceneBundle> out;
    for (int i = first; i < first + count; ++i) out.push_back(generate_scene(small_synth(), i));
    return out;
}

}  // namespace

TEST_CASE("constant targets give constant predictions") {
    ImitationDataset data({"a", "b"});
    CounterRng rng(51);
    for (int i = 0; i < 50; ++i) {
        const double row[] = {rng.uniform(), rng.uniform()};
        data.add(row, 0.25, 0, i);
    }
    const auto forest = RegressionForest::fit(data, ForestConfig{});
    for (int i = 0; i < 20; ++i) {
        const double x[] = {rng.uniform(-1, 2), rng.uniform(-1, 2)};
        CHECK(forest.predict(x) == 0.25);
    }
}

TEST_CASE("one clean split") {
    ImitationDataset data({"x"});
    for (int i = 0; i < 40; ++i) {
        const double x = (i + 0.5) / 40.0;
        const double row[] = {x};
        data.add(row, x < 0.5 ? 0.0 : 1.0, 0, i);
    }
    ForestConfig config;
    config.n_trees = 5;
    config.min_samples_leaf = 1;
    const auto forest = RegressionForest::fit(data, config);
    for (const auto& tree : forest.trees()) {
        REQUIRE(tree.nodes().size() == 3);
        CHECK(tree.nodes()[0].feature == 0);
        // Bootstrap samples may miss points next to the boundary.
        CHECK(tree.nodes()[0].threshold > 0.3);
        CHECK(tree.nodes()[0].threshold < 0.5125);
    }
    const double lo[] = {0.1}, hi[] = {0.9};
    CHECK(forest.predict(lo) == 0.0);
    CHECK(forest.predict(hi) == 1.0);
}

TEST_CASE("fit beats the constant model and stays within the target range") {
    const auto data = noisy_plane(400, 52);
    ForestConfig config;
    config.n_trees = 10;
    const auto forest = RegressionForest::fit(data, config);
    double mean = 0.0;
    for (const double t : data.targets()) mean += t;
    mean /= static_cast<double>(data.size());
    double fit_mse = 0.0, const_mse = 0.0;
    const auto [lo, hi] = std::minmax_element(data.targets().begin(), data.targets().end());
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double p = forest.predict(data.row(i));
        fit_mse += (p - data.target(i)) * (p - data.target(i));
        const_mse += (mean - data.target(i)) * (mean - data.target(i));
        CHECK(p >= *lo);
        CHECK(p <= *hi);
    }
    CHECK(fit_mse <= const_mse);
    CHECK(forest.n_trees() == 10);
    for (const auto& tree : forest.trees()) CHECK(tree.depth() <= config.max_depth);
}

TEST_CASE("forests are reproducible and serialize losslessly") {
    const auto data = noisy_plane(200, 53);
    ForestConfig config;
    config.n_trees = 6;
    config.seed = 9;
    const auto a = RegressionForest::fit(data, config);
    config.threads = 1;
    const auto b = RegressionForest::fit(data, config);
    CHECK(a.serialize() == b.serialize());
    config.seed = 10;
    CHECK(RegressionForest::fit(data, config).serialize() != a.serialize());

    const auto text = a.serialize();
    CHECK(text.rfind("vchunk-forest v1\ndim 3 trees 6\n", 0) == 0);
    const auto back = RegressionForest::deserialize(text);
    CHECK(back.serialize() == text);
    for (std::size_t i = 0; i < data.size(); ++i) CHECK(back.predict(data.row(i)) == a.predict(data.row(i)));
    CHECK_THROWS_AS(RegressionForest::deserialize("vchunk-forest v2\n"), std::invalid_argument);
    CHECK_THROWS_AS(RegressionForest::fit(ImitationDataset({"x"}), config), std::invalid_argument);
    const double short_row[] = {0.5};
    CHECK_THROWS_AS(a.predict(short_row), std::invalid_argument);
}

TEST_CASE("dataset csv and target clipping") {
    ImitationDataset data({"plain", "with,comma"});
    const double r0[] = {0.5, -1.25};
    const double r1[] = {1e-7, 3.0};
    data.add(r0, 1.5, 3, 1);
    data.add(r1, -0.5, 4, 2);
    CHECK(data.target(0) == 1.0);
    CHECK(data.target(1) == 0.0);
    const auto csv = data.to_csv();
    CHECK(csv.rfind("scene,step,plain,\"with,comma\",target\n", 0) == 0);
    const auto back = ImitationDataset::from_csv(csv);
    CHECK(back.to_csv() == csv);
    CHECK(back.provenance(1) == std::pair<int, int>{4, 2});
    CHECK(back.row(0)[1] == -1.25);
    const double bad[] = {1.0};
    CHECK_THROWS_AS(data.add(bad, 0.0, 0, 0), std::invalid_argument);
}

TEST_CASE("grower data rows follow the rollouts") {
    const auto bundles = small_bundles(0, 3);
    GrowerDataConfig config;
    config.max_chunk_size = 8;
    config.threads = 1;
    const auto data = collect_grower_data(bundles, config);
    CHECK(data.dim() == theta_dim(2));

    std::size_t expected = 0;
    for (const auto& b : bundles) {
        const int n = b.scene.n_superpixels();
        const int len = std::min(config.max_chunk_size, n);
        for (InstanceId g = 0; g < b.scene.n_instances(); ++g) {
            const auto seeds = rollout_seeds(b.scene, g, config);
            CHECK(seeds.size() <= static_cast<std::size_t>(config.seeds_per_instance));
            for (std::size_t i = 0; i < seeds.size(); ++i) {
                const auto r = growth_ratios(b.scene, g)[seeds[i]];
                CHECK(r.alpha() >= PixelRatio(1, 2));
            }
            for (int step = 1; step < len; ++step) expected += static_cast<std::size_t>(seeds.size()) * (n - step);
        }
    }
    CHECK(data.size() == expected);

    bool saw_one = false, saw_zero = false;
    for (std::size_t i = 0; i < data.size(); ++i) {
        saw_one = saw_one || data.target(i) == 1.0;
        saw_zero = saw_zero || data.target(i) == 0.0;
        const auto [scene, step] = data.provenance(i);
        CHECK(scene >= 0);
        CHECK(scene < 3);
        CHECK(step >= 1);
        CHECK(step < config.max_chunk_size);
    }
    CHECK(saw_one);
    CHECK(saw_zero);

    config.row_fraction = 0.25;
    const auto sub = collect_grower_data(bundles, config);
    CHECK(sub.size() < data.size());
    CHECK(sub.size() > data.size() / 8);
    CHECK(collect_grower_data(bundles, config).to_csv() == sub.to_csv());
}

TEST_CASE("list data targets") {
    // Strip: g0 = superpixel 1 exactly, g1 = pixels 9..12.
    const auto scene = fixtures::strip_scene({3, 3, 3, 4, 2}, {{3, 6}, {9, 13}});
    SceneBundle bundle{"s", scene, fixtures::labelled_channel(scene, {0, 1, 0, 1, 0})};
    const std::vector<SuperpixelId> a{1}, b{0, 1}, c{3}, d{4};
    const std::vector<std::vector<Chunk>> cands{{Chunk::from_ids(scene, b), Chunk::from_ids(scene, a),
                                                 Chunk::from_ids(scene, c), Chunk::from_ids(scene, d)}};
    const std::vector<SceneBundle> bundles{bundle};
    const auto data = collect_list_data(bundles, cands, 4, 1);
    // 4 + 3 + 2 + 1 rows.
    REQUIRE(data.size() == 10);
    for (std::size_t i = 0; i < 4; ++i) {
        const std::vector<Chunk> single{cands[0][i]};
        CHECK(data.target(i) == doctest::Approx(f_of_list(single, scene.instances()).get_d()));
        CHECK(data.provenance(i).second == 0);
    }
    CHECK(data.target(1) == 1.0);
    // Rounds 2 and 3 start with both instances taken.
    for (std::size_t i = 7; i < 10; ++i) CHECK(data.target(i) == 0.0);
    CHECK_THROWS_AS(collect_list_data(bundles, std::vector<std::vector<Chunk>>{}, 2), std::invalid_argument);
}

TEST_CASE("ground truth scorer reproduces greedy lists") {
    const auto bundles = small_bundles(10, 8);
    for (const auto& b : bundles) {
        const auto seeds = seed_grid(b.scene, 10);
        std::vector<Chunk> cands;
        for (const auto& c : grow_multi(b.scene, GrowerPredictor::oracle(b.scene, 0), seeds, 6)) cands.push_back(c.chunk);
        const FeatureContext ctx(b.scene, b.channel);
        const GroundTruthListScorer scorer(b.scene, cands, b.channel.n_classes);
        const auto predicted = predict_list(ctx, cands, scorer, 5);
        const auto greedy = greedy_list(cands, b.scene.instances(), 5);
        CHECK(predicted.order == greedy.order());
        for (std::size_t i = 0; i < greedy.size(); ++i) {
            CHECK(predicted.scores[i] == greedy.entries[i].marginal.to_double());
        }
        CHECK(predict_list(ctx, cands, scorer, 0).order.empty());
    }
}

TEST_CASE("predict_list rejects a forest of the wrong width") {
    const auto bundles = small_bundles(20, 1);
    const FeatureContext ctx(bundles[0].scene, bundles[0].channel);
    const auto forest = RegressionForest::fit(noisy_plane(50, 54), ForestConfig{});
    const ForestListScorer scorer(forest);
    const std::vector<Chunk> cands = random_chunks(bundles[0].scene, 3, CounterRng(1));
    CHECK_THROWS_AS(predict_list(ctx, cands, scorer, 2), std::invalid_argument);
}

TEST_CASE("learned grower respects the bound at its own observed error") {
    GrowerDataConfig config;
    config.max_chunk_size = 10;
    const auto train = small_bundles(100, 12);
    ForestConfig fc;
    fc.n_trees = 10;
    const auto forest = RegressionForest::fit(collect_grower_data(train, config), fc);
    const auto test = small_bundles(200, 6);
    for (const auto& b : test) {
        const FeatureContext ctx(b.scene, b.channel);
        const auto learned = GrowerPredictor::learned(forest, ctx);
        for (InstanceId g = 0; g < b.scene.n_instances(); ++g) {
            const auto exact = GrowerPredictor::oracle(b.scene, g);
            std::vector<double> scores(b.scene.n_superpixels());
            double eps_hat = 0.0;
            for (SuperpixelId s = 0; s < b.scene.n_superpixels(); ++s) {
                scores[s] = learned.estimate(s);
                eps_hat = std::max(eps_hat, std::abs(scores[s] - exact.estimate(s)));
            }
            const auto optimum = best_in_chain(b.scene, grow_single(b.scene, g, exact), g).second.to_double();
            const auto got = best_in_chain(b.scene, chain_from_scores(scores), g).second.to_double();
            CHECK(got >= optimum - 2.0 * eps_hat - 1e-12);
        }
    }

    const auto held_out = collect_grower_data(test, config);
    double mean = 0.0;
    for (const double t : held_out.targets()) mean += t;
    mean /= static_cast<double>(held_out.size());
    double mse = 0.0, const_mse = 0.0;
    for (std::size_t i = 0; i < held_out.size(); ++i) {
        const double e = forest.predict(held_out.row(i)) - held_out.target(i);
        mse += e * e;
        const_mse += (mean - held_out.target(i)) * (mean - held_out.target(i));
    }
    MESSAGE("held-out alpha mse: " << mse / held_out.size() << " (constant model " << const_mse / held_out.size() << ")");
    CHECK(mse < const_mse);
}
