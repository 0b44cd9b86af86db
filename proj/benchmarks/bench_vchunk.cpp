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

#include <benchmark/benchmark.h>

#include <cmath>

#include "vchunk/assignment.hpp"
#include "vchunk/grower.hpp"
#include "vchunk/rng.hpp"
#include "vchunk/synth.hpp"

using namespace vchunk;

namespace {

Scene block_scene(int n) {
    const int cols = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
    const int rows = n / cols;
    const int w = cols * 2, h = rows * 2;
    PixelGrid grid;
    grid.width = w;
    grid.height = h;
    grid.n_superpixels = cols * rows;
    grid.labels.resize(static_cast<std::size_t>(w) * h);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) grid.labels[static_cast<std::size_t>(r) * w + c] = (r / 2) * cols + c / 2;
    }
    GroundTruthInstance g;
    for (int r = h / 4; r < h / 2; ++r) {
        for (int c = w / 4 + 1; c < w / 2 + 1; ++c) g.mask.push_back(r * w + c);
    }
    g.area = static_cast<std::int64_t>(g.mask.size());
    return Scene::build(std::move(grid), {g});
}

void BM_GrowSingle(benchmark::State& state) {
    const auto scene = block_scene(static_cast<int>(state.range(0)));
    const auto predictor = GrowerPredictor::perturbed(scene, 0, 0.05, 3);
    for (auto _ : state) {
        auto chain = grow_single(scene, 0, predictor);
        benchmark::DoNotOptimize(chain);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GrowSingle)->RangeMultiplier(2)->Range(1000, 8000)->Complexity(benchmark::oNLogN);

void BM_GrowMultiSynth(benchmark::State& state) {
    SynthConfig config;
    config.seed = 11;
    const auto b = generate_scene(config, 0);
    const auto seeds = seed_grid(b.scene, 16);
    const auto predictor = GrowerPredictor::oracle(b.scene, 0);
    for (auto _ : state) {
        auto cands = grow_multi(b.scene, predictor, seeds, 40);
        benchmark::DoNotOptimize(cands);
    }
}
BENCHMARK(BM_GrowMultiSynth)->Unit(benchmark::kMillisecond);

void BM_Hungarian(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    CounterRng rng(17);
    ScoreMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            Rational v(static_cast<long>(rng.uniform_int(0, 100)), 100UL);
            v.canonicalize();
            m.at(i, j) = v;
        }
    }
    for (auto _ : state) {
        auto r = hungarian(m);
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_Hungarian)->RangeMultiplier(2)->Range(4, 64);

}  // namespace

BENCHMARK_MAIN();
