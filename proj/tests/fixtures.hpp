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

#ifndef VCHUNK_TESTS_FIXTURES_HPP
#define VCHUNK_TESTS_FIXTURES_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "vchunk/channel.hpp"
#include "vchunk/scene.hpp"

namespace fixtures {

using vchunk::GroundTruthInstance;
using vchunk::PixelGrid;
using vchunk::Scene;

inline GroundTruthInstance make_instance(int id, std::vector<std::int32_t> mask, int class_label = 1) {
    std::sort(mask.begin(), mask.end());
    GroundTruthInstance g;
    g.id = id;
    g.class_label = class_label;
    g.area = static_cast<std::int64_t>(mask.size());
    g.mask = std::move(mask);
    return g;
}

inline PixelGrid make_grid(int width, int height, std::vector<vchunk::SuperpixelId> labels) {
    PixelGrid grid;
    grid.width = width;
    grid.height = height;
    grid.labels = std::move(labels);
    grid.n_superpixels = grid.labels.empty() ? 0 : *std::max_element(grid.labels.begin(), grid.labels.end()) + 1;
    return grid;
}

// One pixel row. Superpixel i spans widths[i] consecutive pixels; instance j
// covers the half-open pixel range ranges[j].
inline Scene strip_scene(const std::vector<int>& widths, const std::vector<std::pair<int, int>>& ranges) {
    std::vector<vchunk::SuperpixelId> labels;
    for (std::size_t i = 0; i < widths.size(); ++i) labels.insert(labels.end(), widths[i], static_cast<int>(i));
    const int width = static_cast<int>(labels.size());
    std::vector<GroundTruthInstance> instances;
    for (std::size_t j = 0; j < ranges.size(); ++j) {
        std::vector<std::int32_t> mask;
        for (int p = ranges[j].first; p < ranges[j].second; ++p) mask.push_back(p);
        instances.push_back(make_instance(static_cast<int>(j), mask));
    }
    return Scene::build(make_grid(width, 1, std::move(labels)), std::move(instances));
}

// Superpixels are bxb blocks of a (cols*b) x (rows*b) grid, numbered row-major.
inline PixelGrid block_grid(int cols, int rows, int b) {
    std::vector<vchunk::SuperpixelId> labels(static_cast<std::size_t>(cols * b) * (rows * b));
    for (int r = 0; r < rows * b; ++r) {
        for (int c = 0; c < cols * b; ++c) labels[static_cast<std::size_t>(r) * cols * b + c] = (r / b) * cols + c / b;
    }
    return make_grid(cols * b, rows * b, std::move(labels));
}

// Pixels of the given blocks of a block_grid.
inline std::vector<std::int32_t> block_pixels(int cols, int b, const std::vector<int>& blocks) {
    std::vector<std::int32_t> out;
    const int width = cols * b;
    for (const int id : blocks) {
        const int r0 = (id / cols) * b;
        const int c0 = (id % cols) * b;
        for (int r = r0; r < r0 + b; ++r) {
            for (int c = c0; c < c0 + b; ++c) out.push_back(r * width + c);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Channel where superpixel s is labelled classes[s] with confidence 0.9 and
// every pixel has one colour.
inline vchunk::SemanticChannel labelled_channel(const Scene& scene, const std::vector<int>& classes, int n_classes = 2,
                                                std::array<std::uint8_t, 3> color = {128, 64, 32}) {
    vchunk::SemanticChannel ch;
    ch.n_classes = n_classes;
    ch.scores.assign(static_cast<std::size_t>(scene.n_superpixels()) * n_classes, 0.1 / (n_classes - 1));
    for (int s = 0; s < scene.n_superpixels(); ++s) ch.scores[static_cast<std::size_t>(s) * n_classes + classes[s]] = 0.9;
    ch.colors.assign(static_cast<std::size_t>(scene.width()) * scene.height(), color);
    return ch;
}

}  // namespace fixtures

#endif  // VCHUNK_TESTS_FIXTURES_HPP
