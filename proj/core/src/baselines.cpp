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

#include "vchunk/baselines.hpp"

#include <algorithm>

namespace vchunk {

std::vector<std::vector<SuperpixelId>> superpixel_adjacency(const Scene& scene) {
    std::vector<std::vector<SuperpixelId>> adj(scene.n_superpixels());
    const auto& grid = scene.grid();
    auto link = [&](SuperpixelId a, SuperpixelId b) {
        if (a == b) return;
        adj[a].push_back(b);
        adj[b].push_back(a);
    };
    for (int r = 0; r < grid.height; ++r) {
        for (int c = 0; c < grid.width; ++c) {
            if (c + 1 < grid.width) link(grid.at(r, c), grid.at(r, c + 1));
            if (r + 1 < grid.height) link(grid.at(r, c), grid.at(r + 1, c));
        }
    }
    for (auto& list : adj) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
    }
    return adj;
}

std::vector<Chunk> baseline_cc(const Scene& scene, const SemanticChannel& channel, int target_class) {
    const int n = scene.n_superpixels();
    const auto adj = superpixel_adjacency(scene);
    std::vector<char> labeled(n, 0);
    for (SuperpixelId s = 0; s < n; ++s) labeled[s] = channel.argmax_class(s) == target_class;
    std::vector<char> seen(n, 0);
    std::vector<Chunk> out;
    for (SuperpixelId s = 0; s < n; ++s) {
        if (!labeled[s] || seen[s]) continue;
        Chunk c(scene);
        std::vector<SuperpixelId> stack{s};
        seen[s] = 1;
        while (!stack.empty()) {
            const auto v = stack.back();
            stack.pop_back();
            c.add(scene, v);
            for (const auto u : adj[v]) {
                if (labeled[u] && !seen[u]) {
                    seen[u] = 1;
                    stack.push_back(u);
                }
            }
        }
        out.push_back(std::move(c));
    }
    // Components are discovered in order of their smallest member, so a
    // stable sort by area gives the documented tie-break.
    std::stable_sort(out.begin(), out.end(), [](const Chunk& a, const Chunk& b) { return a.area() > b.area(); });
    return out;
}

std::int64_t pixels_inside(const Scene& scene, SuperpixelId s, const BoundingBox& box) {
    std::int64_t count = 0;
    for (const auto p : scene.superpixel(s).pixels) {
        if (box.contains(p / scene.width(), p % scene.width())) ++count;
    }
    return count;
}

namespace {

std::vector<Chunk> box_chunks(const Scene& scene, std::span<const BoundingBox> boxes,
                              const std::vector<char>* allowed) {
    std::vector<Chunk> out;
    for (const auto& box : boxes) {
        Chunk c(scene);
        for (SuperpixelId s = 0; s < scene.n_superpixels(); ++s) {
            if (allowed && !(*allowed)[s]) continue;
            const auto& sp = scene.superpixel(s);
            if (!sp.bbox.empty() && (sp.bbox.row_max < box.row_min || sp.bbox.row_min > box.row_max ||
                                     sp.bbox.col_max < box.col_min || sp.bbox.col_min > box.col_max)) {
                continue;
            }
            if (2 * pixels_inside(scene, s, box) > sp.area) c.add(scene, s);
        }
        if (!c.empty()) out.push_back(std::move(c));
    }
    return out;
}

}  // namespace

std::vector<Chunk> baseline_boxes(const Scene& scene, std::span<const BoundingBox> boxes) {
    return box_chunks(scene, boxes, nullptr);
}

std::vector<Chunk> baseline_intersection(const Scene& scene, const SemanticChannel& channel,
                                         std::span<const BoundingBox> boxes, int target_class) {
    std::vector<char> allowed(scene.n_superpixels(), 0);
    for (SuperpixelId s = 0; s < scene.n_superpixels(); ++s) allowed[s] = channel.argmax_class(s) == target_class;
    return box_chunks(scene, boxes, &allowed);
}

}  // namespace vchunk
