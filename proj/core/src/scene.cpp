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

#include "vchunk/scene.hpp"

#include <algorithm>
#include <numeric>

namespace vchunk {

void BoundingBox::include(int row, int col) {
    if (empty()) {
        row_min = row_max = row;
        col_min = col_max = col;
        return;
    }
    row_min = std::min(row_min, row);
    row_max = std::max(row_max, row);
    col_min = std::min(col_min, col);
    col_max = std::max(col_max, col);
}

void BoundingBox::merge(const BoundingBox& other) {
    if (other.empty()) return;
    if (empty()) {
        *this = other;
        return;
    }
    row_min = std::min(row_min, other.row_min);
    row_max = std::max(row_max, other.row_max);
    col_min = std::min(col_min, other.col_min);
    col_max = std::max(col_max, other.col_max);
}

void PixelGrid::validate() const {
    if (width <= 0 || height <= 0) throw SceneError("grid dimensions must be positive");
    if (n_superpixels <= 0) throw SceneError("grid must contain at least one superpixel");
    if (static_cast<std::int64_t>(labels.size()) != pixel_count()) {
        throw SceneError("grid label count does not match width * height");
    }
    std::vector<char> seen(n_superpixels, 0);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const SuperpixelId id = labels[i];
        if (id < 0 || id >= n_superpixels) {
            throw SceneError("superpixel id " + std::to_string(id) + " out of range at pixel (" +
                             std::to_string(i / width) + "," + std::to_string(i % width) + ")");
        }
        seen[id] = 1;
    }
    for (int id = 0; id < n_superpixels; ++id) {
        if (!seen[id]) throw SceneError("superpixel " + std::to_string(id) + " owns no pixel");
    }
}

GroundTruthInstance make_dummy_instance() {
    GroundTruthInstance g;
    g.id = kDummyInstance;
    g.class_label = -1;
    g.area = 0;
    return g;
}

Scene Scene::build(PixelGrid grid, std::vector<GroundTruthInstance> instances) {
    grid.validate();
    Scene scene;
    const auto n_pixels = grid.pixel_count();
    scene.owner_.assign(n_pixels, kDummyInstance);

    for (std::size_t k = 0; k < instances.size(); ++k) {
        auto& g = instances[k];
        if (g.id != static_cast<InstanceId>(k)) {
            throw SceneError("instance ids must equal their position; got " + std::to_string(g.id) +
                             " at position " + std::to_string(k));
        }
        std::sort(g.mask.begin(), g.mask.end());
        g.mask.erase(std::unique(g.mask.begin(), g.mask.end()), g.mask.end());
        if (g.mask.empty()) throw SceneError("instance " + std::to_string(g.id) + " has an empty mask");
        for (const auto p : g.mask) {
            if (p < 0 || p >= n_pixels) {
                throw SceneError("instance " + std::to_string(g.id) + " mask pixel " +
                                 std::to_string(p) + " lies outside the grid");
            }
            if (scene.owner_[p] != kDummyInstance) {
                throw SceneError("instances " + std::to_string(scene.owner_[p]) + " and " +
                                 std::to_string(g.id) + " overlap at pixel (" +
                                 std::to_string(p / grid.width) + "," +
                                 std::to_string(p % grid.width) + ")");
            }
            scene.owner_[p] = g.id;
        }
        g.area = static_cast<std::int64_t>(g.mask.size());
    }

    const auto n_inst = instances.size();
    scene.superpixels_.resize(grid.n_superpixels);
    for (int id = 0; id < grid.n_superpixels; ++id) {
        scene.superpixels_[id].id = id;
        scene.superpixels_[id].per_instance_intersection.assign(n_inst, 0);
    }
    std::vector<double> sum_row(grid.n_superpixels, 0.0), sum_col(grid.n_superpixels, 0.0);
    for (std::int32_t p = 0; p < n_pixels; ++p) {
        auto& s = scene.superpixels_[grid.labels[p]];
        const int row = p / grid.width;
        const int col = p % grid.width;
        s.pixels.push_back(p);
        ++s.area;
        s.bbox.include(row, col);
        sum_row[s.id] += row;
        sum_col[s.id] += col;
        if (const auto owner = scene.owner_[p]; owner != kDummyInstance) {
            ++s.per_instance_intersection[owner];
        }
    }
    for (auto& s : scene.superpixels_) {
        s.centroid_row = sum_row[s.id] / static_cast<double>(s.area);
        s.centroid_col = sum_col[s.id] / static_cast<double>(s.area);
    }
    scene.grid_ = std::move(grid);
    scene.instances_ = std::move(instances);
    return scene;
}

std::int64_t Scene::intersection(SuperpixelId s, InstanceId g) const {
    if (g < 0 || g >= n_instances()) return 0;
    return superpixels_.at(s).per_instance_intersection[g];
}

Chunk::Chunk(const Scene& scene) : inter_(scene.n_instances(), 0) {}

Chunk Chunk::from_ids(const Scene& scene, std::span<const SuperpixelId> ids) {
    Chunk c(scene);
    for (const auto id : ids) c.add(scene, id);
    return c;
}

void Chunk::add(const Scene& scene, SuperpixelId id) {
    if (id < 0 || id >= scene.n_superpixels()) {
        throw std::invalid_argument("superpixel id " + std::to_string(id) + " out of range");
    }
    const auto pos = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (pos != ids_.end() && *pos == id) {
        throw std::invalid_argument("superpixel " + std::to_string(id) + " already in chunk");
    }
    ids_.insert(pos, id);
    const auto& s = scene.superpixel(id);
    area_ += s.area;
    if (inter_.size() != s.per_instance_intersection.size()) {
        inter_.assign(s.per_instance_intersection.size(), 0);
        for (const auto member : ids_) {
            if (member == id) continue;
            const auto& m = scene.superpixel(member);
            for (std::size_t g = 0; g < inter_.size(); ++g) inter_[g] += m.per_instance_intersection[g];
        }
    }
    for (std::size_t g = 0; g < inter_.size(); ++g) inter_[g] += s.per_instance_intersection[g];
}

bool Chunk::contains(SuperpixelId id) const {
    return std::binary_search(ids_.begin(), ids_.end(), id);
}

std::string Chunk::key() const {
    std::string out;
    for (std::size_t i = 0; i < ids_.size(); ++i) {
        if (i) out += ' ';
        out += std::to_string(ids_[i]);
    }
    return out;
}

PixelRatio iou(const Chunk& c, const GroundTruthInstance& g) {
    if (g.area == 0) return {};
    const auto inter = c.intersection(g.id);
    return {inter, c.area() + g.area - inter};
}

PixelRatio iou_extend(const Chunk& c, const Superpixel& s, const GroundTruthInstance& g) {
    if (c.contains(s.id)) {
        throw std::invalid_argument("superpixel " + std::to_string(s.id) + " already in chunk");
    }
    if (g.area == 0) return {};
    const auto inter = c.intersection(g.id);
    const auto uni = c.area() + g.area - inter;
    const std::int64_t dx = (g.id >= 0 && static_cast<std::size_t>(g.id) < s.per_instance_intersection.size())
                                ? s.per_instance_intersection[g.id]
                                : 0;
    const std::int64_t dy = s.area - dx;
    return {inter + dx, uni + dy};
}

PixelRatio chunk_overlap(const Chunk& a, const Chunk& b, const Scene& scene) {
    std::int64_t shared = 0;
    auto ia = a.ids().begin();
    auto ib = b.ids().begin();
    while (ia != a.ids().end() && ib != b.ids().end()) {
        if (*ia < *ib) {
            ++ia;
        } else if (*ib < *ia) {
            ++ib;
        } else {
            shared += scene.superpixel(*ia).area;
            ++ia;
            ++ib;
        }
    }
    return {shared, a.area() + b.area() - shared};
}

std::strong_ordering compare_ratio(const GrowthRatio& a, const GrowthRatio& b) {
    if (a.infinite() || b.infinite()) {
        if (a.infinite() && b.infinite()) return std::strong_ordering::equal;
        return a.infinite() ? std::strong_ordering::greater : std::strong_ordering::less;
    }
    return a.ratio() <=> b.ratio();
}

bool ratio_exceeds(const GrowthRatio& r, PixelRatio value) {
    return r.infinite() || r.ratio() > value;
}

std::vector<GrowthRatio> growth_ratios(const Scene& scene, InstanceId g) {
    std::vector<GrowthRatio> out;
    out.reserve(scene.n_superpixels());
    for (const auto& s : scene.superpixels()) {
        const auto dx = scene.intersection(s.id, g);
        out.push_back({s.id, dx, s.area - dx});
    }
    return out;
}

std::vector<SuperpixelId> order_by_alpha(std::span<const GrowthRatio> ratios) {
    std::vector<std::size_t> idx(ratios.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
        const auto c = ratios[i].alpha() <=> ratios[j].alpha();
        if (c != 0) return c > 0;
        return ratios[i].id < ratios[j].id;
    });
    std::vector<SuperpixelId> out;
    out.reserve(idx.size());
    for (const auto i : idx) out.push_back(ratios[i].id);
    return out;
}

std::vector<SuperpixelId> order_by_ratio(std::span<const GrowthRatio> ratios) {
    std::vector<std::size_t> idx(ratios.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
        const auto& a = ratios[i];
        const auto& b = ratios[j];
        const auto c = compare_ratio(a, b);
        if (c != 0) return c > 0;
        if (a.infinite() && a.delta_x != b.delta_x) return a.delta_x > b.delta_x;
        return a.id < b.id;
    });
    std::vector<SuperpixelId> out;
    out.reserve(idx.size());
    for (const auto i : idx) out.push_back(ratios[i].id);
    return out;
}

}  // namespace vchunk
