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

#ifndef VCHUNK_SCENE_HPP
#define VCHUNK_SCENE_HPP

#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "vchunk/rational.hpp"

namespace vchunk {

using SuperpixelId = std::int32_t;
using InstanceId = std::int32_t;

/// Pairing target for list slots that exceed the number of real instances.
inline constexpr InstanceId kDummyInstance = -1;

class SceneError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Inclusive pixel bounding box. Default-constructed boxes are empty.
struct BoundingBox {
    int row_min = 1;
    int col_min = 1;
    int row_max = 0;
    int col_max = 0;

    bool empty() const { return row_max < row_min || col_max < col_min; }
    std::int64_t area() const {
        return empty() ? 0
                       : static_cast<std::int64_t>(row_max - row_min + 1) * (col_max - col_min + 1);
    }
    void include(int row, int col);
    void merge(const BoundingBox& other);
    bool contains(int row, int col) const {
        return row >= row_min && row <= row_max && col >= col_min && col <= col_max;
    }
    friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

/// Dense row-major superpixel labelling of a width x height grid.
struct PixelGrid {
    int width = 0;
    int height = 0;
    int n_superpixels = 0;
    std::vector<SuperpixelId> labels;

    SuperpixelId at(int row, int col) const {
        return labels[static_cast<std::size_t>(row) * width + col];
    }
    std::int64_t pixel_count() const { return static_cast<std::int64_t>(width) * height; }

    /// Throws SceneError unless every pixel carries an id in [0, n) and
    /// every id owns at least one pixel.
    void validate() const;
};

struct Superpixel {
    SuperpixelId id = 0;
    std::int64_t area = 0;
    std::vector<std::int32_t> pixels;  // row-major pixel indices, ascending
    double centroid_row = 0.0;
    double centroid_col = 0.0;
    BoundingBox bbox;
    std::vector<std::int64_t> per_instance_intersection;  // |s ∩ g| for each g
};

struct GroundTruthInstance {
    InstanceId id = 0;
    int class_label = 0;
    std::int64_t area = 0;
    std::vector<std::int32_t> mask;  // row-major pixel indices, ascending
};

/// Area-0 padding instance; never stored in a Scene.
GroundTruthInstance make_dummy_instance();

/// Immutable superpixel scene with all per-superpixel intersection counts
/// against ground truth precomputed.
class Scene {
public:
    Scene() = default;

    /// Validates the grid, requires masks in bounds and pairwise disjoint,
    /// and instance ids equal to their position. Throws SceneError naming
    /// the offending pixel on overlap.
    static Scene build(PixelGrid grid, std::vector<GroundTruthInstance> instances);

    int width() const { return grid_.width; }
    int height() const { return grid_.height; }
    const PixelGrid& grid() const { return grid_; }

    int n_superpixels() const { return grid_.n_superpixels; }
    int n_instances() const { return static_cast<int>(instances_.size()); }

    std::span<const Superpixel> superpixels() const { return superpixels_; }
    std::span<const GroundTruthInstance> instances() const { return instances_; }
    const Superpixel& superpixel(SuperpixelId id) const { return superpixels_.at(id); }
    const GroundTruthInstance& instance(InstanceId id) const { return instances_.at(id); }

    /// |s ∩ g|; 0 for dummy or out-of-range instance ids.
    std::int64_t intersection(SuperpixelId s, InstanceId g) const;

    /// Instance owning a pixel, or kDummyInstance for background.
    InstanceId owner(std::int32_t pixel) const { return owner_[pixel]; }

private:
    PixelGrid grid_;
    std::vector<Superpixel> superpixels_;
    std::vector<GroundTruthInstance> instances_;
    std::vector<InstanceId> owner_;
};

/// A union of superpixels with cached area and per-instance intersections.
/// Cached counts are exact sums over members because superpixels never
/// overlap.
class Chunk {
public:
    Chunk() = default;
    explicit Chunk(const Scene& scene);

    static Chunk from_ids(const Scene& scene, std::span<const SuperpixelId> ids);

    /// Throws std::invalid_argument if the id is out of range or already a
    /// member.
    void add(const Scene& scene, SuperpixelId id);
    bool contains(SuperpixelId id) const;

    std::span<const SuperpixelId> ids() const { return ids_; }
    std::size_t size() const { return ids_.size(); }
    bool empty() const { return ids_.empty(); }
    std::int64_t area() const { return area_; }
    std::int64_t intersection(InstanceId g) const {
        return (g < 0 || static_cast<std::size_t>(g) >= inter_.size()) ? 0 : inter_[g];
    }

    /// Canonical sorted-id key, e.g. "3 7 12".
    std::string key() const;

    friend bool operator==(const Chunk& a, const Chunk& b) { return a.ids_ == b.ids_; }

private:
    std::vector<SuperpixelId> ids_;
    std::int64_t area_ = 0;
    std::vector<std::int64_t> inter_;
};

/// |c ∩ g| / (|c| + |g| - |c ∩ g|); 0 for dummy instances and empty unions.
PixelRatio iou(const Chunk& c, const GroundTruthInstance& g);

/// IoU of c ∪ {s} with g from cached counts in O(1). Throws if s ∈ c.
PixelRatio iou_extend(const Chunk& c, const Superpixel& s, const GroundTruthInstance& g);

/// IoU between two chunks of the same scene (used by list features).
PixelRatio chunk_overlap(const Chunk& a, const Chunk& b, const Scene& scene);

/// Per-superpixel growth quantities against one instance:
/// Δx = |s ∩ g|, Δy = |s| - |s ∩ g|, α = Δx / |s|, r = Δx / Δy.
struct GrowthRatio {
    SuperpixelId id = 0;
    std::int64_t delta_x = 0;
    std::int64_t delta_y = 0;

    PixelRatio alpha() const { return {delta_x, delta_x + delta_y}; }
    /// r = +inf when the superpixel lies entirely inside the instance.
    bool infinite() const { return delta_y == 0 && delta_x > 0; }
    /// Finite ratio; meaningless when infinite().
    PixelRatio ratio() const { return {delta_x, delta_y}; }
};

/// Value order on r (all +inf values compare equal).
std::strong_ordering compare_ratio(const GrowthRatio& a, const GrowthRatio& b);

/// True when r > value (always true for +inf).
bool ratio_exceeds(const GrowthRatio& r, PixelRatio value);

std::vector<GrowthRatio> growth_ratios(const Scene& scene, InstanceId g);

/// Ids sorted by α descending, ties by id ascending.
std::vector<SuperpixelId> order_by_alpha(std::span<const GrowthRatio> ratios);

/// Ids sorted by r descending. Among +inf entries: Δx descending, then id;
/// among equal finite values: id ascending.
std::vector<SuperpixelId> order_by_ratio(std::span<const GrowthRatio> ratios);

}  // namespace vchunk

#endif  // VCHUNK_SCENE_HPP
