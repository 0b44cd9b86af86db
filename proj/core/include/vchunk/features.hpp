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

#ifndef VCHUNK_FEATURES_HPP
#define VCHUNK_FEATURES_HPP

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vchunk/channel.hpp"
#include "vchunk/scene.hpp"

namespace vchunk {

inline constexpr int kColorBinsPerChannel = 8;
inline constexpr int kColorBins = 3 * kColorBinsPerChannel;
inline constexpr int kSpatialRelations = 7;
/// Centroid distance below this fraction of the image diagonal is "near".
inline constexpr double kNearFraction = 0.1;
/// Class scores are aggregated in fixed point so sums are exact.
inline constexpr std::int64_t kScoreScale = std::int64_t{1} << 24;

enum class SpatialRelation : int { Above = 0, Below, Left, Right, Overlapping, Near, Far };

/// Integer aggregates of a union of superpixels. Addition is exact and
/// commutative, so a chunk's stats do not depend on growth order.
struct RegionStats {
    std::int64_t area = 0;
    std::int64_t sum_row = 0;
    std::int64_t sum_col = 0;
    std::int64_t sum_row2 = 0;
    std::int64_t sum_col2 = 0;
    std::int64_t sum_rowcol = 0;
    BoundingBox bbox;
    std::vector<std::int64_t> class_mass;
    std::array<std::int64_t, kColorBins> color{};

    void add(const RegionStats& other);
    double centroid_row() const { return static_cast<double>(sum_row) / static_cast<double>(area); }
    double centroid_col() const { return static_cast<double>(sum_col) / static_cast<double>(area); }
};

/// Per-scene feature precomputation. Holds references; the scene and
/// channel must outlive it.
class FeatureContext {
public:
    FeatureContext(const Scene& scene, const SemanticChannel& channel);

    const Scene& scene() const { return *scene_; }
    const SemanticChannel& channel() const { return *channel_; }
    int n_classes() const { return channel_->n_classes; }
    const RegionStats& superpixel_stats(SuperpixelId s) const { return stats_[s]; }
    RegionStats empty_stats() const;
    RegionStats chunk_stats(const Chunk& c) const;
    double diagonal() const { return diagonal_; }

private:
    const Scene* scene_;
    const SemanticChannel* channel_;
    std::vector<RegionStats> stats_;
    double diagonal_ = 0.0;
};

std::size_t quality_dim(int n_classes);
std::size_t phi_dim(int n_classes);
std::size_t theta_dim(int n_classes);
std::vector<std::string> phi_columns(int n_classes);
std::vector<std::string> theta_columns(int n_classes);

/// Class histogram (mass-weighted mean), normalized second-order central
/// moments (mu20, mu02, mu11 over area^2), area fraction and scale.
void append_quality(const FeatureContext& ctx, const RegionStats& region, std::vector<double>& out);

/// Histogram intersection of L1-normalized colour histograms; 1 when
/// either side is empty.
double color_similarity(const RegionStats& a, const RegionStats& b);

/// area / bounding-box area, in (0, 1] for non-empty regions.
double region_fill(const RegionStats& region);

/// Relation of `subject` to `reference`, multi-hot over the seven relation
/// bins and normalized to sum to 1.
std::array<double, kSpatialRelations> spatial_relation_row(const FeatureContext& ctx, const Chunk& subject,
                                                           const RegionStats& subject_stats,
                                                           const Chunk& reference,
                                                           const RegionStats& reference_stats);

/// Φ(c, L): quality block of c followed by the similarity block against
/// the list built so far (max IoU, mean IoU, mean spatial-relation row,
/// list length). The similarity block is all zeros for an empty list.
std::vector<double> phi(const FeatureContext& ctx, const Chunk& c, std::span<const Chunk> list);

/// Same as phi() with the region statistics already computed.
void phi_into(const FeatureContext& ctx, const Chunk& c, const RegionStats& c_stats,
              std::span<const Chunk> list, std::span<const RegionStats> list_stats, std::vector<double>& out);

/// θ(s, c): quality block of c ∪ {s}, colour similarity of s to c, region
/// fill of c ∪ {s}, the class scores of s and its area fraction.
/// Throws std::invalid_argument when s ∈ c.
std::vector<double> theta(const FeatureContext& ctx, SuperpixelId s, const Chunk& c);

/// Same as theta() given the aggregate of c; performs no membership check.
void theta_into(const FeatureContext& ctx, SuperpixelId s, const RegionStats& c_stats, std::vector<double>& out);

}  // namespace vchunk

#endif  // VCHUNK_FEATURES_HPP
