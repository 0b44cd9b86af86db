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

#include "vchunk/features.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vchunk {

void RegionStats::add(const RegionStats& other) {
    area += other.area;
    sum_row += other.sum_row;
    sum_col += other.sum_col;
    sum_row2 += other.sum_row2;
    sum_col2 += other.sum_col2;
    sum_rowcol += other.sum_rowcol;
    bbox.merge(other.bbox);
    if (class_mass.size() < other.class_mass.size()) class_mass.resize(other.class_mass.size(), 0);
    for (std::size_t c = 0; c < other.class_mass.size(); ++c) class_mass[c] += other.class_mass[c];
    for (int b = 0; b < kColorBins; ++b) color[b] += other.color[b];
}

FeatureContext::FeatureContext(const Scene& scene, const SemanticChannel& channel)
    : scene_(&scene), channel_(&channel) {
    channel.validate(scene);
    diagonal_ = std::hypot(static_cast<double>(scene.width()), static_cast<double>(scene.height()));
    stats_.resize(scene.n_superpixels());
    for (const auto& s : scene.superpixels()) {
        auto& st = stats_[s.id];
        st.class_mass.assign(channel.n_classes, 0);
        for (const auto p : s.pixels) {
            const std::int64_t row = p / scene.width();
            const std::int64_t col = p % scene.width();
            st.sum_row += row;
            st.sum_col += col;
            st.sum_row2 += row * row;
            st.sum_col2 += col * col;
            st.sum_rowcol += row * col;
            const auto& rgb = channel.colors[p];
            for (int k = 0; k < 3; ++k) ++st.color[k * kColorBinsPerChannel + rgb[k] / (256 / kColorBinsPerChannel)];
        }
        st.area = s.area;
        st.bbox = s.bbox;
        const auto scores = channel.class_scores(s.id);
        for (int c = 0; c < channel.n_classes; ++c) {
            st.class_mass[c] = s.area * std::llround(scores[c] * static_cast<double>(kScoreScale));
        }
    }
}

RegionStats FeatureContext::empty_stats() const {
    RegionStats st;
    st.class_mass.assign(n_classes(), 0);
    return st;
}

RegionStats FeatureContext::chunk_stats(const Chunk& c) const {
    RegionStats st = empty_stats();
    for (const auto id : c.ids()) st.add(stats_.at(id));
    return st;
}

std::size_t quality_dim(int n_classes) { return static_cast<std::size_t>(n_classes) + 5; }
std::size_t phi_dim(int n_classes) { return quality_dim(n_classes) + 2 + kSpatialRelations + 1; }
std::size_t theta_dim(int n_classes) { return quality_dim(n_classes) + 2 + static_cast<std::size_t>(n_classes) + 1; }

namespace {

std::vector<std::string> quality_columns(int n_classes, const std::string& prefix) {
    std::vector<std::string> cols;
    for (int c = 0; c < n_classes; ++c) cols.push_back(prefix + "class_" + std::to_string(c));
    for (const char* name : {"mu20", "mu02", "mu11", "area_frac", "scale"}) cols.push_back(prefix + name);
    return cols;
}

constexpr const char* kRelationNames[kSpatialRelations] = {"above", "below", "left", "right", "overlapping", "near", "far"};

double central_moment(std::int64_t area, std::int64_t sum_a, std::int64_t sum_b, std::int64_t sum_ab) {
    // (area * Σab - Σa Σb) / area^3, numerator exact.
    const Int128 num = static_cast<Int128>(area) * sum_ab - static_cast<Int128>(sum_a) * sum_b;
    const double a = static_cast<double>(area);
    return static_cast<double>(num) / (a * a * a);
}

}  // namespace

std::vector<std::string> phi_columns(int n_classes) {
    auto cols = quality_columns(n_classes, "q_");
    cols.push_back("max_iou_list");
    cols.push_back("mean_iou_list");
    for (const char* name : kRelationNames) cols.push_back(std::string("rel_") + name);
    cols.push_back("list_length");
    return cols;
}

std::vector<std::string> theta_columns(int n_classes) {
    auto cols = quality_columns(n_classes, "grown_");
    cols.push_back("color_similarity");
    cols.push_back("region_fill");
    for (int c = 0; c < n_classes; ++c) cols.push_back("sp_class_" + std::to_string(c));
    cols.push_back("sp_area_frac");
    return cols;
}

void append_quality(const FeatureContext& ctx, const RegionStats& region, std::vector<double>& out) {
    const int n = ctx.n_classes();
    if (region.area == 0) {
        out.insert(out.end(), quality_dim(n), 0.0);
        return;
    }
    std::int64_t total = 0;
    for (const auto m : region.class_mass) total += m;
    for (int c = 0; c < n; ++c) {
        out.push_back(total == 0 ? 0.0 : static_cast<double>(region.class_mass[c]) / static_cast<double>(total));
    }
    out.push_back(central_moment(region.area, region.sum_col, region.sum_col, region.sum_col2));
    out.push_back(central_moment(region.area, region.sum_row, region.sum_row, region.sum_row2));
    out.push_back(central_moment(region.area, region.sum_row, region.sum_col, region.sum_rowcol));
    const double frac = static_cast<double>(region.area) / static_cast<double>(ctx.scene().grid().pixel_count());
    out.push_back(frac);
    out.push_back(std::sqrt(frac));
}

double color_similarity(const RegionStats& a, const RegionStats& b) {
    std::int64_t ta = 0;
    std::int64_t tb = 0;
    for (int k = 0; k < kColorBins; ++k) {
        ta += a.color[k];
        tb += b.color[k];
    }
    if (ta == 0 || tb == 0) return 1.0;
    // Σ min(a_k / ta, b_k / tb), accumulated exactly over the common
    // denominator ta * tb.
    Int128 sum = 0;
    for (int k = 0; k < kColorBins; ++k) {
        sum += std::min(static_cast<Int128>(a.color[k]) * tb, static_cast<Int128>(b.color[k]) * ta);
    }
    return static_cast<double>(sum) / (static_cast<double>(ta) * static_cast<double>(tb));
}

double region_fill(const RegionStats& region) {
    if (region.area == 0 || region.bbox.empty()) return 0.0;
    return static_cast<double>(region.area) / static_cast<double>(region.bbox.area());
}

std::array<double, kSpatialRelations> spatial_relation_row(const FeatureContext& ctx, const Chunk& subject,
                                                           const RegionStats& subject_stats,
                                                           const Chunk& reference,
                                                           const RegionStats& reference_stats) {
    std::array<double, kSpatialRelations> row{};
    if (subject_stats.area == 0 || reference_stats.area == 0) return row;
    const double drow = subject_stats.centroid_row() - reference_stats.centroid_row();
    const double dcol = subject_stats.centroid_col() - reference_stats.centroid_col();
    if (chunk_overlap(subject, reference, ctx.scene()).num() > 0) {
        row[static_cast<int>(SpatialRelation::Overlapping)] = 1.0;
    }
    if (drow != 0.0 || dcol != 0.0) {
        if (std::abs(drow) >= std::abs(dcol)) {
            row[static_cast<int>(drow < 0 ? SpatialRelation::Above : SpatialRelation::Below)] = 1.0;
        } else {
            row[static_cast<int>(dcol < 0 ? SpatialRelation::Left : SpatialRelation::Right)] = 1.0;
        }
    }
    const bool near = std::hypot(drow, dcol) <= kNearFraction * ctx.diagonal();
    row[static_cast<int>(near ? SpatialRelation::Near : SpatialRelation::Far)] = 1.0;
    double total = 0.0;
    for (const double v : row) total += v;
    for (double& v : row) v /= total;
    return row;
}

void phi_into(const FeatureContext& ctx, const Chunk& c, const RegionStats& c_stats,
              std::span<const Chunk> list, std::span<const RegionStats> list_stats, std::vector<double>& out) {
    out.clear();
    append_quality(ctx, c_stats, out);
    double max_iou = 0.0;
    double sum_iou = 0.0;
    std::array<double, kSpatialRelations> relations{};
    for (std::size_t i = 0; i < list.size(); ++i) {
        const double v = chunk_overlap(c, list[i], ctx.scene()).to_double();
        max_iou = std::max(max_iou, v);
        sum_iou += v;
        const auto row = spatial_relation_row(ctx, c, c_stats, list[i], list_stats[i]);
        for (int k = 0; k < kSpatialRelations; ++k) relations[k] += row[k];
    }
    const double n = static_cast<double>(list.size());
    out.push_back(max_iou);
    out.push_back(list.empty() ? 0.0 : sum_iou / n);
    for (const double v : relations) out.push_back(list.empty() ? 0.0 : v / n);
    out.push_back(n);
}

std::vector<double> phi(const FeatureContext& ctx, const Chunk& c, std::span<const Chunk> list) {
    std::vector<RegionStats> list_stats;
    list_stats.reserve(list.size());
    for (const auto& l : list) list_stats.push_back(ctx.chunk_stats(l));
    std::vector<double> out;
    out.reserve(phi_dim(ctx.n_classes()));
    phi_into(ctx, c, ctx.chunk_stats(c), list, list_stats, out);
    return out;
}

void theta_into(const FeatureContext& ctx, SuperpixelId s, const RegionStats& c_stats, std::vector<double>& out) {
    out.clear();
    const auto& s_stats = ctx.superpixel_stats(s);
    RegionStats grown = c_stats;
    grown.add(s_stats);
    append_quality(ctx, grown, out);
    out.push_back(color_similarity(s_stats, c_stats));
    out.push_back(region_fill(grown));
    for (const double v : ctx.channel().class_scores(s)) out.push_back(v);
    out.push_back(static_cast<double>(s_stats.area) / static_cast<double>(ctx.scene().grid().pixel_count()));
}

std::vector<double> theta(const FeatureContext& ctx, SuperpixelId s, const Chunk& c) {
    if (c.contains(s)) {
        throw std::invalid_argument("theta: superpixel " + std::to_string(s) + " already in chunk");
    }
    std::vector<double> out;
    out.reserve(theta_dim(ctx.n_classes()));
    theta_into(ctx, s, ctx.chunk_stats(c), out);
    return out;
}

}  // namespace vchunk
