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

#ifndef VCHUNK_TESTS_ORACLES_HPP
#define VCHUNK_TESTS_ORACLES_HPP

// Reference computations that only look at raw pixels and plain
// enumeration. Nothing here uses the library's cached counts, matching or
// greedy code.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <set>
#include <vector>

#include "vchunk/rational.hpp"
#include "vchunk/scene.hpp"

namespace oracle {

using vchunk::Rational;

inline Rational ratio(std::int64_t num, std::int64_t den) {
    if (den == 0) return Rational(0);
    Rational q(static_cast<long>(num), static_cast<unsigned long>(den));
    q.canonicalize();
    return q;
}

// IoU of the union of `ids` with instance g, by scanning every pixel.
inline Rational pixel_iou(const vchunk::Scene& scene, const std::vector<vchunk::SuperpixelId>& ids, int g) {
    const std::set<vchunk::SuperpixelId> members(ids.begin(), ids.end());
    const auto& mask = scene.instance(g).mask;
    const std::set<std::int32_t> inside(mask.begin(), mask.end());
    const auto& grid = scene.grid();
    std::int64_t inter = 0, uni = 0;
    for (std::int32_t p = 0; p < static_cast<std::int32_t>(grid.labels.size()); ++p) {
        const bool in_c = members.count(grid.labels[p]) > 0;
        const bool in_g = inside.count(p) > 0;
        inter += in_c && in_g;
        uni += in_c || in_g;
    }
    return ratio(inter, uni);
}

// Per superpixel (area, |s ∩ g|) counted from the raw grid and mask.
struct Counts {
    std::vector<std::int64_t> area;
    std::vector<std::int64_t> inter;
    std::int64_t g_area = 0;
};

inline Counts raw_counts(const vchunk::Scene& scene, int g) {
    const auto& grid = scene.grid();
    Counts out;
    out.area.assign(grid.n_superpixels, 0);
    out.inter.assign(grid.n_superpixels, 0);
    for (const auto label : grid.labels) ++out.area[label];
    for (const auto p : scene.instance(g).mask) ++out.inter[grid.labels[p]];
    out.g_area = static_cast<std::int64_t>(scene.instance(g).mask.size());
    return out;
}

// max IoU over all non-empty superpixel subsets.
inline Rational subset_optimum(const vchunk::Scene& scene, int g) {
    const auto counts = raw_counts(scene, g);
    const int n = static_cast<int>(counts.area.size());
    Rational best(0);
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        std::int64_t area = 0, inter = 0;
        for (int i = 0; i < n; ++i) {
            if (mask >> i & 1u) {
                area += counts.area[i];
                inter += counts.inter[i];
            }
        }
        const Rational v = ratio(inter, area + counts.g_area - inter);
        if (v > best) best = v;
    }
    return best;
}

// Max over permutations of the zero-padded square matrix.
inline Rational permutation_max(const std::vector<std::vector<Rational>>& w) {
    std::size_t n = w.size();
    for (const auto& row : w) n = std::max(n, row.size());
    auto at = [&](std::size_t i, std::size_t j) {
        if (i >= w.size() || j >= w[i].size()) return Rational(0);
        return w[i][j];
    };
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    Rational best(0);
    bool first = true;
    do {
        Rational v(0);
        for (std::size_t i = 0; i < n; ++i) v += at(i, perm[i]);
        if (first || v > best) best = v;
        first = false;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

// Best list value over every subset of exactly min(k, rows) candidates.
inline Rational best_list(const std::vector<std::vector<Rational>>& table, std::size_t k) {
    const std::size_t n = table.size();
    const std::size_t size = std::min(k, n);
    Rational best(0);
    if (size == 0) return best;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (static_cast<std::size_t>(std::popcount(mask)) != size) continue;
        std::vector<std::vector<Rational>> sub;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask >> i & 1u) sub.push_back(table[i]);
        }
        const Rational v = permutation_max(sub);
        if (v > best) best = v;
    }
    return best;
}

}  // namespace oracle

#endif  // VCHUNK_TESTS_ORACLES_HPP
