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

#ifndef VCHUNK_BASELINES_HPP
#define VCHUNK_BASELINES_HPP

#include <span>
#include <vector>

#include "vchunk/channel.hpp"
#include "vchunk/scene.hpp"

namespace vchunk {

/// Superpixel pairs sharing a 4-adjacent pixel boundary, as sorted
/// neighbour lists.
std::vector<std::vector<SuperpixelId>> superpixel_adjacency(const Scene& scene);

/// Connected components of superpixels whose argmax class is target_class,
/// largest area first (smallest member id on ties).
std::vector<Chunk> baseline_cc(const Scene& scene, const SemanticChannel& channel, int target_class);

/// Pixels of superpixel s inside the box.
std::int64_t pixels_inside(const Scene& scene, SuperpixelId s, const BoundingBox& box);

/// One chunk per box: superpixels with more than half their area inside it.
/// Boxes that capture no superpixel are dropped.
std::vector<Chunk> baseline_boxes(const Scene& scene, std::span<const BoundingBox> boxes);

/// Per box, the target-class superpixels with more than half their area
/// inside it. Empty chunks are dropped.
std::vector<Chunk> baseline_intersection(const Scene& scene, const SemanticChannel& channel,
                                         std::span<const BoundingBox> boxes, int target_class);

}  // namespace vchunk

#endif  // VCHUNK_BASELINES_HPP
