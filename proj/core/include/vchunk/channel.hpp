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

#ifndef VCHUNK_CHANNEL_HPP
#define VCHUNK_CHANNEL_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vchunk/scene.hpp"

namespace vchunk {

/// Stand-in for a scene parser's output: a class-score simplex per
/// superpixel plus an RGB colour per pixel (8-bit, i.e. k/255 in [0,1]).
struct SemanticChannel {
    int n_classes = 0;
    std::vector<double> scores;                       // n_superpixels x n_classes
    std::vector<std::array<std::uint8_t, 3>> colors;  // one per pixel, row-major

    int n_superpixels() const { return n_classes == 0 ? 0 : static_cast<int>(scores.size()) / n_classes; }
    std::span<const double> class_scores(SuperpixelId s) const {
        return std::span<const double>(scores).subspan(static_cast<std::size_t>(s) * n_classes, n_classes);
    }
    /// Highest-scoring class (smallest index on ties).
    int argmax_class(SuperpixelId s) const;

    /// Throws std::invalid_argument if shapes disagree with the scene or a
    /// score vector is off the simplex by more than 1e-9.
    void validate(const Scene& scene) const;
};

/// A scene together with its semantic channel and a stable identifier.
struct SceneBundle {
    std::string id;
    Scene scene;
    SemanticChannel channel;
};

// Channel text format:
//
//   channel <n_superpixels> <n_classes> <width> <height>
//   <n_superpixels lines of n_classes shortest-round-trip doubles>
//   <height lines of width RRGGBB hex tokens>

std::string write_channel(const SemanticChannel& channel, int width, int height);
SemanticChannel read_channel(std::string_view text);

void save_channel(const SemanticChannel& channel, int width, int height, const std::filesystem::path& path);
SemanticChannel load_channel(const std::filesystem::path& path);

}  // namespace vchunk

#endif  // VCHUNK_CHANNEL_HPP
