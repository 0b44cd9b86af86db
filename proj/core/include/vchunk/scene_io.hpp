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

#ifndef VCHUNK_SCENE_IO_HPP
#define VCHUNK_SCENE_IO_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vchunk/scene.hpp"

namespace vchunk {

// Scene text format:
//
//   scene <width> <height> <n_superpixels> <n_instances>
//   <height lines, each with width space-separated superpixel ids>
//   instance <id> <class> <start,len> <start,len> ...
//
// Mask runs are over the row-major pixel index, ascending and maximal.
// write_scene(read_scene(text)) == text for any text write_scene produced.

std::string write_scene(const Scene& scene);
Scene read_scene(std::string_view text);

void save_scene(const Scene& scene, const std::filesystem::path& path);
Scene load_scene(const std::filesystem::path& path);

/// Maximal (start, length) runs of an ascending pixel index list.
std::vector<std::pair<std::int32_t, std::int32_t>> encode_runs(const std::vector<std::int32_t>& pixels);
std::vector<std::int32_t> decode_runs(const std::vector<std::pair<std::int32_t, std::int32_t>>& runs);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace vchunk

#endif  // VCHUNK_SCENE_IO_HPP
