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

#ifndef VCHUNK_SYNTH_HPP
#define VCHUNK_SYNTH_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "vchunk/channel.hpp"
#include "vchunk/rng.hpp"
#include "vchunk/scene.hpp"

namespace vchunk {

enum class ShapeFamily { Rectangles, Ellipses };

struct SynthConfig {
    int width = 160;
    int height = 120;
    int n_superpixels = 300;
    int min_instances = 2;
    int max_instances = 4;
    ShapeFamily shape = ShapeFamily::Ellipses;
    /// Instance half-extent as a fraction of the image side.
    double min_extent = 0.08;
    double max_extent = 0.18;
    /// Probability that an instance is placed touching the previous one.
    double adjacency = 1.0;
    int n_classes = 2;
    int target_class = 1;
    /// Dirichlet concentration added to the true class.
    double concentration = 10.0;
    /// Standard deviation of per-pixel colour noise, in [0, 1] units.
    double color_noise = 0.08;
    /// Synthetic detector: centre jitter as a fraction of the image side,
    /// drop and duplicate probabilities.
    double box_jitter = 0.05;
    double drop_probability = 0.1;
    double duplicate_probability = 0.05;
    int min_instance_area = 24;
    int max_attempts = 50;
    std::uint64_t seed = 1;

    /// Throws std::invalid_argument naming the first bad field.
    void validate() const;
};

std::string to_string(ShapeFamily shape);
ShapeFamily parse_shape(const std::string& text);

/// `scene_%05d`, used for file names and scene ids.
std::string scene_name(int index);

/// Key of the stream behind scene `index`.
std::uint64_t scene_seed(const SynthConfig& config, int index);

/// Seeded-Voronoi tessellation with instances and a noisy semantic channel.
/// Deterministic in (config, index). If an instance cannot be placed within
/// max_attempts, the scene is redrawn from a sub-seed; `regenerations`
/// reports how many times that happened.
SceneBundle generate_scene(const SynthConfig& config, int index, int* regenerations = nullptr);

/// Voronoi partition of a width x height grid from distinct random sites.
/// Pixels go to the nearest site (squared distance), lowest site index on
/// ties.
PixelGrid voronoi_grid(int width, int height, int n_sites, CounterRng rng);

/// Jittered ground-truth boxes: each instance's box is dropped with
/// drop_probability, otherwise shifted by N(0, box_jitter * side) and
/// clipped; with duplicate_probability a second jittered copy follows.
std::vector<BoundingBox> synthetic_detections(const Scene& scene, const SynthConfig& config, int index);

/// Fraction of superpixels whose argmax class equals their majority true
/// class (background counts as class 0).
double semantic_accuracy(const Scene& scene, const SemanticChannel& channel, int target_class);

/// Majority true class of a superpixel: target_class if at least half its
/// pixels lie in instances, else 0.
int majority_class(const Scene& scene, SuperpixelId s, int target_class);

/// Whether two instances have 4-adjacent pixels.
bool instances_touch(const Scene& scene, InstanceId a, InstanceId b);

struct ManifestEntry {
    int index = 0;
    std::uint64_t seed = 0;
    std::string path;
    std::string sha256;
};

std::string sha256_hex(std::string_view data);

/// Writes scene_<index>.scene and scene_<index>.channel for indices
/// [first, first + count) into dir and returns the manifest entries.
std::vector<ManifestEntry> generate_dataset(const SynthConfig& config, int first, int count,
                                            const std::filesystem::path& dir, unsigned threads = 0);

/// `scene_index seed file_path sha256` lines.
std::string write_manifest(const std::vector<ManifestEntry>& entries);
std::vector<ManifestEntry> read_manifest(std::string_view text);

/// Small random scene for property suites: a Voronoi grid with n_superpixels
/// cells and up to n_instances random disjoint blob instances.
Scene random_small_scene(CounterRng rng, int width, int height, int n_superpixels, int n_instances);

/// count random non-empty chunks drawn from the scene's superpixels.
std::vector<Chunk> random_chunks(const Scene& scene, std::size_t count, CounterRng rng);

}  // namespace vchunk

#endif  // VCHUNK_SYNTH_HPP
