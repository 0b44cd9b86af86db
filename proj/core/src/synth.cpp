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

#include "vchunk/synth.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "vchunk/parallel.hpp"
#include "vchunk/scene_io.hpp"

namespace vchunk {
namespace {

struct PlacementError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool ok, const char* field, const std::string& why) {
    if (!ok) throw std::invalid_argument(std::string("synth config: ") + field + " " + why);
}

std::uint8_t to_byte(double v) {
    v = std::clamp(v, 0.0, 1.0);
    return static_cast<std::uint8_t>(std::lround(v * 255.0));
}

struct Shape {
    double center_row = 0.0;
    double center_col = 0.0;
    double half_rows = 0.0;
    double half_cols = 0.0;
};

bool inside(const Shape& shape, ShapeFamily family, int row, int col) {
    const double dr = (row - shape.center_row) / shape.half_rows;
    const double dc = (col - shape.center_col) / shape.half_cols;
    if (family == ShapeFamily::Rectangles) return std::abs(dr) <= 1.0 && std::abs(dc) <= 1.0;
    return dr * dr + dc * dc <= 1.0;
}

std::vector<GroundTruthInstance> place_instances(const SynthConfig& config, CounterRng rng) {
    const int w = config.width;
    const int h = config.height;
    std::vector<InstanceId> owner(static_cast<std::size_t>(w) * h, kDummyInstance);
    std::vector<GroundTruthInstance> instances;
    std::vector<Shape> shapes;
    const int n = static_cast<int>(rng.uniform_int(config.min_instances, config.max_instances));
    for (int k = 0; k < n; ++k) {
        const bool adjacent = k > 0 && rng.bernoulli(config.adjacency);
        bool placed = false;
        for (int attempt = 0; attempt < config.max_attempts && !placed; ++attempt) {
            Shape shape;
            shape.half_cols = rng.uniform(config.min_extent, config.max_extent) * w;
            shape.half_rows = rng.uniform(config.min_extent, config.max_extent) * h;
            if (adjacent) {
                const Shape& prev = shapes.back();
                const double dist = 0.9 * (prev.half_cols + shape.half_cols);
                double side = rng.bernoulli(0.5) ? 1.0 : -1.0;
                shape.center_row = prev.center_row + rng.uniform(-0.3, 0.3) * prev.half_rows;
                shape.center_col = prev.center_col + side * dist;
                if (shape.center_col - shape.half_cols < 0 || shape.center_col + shape.half_cols > w - 1) {
                    side = -side;
                    shape.center_col = prev.center_col + side * dist;
                }
                if (shape.center_col - shape.half_cols < 0 || shape.center_col + shape.half_cols > w - 1) continue;
            } else {
                const double lo_r = shape.half_rows;
                const double hi_r = std::max(lo_r, h - 1 - shape.half_rows);
                const double lo_c = shape.half_cols;
                const double hi_c = std::max(lo_c, w - 1 - shape.half_cols);
                shape.center_row = rng.uniform(lo_r, hi_r);
                shape.center_col = rng.uniform(lo_c, hi_c);
            }
            std::vector<std::int32_t> mask;
            const int r0 = std::max(0, static_cast<int>(std::floor(shape.center_row - shape.half_rows)));
            const int r1 = std::min(h - 1, static_cast<int>(std::ceil(shape.center_row + shape.half_rows)));
            const int c0 = std::max(0, static_cast<int>(std::floor(shape.center_col - shape.half_cols)));
            const int c1 = std::min(w - 1, static_cast<int>(std::ceil(shape.center_col + shape.half_cols)));
            for (int r = r0; r <= r1; ++r) {
                for (int c = c0; c <= c1; ++c) {
                    const auto p = static_cast<std::int32_t>(r * w + c);
                    if (owner[p] == kDummyInstance && inside(shape, config.shape, r, c)) mask.push_back(p);
                }
            }
            if (static_cast<int>(mask.size()) < config.min_instance_area) continue;
            if (adjacent) {
                const InstanceId prev = k - 1;
                bool touches = false;
                for (const auto p : mask) {
                    const int r = p / w;
                    const int c = p % w;
                    if ((c > 0 && owner[p - 1] == prev) || (c + 1 < w && owner[p + 1] == prev) ||
                        (r > 0 && owner[p - w] == prev) || (r + 1 < h && owner[p + w] == prev)) {
                        touches = true;
                        break;
                    }
                }
                if (!touches) continue;
            }
            GroundTruthInstance g;
            g.id = k;
            g.class_label = config.target_class;
            g.area = static_cast<std::int64_t>(mask.size());
            for (const auto p : mask) owner[p] = k;
            g.mask = std::move(mask);
            instances.push_back(std::move(g));
            shapes.push_back(shape);
            placed = true;
        }
        if (!placed) throw PlacementError("instance " + std::to_string(k) + " could not be placed");
    }
    return instances;
}

}  // namespace

void SynthConfig::validate() const {
    require(width > 0, "width", "must be positive");
    require(height > 0, "height", "must be positive");
    require(n_superpixels > 0 && static_cast<std::int64_t>(n_superpixels) <= static_cast<std::int64_t>(width) * height,
            "n_superpixels", "must lie in [1, width * height]");
    require(min_instances >= 0, "min_instances", "must be non-negative");
    require(max_instances >= min_instances, "max_instances", "must be >= min_instances");
    require(min_extent > 0 && min_extent <= max_extent && max_extent <= 0.5, "min_extent/max_extent",
            "must satisfy 0 < min <= max <= 0.5");
    require(adjacency >= 0 && adjacency <= 1, "adjacency", "must lie in [0, 1]");
    require(n_classes >= 2, "n_classes", "must be at least 2");
    require(target_class > 0 && target_class < n_classes, "target_class", "must lie in [1, n_classes)");
    require(concentration >= 0, "concentration", "must be non-negative");
    require(color_noise >= 0, "color_noise", "must be non-negative");
    require(box_jitter >= 0, "box_jitter", "must be non-negative");
    require(drop_probability >= 0 && drop_probability <= 1, "drop_probability", "must lie in [0, 1]");
    require(duplicate_probability >= 0 && duplicate_probability <= 1, "duplicate_probability", "must lie in [0, 1]");
    require(min_instance_area >= 1, "min_instance_area", "must be positive");
    require(max_attempts >= 1, "max_attempts", "must be positive");
}

std::string to_string(ShapeFamily shape) { return shape == ShapeFamily::Rectangles ? "rectangles" : "ellipses"; }

ShapeFamily parse_shape(const std::string& text) {
    if (text == "rectangles") return ShapeFamily::Rectangles;
    if (text == "ellipses") return ShapeFamily::Ellipses;
    throw std::invalid_argument("unknown shape family '" + text + "' (expected rectangles or ellipses)");
}

std::string scene_name(int index) {
    char name[32];
    std::snprintf(name, sizeof(name), "scene_%05d", index);
    return name;
}

std::uint64_t scene_seed(const SynthConfig& config, int index) {
    return CounterRng(config.seed).child("scene").child(static_cast<std::uint64_t>(index)).key();
}

PixelGrid voronoi_grid(int width, int height, int n_sites, CounterRng rng) {
    const std::int64_t n_pixels = static_cast<std::int64_t>(width) * height;
    if (n_sites <= 0 || n_sites > n_pixels) throw std::invalid_argument("voronoi_grid: bad site count");
    std::vector<std::int32_t> sites;
    std::unordered_set<std::int64_t> taken;
    while (static_cast<int>(sites.size()) < n_sites) {
        const auto p = rng.uniform_int(0, n_pixels - 1);
        if (taken.insert(p).second) sites.push_back(static_cast<std::int32_t>(p));
    }
    PixelGrid grid;
    grid.width = width;
    grid.height = height;
    grid.n_superpixels = n_sites;
    grid.labels.assign(static_cast<std::size_t>(n_pixels), 0);
    std::vector<int> site_row(n_sites);
    std::vector<int> site_col(n_sites);
    for (int i = 0; i < n_sites; ++i) {
        site_row[i] = sites[i] / width;
        site_col[i] = sites[i] % width;
    }
    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
            std::int64_t best = -1;
            int best_site = 0;
            for (int i = 0; i < n_sites; ++i) {
                const std::int64_t dr = r - site_row[i];
                const std::int64_t dc = c - site_col[i];
                const std::int64_t d = dr * dr + dc * dc;
                if (best < 0 || d < best) {
                    best = d;
                    best_site = i;
                }
            }
            grid.labels[static_cast<std::size_t>(r) * width + c] = best_site;
        }
    }
    return grid;
}

int majority_class(const Scene& scene, SuperpixelId s, int target_class) {
    std::int64_t in = 0;
    for (InstanceId g = 0; g < scene.n_instances(); ++g) in += scene.intersection(s, g);
    return 2 * in >= scene.superpixel(s).area ? target_class : 0;
}

SceneBundle generate_scene(const SynthConfig& config, int index, int* regenerations) {
    config.validate();
    const CounterRng base(scene_seed(config, index));
    for (int attempt = 0;; ++attempt) {
        const CounterRng rng = base.child(static_cast<std::uint64_t>(attempt));
        std::vector<GroundTruthInstance> instances;
        try {
            instances = place_instances(config, rng.child("instances"));
        } catch (const PlacementError&) {
            if (attempt + 1 >= 1000) throw std::runtime_error("generate_scene: placement keeps failing");
            continue;
        }
        if (regenerations) *regenerations = attempt;
        SceneBundle bundle;
        bundle.id = scene_name(index);
        bundle.scene = Scene::build(voronoi_grid(config.width, config.height, config.n_superpixels, rng.child("voronoi")),
                                    std::move(instances));
        const Scene& scene = bundle.scene;
        SemanticChannel& ch = bundle.channel;
        ch.n_classes = config.n_classes;
        ch.scores.assign(static_cast<std::size_t>(scene.n_superpixels()) * config.n_classes, 0.0);
        const CounterRng semantic = rng.child("semantic");
        for (SuperpixelId s = 0; s < scene.n_superpixels(); ++s) {
            const int truth = majority_class(scene, s, config.target_class);
            CounterRng draw = semantic.child(static_cast<std::uint64_t>(s));
            double total = 0.0;
            std::vector<double> g(config.n_classes);
            for (int j = 0; j < config.n_classes; ++j) {
                g[j] = draw.gamma(1.0 + (j == truth ? config.concentration : 0.0));
                total += g[j];
            }
            for (int j = 0; j < config.n_classes; ++j) ch.scores[static_cast<std::size_t>(s) * config.n_classes + j] = g[j] / total;
        }
        std::vector<std::array<double, 3>> instance_color(scene.n_instances());
        const CounterRng palette = rng.child("color");
        for (InstanceId g = 0; g < scene.n_instances(); ++g) {
            CounterRng draw = palette.child(static_cast<std::uint64_t>(g));
            for (auto& v : instance_color[g]) v = draw.uniform();
        }
        std::vector<std::array<double, 3>> background(scene.n_superpixels());
        const CounterRng bg = rng.child("background");
        for (SuperpixelId s = 0; s < scene.n_superpixels(); ++s) {
            CounterRng draw = bg.child(static_cast<std::uint64_t>(s));
            for (auto& v : background[s]) v = draw.uniform();
        }
        CounterRng noise = rng.child("noise");
        ch.colors.resize(static_cast<std::size_t>(scene.grid().pixel_count()));
        for (std::int32_t p = 0; p < static_cast<std::int32_t>(ch.colors.size()); ++p) {
            const InstanceId g = scene.owner(p);
            const auto& base_color = g == kDummyInstance ? background[scene.grid().labels[p]] : instance_color[g];
            for (int k = 0; k < 3; ++k) ch.colors[p][k] = to_byte(base_color[k] + config.color_noise * noise.normal());
        }
        return bundle;
    }
}

std::vector<BoundingBox> synthetic_detections(const Scene& scene, const SynthConfig& config, int index) {
    CounterRng rng = CounterRng(scene_seed(config, index)).child("detector");
    std::vector<BoundingBox> boxes;
    auto jittered = [&](const BoundingBox& box) -> std::optional<BoundingBox> {
        const int dr = static_cast<int>(std::lround(rng.normal() * config.box_jitter * scene.height()));
        const int dc = static_cast<int>(std::lround(rng.normal() * config.box_jitter * scene.width()));
        BoundingBox out;
        out.row_min = std::max(0, box.row_min + dr);
        out.row_max = std::min(scene.height() - 1, box.row_max + dr);
        out.col_min = std::max(0, box.col_min + dc);
        out.col_max = std::min(scene.width() - 1, box.col_max + dc);
        if (out.empty()) return std::nullopt;
        return out;
    };
    for (const auto& g : scene.instances()) {
        BoundingBox box;
        for (const auto p : g.mask) box.include(p / scene.width(), p % scene.width());
        if (rng.bernoulli(config.drop_probability)) continue;
        if (auto b = jittered(box)) boxes.push_back(*b);
        if (rng.bernoulli(config.duplicate_probability)) {
            if (auto b = jittered(box)) boxes.push_back(*b);
        }
    }
    return boxes;
}

double semantic_accuracy(const Scene& scene, const SemanticChannel& channel, int target_class) {
    if (scene.n_superpixels() == 0) return 1.0;
    int hits = 0;
    for (SuperpixelId s = 0; s < scene.n_superpixels(); ++s) {
        if (channel.argmax_class(s) == majority_class(scene, s, target_class)) ++hits;
    }
    return static_cast<double>(hits) / scene.n_superpixels();
}

bool instances_touch(const Scene& scene, InstanceId a, InstanceId b) {
    const int w = scene.width();
    const int h = scene.height();
    for (const auto p : scene.instance(a).mask) {
        const int r = p / w;
        const int c = p % w;
        if ((c > 0 && scene.owner(p - 1) == b) || (c + 1 < w && scene.owner(p + 1) == b) ||
            (r > 0 && scene.owner(p - w) == b) || (r + 1 < h && scene.owner(p + w) == b)) {
            return true;
        }
    }
    return false;
}

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256 digest failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += kHex[digest[i] >> 4];
        out += kHex[digest[i] & 15];
    }
    return out;
}

std::vector<ManifestEntry> generate_dataset(const SynthConfig& config, int first, int count,
                                            const std::filesystem::path& dir, unsigned threads) {
    config.validate();
    std::filesystem::create_directories(dir);
    std::vector<ManifestEntry> entries(static_cast<std::size_t>(std::max(0, count)));
    parallel_for(
        entries.size(),
        [&](std::size_t i) {
            const int index = first + static_cast<int>(i);
            const auto bundle = generate_scene(config, index);
            const std::string name = scene_name(index);
            const std::string scene_text = write_scene(bundle.scene);
            write_text_file(dir / (name + ".scene"), scene_text);
            save_channel(bundle.channel, bundle.scene.width(), bundle.scene.height(), dir / (name + ".channel"));
            entries[i] = {index, scene_seed(config, index), name + ".scene", sha256_hex(scene_text)};
        },
        threads);
    return entries;
}

std::string write_manifest(const std::vector<ManifestEntry>& entries) {
    std::string out;
    for (const auto& e : entries) {
        out += std::to_string(e.index) + ' ' + std::to_string(e.seed) + ' ' + e.path + ' ' + e.sha256 + '\n';
    }
    return out;
}

std::vector<ManifestEntry> read_manifest(std::string_view text) {
    std::vector<ManifestEntry> out;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream fields(line);
        ManifestEntry e;
        std::string extra;
        if (!(fields >> e.index >> e.seed >> e.path >> e.sha256) || (fields >> extra)) {
            throw std::invalid_argument("manifest line " + std::to_string(line_no) +
                                        ": expected 'scene_index seed file_path sha256'");
        }
        out.push_back(std::move(e));
    }
    return out;
}

Scene random_small_scene(CounterRng rng, int width, int height, int n_superpixels, int n_instances) {
    PixelGrid grid = voronoi_grid(width, height, n_superpixels, rng.child("voronoi"));
    CounterRng draw = rng.child("instances");
    std::vector<InstanceId> owner(static_cast<std::size_t>(width) * height, kDummyInstance);
    std::vector<GroundTruthInstance> instances;
    for (int k = 0; k < n_instances; ++k) {
        for (int attempt = 0; attempt < 20; ++attempt) {
            const int cr = static_cast<int>(draw.uniform_int(0, height - 1));
            const int cc = static_cast<int>(draw.uniform_int(0, width - 1));
            const double rr = draw.uniform(0.5, std::max(1.0, height / 2.5));
            const double rc = draw.uniform(0.5, std::max(1.0, width / 2.5));
            std::vector<std::int32_t> mask;
            for (int r = 0; r < height; ++r) {
                for (int c = 0; c < width; ++c) {
                    const double dr = (r - cr) / rr;
                    const double dc = (c - cc) / rc;
                    const auto p = static_cast<std::int32_t>(r * width + c);
                    if (dr * dr + dc * dc <= 1.0 && owner[p] == kDummyInstance) mask.push_back(p);
                }
            }
            if (mask.empty()) continue;
            GroundTruthInstance g;
            g.id = static_cast<InstanceId>(instances.size());
            g.class_label = 1;
            g.area = static_cast<std::int64_t>(mask.size());
            for (const auto p : mask) owner[p] = g.id;
            g.mask = std::move(mask);
            instances.push_back(std::move(g));
            break;
        }
    }
    return Scene::build(std::move(grid), std::move(instances));
}

std::vector<Chunk> random_chunks(const Scene& scene, std::size_t count, CounterRng rng) {
    std::vector<Chunk> out;
    out.reserve(count);
    const int n = scene.n_superpixels();
    std::vector<SuperpixelId> ids(n);
    for (std::size_t i = 0; i < count; ++i) {
        std::iota(ids.begin(), ids.end(), SuperpixelId{0});
        const int size = static_cast<int>(rng.uniform_int(1, std::max(1, n)));
        for (int j = 0; j < size; ++j) std::swap(ids[j], ids[static_cast<std::size_t>(rng.uniform_int(j, n - 1))]);
        out.push_back(Chunk::from_ids(scene, std::span<const SuperpixelId>(ids.data(), size)));
    }
    return out;
}

}  // namespace vchunk
