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

#include "vchunk/scene_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace vchunk {

namespace {

class LineReader {
public:
    explicit LineReader(std::string_view text) : text_(text) {}

    bool next(std::string_view& line) {
        if (pos_ >= text_.size()) return false;
        const auto end = text_.find('\n', pos_);
        if (end == std::string_view::npos) {
            line = text_.substr(pos_);
            pos_ = text_.size();
        } else {
            line = text_.substr(pos_, end - pos_);
            pos_ = end + 1;
        }
        ++line_no_;
        return true;
    }
    int line_no() const { return line_no_; }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    int line_no_ = 0;
};

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (start <= line.size()) {
        const auto end = line.find(sep, start);
        if (end == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, end - start));
        start = end + 1;
    }
    return out;
}

template <typename Int>
Int parse_int(std::string_view token, int line_no) {
    Int value{};
    const auto* first = token.data();
    const auto* last = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || token.empty()) {
        throw SceneError("line " + std::to_string(line_no) + ": bad integer '" + std::string(token) + "'");
    }
    return value;
}

}  // namespace

std::vector<std::pair<std::int32_t, std::int32_t>> encode_runs(const std::vector<std::int32_t>& pixels) {
    std::vector<std::pair<std::int32_t, std::int32_t>> runs;
    for (const auto p : pixels) {
        if (!runs.empty() && runs.back().first + runs.back().second == p) {
            ++runs.back().second;
        } else {
            runs.emplace_back(p, 1);
        }
    }
    return runs;
}

std::vector<std::int32_t> decode_runs(const std::vector<std::pair<std::int32_t, std::int32_t>>& runs) {
    std::vector<std::int32_t> pixels;
    for (const auto& [start, len] : runs) {
        for (std::int32_t i = 0; i < len; ++i) pixels.push_back(start + i);
    }
    return pixels;
}

std::string write_scene(const Scene& scene) {
    std::string out;
    out.reserve(static_cast<std::size_t>(scene.grid().pixel_count()) * 4 + 64);
    out += "scene " + std::to_string(scene.width()) + ' ' + std::to_string(scene.height()) + ' ' +
           std::to_string(scene.n_superpixels()) + ' ' + std::to_string(scene.n_instances()) + '\n';
    for (int row = 0; row < scene.height(); ++row) {
        for (int col = 0; col < scene.width(); ++col) {
            if (col) out += ' ';
            out += std::to_string(scene.grid().at(row, col));
        }
        out += '\n';
    }
    for (const auto& g : scene.instances()) {
        out += "instance " + std::to_string(g.id) + ' ' + std::to_string(g.class_label);
        for (const auto& [start, len] : encode_runs(g.mask)) {
            out += ' ' + std::to_string(start) + ',' + std::to_string(len);
        }
        out += '\n';
    }
    return out;
}

Scene read_scene(std::string_view text) {
    LineReader reader(text);
    std::string_view line;
    if (!reader.next(line)) throw SceneError("empty scene file");
    const auto header = split(line, ' ');
    if (header.size() != 5 || header[0] != "scene") {
        throw SceneError("line 1: expected 'scene <width> <height> <n_superpixels> <n_instances>'");
    }
    PixelGrid grid;
    grid.width = parse_int<int>(header[1], 1);
    grid.height = parse_int<int>(header[2], 1);
    grid.n_superpixels = parse_int<int>(header[3], 1);
    const int n_instances = parse_int<int>(header[4], 1);
    if (grid.width <= 0 || grid.height <= 0 || n_instances < 0) {
        throw SceneError("line 1: dimensions must be positive");
    }
    grid.labels.reserve(static_cast<std::size_t>(grid.pixel_count()));
    for (int row = 0; row < grid.height; ++row) {
        if (!reader.next(line)) throw SceneError("truncated grid at row " + std::to_string(row));
        const auto tokens = split(line, ' ');
        if (static_cast<int>(tokens.size()) != grid.width) {
            throw SceneError("line " + std::to_string(reader.line_no()) + ": expected " +
                             std::to_string(grid.width) + " ids");
        }
        for (const auto tok : tokens) grid.labels.push_back(parse_int<SuperpixelId>(tok, reader.line_no()));
    }
    std::vector<GroundTruthInstance> instances;
    for (int k = 0; k < n_instances; ++k) {
        if (!reader.next(line)) throw SceneError("missing instance line " + std::to_string(k));
        const auto tokens = split(line, ' ');
        if (tokens.size() < 3 || tokens[0] != "instance") {
            throw SceneError("line " + std::to_string(reader.line_no()) + ": expected 'instance <id> <class> runs...'");
        }
        GroundTruthInstance g;
        g.id = parse_int<InstanceId>(tokens[1], reader.line_no());
        g.class_label = parse_int<int>(tokens[2], reader.line_no());
        std::vector<std::pair<std::int32_t, std::int32_t>> runs;
        for (std::size_t t = 3; t < tokens.size(); ++t) {
            const auto parts = split(tokens[t], ',');
            if (parts.size() != 2) {
                throw SceneError("line " + std::to_string(reader.line_no()) + ": bad run '" + std::string(tokens[t]) + "'");
            }
            const auto start = parse_int<std::int32_t>(parts[0], reader.line_no());
            const auto len = parse_int<std::int32_t>(parts[1], reader.line_no());
            if (len <= 0) throw SceneError("line " + std::to_string(reader.line_no()) + ": run length must be positive");
            runs.emplace_back(start, len);
        }
        g.mask = decode_runs(runs);
        instances.push_back(std::move(g));
    }
    while (reader.next(line)) {
        if (!line.empty()) throw SceneError("line " + std::to_string(reader.line_no()) + ": trailing content");
    }
    return Scene::build(std::move(grid), std::move(instances));
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

void save_scene(const Scene& scene, const std::filesystem::path& path) {
    write_text_file(path, write_scene(scene));
}

Scene load_scene(const std::filesystem::path& path) { return read_scene(read_text_file(path)); }

}  // namespace vchunk
