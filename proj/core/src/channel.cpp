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

#include "vchunk/channel.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "vchunk/scene_io.hpp"

namespace vchunk {

int SemanticChannel::argmax_class(SuperpixelId s) const {
    const auto row = class_scores(s);
    int best = 0;
    for (int c = 1; c < n_classes; ++c) {
        if (row[c] > row[best]) best = c;
    }
    return best;
}

void SemanticChannel::validate(const Scene& scene) const {
    if (n_classes <= 0) throw std::invalid_argument("channel: n_classes must be positive");
    if (scores.size() != static_cast<std::size_t>(scene.n_superpixels()) * n_classes) {
        throw std::invalid_argument("channel: score table does not match superpixel count");
    }
    if (colors.size() != static_cast<std::size_t>(scene.grid().pixel_count())) {
        throw std::invalid_argument("channel: colour plane does not match pixel count");
    }
    for (SuperpixelId s = 0; s < scene.n_superpixels(); ++s) {
        double sum = 0.0;
        for (const double v : class_scores(s)) {
            if (!(v >= 0.0)) throw std::invalid_argument("channel: negative class score");
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("channel: scores do not sum to 1");
    }
}

namespace {

constexpr char kHex[] = "0123456789abcdef";

int hex_value(char ch) {
    if (ch >= '0' && ch <= '9') return ch - '0';
    if (ch >= 'a' && ch <= 'f') return ch - 'a' + 10;
    throw std::invalid_argument(std::string("channel: bad hex digit '") + ch + "'");
}

}  // namespace

std::string write_channel(const SemanticChannel& channel, int width, int height) {
    std::string out = "channel " + std::to_string(channel.n_superpixels()) + ' ' +
                      std::to_string(channel.n_classes) + ' ' + std::to_string(width) + ' ' +
                      std::to_string(height) + '\n';
    for (SuperpixelId s = 0; s < channel.n_superpixels(); ++s) {
        const auto row = channel.class_scores(s);
        for (int c = 0; c < channel.n_classes; ++c) {
            if (c) out += ' ';
            out += format_shortest(row[c]);
        }
        out += '\n';
    }
    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
            if (c) out += ' ';
            for (const auto v : channel.colors[static_cast<std::size_t>(r) * width + c]) {
                out += kHex[v >> 4];
                out += kHex[v & 15];
            }
        }
        out += '\n';
    }
    return out;
}

SemanticChannel read_channel(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string tag;
    int n_sp = 0;
    int width = 0;
    int height = 0;
    SemanticChannel channel;
    if (!(in >> tag >> n_sp >> channel.n_classes >> width >> height) || tag != "channel" || n_sp <= 0 ||
        channel.n_classes <= 0 || width <= 0 || height <= 0) {
        throw std::invalid_argument("channel: bad header");
    }
    channel.scores.reserve(static_cast<std::size_t>(n_sp) * channel.n_classes);
    std::string token;
    for (std::size_t i = 0; i < static_cast<std::size_t>(n_sp) * channel.n_classes; ++i) {
        if (!(in >> token)) throw std::invalid_argument("channel: truncated score table");
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
        if (ec != std::errc() || ptr != token.data() + token.size()) {
            throw std::invalid_argument("channel: bad score '" + token + "'");
        }
        channel.scores.push_back(v);
    }
    channel.colors.reserve(static_cast<std::size_t>(width) * height);
    for (std::size_t i = 0; i < static_cast<std::size_t>(width) * height; ++i) {
        if (!(in >> token) || token.size() != 6) throw std::invalid_argument("channel: bad colour token");
        std::array<std::uint8_t, 3> rgb{};
        for (int k = 0; k < 3; ++k) {
            rgb[k] = static_cast<std::uint8_t>(hex_value(token[2 * k]) * 16 + hex_value(token[2 * k + 1]));
        }
        channel.colors.push_back(rgb);
    }
    if (in >> token) throw std::invalid_argument("channel: trailing content");
    return channel;
}

void save_channel(const SemanticChannel& channel, int width, int height, const std::filesystem::path& path) {
    write_text_file(path, write_channel(channel, width, height));
}

SemanticChannel load_channel(const std::filesystem::path& path) { return read_channel(read_text_file(path)); }

}  // namespace vchunk
