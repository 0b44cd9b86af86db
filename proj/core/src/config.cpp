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

#include "vchunk/config.hpp"

#include <charconv>
#include <functional>
#include <vector>

#include "vchunk/csv.hpp"
#include "vchunk/rng.hpp"

namespace vchunk {
namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_integer(const std::string& key, const std::string& value) {
    T v{};
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size() || value.empty()) {
        throw ConfigError("config: " + key + " expects an integer, got '" + value + "'");
    }
    return v;
}

double parse_real(const std::string& key, const std::string& value) {
    try {
        return parse_double(value);
    } catch (const std::invalid_argument&) {
        throw ConfigError("config: " + key + " expects a number, got '" + value + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true") return true;
    if (value == "false") return false;
    throw ConfigError("config: " + key + " expects true or false, got '" + value + "'");
}

std::string grower_name(GrowerKind k) {
    switch (k) {
        case GrowerKind::Oracle: return "oracle";
        case GrowerKind::Perturbed: return "perturbed";
        case GrowerKind::Learned: return "learned";
    }
    return "learned";
}

struct Entry {
    std::string key;
    std::function<void(PipelineConfig&, const std::string&)> set;
    std::function<std::string(const PipelineConfig&)> get;
};

#define VCHUNK_INT(KEY, FIELD)                                                                         \
    Entry{KEY, [](PipelineConfig& c, const std::string& v) { c.FIELD = parse_integer<decltype(c.FIELD)>(KEY, v); }, \
          [](const PipelineConfig& c) { return std::to_string(c.FIELD); }}
#define VCHUNK_REAL(KEY, FIELD)                                                          \
    Entry{KEY, [](PipelineConfig& c, const std::string& v) { c.FIELD = parse_real(KEY, v); }, \
          [](const PipelineConfig& c) { return format_shortest(c.FIELD); }}

const std::vector<Entry>& entries() {
    static const std::vector<Entry> table = {
        VCHUNK_INT("seed", seed),
        VCHUNK_INT("threads", threads),
        VCHUNK_INT("synth.width", synth.width),
        VCHUNK_INT("synth.height", synth.height),
        VCHUNK_INT("synth.n_superpixels", synth.n_superpixels),
        VCHUNK_INT("synth.min_instances", synth.min_instances),
        VCHUNK_INT("synth.max_instances", synth.max_instances),
        Entry{"synth.shape", [](PipelineConfig& c, const std::string& v) {
                  try {
                      c.synth.shape = parse_shape(v);
                  } catch (const std::invalid_argument& e) {
                      throw ConfigError(std::string("config: synth.shape: ") + e.what());
                  }
              },
              [](const PipelineConfig& c) { return to_string(c.synth.shape); }},
        VCHUNK_REAL("synth.min_extent", synth.min_extent),
        VCHUNK_REAL("synth.max_extent", synth.max_extent),
        VCHUNK_REAL("synth.adjacency", synth.adjacency),
        VCHUNK_INT("synth.n_classes", synth.n_classes),
        VCHUNK_INT("synth.target_class", synth.target_class),
        VCHUNK_REAL("synth.concentration", synth.concentration),
        VCHUNK_REAL("synth.color_noise", synth.color_noise),
        VCHUNK_REAL("synth.box_jitter", synth.box_jitter),
        VCHUNK_REAL("synth.drop_probability", synth.drop_probability),
        VCHUNK_REAL("synth.duplicate_probability", synth.duplicate_probability),
        VCHUNK_INT("synth.min_instance_area", synth.min_instance_area),
        VCHUNK_INT("synth.max_attempts", synth.max_attempts),
        VCHUNK_INT("data.n_train", n_train),
        VCHUNK_INT("data.n_test", n_test),
        Entry{"grower.predictor", [](PipelineConfig& c, const std::string& v) {
                  if (v == "oracle") c.grower = GrowerKind::Oracle;
                  else if (v == "perturbed") c.grower = GrowerKind::Perturbed;
                  else if (v == "learned") c.grower = GrowerKind::Learned;
                  else throw ConfigError("config: grower.predictor must be oracle, perturbed or learned, got '" + v + "'");
              },
              [](const PipelineConfig& c) { return grower_name(c.grower); }},
        VCHUNK_REAL("grower.epsilon", epsilon),
        VCHUNK_INT("grower.max_chunk_size", max_chunk_size),
        VCHUNK_INT("grower.seed_interval", seed_interval),
        VCHUNK_INT("grower.seeds_per_instance", seeds_per_instance),
        VCHUNK_REAL("grower.seed_alpha", seed_alpha),
        VCHUNK_REAL("grower.row_fraction", row_fraction),
        VCHUNK_INT("grower.trees", grower_forest.n_trees),
        VCHUNK_INT("grower.max_depth", grower_forest.max_depth),
        VCHUNK_INT("grower.min_samples_leaf", grower_forest.min_samples_leaf),
        VCHUNK_REAL("grower.feature_fraction", grower_forest.feature_fraction),
        VCHUNK_REAL("grower.bootstrap_fraction", grower_forest.bootstrap_fraction),
        VCHUNK_INT("grower.max_bins", grower_forest.max_bins),
        Entry{"list.predictor", [](PipelineConfig& c, const std::string& v) {
                  if (v == "oracle") c.list = ListKind::Oracle;
                  else if (v == "learned") c.list = ListKind::Learned;
                  else throw ConfigError("config: list.predictor must be oracle or learned, got '" + v + "'");
              },
              [](const PipelineConfig& c) { return std::string(c.list == ListKind::Oracle ? "oracle" : "learned"); }},
        VCHUNK_INT("list.k", k),
        VCHUNK_INT("list.trees", list_forest.n_trees),
        VCHUNK_INT("list.max_depth", list_forest.max_depth),
        VCHUNK_INT("list.min_samples_leaf", list_forest.min_samples_leaf),
        VCHUNK_REAL("list.feature_fraction", list_forest.feature_fraction),
        VCHUNK_REAL("list.bootstrap_fraction", list_forest.bootstrap_fraction),
        VCHUNK_INT("list.max_bins", list_forest.max_bins),
        Entry{"eval.oracle_mode", [](PipelineConfig& c, const std::string& v) {
                  if (v == "pool") c.oracle_mode = OracleMode::Pool;
                  else if (v == "exact") c.oracle_mode = OracleMode::Exact;
                  else throw ConfigError("config: eval.oracle_mode must be pool or exact, got '" + v + "'");
              },
              [](const PipelineConfig& c) { return std::string(c.oracle_mode == OracleMode::Pool ? "pool" : "exact"); }},
        VCHUNK_INT("verify.hungarian", verify_hungarian),
        VCHUNK_INT("verify.theorem1", verify_theorem1),
        VCHUNK_INT("verify.theorem2", verify_theorem2),
        VCHUNK_INT("verify.theorem3", verify_theorem3),
        VCHUNK_INT("verify.perturbations", verify_perturbations),
        Entry{"output.dump_datasets", [](PipelineConfig& c, const std::string& v) { c.dump_datasets = parse_bool("output.dump_datasets", v); },
              [](const PipelineConfig& c) { return std::string(c.dump_datasets ? "true" : "false"); }},
    };
    return table;
}

#undef VCHUNK_INT
#undef VCHUNK_REAL

}  // namespace

std::map<std::string, std::string> parse_config_text(std::string_view text) {
    std::map<std::string, std::string> out;
    std::string section;
    std::size_t pos = 0;
    int line_no = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view raw = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        const auto hash = raw.find('#');
        if (hash != std::string_view::npos) raw = raw.substr(0, hash);
        const std::string line = trim(raw);
        if (line.empty()) {
            if (end == text.size()) break;
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3) {
                throw ConfigError("config line " + std::to_string(line_no) + ": malformed section header");
            }
            section = trim(std::string_view(line).substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const std::string key = trim(std::string_view(line).substr(0, eq));
        std::string value = trim(std::string_view(line).substr(eq + 1));
        if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        out[section.empty() ? key : section + "." + key] = value;
        if (end == text.size()) break;
    }
    return out;
}

void apply_setting(PipelineConfig& config, const std::string& key, const std::string& value) {
    for (const auto& e : entries()) {
        if (e.key == key) {
            e.set(config, value);
            return;
        }
    }
    throw ConfigError("config: unknown key '" + key + "'");
}

void apply_config_text(PipelineConfig& config, std::string_view text) {
    for (const auto& [key, value] : parse_config_text(text)) apply_setting(config, key, value);
}

void validate(const PipelineConfig& config) {
    try {
        config.synth.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    auto require = [](bool ok, const std::string& message) {
        if (!ok) throw ConfigError("config: " + message);
    };
    require(config.n_train >= 1, "data.n_train must be positive");
    require(config.n_test >= 1, "data.n_test must be positive");
    require(config.epsilon >= 0 && config.epsilon < 1, "grower.epsilon must lie in [0, 1)");
    require(config.max_chunk_size >= 1, "grower.max_chunk_size must be positive");
    require(config.seed_interval >= 1, "grower.seed_interval must be positive");
    require(config.seeds_per_instance >= 1, "grower.seeds_per_instance must be positive");
    require(config.seed_alpha >= 0 && config.seed_alpha <= 1, "grower.seed_alpha must lie in [0, 1]");
    require(config.row_fraction > 0 && config.row_fraction <= 1, "grower.row_fraction must lie in (0, 1]");
    require(config.k >= 1, "list.k must be positive");
    for (const auto* f : {&config.grower_forest, &config.list_forest}) {
        require(f->n_trees >= 1, "forest trees must be positive");
        require(f->max_depth >= 0, "forest max_depth must be non-negative");
        require(f->min_samples_leaf >= 1, "forest min_samples_leaf must be positive");
        require(f->feature_fraction <= 1, "forest feature_fraction must be <= 1");
        require(f->bootstrap_fraction > 0 && f->bootstrap_fraction <= 1, "forest bootstrap_fraction must lie in (0, 1]");
        require(f->max_bins >= 2, "forest max_bins must be at least 2");
    }
    require(config.verify_hungarian >= 0 && config.verify_theorem1 >= 0 && config.verify_theorem2 >= 0 &&
                config.verify_theorem3 >= 0 && config.verify_perturbations >= 0,
            "verify counts must be non-negative");
}

std::string render_config(const PipelineConfig& config) {
    std::string out;
    std::string section;
    for (const auto& e : entries()) {
        const auto dot = e.key.find('.');
        const std::string sec = dot == std::string::npos ? "" : e.key.substr(0, dot);
        const std::string name = dot == std::string::npos ? e.key : e.key.substr(dot + 1);
        if (sec != section) {
            out += "\n[" + sec + "]\n";
            section = sec;
        }
        out += name + " = " + e.get(config) + "\n";
    }
    return out;
}

ForestConfig grower_forest_config(const PipelineConfig& config) {
    ForestConfig f = config.grower_forest;
    f.seed = CounterRng(config.seed).child("grower-forest").key();
    f.threads = config.threads;
    return f;
}

ForestConfig list_forest_config(const PipelineConfig& config) {
    ForestConfig f = config.list_forest;
    f.seed = CounterRng(config.seed).child("list-forest").key();
    f.threads = config.threads;
    return f;
}

}  // namespace vchunk
