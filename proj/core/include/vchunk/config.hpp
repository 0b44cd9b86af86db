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

#ifndef VCHUNK_CONFIG_HPP
#define VCHUNK_CONFIG_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

#include "vchunk/forest.hpp"
#include "vchunk/metrics.hpp"
#include "vchunk/synth.hpp"

namespace vchunk {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class GrowerKind { Oracle, Perturbed, Learned };
enum class ListKind { Oracle, Learned };

struct PipelineConfig {
    std::uint64_t seed = 1;
    unsigned threads = 0;

    SynthConfig synth;
    int n_train = 100;
    int n_test = 200;

    GrowerKind grower = GrowerKind::Learned;
    double epsilon = 0.05;
    int max_chunk_size = 40;
    int seed_interval = 32;
    int seeds_per_instance = 3;
    double seed_alpha = 0.5;
    double row_fraction = 0.1;
    ForestConfig grower_forest{20, 10, 5, 0.0, 1.0, 256, 1, 0};

    ListKind list = ListKind::Learned;
    int k = 5;
    ForestConfig list_forest;

    OracleMode oracle_mode = OracleMode::Pool;

    int verify_hungarian = 1000;
    int verify_theorem1 = 1000;
    int verify_theorem2 = 200;
    int verify_theorem3 = 500;
    int verify_perturbations = 20;

    bool dump_datasets = false;
};

/// Flat `section.key -> value` view of a TOML-style file: `[section]`
/// headers, `key = value` lines, `#` comments, optional double quotes
/// around values.
std::map<std::string, std::string> parse_config_text(std::string_view text);

/// Applies one `section.key` assignment. Throws ConfigError for unknown
/// keys or malformed values.
void apply_setting(PipelineConfig& config, const std::string& key, const std::string& value);

/// Applies every assignment in text (file syntax) on top of config.
void apply_config_text(PipelineConfig& config, std::string_view text);

/// Rejects inconsistent settings with ConfigError.
void validate(const PipelineConfig& config);

/// Every key with its effective value, in file syntax. Parsing the result
/// reproduces the configuration.
std::string render_config(const PipelineConfig& config);

/// Forest settings with the master seed folded in.
ForestConfig grower_forest_config(const PipelineConfig& config);
ForestConfig list_forest_config(const PipelineConfig& config);

}  // namespace vchunk

#endif  // VCHUNK_CONFIG_HPP
