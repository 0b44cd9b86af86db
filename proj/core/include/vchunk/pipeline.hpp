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

#ifndef VCHUNK_PIPELINE_HPP
#define VCHUNK_PIPELINE_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "vchunk/channel.hpp"
#include "vchunk/config.hpp"
#include "vchunk/forest.hpp"
#include "vchunk/grower.hpp"

namespace vchunk {

// Working directory layout:
//
//   data/<split>/scene_NNNNN.{scene,channel}, data/<split>/manifest.txt
//   models/grower.forest, models/list.forest
//   candidates/<split>.txt
//   predictions/test.csv
//   eval/results.csv, eval/summary.csv, eval/slots.svg, eval/abo.svg
//   verify/report.csv, verify/failures/
//
// Every command also writes its effective configuration next to its
// outputs as config.toml.

inline constexpr const char* kTrainSplit = "train";
inline constexpr const char* kTestSplit = "test";

SynthConfig synth_config(const PipelineConfig& config);

struct SplitData {
    std::vector<SceneBundle> scenes;
    std::vector<int> indices;
};

/// Loads a generated split via its manifest, checking every scene file's
/// sha256 against the manifest.
SplitData load_split(const std::filesystem::path& root, const std::string& split);

/// Candidates for one scene under the configured grower. Oracle and
/// perturbed growers target, per seed, the instance that overlaps the seed
/// most; a seed outside every instance contributes only its singleton.
std::vector<Candidate> grow_candidates(const SceneBundle& bundle, const PipelineConfig& config,
                                       const RegressionForest* grower_forest);

/// Candidate chunks per scene of a split, in scene order.
std::vector<std::vector<Chunk>> load_candidates(const std::filesystem::path& root, const std::string& split,
                                                const SplitData& data);

void run_gen(const PipelineConfig& config, const std::filesystem::path& root);
void run_train_grower(const PipelineConfig& config, const std::filesystem::path& root);
void run_grow(const PipelineConfig& config, const std::filesystem::path& root);
void run_train_list(const PipelineConfig& config, const std::filesystem::path& root);
void run_predict(const PipelineConfig& config, const std::filesystem::path& root);
void run_eval(const PipelineConfig& config, const std::filesystem::path& root);
void run_plot(const std::filesystem::path& root);

/// gen, train-grower (when the learned grower is configured), grow,
/// train-list (when the learned list predictor is configured), predict and
/// eval.
void run_all(const PipelineConfig& config, const std::filesystem::path& root);

struct VerifyLine {
    std::string check;
    long long cases = 0;
    long long violations = 0;
    bool passed = true;
    std::string detail;
};

struct VerifyResult {
    std::vector<VerifyLine> lines;
    bool ok() const;
};

/// Runs the property harnesses on random small scenes and writes
/// verify/report.csv plus a scene file and CSV line per counterexample.
VerifyResult run_verify(const PipelineConfig& config, const std::filesystem::path& root);

/// `method,metric,value` rows of eval/summary.csv as a lookup.
double summary_value(const std::filesystem::path& root, const std::string& method, const std::string& metric);

}  // namespace vchunk

#endif  // VCHUNK_PIPELINE_HPP
