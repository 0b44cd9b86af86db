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

#ifndef VCHUNK_FOREST_HPP
#define VCHUNK_FOREST_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace vchunk {

/// (features, target) rows gathered from oracle rollouts. Targets are
/// clipped to [0, 1] on insertion.
class ImitationDataset {
public:
    ImitationDataset() = default;
    explicit ImitationDataset(std::vector<std::string> columns);

    void add(std::span<const double> features, double target, int scene, int step);
    void append(const ImitationDataset& other);

    std::size_t size() const { return targets_.size(); }
    std::size_t dim() const { return columns_.size(); }
    bool empty() const { return targets_.empty(); }
    std::span<const double> row(std::size_t i) const {
        return std::span<const double>(features_).subspan(i * dim(), dim());
    }
    double target(std::size_t i) const { return targets_[i]; }
    std::span<const double> targets() const { return targets_; }
    std::pair<int, int> provenance(std::size_t i) const { return provenance_[i]; }
    const std::vector<std::string>& columns() const { return columns_; }

    /// Header `scene,step,<columns...>,target`; RFC-4180 quoting on the header.
    std::string to_csv() const;
    static ImitationDataset from_csv(std::string_view text);

private:
    std::vector<std::string> columns_;
    std::vector<double> features_;
    std::vector<double> targets_;
    std::vector<std::pair<int, int>> provenance_;
};

struct ForestConfig {
    int n_trees = 50;
    int max_depth = 12;
    int min_samples_leaf = 5;
    /// Fraction of features tried per split; <= 0 means sqrt(d).
    double feature_fraction = 0.0;
    double bootstrap_fraction = 1.0;
    /// Split thresholds per feature are taken from at most this many
    /// quantile cut points of the training values.
    int max_bins = 256;
    std::uint64_t seed = 1;
    unsigned threads = 0;
};

class RegressionTree {
public:
    struct Node {
        int feature = -1;  // -1 for leaves
        double threshold = 0.0;
        double value = 0.0;
        int left = -1;
        int right = -1;
    };

    double predict(std::span<const double> x) const;
    const std::vector<Node>& nodes() const { return nodes_; }
    std::vector<Node>& mutable_nodes() { return nodes_; }
    int depth() const;

private:
    std::vector<Node> nodes_;
};

/// Bagged regression trees; prediction is the mean over trees. Splits
/// maximize variance reduction, ties going to the lowest feature index and
/// then the lowest threshold. Fully determined by (data, config.seed).
class RegressionForest {
public:
    static RegressionForest fit(const ImitationDataset& data, const ForestConfig& config);

    double predict(std::span<const double> x) const;
    std::size_t dim() const { return dim_; }
    std::size_t n_trees() const { return trees_.size(); }
    const std::vector<RegressionTree>& trees() const { return trees_; }

    /// Text format:
    ///   vchunk-forest v1
    ///   dim <d> trees <n>
    ///   tree <node count>
    ///   S <feature> <threshold>   (internal node, preorder)
    ///   L <value>                 (leaf)
    std::string serialize() const;
    static RegressionForest deserialize(std::string_view text);

private:
    std::size_t dim_ = 0;
    std::vector<RegressionTree> trees_;
};

}  // namespace vchunk

#endif  // VCHUNK_FOREST_HPP
