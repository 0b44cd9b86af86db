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

#include "vchunk/forest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "vchunk/csv.hpp"
#include "vchunk/parallel.hpp"
#include "vchunk/rational.hpp"
#include "vchunk/rng.hpp"

namespace vchunk {

ImitationDataset::ImitationDataset(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void ImitationDataset::add(std::span<const double> features, double target, int scene, int step) {
    if (features.size() != dim()) {
        throw std::invalid_argument("dataset row has " + std::to_string(features.size()) +
                                    " features, expected " + std::to_string(dim()));
    }
    features_.insert(features_.end(), features.begin(), features.end());
    targets_.push_back(std::clamp(target, 0.0, 1.0));
    provenance_.emplace_back(scene, step);
}

void ImitationDataset::append(const ImitationDataset& other) {
    if (columns_.empty() && targets_.empty()) columns_ = other.columns_;
    if (other.dim() != dim()) throw std::invalid_argument("dataset dimensionality mismatch");
    features_.insert(features_.end(), other.features_.begin(), other.features_.end());
    targets_.insert(targets_.end(), other.targets_.begin(), other.targets_.end());
    provenance_.insert(provenance_.end(), other.provenance_.begin(), other.provenance_.end());
}

std::string ImitationDataset::to_csv() const {
    std::vector<std::string> header{"scene", "step"};
    header.insert(header.end(), columns_.begin(), columns_.end());
    header.emplace_back("target");
    std::string out = csv_join(header) + '\n';
    for (std::size_t i = 0; i < size(); ++i) {
        out += std::to_string(provenance_[i].first) + ',' + std::to_string(provenance_[i].second);
        for (const double v : row(i)) out += ',' + format_shortest(v);
        out += ',' + format_shortest(targets_[i]) + '\n';
    }
    return out;
}

ImitationDataset ImitationDataset::from_csv(std::string_view text) {
    const auto rows = parse_csv(text);
    if (rows.empty() || rows[0].size() < 3 || rows[0][0] != "scene" || rows[0][1] != "step" ||
        rows[0].back() != "target") {
        throw std::invalid_argument("dataset csv: bad header");
    }
    ImitationDataset data(std::vector<std::string>(rows[0].begin() + 2, rows[0].end() - 1));
    std::vector<double> features(data.dim());
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& fields = rows[r];
        if (fields.size() != data.dim() + 3) throw std::invalid_argument("dataset csv: ragged row " + std::to_string(r));
        for (std::size_t k = 0; k < data.dim(); ++k) features[k] = parse_double(fields[k + 2]);
        data.add(features, parse_double(fields.back()), std::stoi(fields[0]), std::stoi(fields[1]));
    }
    return data;
}

double RegressionTree::predict(std::span<const double> x) const {
    int node = 0;
    while (nodes_[node].feature >= 0) {
        const auto& n = nodes_[node];
        node = x[n.feature] <= n.threshold ? n.left : n.right;
    }
    return nodes_[node].value;
}

int RegressionTree::depth() const {
    std::vector<int> d(nodes_.size(), 0);
    int best = 0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        best = std::max(best, d[i]);
        if (nodes_[i].feature >= 0) {
            d[nodes_[i].left] = d[i] + 1;
            d[nodes_[i].right] = d[i] + 1;
        }
    }
    return best;
}

namespace {

struct BinnedData {
    std::size_t n = 0;
    std::size_t dim = 0;
    std::vector<std::vector<double>> thresholds;  // per feature, strictly increasing
    std::vector<std::uint16_t> bins;              // n x dim, feature-major
};

BinnedData bin_features(const ImitationDataset& data, int max_bins) {
    BinnedData b;
    b.n = data.size();
    b.dim = data.dim();
    b.thresholds.resize(b.dim);
    b.bins.resize(b.n * b.dim);
    std::vector<double> values(b.n);
    for (std::size_t f = 0; f < b.dim; ++f) {
        for (std::size_t i = 0; i < b.n; ++i) values[i] = data.row(i)[f];
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());
        auto& th = b.thresholds[f];
        const std::size_t u = values.size();
        if (u <= static_cast<std::size_t>(max_bins)) {
            for (std::size_t k = 1; k < u; ++k) th.push_back(0.5 * (values[k - 1] + values[k]));
        } else {
            for (int k = 1; k < max_bins; ++k) {
                const std::size_t idx = k * u / max_bins;
                th.push_back(0.5 * (values[idx - 1] + values[idx]));
            }
            th.erase(std::unique(th.begin(), th.end()), th.end());
        }
        for (std::size_t i = 0; i < b.n; ++i) {
            const double x = data.row(i)[f];
            b.bins[f * b.n + i] =
                static_cast<std::uint16_t>(std::lower_bound(th.begin(), th.end(), x) - th.begin());
        }
    }
    return b;
}

class TreeBuilder {
public:
    TreeBuilder(const BinnedData& binned, std::span<const double> targets, const ForestConfig& cfg,
                std::size_t mtry, CounterRng rng)
        : binned_(binned), targets_(targets), cfg_(cfg), mtry_(mtry), rng_(rng) {}

    RegressionTree build(std::vector<std::uint32_t> rows) {
        RegressionTree tree;
        grow(tree, rows, 0);
        return tree;
    }

private:
    int grow(RegressionTree& tree, std::vector<std::uint32_t>& rows, int depth) {
        const int index = static_cast<int>(tree.mutable_nodes().size());
        tree.mutable_nodes().emplace_back();
        double sum = 0.0;
        for (const auto r : rows) sum += targets_[r];
        const double n = static_cast<double>(rows.size());
        tree.mutable_nodes()[index].value = sum / n;

        const auto min_leaf = static_cast<std::size_t>(std::max(1, cfg_.min_samples_leaf));
        if (depth >= cfg_.max_depth || rows.size() < 2 * min_leaf) return index;

        // Choose features without replacement, then scan in ascending order.
        std::vector<std::size_t> features(binned_.dim);
        std::iota(features.begin(), features.end(), std::size_t{0});
        for (std::size_t k = 0; k < mtry_; ++k) {
            const auto j = static_cast<std::size_t>(rng_.uniform_int(static_cast<std::int64_t>(k),
                                                                     static_cast<std::int64_t>(binned_.dim - 1)));
            std::swap(features[k], features[j]);
        }
        features.resize(mtry_);
        std::sort(features.begin(), features.end());

        const double parent_score = sum * sum / n;
        double best_score = parent_score;
        int best_feature = -1;
        std::size_t best_bin = 0;
        std::vector<double> hist_sum;
        std::vector<std::size_t> hist_count;
        for (const auto f : features) {
            const auto n_bins = binned_.thresholds[f].size() + 1;
            if (n_bins < 2) continue;
            hist_sum.assign(n_bins, 0.0);
            hist_count.assign(n_bins, 0);
            const auto* col = &binned_.bins[f * binned_.n];
            for (const auto r : rows) {
                hist_sum[col[r]] += targets_[r];
                ++hist_count[col[r]];
            }
            double left_sum = 0.0;
            std::size_t left_n = 0;
            for (std::size_t b = 0; b + 1 < n_bins; ++b) {
                left_sum += hist_sum[b];
                left_n += hist_count[b];
                if (hist_count[b] == 0) continue;
                const std::size_t right_n = rows.size() - left_n;
                if (left_n < min_leaf || right_n < min_leaf) continue;
                const double right_sum = sum - left_sum;
                const double score = left_sum * left_sum / static_cast<double>(left_n) +
                                     right_sum * right_sum / static_cast<double>(right_n);
                if (score > best_score + 1e-12 * (1.0 + std::abs(best_score))) {
                    best_score = score;
                    best_feature = static_cast<int>(f);
                    best_bin = b;
                }
            }
        }
        if (best_feature < 0) return index;

        const auto* col = &binned_.bins[static_cast<std::size_t>(best_feature) * binned_.n];
        std::vector<std::uint32_t> left_rows;
        std::vector<std::uint32_t> right_rows;
        for (const auto r : rows) (col[r] <= best_bin ? left_rows : right_rows).push_back(r);
        rows.clear();
        rows.shrink_to_fit();

        tree.mutable_nodes()[index].feature = best_feature;
        tree.mutable_nodes()[index].threshold = binned_.thresholds[best_feature][best_bin];
        const int left = grow(tree, left_rows, depth + 1);
        const int right = grow(tree, right_rows, depth + 1);
        tree.mutable_nodes()[index].left = left;
        tree.mutable_nodes()[index].right = right;
        return index;
    }

    const BinnedData& binned_;
    std::span<const double> targets_;
    const ForestConfig& cfg_;
    std::size_t mtry_;
    CounterRng rng_;
};

}  // namespace

RegressionForest RegressionForest::fit(const ImitationDataset& data, const ForestConfig& config) {
    if (data.empty()) throw std::invalid_argument("fit_forest: empty dataset");
    if (data.dim() == 0) throw std::invalid_argument("fit_forest: zero-dimensional features");
    if (config.n_trees <= 0) throw std::invalid_argument("fit_forest: n_trees must be positive");
    const auto binned = bin_features(data, std::clamp(config.max_bins, 2, 65535));
    const std::size_t d = data.dim();
    std::size_t mtry = config.feature_fraction > 0.0
                           ? static_cast<std::size_t>(std::ceil(config.feature_fraction * static_cast<double>(d)))
                           : static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(d))));
    mtry = std::clamp<std::size_t>(mtry, 1, d);
    const auto n_boot = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(config.bootstrap_fraction * static_cast<double>(data.size()))));

    RegressionForest forest;
    forest.dim_ = d;
    forest.trees_.resize(static_cast<std::size_t>(config.n_trees));
    const CounterRng master = CounterRng(config.seed).child("forest");
    parallel_for(
        forest.trees_.size(),
        [&](std::size_t t) {
            CounterRng rng = master.child(static_cast<std::uint64_t>(t));
            CounterRng boot = rng.child("bootstrap");
            std::vector<std::uint32_t> rows(n_boot);
            for (auto& r : rows) {
                r = static_cast<std::uint32_t>(boot.uniform_int(0, static_cast<std::int64_t>(data.size()) - 1));
            }
            TreeBuilder builder(binned, data.targets(), config, mtry, rng.child("split"));
            forest.trees_[t] = builder.build(std::move(rows));
        },
        config.threads);
    return forest;
}

double RegressionForest::predict(std::span<const double> x) const {
    if (x.size() != dim_) {
        throw std::invalid_argument("forest expects " + std::to_string(dim_) + " features, got " +
                                    std::to_string(x.size()));
    }
    double sum = 0.0;
    for (const auto& t : trees_) sum += t.predict(x);
    return sum / static_cast<double>(trees_.size());
}

std::string RegressionForest::serialize() const {
    std::string out = "vchunk-forest v1\n";
    out += "dim " + std::to_string(dim_) + " trees " + std::to_string(trees_.size()) + '\n';
    for (const auto& tree : trees_) {
        out += "tree " + std::to_string(tree.nodes().size()) + '\n';
        for (const auto& node : tree.nodes()) {
            if (node.feature >= 0) {
                out += "S " + std::to_string(node.feature) + ' ' + format_shortest(node.threshold) + '\n';
            } else {
                out += "L " + format_shortest(node.value) + '\n';
            }
        }
    }
    return out;
}

namespace {

int read_preorder(std::istringstream& in, std::vector<RegressionTree::Node>& nodes, std::size_t limit) {
    std::string kind;
    std::string value;
    if (nodes.size() >= limit || !(in >> kind)) throw std::invalid_argument("forest: truncated tree");
    const int index = static_cast<int>(nodes.size());
    nodes.emplace_back();
    if (kind == "S") {
        int feature = 0;
        if (!(in >> feature >> value) || feature < 0) throw std::invalid_argument("forest: bad split line");
        nodes[index].feature = feature;
        nodes[index].threshold = parse_double(value);
        const int left = read_preorder(in, nodes, limit);
        const int right = read_preorder(in, nodes, limit);
        nodes[index].left = left;
        nodes[index].right = right;
    } else if (kind == "L") {
        if (!(in >> value)) throw std::invalid_argument("forest: bad leaf line");
        nodes[index].value = parse_double(value);
    } else {
        throw std::invalid_argument("forest: unknown node kind '" + kind + "'");
    }
    return index;
}

}  // namespace

RegressionForest RegressionForest::deserialize(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string magic;
    std::string version;
    std::string dim_tag;
    std::string trees_tag;
    std::size_t dim = 0;
    std::size_t n_trees = 0;
    if (!(in >> magic >> version) || magic != "vchunk-forest") throw std::invalid_argument("forest: bad magic");
    if (version != "v1") throw std::invalid_argument("forest: unsupported version " + version);
    if (!(in >> dim_tag >> dim >> trees_tag >> n_trees) || dim_tag != "dim" || trees_tag != "trees") {
        throw std::invalid_argument("forest: bad header");
    }
    RegressionForest forest;
    forest.dim_ = dim;
    for (std::size_t t = 0; t < n_trees; ++t) {
        std::string tag;
        std::size_t count = 0;
        if (!(in >> tag >> count) || tag != "tree") throw std::invalid_argument("forest: bad tree header");
        RegressionTree tree;
        read_preorder(in, tree.mutable_nodes(), count);
        if (tree.nodes().size() != count) throw std::invalid_argument("forest: node count mismatch");
        for (const auto& node : tree.nodes()) {
            if (node.feature >= static_cast<int>(dim)) throw std::invalid_argument("forest: feature index out of range");
        }
        forest.trees_.push_back(std::move(tree));
    }
    std::string rest;
    if (in >> rest) throw std::invalid_argument("forest: trailing content");
    return forest;
}

}  // namespace vchunk
