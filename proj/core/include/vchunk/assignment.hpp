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

#ifndef VCHUNK_ASSIGNMENT_HPP
#define VCHUNK_ASSIGNMENT_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "vchunk/rational.hpp"
#include "vchunk/scene.hpp"

namespace vchunk {

/// Chunk x instance weights. Columns past the real instances are dummy
/// columns and hold zeros.
class ScoreMatrix {
public:
    ScoreMatrix() = default;
    ScoreMatrix(std::size_t rows, std::size_t cols);

    /// rows = |chunks|, cols = max(|chunks|, |instances|), w_ij = iou(c_i, g_j).
    static ScoreMatrix from_chunks(std::span<const Chunk> chunks,
                                   std::span<const GroundTruthInstance> instances);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Rational& at(std::size_t i, std::size_t j) { return w_[i * cols_ + j]; }
    const Rational& at(std::size_t i, std::size_t j) const { return w_[i * cols_ + j]; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> w_;
};

struct Assignment {
    /// Column for every row. Values >= cols() denote zero padding columns
    /// (only possible when rows > cols).
    std::vector<std::size_t> row_to_col;
    Rational value;
};

/// Maximum-weight perfect matching value on the zero-padded square matrix.
Rational hungarian_value(const ScoreMatrix& matrix);

/// Optimal matching with the lexicographically smallest row->column vector
/// among all optima.
Assignment hungarian(const ScoreMatrix& matrix);

/// f(L;G): sum of IoUs under the optimal one-to-one assignment, with dummy
/// instances absorbing the surplus when |L| > |G|. f(∅;G) = 0.
Rational f_of_list(std::span<const Chunk> list, std::span<const GroundTruthInstance> instances);

/// max f(L;G) over lists L drawn from pool with |L| <= budget.
Rational best_list_value(std::span<const Chunk> pool, std::span<const GroundTruthInstance> instances,
                         std::size_t budget);

struct ListEntry {
    std::size_t candidate = 0;            // index into the candidate set
    InstanceId paired = kDummyInstance;   // instance removed from G_re
    PixelRatio marginal;                  // y(c; G_re) at selection time

    friend bool operator==(const ListEntry&, const ListEntry&) = default;
};

/// Output of the greedy list generator.
///
/// cumulative_value[i] is the greedy matching value of the first i+1
/// entries (the running sum of marginals). The list objective of the same
/// prefix, f_of_list, can only be larger: the greedy pairing is one of the
/// assignments the objective maximizes over.
struct PredictionList {
    std::vector<ListEntry> entries;
    std::vector<Rational> cumulative_value;

    std::size_t size() const { return entries.size(); }
    std::vector<std::size_t> order() const;
};

/// Candidate x instance IoUs, row-major.
struct IouTable {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<PixelRatio> values;

    static IouTable from_chunks(std::span<const Chunk> candidates, std::span<const GroundTruthInstance> instances);
    const PixelRatio& at(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
};

/// Greedy list generation with ground-truth access. Each round selects the
/// unselected candidate with the largest best-IoU against the remaining
/// instances (smallest index on ties), pairs it with its argmax instance
/// (smallest id on ties) and removes that instance. The result has
/// min(k, |C|) entries.
PredictionList greedy_list(std::span<const Chunk> candidates,
                           std::span<const GroundTruthInstance> instances, std::size_t k);

/// Same rule on a bare table; `paired` holds column indices.
PredictionList greedy_list(const IouTable& table, std::size_t k);

struct OptimalList {
    std::vector<std::size_t> members;  // ascending candidate indices
    Rational value;
};

inline constexpr std::size_t kBruteForceMaxCandidates = 12;
inline constexpr std::size_t kBruteForceMaxBudget = 5;

/// Exact maximizer of f over all size-min(k,|C|) subsets. Throws
/// std::invalid_argument beyond kBruteForceMaxCandidates / kBruteForceMaxBudget.
OptimalList optimal_list_bruteforce(std::span<const Chunk> candidates,
                                    std::span<const GroundTruthInstance> instances, std::size_t k);
OptimalList optimal_list_bruteforce(const IouTable& table, std::size_t k);

struct PrefixCheck {
    std::size_t prefix = 0;
    Rational f_greedy;   // greedy matching value of the prefix
    Rational f_list;     // f_of_list of the same prefix
    Rational f_opt;      // best size-prefix list
    double ratio = 1.0;  // f_greedy / f_opt (1 when f_opt == 0)
    bool holds = true;   // 2 * f_greedy >= f_opt and f_list >= f_greedy
};

struct Theorem1Report {
    std::vector<PrefixCheck> prefixes;
    bool prefix_property = true;

    bool ok() const;
};

/// Checks the 1/2 bound at every prefix i = 1..k against the brute-force
/// optimum, and that greedy_list(C, G, i) is the first i entries of
/// greedy_list(C, G, k).
Theorem1Report verify_theorem1(std::span<const Chunk> candidates,
                               std::span<const GroundTruthInstance> instances, std::size_t k);
Theorem1Report verify_theorem1(const IouTable& table, std::size_t k);

/// `scene_id,prefix,f_greedy,f_opt,ratio` (no trailing newline).
std::string theorem1_csv_line(const std::string& scene_id, const PrefixCheck& check);

}  // namespace vchunk

#endif  // VCHUNK_ASSIGNMENT_HPP
