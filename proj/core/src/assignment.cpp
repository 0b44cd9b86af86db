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

#include "vchunk/assignment.hpp"

#include <algorithm>
#include <stdexcept>

namespace vchunk {

namespace {

// Kuhn-Munkres with row/column potentials for an n x m cost matrix,
// n <= m, minimizing. Works over any ordered field, here exact rationals.
// Returns the column of each row.
std::vector<std::size_t> solve_min_cost(const std::vector<Rational>& cost, std::size_t n, std::size_t m) {
    std::vector<Rational> u(n + 1), v(m + 1), minv(m + 1);
    std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
    std::vector<char> used(m + 1), unset(m + 1);
    Rational cur, delta;
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::fill(used.begin(), used.end(), 0);
        std::fill(unset.begin(), unset.end(), 1);
        do {
            used[j0] = 1;
            const std::size_t i0 = p[j0];
            bool delta_unset = true;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= m; ++j) {
                if (used[j]) continue;
                cur = cost[(i0 - 1) * m + (j - 1)];
                cur -= u[i0];
                cur -= v[j];
                if (unset[j] || cur < minv[j]) {
                    minv[j] = cur;
                    unset[j] = 0;
                    way[j] = j0;
                }
                if (delta_unset || minv[j] < delta) {
                    delta = minv[j];
                    delta_unset = false;
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<std::size_t> row_to_col(n, 0);
    for (std::size_t j = 1; j <= m; ++j) {
        if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
    }
    return row_to_col;
}

// Max-weight value of a dense rows x cols weight block (unmatched allowed,
// which is the same as perfect matching on the zero-padded square).
Rational max_matching_value(const std::vector<Rational>& w, std::size_t rows, std::size_t cols) {
    if (rows == 0 || cols == 0) return Rational(0);
    std::vector<Rational> cost;
    cost.reserve(rows * cols);
    const bool transpose = rows > cols;
    const std::size_t n = transpose ? cols : rows;
    const std::size_t m = transpose ? rows : cols;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            cost.push_back(-(transpose ? w[j * cols + i] : w[i * cols + j]));
        }
    }
    const auto assign = solve_min_cost(cost, n, m);
    Rational total(0);
    for (std::size_t i = 0; i < n; ++i) total -= cost[i * m + assign[i]];
    return total;
}

}  // namespace

ScoreMatrix::ScoreMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), w_(rows * cols) {}

ScoreMatrix ScoreMatrix::from_chunks(std::span<const Chunk> chunks,
                                     std::span<const GroundTruthInstance> instances) {
    ScoreMatrix m(chunks.size(), std::max(chunks.size(), instances.size()));
    for (std::size_t i = 0; i < chunks.size(); ++i) {
        for (std::size_t j = 0; j < instances.size(); ++j) m.at(i, j) = iou(chunks[i], instances[j]).to_rational();
    }
    return m;
}

Rational hungarian_value(const ScoreMatrix& matrix) {
    std::vector<Rational> w(matrix.rows() * matrix.cols());
    for (std::size_t i = 0; i < matrix.rows(); ++i) {
        for (std::size_t j = 0; j < matrix.cols(); ++j) w[i * matrix.cols() + j] = matrix.at(i, j);
    }
    return max_matching_value(w, matrix.rows(), matrix.cols());
}

Assignment hungarian(const ScoreMatrix& matrix) {
    const std::size_t rows = matrix.rows();
    const std::size_t n = std::max(rows, matrix.cols());
    Assignment result;
    result.value = hungarian_value(matrix);
    if (rows == 0) return result;

    auto weight = [&](std::size_t i, std::size_t j) -> Rational {
        return j < matrix.cols() ? matrix.at(i, j) : Rational(0);
    };

    // Fix rows one at a time to the smallest column that still admits an
    // optimal completion.
    std::vector<char> col_used(n, 0);
    Rational fixed(0);
    for (std::size_t r = 0; r < rows; ++r) {
        bool placed = false;
        for (std::size_t c = 0; c < n && !placed; ++c) {
            if (col_used[c]) continue;
            std::vector<std::size_t> free_cols;
            for (std::size_t j = 0; j < n; ++j) {
                if (!col_used[j] && j != c) free_cols.push_back(j);
            }
            const std::size_t sub_rows = rows - r - 1;
            std::vector<Rational> sub;
            sub.reserve(sub_rows * free_cols.size());
            for (std::size_t i = r + 1; i < rows; ++i) {
                for (const auto j : free_cols) sub.push_back(weight(i, j));
            }
            const Rational candidate = fixed + weight(r, c) + max_matching_value(sub, sub_rows, free_cols.size());
            if (candidate == result.value) {
                col_used[c] = 1;
                fixed += weight(r, c);
                result.row_to_col.push_back(c);
                placed = true;
            }
        }
        if (!placed) throw std::logic_error("hungarian: no optimal completion found");
    }
    return result;
}

Rational f_of_list(std::span<const Chunk> list, std::span<const GroundTruthInstance> instances) {
    if (list.empty()) return Rational(0);
    return hungarian_value(ScoreMatrix::from_chunks(list, instances));
}

Rational best_list_value(std::span<const Chunk> pool, std::span<const GroundTruthInstance> instances,
                         std::size_t budget) {
    const std::size_t m = instances.size();
    const std::size_t p = pool.size();
    if (m == 0 || p == 0 || budget == 0) return Rational(0);
    const std::size_t used = std::min({budget, p, m});
    // Instances are rows. When fewer than m instances may be matched, add
    // (m - used) reserve columns of weight 2 (> any IoU). Every optimum then
    // fills all reserve columns, leaving exactly `used` real matches.
    const std::size_t reserve = m - used;
    const std::size_t cols = p + reserve;
    std::vector<Rational> w(m * cols);
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = 0; i < p; ++i) w[j * cols + i] = iou(pool[i], instances[j]).to_rational();
        for (std::size_t r = 0; r < reserve; ++r) w[j * cols + p + r] = Rational(2);
    }
    Rational value = max_matching_value(w, m, cols);
    value -= Rational(static_cast<long>(2 * reserve));
    return value;
}

std::vector<std::size_t> PredictionList::order() const {
    std::vector<std::size_t> out;
    out.reserve(entries.size());
    for (const auto& e : entries) out.push_back(e.candidate);
    return out;
}

IouTable IouTable::from_chunks(std::span<const Chunk> candidates, std::span<const GroundTruthInstance> instances) {
    IouTable t;
    t.rows = candidates.size();
    t.cols = instances.size();
    t.values.resize(t.rows * t.cols);
    for (std::size_t i = 0; i < t.rows; ++i) {
        for (std::size_t j = 0; j < t.cols; ++j) t.values[i * t.cols + j] = iou(candidates[i], instances[j]);
    }
    return t;
}

PredictionList greedy_list(const IouTable& table, std::size_t k) {
    PredictionList list;
    const std::size_t rounds = std::min(k, table.rows);
    std::vector<char> selected(table.rows, 0);
    std::vector<char> remaining(table.cols, 1);
    Rational running(0);
    for (std::size_t round = 0; round < rounds; ++round) {
        ListEntry best;
        bool have = false;
        for (std::size_t i = 0; i < table.rows; ++i) {
            if (selected[i]) continue;
            PixelRatio y;
            InstanceId paired = kDummyInstance;
            for (std::size_t j = 0; j < table.cols; ++j) {
                if (!remaining[j]) continue;
                const auto& v = table.at(i, j);
                if (paired == kDummyInstance || v > y) {
                    y = v;
                    paired = static_cast<InstanceId>(j);
                }
            }
            if (!have || y > best.marginal) {
                best = {i, paired, y};
                have = true;
            }
        }
        selected[best.candidate] = 1;
        if (best.paired != kDummyInstance) remaining[static_cast<std::size_t>(best.paired)] = 0;
        running += best.marginal.to_rational();
        list.entries.push_back(best);
        list.cumulative_value.push_back(running);
    }
    return list;
}

PredictionList greedy_list(std::span<const Chunk> candidates,
                           std::span<const GroundTruthInstance> instances, std::size_t k) {
    auto list = greedy_list(IouTable::from_chunks(candidates, instances), k);
    for (auto& e : list.entries) {
        if (e.paired != kDummyInstance) e.paired = instances[static_cast<std::size_t>(e.paired)].id;
    }
    return list;
}

OptimalList optimal_list_bruteforce(std::span<const Chunk> candidates,
                                    std::span<const GroundTruthInstance> instances, std::size_t k) {
    if (candidates.size() > kBruteForceMaxCandidates) {
        throw std::invalid_argument("optimal_list_bruteforce: at most " +
                                    std::to_string(kBruteForceMaxCandidates) + " candidates");
    }
    return optimal_list_bruteforce(IouTable::from_chunks(candidates, instances), k);
}

OptimalList optimal_list_bruteforce(const IouTable& iou_values, std::size_t k) {
    if (iou_values.rows > kBruteForceMaxCandidates) {
        throw std::invalid_argument("optimal_list_bruteforce: at most " +
                                    std::to_string(kBruteForceMaxCandidates) + " candidates");
    }
    if (k > kBruteForceMaxBudget) {
        throw std::invalid_argument("optimal_list_bruteforce: budget at most " +
                                    std::to_string(kBruteForceMaxBudget));
    }
    OptimalList best;
    best.value = 0;
    const std::size_t n = iou_values.rows;
    const std::size_t size = std::min(k, n);
    if (size == 0) return best;
    const std::size_t m = iou_values.cols;
    std::vector<Rational> table(n * m);
    for (std::size_t i = 0; i < n * m; ++i) table[i] = iou_values.values[i].to_rational();

    std::vector<std::size_t> pick(size);
    for (std::size_t i = 0; i < size; ++i) pick[i] = i;
    bool first = true;
    std::vector<Rational> block(size * m);
    for (;;) {
        for (std::size_t r = 0; r < size; ++r) {
            for (std::size_t j = 0; j < m; ++j) block[r * m + j] = table[pick[r] * m + j];
        }
        Rational value = max_matching_value(block, size, m);
        if (first || value > best.value) {
            best.value = value;
            best.members = pick;
            first = false;
        }
        // Next combination in lexicographic order.
        std::size_t pos = size;
        while (pos > 0 && pick[pos - 1] == n - size + pos - 1) --pos;
        if (pos == 0) break;
        ++pick[pos - 1];
        for (std::size_t r = pos; r < size; ++r) pick[r] = pick[r - 1] + 1;
    }
    return best;
}

bool Theorem1Report::ok() const {
    if (!prefix_property) return false;
    return std::all_of(prefixes.begin(), prefixes.end(), [](const PrefixCheck& c) { return c.holds; });
}

Theorem1Report verify_theorem1(std::span<const Chunk> candidates,
                               std::span<const GroundTruthInstance> instances, std::size_t k) {
    return verify_theorem1(IouTable::from_chunks(candidates, instances), k);
}

Theorem1Report verify_theorem1(const IouTable& table, std::size_t k) {
    Theorem1Report report;
    const auto full = greedy_list(table, k);
    for (std::size_t i = 1; i <= full.size(); ++i) {
        PrefixCheck check;
        check.prefix = i;
        check.f_greedy = full.cumulative_value[i - 1];
        ScoreMatrix prefix(i, std::max(i, table.cols));
        for (std::size_t t = 0; t < i; ++t) {
            for (std::size_t j = 0; j < table.cols; ++j) prefix.at(t, j) = table.at(full.entries[t].candidate, j).to_rational();
        }
        check.f_list = hungarian_value(prefix);
        check.f_opt = optimal_list_bruteforce(table, i).value;
        check.ratio = check.f_opt == 0 ? 1.0 : Rational(check.f_greedy / check.f_opt).get_d();
        check.holds = 2 * check.f_greedy >= check.f_opt && check.f_list >= check.f_greedy;
        report.prefixes.push_back(std::move(check));

        const auto shorter = greedy_list(table, i);
        if (!std::equal(shorter.entries.begin(), shorter.entries.end(), full.entries.begin())) {
            report.prefix_property = false;
        }
    }
    return report;
}

std::string theorem1_csv_line(const std::string& scene_id, const PrefixCheck& check) {
    return scene_id + ',' + std::to_string(check.prefix) + ',' + format_fixed(check.f_greedy.get_d()) + ',' +
           format_fixed(check.f_opt.get_d()) + ',' + format_fixed(check.ratio);
}

}  // namespace vchunk
