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

#include <algorithm>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "vchunk/assignment.hpp"
#include "vchunk/rng.hpp"
#include "vchunk/synth.hpp"

using namespace vchunk;

namespace {

// IoUs given in hundredths.
IouTable table_of(const std::vector<std::vector<int>>& hundredths) {
    IouTable t;
    t.rows = hundredths.size();
    t.cols = hundredths.empty() ? 0 : hundredths[0].size();
    for (const auto& row : hundredths) {
        for (const int v : row) t.values.emplace_back(v, 100);
    }
    return t;
}

ScoreMatrix matrix_of(const std::vector<std::vector<int>>& hundredths) {
    ScoreMatrix m(hundredths.size(), hundredths[0].size());
    for (std::size_t i = 0; i < hundredths.size(); ++i) {
        for (std::size_t j = 0; j < hundredths[i].size(); ++j) m.at(i, j) = Rational(hundredths[i][j], 100);
    }
    return m;
}

Rational q(int num, int den) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

}  // namespace

TEST_CASE("hungarian examples") {
    const auto a = hungarian(matrix_of({{90, 10}, {20, 80}}));
    CHECK(a.row_to_col == std::vector<std::size_t>{0, 1});
    CHECK(a.value == q(17, 10));

    ScoreMatrix eye(4, 4);
    for (std::size_t i = 0; i < 4; ++i) eye.at(i, i) = 1;
    const auto d = hungarian(eye);
    CHECK(d.row_to_col == std::vector<std::size_t>{0, 1, 2, 3});
    CHECK(d.value == 4);
}

TEST_CASE("hungarian picks the lexicographically smallest optimum") {
    ScoreMatrix flat(3, 3);
    const auto a = hungarian(flat);
    CHECK(a.row_to_col == std::vector<std::size_t>{0, 1, 2});
    const auto b = hungarian(matrix_of({{50, 50}, {50, 50}}));
    CHECK(b.row_to_col == std::vector<std::size_t>{0, 1});
}

TEST_CASE("hungarian matches permutation enumeration on random rational matrices") {
    CounterRng rng(21);
    for (int t = 0; t < 300; ++t) {
        const auto rows = static_cast<std::size_t>(rng.uniform_int(1, 6));
        const auto cols = static_cast<std::size_t>(rng.uniform_int(1, 6));
        ScoreMatrix m(rows, cols);
        std::vector<std::vector<Rational>> w(rows, std::vector<Rational>(cols));
        for (std::size_t i = 0; i < rows; ++i) {
            for (std::size_t j = 0; j < cols; ++j) {
                w[i][j] = q(static_cast<int>(rng.uniform_int(0, 12)), static_cast<int>(rng.uniform_int(1, 12)));
                m.at(i, j) = w[i][j];
            }
        }
        const auto a = hungarian(m);
        CHECK(a.value == oracle::permutation_max(w));
        CHECK(hungarian_value(m) == a.value);
        Rational sum(0);
        for (std::size_t i = 0; i < rows; ++i) {
            if (a.row_to_col[i] < cols) sum += w[i][a.row_to_col[i]];
        }
        CHECK(sum == a.value);
    }
}

TEST_CASE("f_of_list examples") {
    // A chunk that covers its instance exactly.
    const auto scene = fixtures::strip_scene({3, 2, 4}, {{0, 3}});
    const std::vector<SuperpixelId> cover{0};
    const std::vector<Chunk> one{Chunk::from_ids(scene, cover)};
    CHECK(f_of_list(one, scene.instances()) == 1);
    CHECK(f_of_list({}, scene.instances()) == 0);

    // Three chunks, one instance: only the best single IoU counts.
    const std::vector<SuperpixelId> a{0, 1}, b{1}, c{2};
    const std::vector<Chunk> three{Chunk::from_ids(scene, a), Chunk::from_ids(scene, b), Chunk::from_ids(scene, c)};
    CHECK(f_of_list(three, scene.instances()) == q(3, 5));

    CHECK(hungarian_value(matrix_of({{80, 10}, {70, 60}})) == q(14, 10));
}

TEST_CASE("greedy list on a table") {
    const auto t = table_of({{80, 10}, {70, 60}, {0, 50}});
    const auto list = greedy_list(t, 2);
    REQUIRE(list.size() == 2);
    CHECK(list.entries[0].candidate == 0);
    CHECK(list.entries[0].paired == 0);
    CHECK(list.entries[1].candidate == 1);
    CHECK(list.entries[1].paired == 1);
    CHECK(list.cumulative_value[1] == q(14, 10));
    CHECK(optimal_list_bruteforce(t, 2).value == q(14, 10));

    const auto first = greedy_list(t, 1);
    REQUIRE(first.size() == 1);
    CHECK(first.entries[0].candidate == 0);
    CHECK(optimal_list_bruteforce(t, 1).value == first.cumulative_value[0]);
}

TEST_CASE("greedy is half optimal on the tight example") {
    const auto t = table_of({{60, 50}, {55, 0}});
    const auto list = greedy_list(t, 2);
    REQUIRE(list.size() == 2);
    CHECK(list.entries[0].candidate == 0);
    CHECK(list.entries[0].paired == 0);
    CHECK(list.entries[1].candidate == 1);
    CHECK(list.entries[1].marginal == PixelRatio(0, 1));
    CHECK(list.cumulative_value[1] == q(3, 5));
    const auto best = optimal_list_bruteforce(t, 2);
    CHECK(best.value == q(105, 100));
    CHECK(best.members == std::vector<std::size_t>{0, 1});

    const auto report = verify_theorem1(t, 2);
    REQUIRE(report.prefixes.size() == 2);
    CHECK(report.prefixes[0].ratio == doctest::Approx(1.0));
    CHECK(report.prefixes[1].ratio == doctest::Approx(0.6 / 1.05));
    CHECK(report.ok());
    CHECK(theorem1_csv_line("ex", report.prefixes[1]) == "ex,2,0.600000,1.050000,0.571429");
}

TEST_CASE("greedy list length and exhausted instances") {
    const auto t = table_of({{10}, {30}, {20}});
    const auto list = greedy_list(t, 5);
    REQUIRE(list.size() == 3);
    CHECK(list.order() == std::vector<std::size_t>{1, 0, 2});
    CHECK(list.entries[1].paired == kDummyInstance);
    CHECK(list.entries[1].marginal == PixelRatio(0, 1));
    CHECK(list.cumulative_value[2] == q(3, 10));
}

TEST_CASE("perfect covers reach one per instance") {
    const auto scene = fixtures::strip_scene({2, 3, 2, 3}, {{0, 2}, {5, 7}});
    const std::vector<SuperpixelId> a{0}, b{2}, c{1, 2}, d{3};
    const std::vector<Chunk> pool{Chunk::from_ids(scene, c), Chunk::from_ids(scene, a), Chunk::from_ids(scene, d),
                                  Chunk::from_ids(scene, b)};
    CHECK(optimal_list_bruteforce(pool, scene.instances(), 2).value == 2);
    CHECK(best_list_value(pool, scene.instances(), 2) == 2);
    const auto greedy = greedy_list(pool, scene.instances(), 2);
    CHECK(greedy.cumulative_value[1] == 2);
    const auto report = verify_theorem1(pool, scene.instances(), 2);
    for (const auto& p : report.prefixes) CHECK(p.ratio == doctest::Approx(1.0));
}

TEST_CASE("brute force caps") {
    IouTable big;
    big.rows = kBruteForceMaxCandidates + 1;
    big.cols = 1;
    big.values.resize(big.rows);
    CHECK_THROWS_AS(optimal_list_bruteforce(big, 2), std::invalid_argument);
    CHECK_THROWS_AS(optimal_list_bruteforce(table_of({{10}}), kBruteForceMaxBudget + 1), std::invalid_argument);
}

TEST_CASE("greedy invariants on random scenes") {
    CounterRng rng(22);
    for (int t = 0; t < 150; ++t) {
        auto local = rng.child(static_cast<std::uint64_t>(t));
        const auto scene = random_small_scene(local.child("scene"), 10, 10, 8, 3);
        const auto n = static_cast<std::size_t>(local.uniform_int(1, 8));
        const auto pool = random_chunks(scene, n, local.child("chunks"));
        const std::size_t k = static_cast<std::size_t>(local.uniform_int(1, 4));
        const auto list = greedy_list(pool, scene.instances(), k);
        CHECK(list.size() == std::min(k, pool.size()));
        std::vector<InstanceId> paired;
        for (std::size_t i = 0; i < list.size(); ++i) {
            const auto& e = list.entries[i];
            if (e.paired != kDummyInstance) paired.push_back(e.paired);
            const Rational prev = i == 0 ? Rational(0) : list.cumulative_value[i - 1];
            CHECK(list.cumulative_value[i] - prev == e.marginal.to_rational());
            if (i > 0) CHECK_FALSE(e.marginal > list.entries[i - 1].marginal);
        }
        std::sort(paired.begin(), paired.end());
        CHECK(std::adjacent_find(paired.begin(), paired.end()) == paired.end());

        std::vector<std::vector<Rational>> table;
        for (const auto& c : pool) {
            std::vector<Rational> row;
            for (const auto& g : scene.instances()) row.push_back(iou(c, g).to_rational());
            table.push_back(row);
        }
        const auto best = optimal_list_bruteforce(pool, scene.instances(), k);
        CHECK(best.value == oracle::best_list(table, k));
        CHECK(2 * list.cumulative_value.back() >= best.value);
        CHECK(best_list_value(pool, scene.instances(), k) == best.value);

        Rational prev(0);
        for (std::size_t i = 1; i <= pool.size(); ++i) {
            const std::vector<Chunk> prefix(pool.begin(), pool.begin() + static_cast<long>(i));
            const auto v = f_of_list(prefix, scene.instances());
            CHECK(v >= prev);
            prev = v;
        }
    }
}
