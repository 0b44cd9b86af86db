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

#include "vchunk/grower.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "vchunk/csv.hpp"
#include "vchunk/rng.hpp"

namespace vchunk {

Chunk GrowthChain::prefix(const Scene& scene, std::size_t i) const {
    Chunk c(scene);
    for (std::size_t t = 0; t <= i && t < steps.size(); ++t) c.add(scene, steps[t]);
    return c;
}

GrowerPredictor GrowerPredictor::oracle(const Scene& scene, InstanceId g) {
    GrowerPredictor p;
    p.mode_ = PredictorMode::Oracle;
    p.scene_ = &scene;
    p.instance_ = g;
    p.table_.reserve(scene.n_superpixels());
    for (const auto& s : scene.superpixels()) {
        p.table_.push_back(PixelRatio(scene.intersection(s.id, g), s.area).to_double());
    }
    return p;
}

GrowerPredictor GrowerPredictor::perturbed(const Scene& scene, InstanceId g, double epsilon, std::uint64_t seed) {
    if (!(epsilon >= 0.0)) throw std::invalid_argument("perturbed predictor: epsilon must be non-negative");
    GrowerPredictor p = oracle(scene, g);
    p.mode_ = PredictorMode::PerturbedOracle;
    p.epsilon_ = epsilon;
    const CounterRng stream = CounterRng(seed).child("perturb");
    for (std::size_t i = 0; i < p.table_.size(); ++i) {
        const double u01 = static_cast<double>(stream.at(i) >> 11) * 0x1.0p-53;
        const double noise = (2.0 * u01 - 1.0) * epsilon;
        p.table_[i] = std::clamp(p.table_[i] + noise, 0.0, 1.0);
    }
    return p;
}

GrowerPredictor GrowerPredictor::learned(const RegressionForest& forest, const FeatureContext& ctx) {
    if (forest.dim() != theta_dim(ctx.n_classes())) {
        throw std::invalid_argument("learned grower: forest dimensionality " + std::to_string(forest.dim()) +
                                    " does not match grower features " +
                                    std::to_string(theta_dim(ctx.n_classes())));
    }
    GrowerPredictor p;
    p.mode_ = PredictorMode::Learned;
    p.scene_ = &ctx.scene();
    p.forest_ = &forest;
    p.ctx_ = &ctx;
    return p;
}

GrowerPredictor GrowerPredictor::custom(CustomFn fn) {
    GrowerPredictor p;
    p.mode_ = PredictorMode::Custom;
    p.custom_ = std::move(fn);
    return p;
}

double GrowerPredictor::estimate(SuperpixelId s, const Chunk& c, const RegionStats& c_stats) const {
    switch (mode_) {
        case PredictorMode::Oracle:
        case PredictorMode::PerturbedOracle:
            return table_.at(s);
        case PredictorMode::Learned: {
            thread_local std::vector<double> buf;
            theta_into(*ctx_, s, c_stats, buf);
            return forest_->predict(buf);
        }
        case PredictorMode::Custom:
            return custom_(s, c, c_stats);
    }
    return 0.0;
}

double GrowerPredictor::estimate(SuperpixelId s) const {
    if (mode_ == PredictorMode::Learned) {
        return estimate(s, Chunk(*scene_), ctx_->empty_stats());
    }
    return estimate(s, Chunk(), RegionStats{});
}

GrowthChain chain_from_scores(std::span<const double> scores) {
    std::vector<SuperpixelId> order(scores.size());
    std::iota(order.begin(), order.end(), SuperpixelId{0});
    std::stable_sort(order.begin(), order.end(), [&](SuperpixelId a, SuperpixelId b) { return scores[a] > scores[b]; });
    GrowthChain chain;
    chain.steps = std::move(order);
    chain.scores.reserve(chain.steps.size());
    for (const auto s : chain.steps) chain.scores.push_back(scores[s]);
    return chain;
}

GrowthChain grow_single(const Scene& scene, InstanceId g, const GrowerPredictor& predictor) {
    if (predictor.mode() == PredictorMode::Oracle) {
        // Exact α ordering; doubles are only recorded for reporting.
        const auto ratios = growth_ratios(scene, g);
        GrowthChain chain;
        chain.steps = order_by_alpha(ratios);
        for (const auto s : chain.steps) chain.scores.push_back(ratios[s].alpha().to_double());
        return chain;
    }
    std::vector<double> scores(scene.n_superpixels());
    for (SuperpixelId s = 0; s < scene.n_superpixels(); ++s) scores[s] = predictor.estimate(s);
    return chain_from_scores(scores);
}

std::vector<PixelRatio> chain_ious(const Scene& scene, const GrowthChain& chain, InstanceId g) {
    std::vector<PixelRatio> out;
    out.reserve(chain.size());
    const std::int64_t g_area = (g >= 0 && g < scene.n_instances()) ? scene.instance(g).area : 0;
    std::int64_t inter = 0;
    std::int64_t area = 0;
    for (const auto s : chain.steps) {
        inter += scene.intersection(s, g);
        area += scene.superpixel(s).area;
        out.emplace_back(g_area == 0 ? 0 : inter, g_area == 0 ? 0 : area + g_area - inter);
    }
    return out;
}

std::pair<Chunk, PixelRatio> best_in_chain(const Scene& scene, const GrowthChain& chain, InstanceId g) {
    if (chain.steps.empty()) throw std::invalid_argument("best_in_chain: empty chain");
    const auto ious = chain_ious(scene, chain, g);
    std::size_t best = 0;
    for (std::size_t i = 1; i < ious.size(); ++i) {
        if (ious[i] > ious[best]) best = i;
    }
    return {chain.prefix(scene, best), ious[best]};
}

std::pair<Chunk, PixelRatio> best_chunk_bruteforce(const Scene& scene, InstanceId g) {
    const int n = scene.n_superpixels();
    if (n > kSubsetOracleMaxSuperpixels) {
        throw std::invalid_argument("best_chunk_bruteforce: at most " +
                                    std::to_string(kSubsetOracleMaxSuperpixels) + " superpixels");
    }
    const std::int64_t g_area = scene.instance(g).area;
    // Walk subsets in Gray-code order so each step toggles one superpixel.
    std::int64_t inter = 0;
    std::int64_t area = 0;
    PixelRatio best;
    std::uint32_t best_mask = 0;
    std::uint32_t prev_gray = 0;
    const std::uint32_t count = 1u << n;
    for (std::uint32_t k = 1; k < count; ++k) {
        const std::uint32_t gray = k ^ (k >> 1);
        const std::uint32_t flipped = gray ^ prev_gray;
        const int bit = std::countr_zero(flipped);
        const auto& s = scene.superpixel(bit);
        const std::int64_t sign = (gray & flipped) ? 1 : -1;
        inter += sign * scene.intersection(bit, g);
        area += sign * s.area;
        prev_gray = gray;
        const PixelRatio value(inter, area + g_area - inter);
        if (best_mask == 0 || value > best || (value == best && gray < best_mask)) {
            best = value;
            best_mask = gray;
        }
    }
    Chunk c(scene);
    for (int b = 0; b < n; ++b) {
        if (best_mask & (1u << b)) c.add(scene, b);
    }
    return {c, best};
}

Theorem3Report verify_theorem3(const Scene& scene, InstanceId g, double epsilon, int trials, std::uint64_t seed) {
    if (!(epsilon >= 0.0 && epsilon < 1.0)) throw std::invalid_argument("verify_theorem3: epsilon must lie in [0, 1)");
    Theorem3Report report;
    report.epsilon = epsilon;
    report.trials = trials;
    report.optimum = best_chunk_bruteforce(scene, g).second;
    report.floor = report.optimum.to_double() - 2.0 * epsilon;
    report.min_slack = std::numeric_limits<double>::infinity();
    const CounterRng master(seed);
    for (int t = 0; t < trials; ++t) {
        const auto predictor = GrowerPredictor::perturbed(scene, g, epsilon, master.child(static_cast<std::uint64_t>(t)).key());
        const auto chain = grow_single(scene, g, predictor);
        const PixelRatio best = best_in_chain(scene, chain, g).second;
        const long double slack = static_cast<long double>(best.num()) / best.den() -
                                  static_cast<long double>(report.optimum.num()) / report.optimum.den() +
                                  2.0L * epsilon;
        report.min_slack = std::min(report.min_slack, static_cast<double>(slack));
        if (best < report.optimum && slack < 0) {
            ++report.violations;
            std::string line = "trial " + std::to_string(t) + " best " + format_shortest(best.to_double()) + " scores";
            for (SuperpixelId s = 0; s < scene.n_superpixels(); ++s) line += ' ' + format_shortest(predictor.estimate(s));
            report.failures.push_back(std::move(line));
        }
    }
    return report;
}

CorollaryReport verify_corollary(std::span<const Scene> scenes, const AlphaEstimator& estimator, double eta) {
    if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("verify_corollary: eta must lie in (0, 1)");
    CorollaryReport report;
    report.eta = eta;
    struct Case {
        double optimum;
        double best;
        int n;
    };
    std::vector<Case> cases;
    double sq_error = 0.0;
    std::size_t samples = 0;
    for (const auto& scene : scenes) {
        for (InstanceId g = 0; g < scene.n_instances(); ++g) {
            const auto estimates = estimator(scene, g);
            if (estimates.size() != static_cast<std::size_t>(scene.n_superpixels())) {
                throw std::invalid_argument("verify_corollary: estimator returned wrong length");
            }
            for (SuperpixelId s = 0; s < scene.n_superpixels(); ++s) {
                const double alpha = PixelRatio(scene.intersection(s, g), scene.superpixel(s).area).to_double();
                sq_error += (estimates[s] - alpha) * (estimates[s] - alpha);
                ++samples;
            }
            const PixelRatio optimum = scene.n_superpixels() <= kSubsetOracleMaxSuperpixels
                                           ? best_chunk_bruteforce(scene, g).second
                                           : best_in_chain(scene, grow_single(scene, g, GrowerPredictor::oracle(scene, g)), g).second;
            const PixelRatio best = best_in_chain(scene, chain_from_scores(estimates), g).second;
            cases.push_back({optimum.to_double(), best.to_double(), scene.n_superpixels()});
        }
    }
    report.delta_hat = samples == 0 ? 0.0 : sq_error / static_cast<double>(samples);
    report.cases = static_cast<int>(cases.size());
    report.min_slack = std::numeric_limits<double>::infinity();
    for (const auto& c : cases) {
        const double floor = c.optimum - 2.0 / eta * std::sqrt(c.n * report.delta_hat);
        const double slack = c.best - floor;
        report.min_slack = std::min(report.min_slack, slack);
        if (c.best < c.optimum && slack < 0) ++report.violations;
    }
    return report;
}

std::vector<SuperpixelId> seed_grid(const Scene& scene, int interval) {
    if (interval <= 0) throw std::invalid_argument("seed_grid: interval must be positive");
    std::vector<SuperpixelId> seeds;
    std::vector<char> seen(scene.n_superpixels(), 0);
    for (int row = interval / 2; row < scene.height(); row += interval) {
        for (int col = interval / 2; col < scene.width(); col += interval) {
            const auto s = scene.grid().at(row, col);
            if (!seen[s]) {
                seen[s] = 1;
                seeds.push_back(s);
            }
        }
    }
    return seeds;
}

GrowthChain grow_from_seed(const Scene& scene, const GrowerPredictor& predictor, SuperpixelId seed,
                           int max_chunk_size, const FeatureContext* ctx) {
    if (seed < 0 || seed >= scene.n_superpixels()) {
        throw std::invalid_argument("seed superpixel " + std::to_string(seed) + " out of range");
    }
    if (max_chunk_size <= 0) throw std::invalid_argument("max_chunk_size must be positive");
    GrowthChain chain;
    chain.seed = seed;
    Chunk c(scene);
    RegionStats stats = ctx ? ctx->empty_stats() : RegionStats{};
    auto absorb = [&](SuperpixelId s, double score) {
        c.add(scene, s);
        if (ctx) stats.add(ctx->superpixel_stats(s));
        chain.steps.push_back(s);
        chain.scores.push_back(score);
    };
    absorb(seed, predictor.estimate(seed, c, stats));
    std::vector<char> used(scene.n_superpixels(), 0);
    used[seed] = 1;
    const int limit = std::min(max_chunk_size, scene.n_superpixels());
    while (static_cast<int>(chain.steps.size()) < limit) {
        SuperpixelId best = -1;
        double best_score = 0.0;
        for (SuperpixelId s = 0; s < scene.n_superpixels(); ++s) {
            if (used[s]) continue;
            const double v = predictor.estimate(s, c, stats);
            if (best < 0 || v > best_score) {
                best = s;
                best_score = v;
            }
        }
        used[best] = 1;
        absorb(best, best_score);
    }
    return chain;
}

std::vector<Candidate> grow_multi(const Scene& scene, const GrowerPredictor& predictor,
                                  std::span<const SuperpixelId> seeds, int max_chunk_size,
                                  const FeatureContext* ctx) {
    if (seeds.empty()) throw std::invalid_argument("grow_multi: no seeds");
    for (const auto s : seeds) {
        if (s < 0 || s >= scene.n_superpixels()) {
            throw std::invalid_argument("seed superpixel " + std::to_string(s) + " out of range");
        }
    }
    std::vector<Candidate> out;
    std::unordered_set<std::string> seen;
    for (const auto seed : seeds) {
        const auto chain = grow_from_seed(scene, predictor, seed, max_chunk_size, ctx);
        Chunk c(scene);
        for (const auto s : chain.steps) {
            c.add(scene, s);
            if (seen.insert(c.key()).second) out.push_back({c, seed});
        }
    }
    return out;
}

std::string write_candidates(const std::string& scene_id, std::span<const Candidate> candidates) {
    std::string out;
    for (const auto& cand : candidates) {
        out += "chunk " + scene_id + ' ' + (cand.seed ? std::to_string(*cand.seed) : std::string("-"));
        for (const auto id : cand.chunk.ids()) out += ' ' + std::to_string(id);
        out += '\n';
    }
    return out;
}

std::vector<CandidateRecord> parse_candidates(std::string_view text) {
    std::vector<CandidateRecord> out;
    std::size_t pos = 0;
    int line_no = 0;
    auto parse_id = [&](std::string_view tok) {
        SuperpixelId v = 0;
        const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || ptr != tok.data() + tok.size() || tok.empty()) {
            throw std::invalid_argument("candidates line " + std::to_string(line_no) + ": bad id '" + std::string(tok) + "'");
        }
        return v;
    };
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        const auto line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string_view> tokens;
        std::size_t start = 0;
        while (start < line.size()) {
            auto sp = line.find(' ', start);
            if (sp == std::string_view::npos) sp = line.size();
            if (sp > start) tokens.push_back(line.substr(start, sp - start));
            start = sp + 1;
        }
        if (tokens.size() < 4 || tokens[0] != "chunk") {
            throw std::invalid_argument("candidates line " + std::to_string(line_no) + ": expected 'chunk <scene> <seed|-> <ids...>'");
        }
        CandidateRecord rec;
        rec.scene_id = std::string(tokens[1]);
        if (tokens[2] != "-") rec.seed = parse_id(tokens[2]);
        for (std::size_t t = 3; t < tokens.size(); ++t) rec.ids.push_back(parse_id(tokens[t]));
        out.push_back(std::move(rec));
    }
    return out;
}

Candidate to_candidate(const Scene& scene, const CandidateRecord& record) {
    return {Chunk::from_ids(scene, record.ids), record.seed};
}

}  // namespace vchunk
