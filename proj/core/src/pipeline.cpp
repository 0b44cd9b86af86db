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

#include "vchunk/pipeline.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "vchunk/assignment.hpp"
#include "vchunk/baselines.hpp"
#include "vchunk/csv.hpp"
#include "vchunk/learner.hpp"
#include "vchunk/metrics.hpp"
#include "vchunk/parallel.hpp"
#include "vchunk/rng.hpp"
#include "vchunk/scene_io.hpp"
#include "vchunk/svg.hpp"
#include "vchunk/synth.hpp"

namespace vchunk {
namespace fs = std::filesystem;
namespace {

fs::path data_dir(const fs::path& root, const std::string& split) { return root / "data" / split; }
fs::path candidates_path(const fs::path& root, const std::string& split) {
    return root / "candidates" / (split + ".txt");
}
fs::path grower_model(const fs::path& root) { return root / "models" / "grower.forest"; }
fs::path list_model(const fs::path& root) { return root / "models" / "list.forest"; }
fs::path predictions_path(const fs::path& root) { return root / "predictions" / "test.csv"; }

void echo_config(const PipelineConfig& config, const fs::path& dir) {
    write_text_file(dir / "config.toml", "# effective configuration\n" + render_config(config));
}

std::string fixed(const Rational& q) { return format_fixed(q.get_d(), 6); }

InstanceId seed_owner(const Scene& scene, SuperpixelId seed) {
    InstanceId best = kDummyInstance;
    std::int64_t best_overlap = 0;
    for (InstanceId g = 0; g < scene.n_instances(); ++g) {
        const auto v = scene.intersection(seed, g);
        if (v > best_overlap) {
            best_overlap = v;
            best = g;
        }
    }
    return best;
}

RegressionForest load_forest(const fs::path& path) {
    if (!fs::exists(path)) throw std::runtime_error("missing model " + path.string() + "; train it first");
    return RegressionForest::deserialize(read_text_file(path));
}

std::vector<std::size_t> permutation_order(std::size_t n) {
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), std::size_t{0});
    return p;
}

Rational permutation_max(const ScoreMatrix& m) {
    const std::size_t n = std::max(m.rows(), m.cols());
    auto perm = permutation_order(n);
    Rational best(-1);
    do {
        Rational v(0);
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (perm[i] < m.cols()) v += m.at(i, perm[i]);
        }
        if (v > best) best = v;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

std::uint64_t scene_fingerprint(const Scene& scene) {
    std::uint64_t h = hash_tag("scene");
    h = mix64(h ^ static_cast<std::uint64_t>(scene.width()));
    h = mix64(h ^ static_cast<std::uint64_t>(scene.height()));
    for (const auto label : scene.grid().labels) h = mix64(h ^ static_cast<std::uint64_t>(label));
    for (const auto& g : scene.instances()) {
        for (const auto p : g.mask) h = mix64(h ^ (static_cast<std::uint64_t>(p) << 8 | static_cast<std::uint64_t>(g.id)));
    }
    return h;
}

struct MethodScore {
    std::vector<Rational> slots;
    std::optional<Rational> abo;
    std::optional<Rational> inst_acc;
};

const std::vector<std::string>& method_names() {
    static const std::vector<std::string> names = {"vc",           "greedy",      "cc",        "boxes",
                                                   "intersection", "pool_ceiling", "opt_ceiling", "singletons"};
    return names;
}

std::vector<Chunk> take(std::span<const Chunk> pool, std::span<const std::size_t> order) {
    std::vector<Chunk> out;
    out.reserve(order.size());
    for (const auto i : order) out.push_back(pool[i]);
    return out;
}

MethodScore list_score(std::span<const Chunk> chunks, std::span<const GroundTruthInstance> gt, std::size_t k) {
    MethodScore s;
    const auto top = chunks.first(std::min(k, chunks.size()));
    s.slots = slot_scores(top, gt, k);
    s.abo = abo(chunks, gt);
    s.inst_acc = instance_accuracy(top, gt);
    return s;
}

}  // namespace

SynthConfig synth_config(const PipelineConfig& config) {
    SynthConfig s = config.synth;
    s.seed = config.seed;
    return s;
}

SplitData load_split(const fs::path& root, const std::string& split) {
    const fs::path dir = data_dir(root, split);
    const fs::path manifest = dir / "manifest.txt";
    if (!fs::exists(manifest)) throw std::runtime_error("missing " + manifest.string() + "; run gen first");
    SplitData out;
    for (const auto& entry : read_manifest(read_text_file(manifest))) {
        const std::string text = read_text_file(dir / entry.path);
        if (sha256_hex(text) != entry.sha256) {
            throw std::runtime_error("scene file " + (dir / entry.path).string() + " does not match its manifest hash");
        }
        SceneBundle bundle;
        bundle.id = scene_name(entry.index);
        bundle.scene = read_scene(text);
        bundle.channel = load_channel(dir / (bundle.id + ".channel"));
        bundle.channel.validate(bundle.scene);
        out.scenes.push_back(std::move(bundle));
        out.indices.push_back(entry.index);
    }
    return out;
}

std::vector<Candidate> grow_candidates(const SceneBundle& bundle, const PipelineConfig& config,
                                       const RegressionForest* grower_forest) {
    const Scene& scene = bundle.scene;
    const auto seeds = seed_grid(scene, config.seed_interval);
    if (config.grower == GrowerKind::Learned) {
        if (!grower_forest) throw std::invalid_argument("learned grower needs a trained grower forest");
        const FeatureContext ctx(scene, bundle.channel);
        return grow_multi(scene, GrowerPredictor::learned(*grower_forest, ctx), seeds, config.max_chunk_size, &ctx);
    }
    std::vector<Candidate> out;
    std::unordered_set<std::string> seen;
    const CounterRng noise = CounterRng(config.seed).child("perturbed-grower").child(bundle.id);
    for (const auto seed : seeds) {
        const InstanceId g = seed_owner(scene, seed);
        GrowthChain chain;
        if (g == kDummyInstance) {
            chain.seed = seed;
            chain.steps = {seed};
        } else {
            const auto predictor = config.grower == GrowerKind::Oracle
                                       ? GrowerPredictor::oracle(scene, g)
                                       : GrowerPredictor::perturbed(scene, g, config.epsilon,
                                                                    noise.child(static_cast<std::uint64_t>(seed)).key());
            chain = grow_from_seed(scene, predictor, seed, config.max_chunk_size);
        }
        Chunk c(scene);
        for (const auto s : chain.steps) {
            c.add(scene, s);
            if (seen.insert(c.key()).second) out.push_back({c, seed});
        }
    }
    return out;
}

std::vector<std::vector<Chunk>> load_candidates(const fs::path& root, const std::string& split, const SplitData& data) {
    const fs::path path = candidates_path(root, split);
    if (!fs::exists(path)) throw std::runtime_error("missing " + path.string() + "; run grow first");
    std::unordered_map<std::string, std::size_t> position;
    for (std::size_t i = 0; i < data.scenes.size(); ++i) position[data.scenes[i].id] = i;
    std::vector<std::vector<Chunk>> out(data.scenes.size());
    for (const auto& record : parse_candidates(read_text_file(path))) {
        const auto it = position.find(record.scene_id);
        if (it == position.end()) throw std::runtime_error("candidates reference unknown scene " + record.scene_id);
        out[it->second].push_back(to_candidate(data.scenes[it->second].scene, record).chunk);
    }
    return out;
}

void run_gen(const PipelineConfig& config, const fs::path& root) {
    validate(config);
    const SynthConfig synth = synth_config(config);
    const std::pair<const char*, std::pair<int, int>> splits[] = {{kTrainSplit, {0, config.n_train}},
                                                                  {kTestSplit, {config.n_train, config.n_test}}};
    for (const auto& [split, range] : splits) {
        const fs::path dir = data_dir(root, split);
        const auto entries = generate_dataset(synth, range.first, range.second, dir, config.threads);
        write_text_file(dir / "manifest.txt", write_manifest(entries));
        spdlog::info("gen: wrote {} {} scenes to {}", entries.size(), split, dir.string());
    }
    echo_config(config, root / "data");
}

void run_train_grower(const PipelineConfig& config, const fs::path& root) {
    validate(config);
    const auto train = load_split(root, kTrainSplit);
    GrowerDataConfig gd;
    gd.max_chunk_size = config.max_chunk_size;
    gd.seeds_per_instance = config.seeds_per_instance;
    gd.seed_alpha = config.seed_alpha;
    gd.row_fraction = config.row_fraction;
    gd.seed = config.seed;
    gd.threads = config.threads;
    const auto data = collect_grower_data(train.scenes, gd);
    spdlog::info("train-grower: {} rows of dimension {}", data.size(), data.dim());
    const auto forest = RegressionForest::fit(data, grower_forest_config(config));
    write_text_file(grower_model(root), forest.serialize());
    if (config.dump_datasets) write_text_file(root / "models" / "grower_data.csv", data.to_csv());
    echo_config(config, root / "models");
}

void run_grow(const PipelineConfig& config, const fs::path& root) {
    validate(config);
    std::optional<RegressionForest> forest;
    if (config.grower == GrowerKind::Learned) forest = load_forest(grower_model(root));
    for (const char* split : {kTrainSplit, kTestSplit}) {
        const auto data = load_split(root, split);
        std::vector<std::string> parts(data.scenes.size());
        std::vector<std::size_t> counts(data.scenes.size());
        parallel_for(
            data.scenes.size(),
            [&](std::size_t i) {
                const auto cands = grow_candidates(data.scenes[i], config, forest ? &*forest : nullptr);
                counts[i] = cands.size();
                parts[i] = write_candidates(data.scenes[i].id, cands);
            },
            config.threads);
        std::string text;
        for (const auto& p : parts) text += p;
        write_text_file(candidates_path(root, split), text);
        const auto total = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
        spdlog::info("grow: {} candidates over {} {} scenes", total, data.scenes.size(), split);
    }
    echo_config(config, root / "candidates");
}

void run_train_list(const PipelineConfig& config, const fs::path& root) {
    validate(config);
    const auto train = load_split(root, kTrainSplit);
    const auto cands = load_candidates(root, kTrainSplit, train);
    const auto data = collect_list_data(train.scenes, cands, static_cast<std::size_t>(config.k), config.threads);
    spdlog::info("train-list: {} rows of dimension {}", data.size(), data.dim());
    const auto forest = RegressionForest::fit(data, list_forest_config(config));
    write_text_file(list_model(root), forest.serialize());
    if (config.dump_datasets) write_text_file(root / "models" / "list_data.csv", data.to_csv());
    echo_config(config, root / "models");
}

void run_predict(const PipelineConfig& config, const fs::path& root) {
    validate(config);
    const auto test = load_split(root, kTestSplit);
    const auto cands = load_candidates(root, kTestSplit, test);
    std::optional<RegressionForest> forest;
    if (config.list == ListKind::Learned) forest = load_forest(list_model(root));
    std::vector<std::string> rows(test.scenes.size());
    parallel_for(
        test.scenes.size(),
        [&](std::size_t i) {
            const FeatureContext ctx(test.scenes[i].scene, test.scenes[i].channel);
            PredictedList list;
            if (forest) {
                list = predict_list(ctx, cands[i], ForestListScorer(*forest), static_cast<std::size_t>(config.k));
            } else {
                const GroundTruthListScorer scorer(test.scenes[i].scene, cands[i], ctx.n_classes());
                list = predict_list(ctx, cands[i], scorer, static_cast<std::size_t>(config.k));
            }
            for (std::size_t r = 0; r < list.order.size(); ++r) {
                rows[i] += csv_join({test.scenes[i].id, std::to_string(r + 1), std::to_string(list.order[r]),
                                     format_fixed(list.scores[r], 6)}) +
                           "\n";
            }
        },
        config.threads);
    std::string text = "scene,rank,candidate,score\n";
    for (const auto& r : rows) text += r;
    write_text_file(predictions_path(root), text);
    echo_config(config, root / "predictions");
    spdlog::info("predict: lists for {} scenes", test.scenes.size());
}

void run_eval(const PipelineConfig& config, const fs::path& root) {
    validate(config);
    const auto test = load_split(root, kTestSplit);
    const auto cands = load_candidates(root, kTestSplit, test);
    const std::size_t k = static_cast<std::size_t>(config.k);
    std::vector<std::vector<std::size_t>> predicted(test.scenes.size());
    {
        const fs::path path = predictions_path(root);
        if (!fs::exists(path)) throw std::runtime_error("missing " + path.string() + "; run predict first");
        std::unordered_map<std::string, std::size_t> position;
        for (std::size_t i = 0; i < test.scenes.size(); ++i) position[test.scenes[i].id] = i;
        const auto table = parse_csv(read_text_file(path));
        for (std::size_t r = 1; r < table.size(); ++r) {
            if (table[r].size() != 4) throw std::runtime_error("predictions row " + std::to_string(r) + " malformed");
            const auto it = position.find(table[r][0]);
            if (it == position.end()) throw std::runtime_error("predictions reference unknown scene " + table[r][0]);
            const auto idx = static_cast<std::size_t>(std::stoull(table[r][2]));
            if (idx >= cands[it->second].size()) throw std::runtime_error("prediction index out of range");
            predicted[it->second].push_back(idx);
        }
    }
    const SynthConfig synth = synth_config(config);
    std::vector<std::map<std::string, MethodScore>> per_scene(test.scenes.size());
    std::vector<int> adjacent(test.scenes.size(), 0);
    std::vector<int> cc_merged(test.scenes.size(), 0);
    parallel_for(
        test.scenes.size(),
        [&](std::size_t i) {
            const Scene& scene = test.scenes[i].scene;
            const auto& channel = test.scenes[i].channel;
            const auto gt = scene.instances();
            auto& out = per_scene[i];
            out["vc"] = list_score(take(cands[i], predicted[i]), gt, k);
            const auto greedy = greedy_list(cands[i], gt, k);
            out["greedy"] = list_score(take(cands[i], greedy.order()), gt, k);
            const auto cc = baseline_cc(scene, channel, synth.target_class);
            out["cc"] = list_score(cc, gt, k);
            const auto boxes = synthetic_detections(scene, synth, test.indices[i]);
            out["boxes"] = list_score(baseline_boxes(scene, boxes), gt, k);
            out["intersection"] = list_score(baseline_intersection(scene, channel, boxes, synth.target_class), gt, k);
            const auto rows = scene_oracle_rows(scene, cands[i], k, config.oracle_mode);
            out["pool_ceiling"] = MethodScore{rows.grower, abo(cands[i], gt), std::nullopt};
            out["opt_ceiling"] = MethodScore{rows.optimum, abo(optimal_chunks(scene, config.oracle_mode), gt), std::nullopt};
            out["singletons"] = MethodScore{{}, abo(singleton_candidates(scene), gt), std::nullopt};
            bool touching = false;
            for (InstanceId a = 0; a < scene.n_instances() && !touching; ++a) {
                for (InstanceId b = a + 1; b < scene.n_instances() && !touching; ++b) touching = instances_touch(scene, a, b);
            }
            adjacent[i] = touching;
            cc_merged[i] = touching && static_cast<int>(cc.size()) < scene.n_instances();
        },
        config.threads);

    std::string results = "method,scene,slot,score\n";
    std::string summary = "method,metric,value\n";
    const auto n = static_cast<long>(test.scenes.size());
    for (const auto& method : method_names()) {
        std::vector<Rational> slot_sum(k, Rational(0));
        Rational abo_sum(0);
        Rational acc_sum(0);
        bool has_slots = false;
        bool has_abo = false;
        bool has_acc = false;
        for (std::size_t i = 0; i < test.scenes.size(); ++i) {
            const auto& s = per_scene[i].at(method);
            const auto& id = test.scenes[i].id;
            for (std::size_t j = 0; j < s.slots.size(); ++j) {
                results += csv_join({method, id, std::to_string(j + 1), fixed(s.slots[j])}) + "\n";
                slot_sum[j] += s.slots[j];
                has_slots = true;
            }
            if (s.abo) {
                results += csv_join({method, id, "abo", fixed(*s.abo)}) + "\n";
                abo_sum += *s.abo;
                has_abo = true;
            }
            if (s.inst_acc) {
                results += csv_join({method, id, "inst_acc", fixed(*s.inst_acc)}) + "\n";
                acc_sum += *s.inst_acc;
                has_acc = true;
            }
        }
        if (n == 0) continue;
        if (has_slots) {
            for (std::size_t j = 0; j < k; ++j) {
                summary += csv_join({method, "slot_" + std::to_string(j + 1), fixed(slot_sum[j] / n)}) + "\n";
            }
        }
        if (has_abo) summary += csv_join({method, "abo", fixed(abo_sum / n)}) + "\n";
        if (has_acc) summary += csv_join({method, "inst_acc", fixed(acc_sum / n)}) + "\n";
    }
    const long n_adjacent = std::accumulate(adjacent.begin(), adjacent.end(), 0L);
    const long n_merged = std::accumulate(cc_merged.begin(), cc_merged.end(), 0L);
    summary += csv_join({"dataset", "scenes", std::to_string(n)}) + "\n";
    summary += csv_join({"dataset", "adjacent_scenes", std::to_string(n_adjacent)}) + "\n";
    summary += csv_join({"cc", "fewer_chunks_than_instances_rate",
                         format_fixed(n_adjacent == 0 ? 0.0 : static_cast<double>(n_merged) / n_adjacent, 6)}) +
               "\n";
    std::size_t total_candidates = 0;
    for (const auto& c : cands) total_candidates += c.size();
    summary += csv_join({"pool", "mean_candidates",
                         format_fixed(n == 0 ? 0.0 : static_cast<double>(total_candidates) / n, 6)}) +
               "\n";
    write_text_file(root / "eval" / "results.csv", results);
    write_text_file(root / "eval" / "summary.csv", summary);
    echo_config(config, root / "eval");
    spdlog::info("eval: {} scenes, summary in {}", n, (root / "eval" / "summary.csv").string());
}

void run_plot(const fs::path& root) {
    const fs::path path = root / "eval" / "results.csv";
    if (!fs::exists(path)) throw std::runtime_error("missing " + path.string() + "; run eval first");
    const auto table = parse_csv(read_text_file(path));
    std::vector<std::string> order;
    std::map<std::string, std::map<int, std::pair<double, int>>> slots;
    std::map<std::string, std::pair<double, int>> abo_mean;
    for (std::size_t r = 1; r < table.size(); ++r) {
        const auto& row = table[r];
        if (row.size() != 4) throw std::runtime_error("results row " + std::to_string(r) + " malformed");
        if (std::find(order.begin(), order.end(), row[0]) == order.end()) order.push_back(row[0]);
        const double v = parse_double(row[3]);
        if (row[2] == "abo") {
            abo_mean[row[0]].first += v;
            abo_mean[row[0]].second += 1;
        } else if (row[2] != "inst_acc") {
            auto& cell = slots[row[0]][std::stoi(row[2])];
            cell.first += v;
            cell.second += 1;
        }
    }
    std::vector<Series> series;
    std::vector<std::pair<std::string, double>> bars;
    for (const auto& method : order) {
        if (slots.count(method)) {
            Series s{method, {}};
            for (const auto& [slot, cell] : slots[method]) s.values.push_back(cell.first / cell.second);
            series.push_back(std::move(s));
        }
        if (abo_mean.count(method)) bars.emplace_back(method, abo_mean[method].first / abo_mean[method].second);
    }
    write_text_file(root / "eval" / "slots.svg", svg_line_chart("Mean list quality by slot", "list length", "f(L[0:i])", series));
    write_text_file(root / "eval" / "abo.svg", svg_bar_chart("Average best overlap", "ABO", bars));
}

void run_all(const PipelineConfig& config, const fs::path& root) {
    run_gen(config, root);
    if (config.grower == GrowerKind::Learned) run_train_grower(config, root);
    run_grow(config, root);
    if (config.list == ListKind::Learned) run_train_list(config, root);
    run_predict(config, root);
    run_eval(config, root);
}

bool VerifyResult::ok() const {
    return std::all_of(lines.begin(), lines.end(), [](const VerifyLine& l) { return l.passed; });
}

VerifyResult run_verify(const PipelineConfig& config, const fs::path& root) {
    validate(config);
    VerifyResult result;
    const fs::path dir = root / "verify";
    const fs::path failures = dir / "failures";
    const CounterRng master = CounterRng(config.seed).child("verify");

    {
        VerifyLine line{"hungarian_vs_permutations", config.verify_hungarian, 0, true, ""};
        const CounterRng rng = master.child("hungarian");
        for (int t = 0; t < config.verify_hungarian; ++t) {
            CounterRng draw = rng.child(static_cast<std::uint64_t>(t));
            const auto rows = static_cast<std::size_t>(draw.uniform_int(1, 6));
            const auto cols = static_cast<std::size_t>(draw.uniform_int(1, 6));
            ScoreMatrix m(rows, cols);
            for (std::size_t i = 0; i < rows; ++i) {
                for (std::size_t j = 0; j < cols; ++j) {
                    const long den = static_cast<long>(draw.uniform_int(1, 12));
                    Rational q(static_cast<long>(draw.uniform_int(0, den)), den);
                    q.canonicalize();
                    m.at(i, j) = q;
                }
            }
            if (hungarian_value(m) != permutation_max(m)) ++line.violations;
        }
        line.passed = line.violations == 0;
        result.lines.push_back(line);
    }

    {
        VerifyLine bound{"theorem1_half_bound", 0, 0, true, ""};
        VerifyLine prefix{"theorem1_prefix_recursion", config.verify_theorem1, 0, true, ""};
        const CounterRng rng = master.child("theorem1");
        std::string csv;
        for (int t = 0; t < config.verify_theorem1; ++t) {
            CounterRng draw = rng.child(static_cast<std::uint64_t>(t));
            const Scene scene = random_small_scene(draw.child("scene"), 10, 10, static_cast<int>(draw.uniform_int(3, 12)),
                                                   static_cast<int>(draw.uniform_int(1, 4)));
            const auto cands = random_chunks(scene, static_cast<std::size_t>(draw.uniform_int(1, 12)), draw.child("chunks"));
            const auto k = static_cast<std::size_t>(draw.uniform_int(1, 4));
            const auto report = verify_theorem1(cands, scene.instances(), k);
            bound.cases += static_cast<long long>(report.prefixes.size());
            bool failed = !report.prefix_property;
            if (!report.prefix_property) ++prefix.violations;
            for (const auto& p : report.prefixes) {
                if (!p.holds) {
                    ++bound.violations;
                    failed = true;
                }
            }
            if (failed) {
                const std::string id = "theorem1_" + std::to_string(t);
                save_scene(scene, failures / (id + ".scene"));
                for (const auto& p : report.prefixes) csv += theorem1_csv_line(id, p) + "\n";
            }
        }
        if (!csv.empty()) write_text_file(failures / "theorem1.csv", "scene_id,prefix,f_greedy,f_opt,ratio\n" + csv);
        bound.passed = bound.violations == 0;
        prefix.passed = prefix.violations == 0;
        result.lines.push_back(bound);
        result.lines.push_back(prefix);
    }

    {
        VerifyLine line{"theorem2_chain_optimum", 0, 0, true, ""};
        const CounterRng rng = master.child("theorem2");
        for (int t = 0; t < config.verify_theorem2; ++t) {
            CounterRng draw = rng.child(static_cast<std::uint64_t>(t));
            const Scene scene = random_small_scene(draw.child("scene"), 12, 12, static_cast<int>(draw.uniform_int(2, 15)),
                                                   static_cast<int>(draw.uniform_int(1, 3)));
            for (InstanceId g = 0; g < scene.n_instances(); ++g) {
                ++line.cases;
                const auto chain = grow_single(scene, g, GrowerPredictor::oracle(scene, g));
                if (best_in_chain(scene, chain, g).second != best_chunk_bruteforce(scene, g).second) {
                    ++line.violations;
                    save_scene(scene, failures / ("theorem2_" + std::to_string(t) + ".scene"));
                }
            }
        }
        line.passed = line.violations == 0;
        result.lines.push_back(line);
    }

    {
        std::vector<Scene> scenes;
        const CounterRng rng = master.child("theorem3");
        for (int t = 0; t < config.verify_theorem3; ++t) {
            CounterRng draw = rng.child(static_cast<std::uint64_t>(t));
            scenes.push_back(random_small_scene(draw.child("scene"), 12, 12, static_cast<int>(draw.uniform_int(2, 15)),
                                                static_cast<int>(draw.uniform_int(1, 3))));
        }
        for (const double eps : {0.01, 0.05, 0.1}) {
            VerifyLine line{"theorem3_eps_" + format_shortest(eps), 0, 0, true, ""};
            double min_slack = std::numeric_limits<double>::infinity();
            for (std::size_t t = 0; t < scenes.size(); ++t) {
                for (InstanceId g = 0; g < scenes[t].n_instances(); ++g) {
                    const auto seed = rng.child("perturb").child(t).child(static_cast<std::uint64_t>(g)).key();
                    const auto report = verify_theorem3(scenes[t], g, eps, config.verify_perturbations, seed);
                    line.cases += report.trials;
                    line.violations += report.violations;
                    min_slack = std::min(min_slack, report.min_slack);
                    if (!report.ok()) {
                        const std::string id = "theorem3_" + std::to_string(t) + "_" + std::to_string(g);
                        save_scene(scenes[t], failures / (id + ".scene"));
                        std::string dump;
                        for (const auto& f : report.failures) dump += f + "\n";
                        write_text_file(failures / (id + ".txt"), dump);
                    }
                }
            }
            line.detail = "min_slack=" + format_fixed(min_slack, 6);
            line.passed = line.violations == 0;
            result.lines.push_back(line);
        }
        constexpr double kCorollaryNoise = 0.2;
        const AlphaEstimator estimator = [&](const Scene& scene, InstanceId g) {
            const auto key = CounterRng(scene_fingerprint(scene)).child(static_cast<std::uint64_t>(g)).key();
            const auto p = GrowerPredictor::perturbed(scene, g, kCorollaryNoise, key);
            std::vector<double> v(scene.n_superpixels());
            for (SuperpixelId s = 0; s < scene.n_superpixels(); ++s) v[s] = p.estimate(s);
            return v;
        };
        for (const double eta : {0.5, 0.25}) {
            const auto report = verify_corollary(scenes, estimator, eta);
            VerifyLine line{"corollary_eta_" + format_shortest(eta), report.cases, report.violations, report.ok(),
                            "rate=" + format_fixed(report.violation_rate(), 6) +
                                " delta_hat=" + format_fixed(report.delta_hat, 6)};
            result.lines.push_back(line);
        }
    }

    std::string csv = "check,cases,violations,passed,detail\n";
    for (const auto& l : result.lines) {
        csv += csv_join({l.check, std::to_string(l.cases), std::to_string(l.violations), l.passed ? "true" : "false",
                         l.detail}) +
               "\n";
    }
    write_text_file(dir / "report.csv", csv);
    echo_config(config, dir);
    return result;
}

double summary_value(const fs::path& root, const std::string& method, const std::string& metric) {
    const auto table = parse_csv(read_text_file(root / "eval" / "summary.csv"));
    for (std::size_t r = 1; r < table.size(); ++r) {
        if (table[r].size() == 3 && table[r][0] == method && table[r][1] == metric) return parse_double(table[r][2]);
    }
    throw std::runtime_error("summary has no " + method + "/" + metric);
}

}  // namespace vchunk
