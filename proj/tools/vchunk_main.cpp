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

#include <CLI11.hpp>
#include <spdlog/sinks/basic_file_sink.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <filesystem>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "vchunk/config.hpp"
#include "vchunk/pipeline.hpp"
#include "vchunk/scene_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitVerification = 2;
constexpr int kExitConfig = 3;

struct Options {
    std::string config_file;
    std::string out = ".";
    std::vector<std::string> sets;
    std::string seed;
    std::string threads;
    std::string grower;
    std::string list;
    std::string k;
};

vchunk::PipelineConfig resolve(const Options& opt) {
    vchunk::PipelineConfig config;
    if (!opt.config_file.empty()) {
        if (!std::filesystem::exists(opt.config_file)) {
            throw vchunk::ConfigError("config file " + opt.config_file + " not found");
        }
        vchunk::apply_config_text(config, vchunk::read_text_file(opt.config_file));
    }
    for (const auto& s : opt.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw vchunk::ConfigError("--set expects key=value, got '" + s + "'");
        vchunk::apply_setting(config, s.substr(0, eq), s.substr(eq + 1));
    }
    if (!opt.seed.empty()) vchunk::apply_setting(config, "seed", opt.seed);
    if (!opt.threads.empty()) vchunk::apply_setting(config, "threads", opt.threads);
    if (!opt.grower.empty()) vchunk::apply_setting(config, "grower.predictor", opt.grower);
    if (!opt.list.empty()) vchunk::apply_setting(config, "list.predictor", opt.list);
    if (!opt.k.empty()) vchunk::apply_setting(config, "list.k", opt.k);
    vchunk::validate(config);
    return config;
}

void setup_logging(const std::filesystem::path& out, const std::string& command) {
    std::vector<spdlog::sink_ptr> sinks;
    sinks.push_back(std::make_shared<spdlog::sinks::stderr_color_sink_mt>());
    std::filesystem::create_directories(out / "logs");
    sinks.push_back(std::make_shared<spdlog::sinks::basic_file_sink_mt>((out / "logs" / (command + ".log")).string(), true));
    auto logger = std::make_shared<spdlog::logger>("vchunk", sinks.begin(), sinks.end());
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%Y-%m-%d %H:%M:%S] [%l] %v");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"vchunk: region-growing chunk proposals and diverse list prediction on synthetic scenes"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("-c,--config", opt.config_file, "TOML-style configuration file");
        sub->add_option("-o,--out", opt.out, "Working directory")->capture_default_str();
        sub->add_option("--set", opt.sets, "Override a setting, e.g. --set grower.max_chunk_size=24");
        sub->add_option("--seed", opt.seed, "Master seed");
        sub->add_option("--threads", opt.threads, "Worker threads (0 = hardware concurrency)");
    };

    struct Command {
        const char* name;
        const char* help;
    };
    const Command commands[] = {
        {"gen", "Generate the synthetic train/test scenes and manifests"},
        {"train-grower", "Collect oracle rollouts and fit the grower forest"},
        {"grow", "Produce candidate chunks for every scene"},
        {"train-list", "Collect greedy rollouts and fit the list forest"},
        {"predict", "Predict a list of chunks for every test scene"},
        {"eval", "Score all methods and write results.csv and summary.csv"},
        {"verify", "Run the property harnesses; exit code 2 on any violation"},
        {"plot", "Render SVG charts from eval/results.csv"},
        {"all", "gen, train-grower, grow, train-list, predict and eval in sequence"},
    };
    std::vector<CLI::App*> subs;
    for (const auto& c : commands) {
        auto* sub = app.add_subcommand(c.name, c.help);
        add_common(sub);
        const std::string name = c.name;
        if (name == "grow" || name == "all" || name == "train-grower") {
            sub->add_option("--predictor", opt.grower, "Grower predictor: oracle, perturbed or learned");
        }
        if (name == "predict" || name == "all" || name == "train-list" || name == "eval") {
            sub->add_option("--list-predictor", opt.list, "List predictor: oracle or learned");
            sub->add_option("-k", opt.k, "List length");
        }
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    std::string command;
    for (auto* sub : subs) {
        if (sub->parsed()) command = sub->get_name();
    }
    const std::filesystem::path out = opt.out;
    try {
        const auto config = resolve(opt);
        setup_logging(out, command);
        if (command == "gen") vchunk::run_gen(config, out);
        else if (command == "train-grower") vchunk::run_train_grower(config, out);
        else if (command == "grow") vchunk::run_grow(config, out);
        else if (command == "train-list") vchunk::run_train_list(config, out);
        else if (command == "predict") vchunk::run_predict(config, out);
        else if (command == "eval") vchunk::run_eval(config, out);
        else if (command == "plot") vchunk::run_plot(out);
        else if (command == "all") vchunk::run_all(config, out);
        else if (command == "verify") {
            const auto result = vchunk::run_verify(config, out);
            for (const auto& line : result.lines) {
                std::cout << (line.passed ? "PASS " : "FAIL ") << line.check << " cases=" << line.cases
                          << " violations=" << line.violations << (line.detail.empty() ? "" : " " + line.detail) << "\n";
            }
            if (!result.ok()) return kExitVerification;
        }
    } catch (const vchunk::ConfigError& e) {
        std::cerr << "vchunk: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "vchunk " << command << ": " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitOk;
}
