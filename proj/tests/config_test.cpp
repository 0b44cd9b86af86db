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

#include <string>

#include "doctest.h"
#include "vchunk/config.hpp"
#include "vchunk/csv.hpp"
#include "vchunk/rational.hpp"
#include "vchunk/svg.hpp"

using namespace vchunk;

TEST_CASE("config file syntax") {
    const auto kv = parse_config_text(
        "# comment\nseed = 7\n\n[synth]\nwidth = 96 # trailing\nshape = \"rectangles\"\n[grower]\npredictor=oracle\n");
    CHECK(kv.at("seed") == "7");
    CHECK(kv.at("synth.width") == "96");
    CHECK(kv.at("synth.shape") == "rectangles");
    CHECK(kv.at("grower.predictor") == "oracle");
    CHECK_THROWS_AS(parse_config_text("[broken\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("just words\n"), ConfigError);
}

TEST_CASE("settings apply and validate") {
    PipelineConfig c;
    apply_config_text(c, "seed = 9\n[synth]\nn_superpixels = 50\n[list]\nk = 3\npredictor = oracle\n");
    CHECK(c.seed == 9);
    CHECK(c.synth.n_superpixels == 50);
    CHECK(c.k == 3);
    CHECK(c.list == ListKind::Oracle);
    apply_setting(c, "eval.oracle_mode", "exact");
    CHECK(c.oracle_mode == OracleMode::Exact);
    apply_setting(c, "output.dump_datasets", "true");
    CHECK(c.dump_datasets);
    CHECK_THROWS_AS(apply_setting(c, "grower.nonsense", "1"), ConfigError);
    CHECK_THROWS_AS(apply_setting(c, "list.k", "three"), ConfigError);
    CHECK_THROWS_AS(apply_setting(c, "grower.predictor", "magic"), ConfigError);
    CHECK_NOTHROW(validate(c));
    c.k = 0;
    CHECK_THROWS_AS(validate(c), ConfigError);
    c = PipelineConfig{};
    c.synth.adjacency = 2.0;
    CHECK_THROWS_AS(validate(c), ConfigError);
}

TEST_CASE("defaults") {
    const PipelineConfig c;
    CHECK(c.max_chunk_size == 40);
    CHECK(c.k == 5);
    CHECK(c.list_forest.n_trees == 50);
    CHECK(c.list_forest.max_depth == 12);
    CHECK(c.list_forest.min_samples_leaf == 5);
    CHECK(c.synth.box_jitter == 0.05);
    CHECK(c.synth.drop_probability == 0.1);
    CHECK(c.synth.duplicate_probability == 0.05);
}

TEST_CASE("rendered config parses back to itself") {
    PipelineConfig c;
    apply_config_text(c, "seed = 3\n[grower]\nepsilon = 0.125\npredictor = perturbed\n[synth]\nshape = rectangles\n");
    const auto text = render_config(c);
    PipelineConfig back;
    apply_config_text(back, text);
    CHECK(render_config(back) == text);
    CHECK(back.grower == GrowerKind::Perturbed);
    CHECK(back.epsilon == 0.125);
    CHECK(grower_forest_config(c).seed == grower_forest_config(back).seed);
    CHECK(grower_forest_config(c).seed != list_forest_config(c).seed);
}

TEST_CASE("csv quoting") {
    CHECK(csv_escape("plain") == "plain");
    CHECK(csv_escape("a,b") == "\"a,b\"");
    CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv_join({"x", "y,z", ""}) == "x,\"y,z\",");
    const auto rows = parse_csv("a,\"b,c\",\"line\nbreak\"\r\n1,\"q\"\"uote\",3\n");
    REQUIRE(rows.size() == 2);
    CHECK(rows[0][1] == "b,c");
    CHECK(rows[0][2] == "line\nbreak");
    CHECK(rows[1][1] == "q\"uote");
    CHECK(parse_csv("").empty());
    CHECK(parse_double("0.25") == 0.25);
    CHECK_THROWS(parse_double("abc"));
}

TEST_CASE("fixed number formatting") {
    CHECK(format_fixed(0.5) == "0.500000");
    CHECK(format_fixed(1.0 / 3.0, 3) == "0.333");
    CHECK(format_shortest(0.1) == "0.1");
}

TEST_CASE("svg charts") {
    const auto line = svg_line_chart("slots <mean>", "slot", "f", {{"vc", {0.5, 0.9}}, {"cc", {0.4, 0.4}}});
    CHECK(line.find("width=\"800\"") != std::string::npos);
    CHECK(line.find("height=\"500\"") != std::string::npos);
    CHECK(line.find("slots &lt;mean&gt;") != std::string::npos);
    CHECK(line.find("<polyline") != std::string::npos);
    const auto bars = svg_bar_chart("abo", "abo", {{"a&b", 0.5}});
    CHECK(bars.find("a&amp;b") != std::string::npos);
    CHECK(xml_escape("\"<") == "&quot;&lt;");
}
