// Copyright 2026 The qcut Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include "qcut/config.h"
#include "qcut/error.h"

namespace qcut {
namespace {

std::string parse_error(const std::string &text) {
    CliConfig cfg;
    try {
        parse_config(text, cfg);
    } catch (const QcutError &e) {
        EXPECT_EQ(e.code(), ErrorCode::Parse);
        return e.what();
    }
    ADD_FAILURE() << "accepted: " << text;
    return "";
}

TEST(IntList, Forms) {
    EXPECT_EQ(parse_int_list("4"), (std::vector<uint64_t>{4}));
    EXPECT_EQ(parse_int_list("1..4"), (std::vector<uint64_t>{1, 2, 3, 4}));
    EXPECT_EQ(parse_int_list("4..16:2"), (std::vector<uint64_t>{4, 6, 8, 10, 12, 14, 16}));
    EXPECT_EQ(parse_int_list("3, 8..9, 20"), (std::vector<uint64_t>{3, 8, 9, 20}));
    for (const char *bad : {"", "x", "4..", "..4", "5..2", "1..4:0", "-1"}) {
        EXPECT_THROW(parse_int_list(bad), QcutError) << bad;
    }
}

TEST(ParseConfig, SetsEveryKindOfValue) {
    CliConfig cfg;
    parse_config(
        "# sweep grid\n"
        "families = ghz, random\n"
        "widths = 4..8:2   # even widths\n"
        "seeds = 1..3\n"
        "strategies = no_cut,fitv3\n"
        "\n"
        "noise.p2 = 0.02\n"
        "budget.overhead_cap = 1e4\n"
        "presets = 2:0:7, 3:1:9\n"
        "observable_family = ghz_stabilizers\n"
        "explain = true\n"
        "output_dir = /tmp/x\n",
        cfg);
    const SweepConfig &s = cfg.sweep;
    EXPECT_EQ(s.families, (std::vector<Family>{Family::GHZ, Family::Random}));
    EXPECT_EQ(s.widths, (std::vector<uint32_t>{4, 6, 8}));
    EXPECT_EQ(s.seeds, (std::vector<uint64_t>{1, 2, 3}));
    EXPECT_EQ(s.strategies, (std::vector<Strategy>{Strategy::NoCut, Strategy::Fitv3}));
    EXPECT_DOUBLE_EQ(s.noise.p2, 0.02);
    EXPECT_DOUBLE_EQ(s.budget.overhead_cap, 1e4);
    ASSERT_EQ(s.presets.size(), 2u);
    EXPECT_EQ(s.presets[1].partitions, 3u);
    EXPECT_EQ(s.presets[1].tolerance, 1u);
    EXPECT_EQ(s.presets[1].seed, 9u);
    EXPECT_EQ(s.observable_family, ObservableFamily::GhzStabilizers);
    EXPECT_TRUE(s.explain);
    EXPECT_EQ(cfg.output_dir, "/tmp/x");
}

TEST(ParseConfig, ErrorsNameLineAndKey) {
    auto msg = parse_error("widths = 4\nseeds = 1\nbudget.q_maxx = 3\n");
    EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
    EXPECT_NE(msg.find("budget.q_maxx"), std::string::npos) << msg;

    msg = parse_error("# c\nnoise.p1 = lots\n");
    EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
    EXPECT_NE(msg.find("noise.p1"), std::string::npos) << msg;

    EXPECT_NE(parse_error("widths 4\n").find("line 1"), std::string::npos);
    EXPECT_NE(parse_error("families = ghz, bogus\n").find("families"), std::string::npos);
    EXPECT_NE(parse_error("presets = 2:0\n").find("presets"), std::string::npos);
    EXPECT_NE(parse_error("workers = -2\n").find("workers"), std::string::npos);
}

TEST(ParseConfig, EveryKeyIsAccepted) {
    // A formatted default config mentions each key exactly once.
    const std::string text = "\n" + format_config(CliConfig{});
    for (const auto &key : config_keys()) {
        EXPECT_NE(text.find("\n" + key + " = "), std::string::npos) << key;
    }
}

TEST(FormatConfig, RoundTrip) {
    CliConfig cfg;
    cfg.sweep.families = {Family::QFT, Family::Brickwork};
    cfg.sweep.widths = {5, 9};
    cfg.sweep.seeds = {11, 12};
    cfg.sweep.strategies = {Strategy::Auto};
    cfg.sweep.noise.p1 = 0.1 / 3;
    cfg.sweep.weights.balance = 0.7;
    cfg.sweep.presets = {{3, 2, 0xFFFFFFFFFFFFFFFFULL}};
    cfg.sweep.master_seed = 99;
    cfg.sweep.workers = 3;
    cfg.sweep.baseline_shots = 0;
    cfg.output_dir = "out dir";
    const std::string text = format_config(cfg);
    CliConfig back;
    parse_config(text, back);
    EXPECT_EQ(format_config(back), text);
    EXPECT_EQ(back.sweep.noise.p1, cfg.sweep.noise.p1);
    EXPECT_EQ(back.sweep.presets[0].seed, 0xFFFFFFFFFFFFFFFFULL);
    EXPECT_EQ(back.output_dir, "out dir");
}

}  // namespace
}  // namespace qcut
