// Copyright 2026 The echoqem Authors
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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>
#include <tuple>

#include <gtest/gtest.h>

#include "echoqem/datagen/datagen.hpp"
#include "echoqem/datagen/dataset_io.hpp"
#include "echoqem/errors.hpp"

namespace echoqem::datagen {
namespace {

GenerationConfig small_echo(int n_states, NoiseModel noise) {
    GenerationConfig c;
    c.n_states = n_states;
    c.time_points = default_echo_time_points();
    c.noise = noise;
    c.master_seed = 77;
    return c;
}

double mean(const MagnetizationVector &v) {
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

TEST(TimeGrids, Defaults) {
    const auto t = default_echo_time_points();
    ASSERT_EQ(t.size(), 5u);
    EXPECT_DOUBLE_EQ(t[2], std::numbers::pi / 4);
    const auto g = uniform_time_grid(20, std::numbers::pi);
    ASSERT_EQ(g.size(), 20u);
    EXPECT_EQ(g.front(), 0.0);
    EXPECT_DOUBLE_EQ(g.back(), std::numbers::pi);
}

TEST(EchoDataset, NoiselessEchoReturnsInitialMagnetizations) {
    const EchoDataset ds = generate_echo_dataset(small_echo(12, NoiseModel{}));
    ASSERT_EQ(ds.records.size(), 60u);
    double worst = 0;
    for (const auto &r : ds.records) {
        for (std::size_t j = 0; j < 6; ++j) {
            worst = std::max(worst, std::abs(r.m_noisy[j] - r.m_ideal[j]));
        }
    }
    EXPECT_LT(worst, 1e-9);
}

TEST(EchoDataset, LayoutAndInvariants) {
    const EchoDataset ds = generate_echo_dataset(small_echo(6, NoiseModel{1e-4, 0.01}));
    ASSERT_EQ(ds.records.size(), 30u);
    std::set<std::tuple<int, int, RecordMode>> keys;
    for (std::size_t k = 0; k < ds.records.size(); ++k) {
        const auto &r = ds.records[k];
        EXPECT_EQ(r.state_id, static_cast<int>(k / 5));
        EXPECT_EQ(r.time_index, static_cast<int>(k % 5));
        EXPECT_EQ(r.mode, RecordMode::kEcho);
        EXPECT_FALSE(r.m_exact.has_value());
        EXPECT_EQ(r.prep_seed, prep_seed_for(ds.config, r.state_id));
        keys.insert({r.state_id, r.time_index, r.mode});
        for (double v : r.m_ideal) EXPECT_LE(std::abs(v), 1.0);
        for (double v : r.m_noisy) EXPECT_LE(std::abs(v), 1.0);
        // m_ideal is a property of the state, not of the time point.
        EXPECT_EQ(r.m_ideal, ds.records[k - k % 5].m_ideal);
    }
    EXPECT_EQ(keys.size(), ds.records.size());
}

TEST(EchoDataset, SequentialAndParallelIdentical) {
    const auto cfg = small_echo(5, NoiseModel{1e-4, 0.01});
    EXPECT_EQ(generate_echo_dataset(cfg, Schedule::kSequential),
              generate_echo_dataset(cfg, Schedule::kParallel));
}

TEST(EchoDataset, SpecSignatureOverload) {
    const auto cfg = small_echo(3, NoiseModel{1e-4, 0.01});
    const auto a = generate_echo_dataset(cfg);
    const auto b = generate_echo_dataset(cfg.params, cfg.layout, cfg.noise, 3, cfg.time_points, 10,
                                         cfg.master_seed);
    EXPECT_EQ(a.records, b.records);
}

TEST(EchoDataset, NoiseShrinksAverageMagnetization) {
    const EchoDataset ds = generate_echo_dataset(small_echo(40, NoiseModel{1e-4, 0.01}));
    double ideal = 0, noisy = 0;
    for (const auto &r : ds.records) {
        ideal += std::abs(mean(r.m_ideal));
        noisy += std::abs(mean(r.m_noisy));
    }
    EXPECT_LT(noisy, ideal);
}

TEST(EchoDataset, ShotModeQuantizes) {
    auto cfg = small_echo(2, NoiseModel{1e-4, 0.01});
    cfg.measurement = MeasurementMode{64, true};
    const EchoDataset ds = generate_echo_dataset(cfg);
    for (const auto &r : ds.records) {
        for (double v : r.m_noisy) EXPECT_EQ((v + 1) * 32, std::round((v + 1) * 32));
        for (double v : r.m_ideal) EXPECT_EQ((v + 1) * 32, std::round((v + 1) * 32));
    }
    EXPECT_EQ(ds, generate_echo_dataset(cfg));
}

TEST(EchoDataset, InvalidConfigRejected) {
    auto cfg = small_echo(0, NoiseModel{});
    EXPECT_THROW(generate_echo_dataset(cfg), InvalidParameter);
    cfg = small_echo(2, NoiseModel{0.0, 1.5});
    EXPECT_THROW(generate_echo_dataset(cfg), InvalidParameter);
    cfg = small_echo(2, NoiseModel{});
    cfg.time_points.clear();
    EXPECT_THROW(generate_echo_dataset(cfg), InvalidParameter);
}

TEST(ForwardSet, CountsAndReferenceCurves) {
    const EchoDataset ds = generate_forward_testset({}, tfim::ladder_layout_6(), NoiseModel{}, 3, 20,
                                                    std::numbers::pi, 20, 5);
    ASSERT_EQ(ds.records.size(), 60u);
    for (const auto &r : ds.records) {
        EXPECT_EQ(r.mode, RecordMode::kForward);
        ASSERT_TRUE(r.m_exact.has_value());
        for (std::size_t j = 0; j < 6; ++j) EXPECT_NEAR(r.m_noisy[j], r.m_ideal[j], 1e-9);
        if (r.time_index == 0) {
            // At t = 0 every gate is the identity.
            for (std::size_t j = 0; j < 6; ++j) {
                EXPECT_NEAR(r.m_ideal[j], (*r.m_exact)[j], 1e-12);
            }
        }
    }
}

TEST(ForwardSet, TrotterTracksExactAtShortTimes) {
    const EchoDataset ds = generate_forward_testset({}, tfim::ladder_layout_6(), NoiseModel{}, 2, 5,
                                                    0.2, 20, 8);
    for (const auto &r : ds.records) {
        for (std::size_t j = 0; j < 6; ++j) EXPECT_NEAR(r.m_ideal[j], (*r.m_exact)[j], 1e-3);
    }
}

TEST(ForwardSet, ParallelMatchesSequential) {
    GenerationConfig cfg;
    cfg.mode = RecordMode::kForward;
    cfg.n_states = 2;
    cfg.time_points = uniform_time_grid(4, 1.0);
    cfg.n_trotter = 4;
    EXPECT_EQ(generate_forward_testset(cfg, Schedule::kSequential),
              generate_forward_testset(cfg, Schedule::kParallel));
    EXPECT_EQ(generate(cfg).records.front().mode, RecordMode::kForward);
}

std::vector<DataRecord> numbered(int n) {
    std::vector<DataRecord> out(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        out[static_cast<std::size_t>(k)].state_id = k;
        out[static_cast<std::size_t>(k)].m_ideal = {0.0};
        out[static_cast<std::size_t>(k)].m_noisy = {0.0};
    }
    return out;
}

TEST(Split, DefaultSizesOnTwelveThousand) {
    const auto s = split_dataset(numbered(12000), SplitSpec{});
    EXPECT_EQ(s.train.size(), 8000u);
    EXPECT_EQ(s.val.size(), 2000u);
    EXPECT_EQ(s.test.size(), 2000u);
}

TEST(Split, DeterministicPartition) {
    const auto records = numbered(100);
    const SplitSpec spec{60, 20, 20, 3};
    const auto a = split_dataset(records, spec);
    const auto b = split_dataset(records, spec);
    EXPECT_EQ(a.train, b.train);
    EXPECT_EQ(a.test, b.test);
    std::vector<int> ids;
    for (const auto *part : {&a.train, &a.val, &a.test}) {
        for (const auto &r : *part) ids.push_back(r.state_id);
    }
    std::sort(ids.begin(), ids.end());
    for (int k = 0; k < 100; ++k) EXPECT_EQ(ids[static_cast<std::size_t>(k)], k);
    EXPECT_NE(split_dataset(records, SplitSpec{60, 20, 20, 4}).train, a.train);
}

TEST(Split, Oversubscribed) {
    EXPECT_THROW(split_dataset(numbered(10), SplitSpec{5, 5, 1, 0}), InvalidSplit);
}

TEST(DatasetIo, RoundTripIsExact) {
    auto cfg = small_echo(3, NoiseModel{1e-4, 0.01});
    const EchoDataset ds = generate_echo_dataset(cfg);
    std::stringstream buf;
    write_dataset(buf, ds);
    EXPECT_EQ(read_dataset(buf), ds);

    GenerationConfig fcfg;
    fcfg.mode = RecordMode::kForward;
    fcfg.n_states = 1;
    fcfg.time_points = uniform_time_grid(3, 1.0);
    const EchoDataset fwd = generate(fcfg);
    std::stringstream fbuf;
    write_dataset(fbuf, fwd);
    EXPECT_EQ(read_dataset(fbuf), fwd);
}

TEST(DatasetIo, RejectsDamagedFiles) {
    EchoDataset ds = generate_echo_dataset(small_echo(1, NoiseModel{}));
    std::stringstream buf;
    write_dataset(buf, ds);
    const std::string text = buf.str();

    std::stringstream truncated(text.substr(0, text.rfind('{')));
    EXPECT_THROW(read_dataset(truncated), ParseError);
    std::stringstream garbage("not json\n");
    EXPECT_THROW(read_dataset(garbage), ParseError);
    std::stringstream empty("");
    EXPECT_THROW(read_dataset(empty), ParseError);
    std::string missing_key = text;
    missing_key.replace(missing_key.find("\"m_noisy\""), 9, "\"m_other\"");
    std::stringstream bad(missing_key);
    try {
        read_dataset(bad);
        FAIL() << "expected ParseError";
    } catch (const ParseError &e) {
        EXPECT_NE(std::string(e.what()).find("record.m_noisy"), std::string::npos) << e.what();
    }
    EXPECT_THROW(load_dataset("/nonexistent/echo.jsonl"), FileError);
}

TEST(DatasetIo, CsvHasOneRowPerRecord) {
    const EchoDataset ds = generate_echo_dataset(small_echo(2, NoiseModel{}));
    std::stringstream csv;
    write_dataset_csv(csv, ds);
    std::string header;
    std::getline(csv, header);
    EXPECT_EQ(header.rfind("mode,state_id,prep_seed,time_index,t,m_ideal_0", 0), 0u);
    int rows = 0;
    for (std::string line; std::getline(csv, line);) ++rows;
    EXPECT_EQ(rows, 10);
}

} // namespace
} // namespace echoqem::datagen
