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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "echoqem/cli/config.hpp"
#include "echoqem/errors.hpp"
#include "echoqem/metrics/sweep.hpp"
#include "test_util.hpp"

namespace echoqem::cli {
namespace {

namespace fs = std::filesystem;
using testing::read_file;
using testing::run_cli;
using testing::scratch_dir;

std::size_t count_lines(const fs::path &p) {
    const std::string text = read_file(p);
    return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

void write_text(const fs::path &p, const std::string &text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

/// A config small enough for every stage to finish in seconds.
fs::path small_config(const fs::path &dir) {
    const fs::path p = dir / "small.cfg";
    write_text(p, R"({
  "master_seed": 3,
  "echo": {"n_states": 40, "time_points": [0.0, 0.7853981633974483]},
  "forward": {"n_states": 4, "n_time_points": 5, "n_trotter": 6},
  "split": {"n_train": 50, "n_val": 15, "n_test": 15},
  "train": {"width": 8, "epochs": 4},
  "sweep": {"widths": [1, 4], "q2_levels": [0.005, 0.01], "n_realizations": 2,
            "n_train": 40, "n_val": 10, "n_test": 10}
})");
    return p;
}

std::string expect_parse_error(const std::string &text) {
    try {
        parse_config(text, "test.cfg");
    } catch (const ParseError &e) {
        return e.what();
    }
    ADD_FAILURE() << "no ParseError for: " << text;
    return {};
}

TEST(Config, ShippedConfigEqualsDefaults) {
    const ExperimentConfig shipped = load_config(fs::path(ECHOQEM_SOURCE_DIR) / "configs/paper.cfg");
    EXPECT_EQ(shipped, ExperimentConfig{});
    const auto gen = shipped.echo_generation();
    EXPECT_EQ(static_cast<std::size_t>(gen.n_states) * gen.time_points.size(), 12000u);
    EXPECT_EQ(shipped.sweep_config().n_cells(), 2250u);
}

TEST(Config, RoundTripsLosslessly) {
    ExperimentConfig c;
    c.master_seed = 0xfedcba9876543210ULL;
    c.noise = {3e-4, 0.007};
    c.echo.time_points = {0.1, 1.0 / 3.0};
    c.split.seed = 12;
    c.train.width = 17;
    c.train.init_seed = 5;
    c.sweep.widths = {2, 3};
    c.layout = tfim::Layout{4, {{0, 1}, {2, 3}, {1, 2}}};
    c.ising.n_spins = 4;
    const ExperimentConfig back = parse_config(to_json(c).dump(2));
    EXPECT_EQ(back, c);
    EXPECT_EQ(parse_config(to_json(ExperimentConfig{}).dump()), ExperimentConfig{});
}

TEST(Config, DiagnosticsNameTheProblem) {
    const std::string syntax = expect_parse_error("{\n  \"noise\": {\"q1\": 0.1,,}\n}");
    EXPECT_NE(syntax.find("test.cfg"), std::string::npos) << syntax;
    EXPECT_NE(syntax.find("line 2"), std::string::npos) << syntax;

    const std::string unknown = expect_parse_error(R"({"echo": {"n_sates": 3}})");
    EXPECT_NE(unknown.find("echo.n_sates"), std::string::npos) << unknown;

    const std::string top = expect_parse_error(R"({"nosie": {}})");
    EXPECT_NE(top.find("nosie"), std::string::npos) << top;

    const std::string type = expect_parse_error(R"({"train": {"epochs": "many"}})");
    EXPECT_NE(type.find("train.epochs"), std::string::npos) << type;

    EXPECT_THROW(parse_config(R"({"noise": {"q2": 1.5}})"), InvalidParameter);
    EXPECT_THROW(load_config("/nonexistent/echoqem.cfg"), FileError);
}

TEST(Config, DerivedSeedsAreRecordedAndStable) {
    ExperimentConfig a;
    ExperimentConfig b;
    EXPECT_EQ(a.train_config().init_seed, b.train_config().init_seed);
    EXPECT_NE(a.train_config().init_seed, a.train_config().shuffle_seed);
    b.master_seed = 2;
    EXPECT_NE(a.split_spec().shuffle_seed, b.split_spec().shuffle_seed);
    a.split.seed = 77;
    EXPECT_EQ(a.split_spec().shuffle_seed, 77u);
}

TEST(SweepShape, CellArithmetic) {
    metrics::SweepConfig sc = ExperimentConfig{}.sweep_config();
    EXPECT_EQ(sc.n_cells(), 2250u);
    EXPECT_EQ(sc.widths.size() * sc.q2_levels.size(), 45u);
    sc.n_realizations = 2;
    EXPECT_EQ(sc.n_cells(), 90u);
}

TEST(Cli, GenerateCountsAndDeterminism) {
    const fs::path dir = scratch_dir("cli_generate");
    ASSERT_EQ(run_cli("generate --out " + (dir / "a").string() +
                      " --states 10 --time-points 0,1.5707963 --csv")
                  , 0);
    EXPECT_EQ(count_lines(dir / "a/echo.jsonl"), 1u + 20u); // header + records
    EXPECT_EQ(count_lines(dir / "a/echo.csv"), 1u + 20u);

    // Refuses to overwrite, then succeeds with --force and reproduces bytes.
    const std::string first = read_file(dir / "a/echo.jsonl");
    EXPECT_EQ(run_cli("generate --out " + (dir / "a").string() + " --states 10"), 3);
    EXPECT_EQ(read_file(dir / "a/echo.jsonl"), first);
    ASSERT_EQ(run_cli("generate --out " + (dir / "b").string() +
                      " --states 10 --time-points 0,1.5707963 --csv"),
              0);
    EXPECT_EQ(read_file(dir / "b/echo.jsonl"), first);
    EXPECT_EQ(read_file(dir / "b/echo.csv"), read_file(dir / "a/echo.csv"));
    ASSERT_EQ(run_cli("generate --force --jobs 1 --out " + (dir / "a").string() +
                      " --states 10 --time-points 0,1.5707963"),
              0);
    EXPECT_EQ(read_file(dir / "a/echo.jsonl"), first);

    ASSERT_EQ(run_cli("generate --seed 4 --out " + (dir / "c").string() +
                      " --states 10 --time-points 0,1.5707963"),
              0);
    EXPECT_NE(read_file(dir / "c/echo.jsonl"), first);
}

TEST(Cli, InspectCircuitMatchesGolden) {
    const fs::path dir = scratch_dir("cli_inspect");
    ASSERT_EQ(run_cli("inspect-circuit --kind step --t 0.1 --out " + (dir / "step.txt").string()),
              0);
    EXPECT_EQ(read_file(dir / "step.txt"),
              read_file(fs::path(ECHOQEM_GOLDEN_DIR) / "trotter_step_dt0.1.txt"));

    ASSERT_EQ(run_cli("inspect-circuit --kind echo --out " + (dir / "echo.txt").string()), 0);
    EXPECT_NE(read_file(dir / "echo.txt").find("counts CNOT=280 RX=120 RZ=140 U2=0 total=540"),
              std::string::npos);
    ASSERT_EQ(run_cli("inspect-circuit --kind forward --out " + (dir / "fwd.txt").string()), 0);
    EXPECT_NE(read_file(dir / "fwd.txt").find("counts CNOT=280 RX=120 RZ=140"),
              std::string::npos);
}

TEST(Cli, ExitCodesByCategory) {
    const fs::path dir = scratch_dir("cli_exit");
    EXPECT_EQ(run_cli(""), 2);
    EXPECT_EQ(run_cli("frobnicate"), 2);
    EXPECT_EQ(run_cli("generate"), 2); // --out missing
    EXPECT_EQ(run_cli("generate --out " + dir.string() + " --time-points 0,abc"), 2);

    write_text(dir / "broken.cfg", "{\"echo\": ");
    EXPECT_EQ(run_cli("generate --config " + (dir / "broken.cfg").string() + " --out " +
                      (dir / "x").string()),
              2);
    EXPECT_EQ(run_cli("generate --config " + (dir / "missing.cfg").string() + " --out " +
                      (dir / "x").string()),
              3);
    EXPECT_EQ(run_cli("train --dataset " + (dir / "missing.jsonl").string() + " --out " +
                      (dir / "x").string()),
              3);
    EXPECT_EQ(run_cli("generate --states 0 --out " + (dir / "x").string()), 4);
    EXPECT_EQ(run_cli("eval --mode sideways --model m --dataset d --out " + dir.string()), 4);
    EXPECT_EQ(run_cli("inspect-circuit --kind prep --state-id -1"), 4);

    // A four-qubit dataset cannot feed the six-spin network.
    write_text(dir / "four.cfg", R"({
  "layout": {"n_qubits": 4, "edges": [[0, 1], [2, 3], [0, 2], [1, 3]]},
  "echo": {"n_states": 30, "time_points": [0.0, 0.5]},
  "split": {"n_train": 40, "n_val": 10, "n_test": 10}
})");
    ASSERT_EQ(run_cli("generate --config " + (dir / "four.cfg").string() + " --out " +
                      (dir / "four").string()),
              0);
    EXPECT_EQ(run_cli("train --config " + (dir / "four.cfg").string() + " --dataset " +
                      (dir / "four/echo.jsonl").string() + " --epochs 1 --out " +
                      (dir / "four_model").string()),
              7);

    // Asking for more records than exist.
    write_text(dir / "big_split.cfg", R"({"split": {"n_train": 1000, "n_val": 10, "n_test": 10}})");
    ASSERT_EQ(run_cli("generate --states 5 --out " + (dir / "tiny").string()), 0);
    EXPECT_EQ(run_cli("train --config " + (dir / "big_split.cfg").string() + " --dataset " +
                      (dir / "tiny/echo.jsonl").string() + " --out " + (dir / "tm").string()),
              6);
}

TEST(Cli, TrainEvalEndToEnd) {
    const fs::path dir = scratch_dir("cli_pipeline");
    const std::string cfg = " --config " + small_config(dir).string();
    ASSERT_EQ(run_cli("generate --forward" + cfg + " --out " + (dir / "data").string()), 0);
    EXPECT_EQ(count_lines(dir / "data/echo.jsonl"), 1u + 80u);
    EXPECT_EQ(count_lines(dir / "data/forward.jsonl"), 1u + 20u);

    const std::string train =
        "train" + cfg + " --dataset " + (dir / "data/echo.jsonl").string() + " --out ";
    ASSERT_EQ(run_cli(train + (dir / "m1").string(), dir / "train.log"), 0);
    EXPECT_EQ(count_lines(dir / "m1/history.csv"), 1u + 4u);
    ASSERT_EQ(run_cli(train + (dir / "m2").string()), 0);
    EXPECT_EQ(read_file(dir / "m1/model.json"), read_file(dir / "m2/model.json"));
    EXPECT_NE(read_file(dir / "m1/model.json").find("\"dataset_digest\""), std::string::npos);
    EXPECT_NE(read_file(dir / "m1/model.json").find("\"init_seed\""), std::string::npos);

    const std::string model = " --model " + (dir / "m1/model.json").string();
    ASSERT_EQ(run_cli("eval" + cfg + model + " --dataset " + (dir / "data/echo.jsonl").string() +
                          " --out " + (dir / "echo_eval").string(),
                      dir / "eval.log"),
              0);
    EXPECT_EQ(count_lines(dir / "echo_eval/records.csv"), 1u + 15u);
    EXPECT_NE(read_file(dir / "eval.log").find("fraction_K_positive="), std::string::npos);
    EXPECT_NE(read_file(dir / "echo_eval/summary.json").find("\"model_digest\""),
              std::string::npos);

    ASSERT_EQ(run_cli("eval --mode forward" + cfg + model + " --dataset " +
                      (dir / "data/forward.jsonl").string() + " --out " +
                      (dir / "fwd_eval").string()),
              0);
    EXPECT_EQ(count_lines(dir / "fwd_eval/records.csv"), 1u + 20u);
    EXPECT_EQ(count_lines(dir / "fwd_eval/k_per_state.csv"), 1u + 4u);
    EXPECT_EQ(count_lines(dir / "fwd_eval/trajectories.csv"), 1u + 20u * 7u);

    // Same inputs, same outputs.
    ASSERT_EQ(run_cli("eval --force --mode forward" + cfg + model + " --dataset " +
                      (dir / "data/forward.jsonl").string() + " --out " +
                      (dir / "fwd_eval2").string()),
              0);
    EXPECT_EQ(read_file(dir / "fwd_eval/k_per_state.csv"),
              read_file(dir / "fwd_eval2/k_per_state.csv"));
    EXPECT_EQ(run_cli("eval --mode forward" + cfg + model + " --dataset " +
                      (dir / "data/forward.jsonl").string() + " --out " +
                      (dir / "fwd_eval").string()),
              3);
}

TEST(Cli, SweepQuickModeResumesAndRepairs) {
    const fs::path dir = scratch_dir("cli_sweep");
    const std::string cmd = "sweep --config " + small_config(dir).string() + " --epochs 2 --out ";
    ASSERT_EQ(run_cli(cmd + (dir / "full").string(), dir / "full.log"), 0);
    EXPECT_EQ(count_lines(dir / "full/sweep_stats.csv"), 1u + 4u);
    EXPECT_EQ(count_lines(dir / "full/sweep_cells.csv"), 1u + 8u);
    std::size_t cell_files = 0;
    for (const auto &e : fs::directory_iterator(dir / "full/cells")) cell_files += e.is_regular_file();
    EXPECT_EQ(cell_files, 8u);
    const std::string stats = read_file(dir / "full/sweep_stats.csv");

    // Interrupted run: one cell missing, one truncated, one from another config.
    fs::copy(dir / "full", dir / "resumed", fs::copy_options::recursive);
    fs::remove(dir / "resumed/sweep_stats.csv");
    fs::remove(dir / "resumed/cells/q2_0.01_w4_r1.json");
    write_text(dir / "resumed/cells/q2_0.005_w1_r0.json", "{\"key\": ");
    std::string other = read_file(dir / "resumed/cells/q2_0.005_w4_r0.json");
    const auto at = other.find("\"fingerprint\":\"");
    ASSERT_NE(at, std::string::npos);
    other[at + 15] = other[at + 15] == '0' ? '1' : '0';
    write_text(dir / "resumed/cells/q2_0.005_w4_r0.json", other);

    ASSERT_EQ(run_cli(cmd + (dir / "resumed").string(), dir / "resumed.log"), 0);
    EXPECT_EQ(read_file(dir / "resumed/sweep_stats.csv"), stats);
    const std::string log = read_file(dir / "resumed.log");
    EXPECT_NE(log.find("corrupt cell cache"), std::string::npos) << log;
    EXPECT_NE(log.find("different configuration"), std::string::npos) << log;
    EXPECT_NE(log.find("reusing dataset"), std::string::npos) << log;

    ASSERT_EQ(run_cli(cmd + (dir / "fresh").string() + " --realizations 1"), 0);
    EXPECT_EQ(count_lines(dir / "fresh/sweep_cells.csv"), 1u + 4u);
}

} // namespace
} // namespace echoqem::cli
