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

#pragma once

// Pipeline stages behind the `echoqem` executable. Each command reads its
// inputs, writes its outputs under `out`, reports progress on `log` and
// throws echoqem::Error on failure.
//
//   generate  -> <out>/echo.jsonl [, <out>/forward.jsonl]
//   train     -> <out>/model.json, <out>/history.csv
//   eval      -> <out>/records.csv, <out>/summary.json
//                (+ k_per_state.csv, trajectories.csv in forward mode)
//   sweep     -> <out>/datasets/, <out>/cells/, <out>/sweep_stats.csv,
//                <out>/sweep_cells.csv
//
// Existing outputs are only replaced with `force`. The sweep is resumable:
// finished cells are read back from <out>/cells/ instead of recomputed.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "echoqem/cli/config.hpp"

namespace echoqem::cli {

struct CommonOptions {
    std::filesystem::path config; // empty: built-in defaults
    std::filesystem::path out;
    std::optional<std::uint64_t> seed;  // replaces master_seed
    std::optional<std::uint64_t> shots; // replaces measurement.shots
    int jobs = 0;                       // 0: OpenMP default
    bool force = false;
};

/// Loads the config (or defaults) and applies seed/shots overrides.
ExperimentConfig resolve_config(const CommonOptions &common);

/// Caps the OpenMP worker count when jobs > 0.
void apply_jobs(int jobs);

struct GenerateOptions {
    CommonOptions common;
    std::optional<int> states;
    std::optional<std::vector<double>> time_points;
    bool forward = false; // also write the forward test set
    bool csv = false;     // also write CSV copies
};

struct TrainOptions {
    CommonOptions common;
    std::filesystem::path dataset;
    std::optional<int> width;
    std::optional<int> epochs;
};

enum class EvalMode { kEchoTest, kForward };
EvalMode parse_eval_mode(const std::string &name);

struct EvalOptions {
    CommonOptions common;
    std::filesystem::path model;
    std::filesystem::path dataset;
    EvalMode mode = EvalMode::kEchoTest;
};

struct SweepOptions {
    CommonOptions common;
    std::optional<int> realizations;
    std::optional<std::vector<int>> widths;
    std::optional<std::vector<double>> q2_levels;
    std::optional<int> epochs;
};

enum class CircuitKind { kEcho, kForward, kPrep, kStep };
CircuitKind parse_circuit_kind(const std::string &name);

struct InspectOptions {
    CommonOptions common;
    CircuitKind kind = CircuitKind::kEcho;
    std::optional<double> t;   // default: last echo time point / forward t_max
    std::optional<int> steps;  // default: from the config
    int state_id = 0;          // prep circuits
};

void cmd_generate(const GenerateOptions &opts, std::ostream &log);
void cmd_train(const TrainOptions &opts, std::ostream &log);
void cmd_eval(const EvalOptions &opts, std::ostream &log);
void cmd_sweep(const SweepOptions &opts, std::ostream &log);

/// Writes the gate listing followed by one line
/// "counts CNOT=<n> RX=<n> RZ=<n> U2=<n> total=<n>".
void cmd_inspect_circuit(const InspectOptions &opts, std::ostream &out);

/// "counts CNOT=.. RX=.. RZ=.. U2=.. total=.."
std::string format_gate_counts(const densitysim::Circuit &circuit);

} // namespace echoqem::cli
