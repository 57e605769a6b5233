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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "echoqem/densitysim/circuit.hpp"
#include "echoqem/densitysim/simulator.hpp"
#include "echoqem/tfim/tfim.hpp"

namespace echoqem::datagen {

using densitysim::MagnetizationVector;
using densitysim::NoiseModel;
using tfim::IsingParams;
using tfim::Layout;

enum class RecordMode { kEcho, kForward };

const char *mode_name(RecordMode mode);
RecordMode parse_mode(const std::string &name);

struct DataRecord {
    RecordMode mode = RecordMode::kEcho;
    int state_id = 0;
    std::uint64_t prep_seed = 0;
    int time_index = 0;
    double t = 0.0;
    MagnetizationVector m_ideal;
    MagnetizationVector m_noisy;
    /// exp(-iHt) reference; forward records only.
    std::optional<MagnetizationVector> m_exact;

    friend bool operator==(const DataRecord &, const DataRecord &) = default;
};

/// shots == 0 selects exact expectations. With shots > 0 the noisy side is
/// always sampled; the ideal side only when ideal_shots is set.
struct MeasurementMode {
    std::uint64_t shots = 0;
    bool ideal_shots = false;

    bool exact() const noexcept { return shots == 0; }
    friend bool operator==(const MeasurementMode &, const MeasurementMode &) = default;
};

/// Everything needed to regenerate a dataset bit-identically.
struct GenerationConfig {
    RecordMode mode = RecordMode::kEcho;
    IsingParams params;
    Layout layout = tfim::ladder_layout_6();
    NoiseModel noise{1e-4, 0.01};
    MeasurementMode measurement;
    std::uint64_t master_seed = 0;
    int n_states = 2400;
    /// Echo: the evolution times. Forward: the uniform grid over [0, t_max].
    std::vector<double> time_points;
    /// Echo: steps each way. Forward: total steps.
    int n_trotter = 10;
    double prep_cnot_prob = tfim::kDefaultPrepCnotProb;
    /// Run the preparation circuit under noise on the noisy branch.
    bool noisy_prep = false;

    void validate() const;
    friend bool operator==(const GenerationConfig &, const GenerationConfig &) = default;
};

struct EchoDataset {
    std::vector<DataRecord> records;
    GenerationConfig config;

    friend bool operator==(const EchoDataset &, const EchoDataset &) = default;
};

/// How independent (state, time point) tasks are executed. Results are
/// merged by key, so both give identical datasets.
enum class Schedule { kSequential, kParallel };

/// {0, pi/8, pi/4, 3pi/8, pi/2}
std::vector<double> default_echo_time_points();

/// n points evenly spaced over [0, t_max], endpoints included.
std::vector<double> uniform_time_grid(int n_time_points, double t_max);

/// Per-state preparation seed.
std::uint64_t prep_seed_for(const GenerationConfig &config, int state_id);

/// Echo records: for each state, m_ideal from the noiselessly prepared
/// state, and for each time point m_noisy after the echo circuit under noise.
/// Records are ordered by (state_id, time_index).
EchoDataset generate_echo_dataset(const GenerationConfig &config,
                                  Schedule schedule = Schedule::kParallel);

EchoDataset generate_echo_dataset(const IsingParams &params, const Layout &layout,
                                  const NoiseModel &noise, int n_states,
                                  const std::vector<double> &time_points,
                                  int n_trotter_each_way, std::uint64_t seed);

/// Forward records: m_ideal after the noiseless Trotter circuit, m_noisy
/// after the same circuit under noise, m_exact from exp(-iHt).
EchoDataset generate_forward_testset(const GenerationConfig &config,
                                     Schedule schedule = Schedule::kParallel);

EchoDataset generate_forward_testset(const IsingParams &params, const Layout &layout,
                                     const NoiseModel &noise, int n_states, int n_time_points,
                                     double t_max, int n_trotter, std::uint64_t seed);

/// Dispatches on config.mode.
EchoDataset generate(const GenerationConfig &config, Schedule schedule = Schedule::kParallel);

struct SplitSpec {
    std::size_t n_train = 8000;
    std::size_t n_val = 2000;
    std::size_t n_test = 2000;
    std::uint64_t shuffle_seed = 0;
};

struct DatasetSplit {
    std::vector<DataRecord> train;
    std::vector<DataRecord> val;
    std::vector<DataRecord> test;
};

/// Seeded shuffle of the record order, then contiguous train/val/test
/// blocks. Throws InvalidSplit if the parts exceed the record count.
DatasetSplit split_dataset(const std::vector<DataRecord> &records, const SplitSpec &spec);

} // namespace echoqem::datagen
