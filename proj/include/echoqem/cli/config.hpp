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

// Experiment configuration: one JSON document with these sections (all
// optional except where noted; missing keys take the defaults below).
//
//   master_seed   integer
//   ising         {h, J}
//   layout        "ladder6" or {n_qubits, edges: [[a,b],...]}
//   noise         {q1, q2}
//   measurement   {shots (0 = exact expectations), ideal_shots}
//   echo          {n_states, time_points, n_trotter_each_way,
//                  prep_cnot_prob, noisy_prep}
//   forward       {n_states, n_time_points, t_max, n_trotter}
//   split         {n_train, n_val, n_test, seed?}
//   train         {width, lr, beta1, beta2, epsilon, batch_size, epochs,
//                  init_seed?, shuffle_seed?}
//   sweep         {widths, q2_levels, n_realizations, n_train, n_val, n_test}
//
// Seeds marked '?' default to derive_seed(master_seed, <stream>) and are
// written out resolved wherever they are used.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "echoqem/datagen/datagen.hpp"
#include "echoqem/json_util.hpp"
#include "echoqem/metrics/sweep.hpp"
#include "echoqem/neuralnet/mlp.hpp"

namespace echoqem::cli {

using json_util::Json;

struct EchoSection {
    int n_states = 2400;
    std::vector<double> time_points = datagen::default_echo_time_points();
    int n_trotter_each_way = 10;
    double prep_cnot_prob = tfim::kDefaultPrepCnotProb;
    bool noisy_prep = false;

    friend bool operator==(const EchoSection &, const EchoSection &) = default;
};

struct ForwardSection {
    int n_states = 100;
    int n_time_points = 20;
    double t_max = 3.141592653589793;
    int n_trotter = 20;

    friend bool operator==(const ForwardSection &, const ForwardSection &) = default;
};

struct SplitSection {
    std::size_t n_train = 8000;
    std::size_t n_val = 2000;
    std::size_t n_test = 2000;
    std::optional<std::uint64_t> seed;

    friend bool operator==(const SplitSection &, const SplitSection &) = default;
};

struct TrainSection {
    int width = 200;
    double lr = 3e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    int batch_size = 80;
    int epochs = 100;
    std::optional<std::uint64_t> init_seed;
    std::optional<std::uint64_t> shuffle_seed;

    friend bool operator==(const TrainSection &, const TrainSection &) = default;
};

struct SweepSection {
    std::vector<int> widths{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 25, 50, 100, 200};
    std::vector<double> q2_levels{0.003, 0.007, 0.01};
    int n_realizations = 50;
    std::size_t n_train = 4000;
    std::size_t n_val = 1000;
    std::size_t n_test = 1000;

    friend bool operator==(const SweepSection &, const SweepSection &) = default;
};

struct ExperimentConfig {
    std::uint64_t master_seed = 1;
    tfim::IsingParams ising;
    tfim::Layout layout = tfim::ladder_layout_6();
    densitysim::NoiseModel noise{1e-4, 0.01};
    datagen::MeasurementMode measurement;
    EchoSection echo;
    ForwardSection forward;
    SplitSection split;
    TrainSection train;
    SweepSection sweep;

    /// Throws the category-specific error of the first violated constraint.
    void validate() const;

    datagen::GenerationConfig echo_generation() const;
    datagen::GenerationConfig forward_generation() const;
    datagen::SplitSpec split_spec() const;
    nn::TrainConfig train_config() const;
    metrics::SweepConfig sweep_config() const;

    friend bool operator==(const ExperimentConfig &, const ExperimentConfig &) = default;
};

Json to_json(const ExperimentConfig &config);
ExperimentConfig experiment_config_from_json(const Json &j);

/// Parse errors name the file and line:column, or the offending key path.
ExperimentConfig parse_config(const std::string &text, const std::string &source = "config");
ExperimentConfig load_config(const std::filesystem::path &path);

/// 64-bit FNV-1a over a file's bytes, as 16 hex digits.
std::string file_digest(const std::filesystem::path &path);

} // namespace echoqem::cli
