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

#include "echoqem/datagen/datagen.hpp"

#include <cmath>
#include <cstdint>
#include <exception>
#include <numbers>
#include <numeric>

#include <fmt/format.h>

#include "echoqem/errors.hpp"
#include "echoqem/seeding.hpp"

namespace echoqem::datagen {

using densitysim::Circuit;
using densitysim::DensityMatrix;
using densitysim::ExecPolicy;

const char *mode_name(RecordMode mode) {
    return mode == RecordMode::kEcho ? "echo" : "forward";
}

RecordMode parse_mode(const std::string &name) {
    if (name == "echo") return RecordMode::kEcho;
    if (name == "forward") return RecordMode::kForward;
    throw ParseError("unknown record mode '" + name + "' (expected echo or forward)");
}

void GenerationConfig::validate() const {
    params.validate();
    layout.validate();
    noise.validate();
    if (layout.n_qubits != params.n_spins) {
        throw ShapeError("layout and model disagree on the number of spins");
    }
    if (n_states < 1) {
        throw InvalidParameter(fmt::format("n_states must be >= 1, got {}", n_states));
    }
    if (time_points.empty()) {
        throw InvalidParameter("time_points must be nonempty");
    }
    for (double t : time_points) {
        if (!(t >= 0.0) || !std::isfinite(t)) {
            throw InvalidParameter(fmt::format("time point must be finite and >= 0, got {}", t));
        }
    }
    if (n_trotter < 1) {
        throw InvalidParameter(fmt::format("n_trotter must be >= 1, got {}", n_trotter));
    }
    if (!(prep_cnot_prob >= 0.0 && prep_cnot_prob <= 1.0)) {
        throw InvalidParameter("prep_cnot_prob must be in [0, 1]");
    }
}

std::vector<double> default_echo_time_points() {
    constexpr double pi = std::numbers::pi;
    return {0.0, pi / 8.0, pi / 4.0, 3.0 * pi / 8.0, pi / 2.0};
}

std::vector<double> uniform_time_grid(int n_time_points, double t_max) {
    if (n_time_points < 1) {
        throw InvalidParameter("n_time_points must be >= 1");
    }
    std::vector<double> grid(static_cast<std::size_t>(n_time_points), 0.0);
    for (int k = 1; k < n_time_points; ++k) {
        grid[static_cast<std::size_t>(k)] = t_max * k / (n_time_points - 1);
    }
    return grid;
}

std::uint64_t prep_seed_for(const GenerationConfig &config, int state_id) {
    const SeedStream stream =
        config.mode == RecordMode::kEcho ? SeedStream::kEchoPrep : SeedStream::kForwardPrep;
    return derive_seed(config.master_seed, stream, static_cast<std::uint64_t>(state_id));
}

namespace {

// Sentinel time index for per-state (not per-record) shot seeds.
constexpr std::uint64_t kStateLevel = 0xffffffffULL;

std::uint64_t shot_seed(const GenerationConfig &config, int state_id, std::uint64_t slot) {
    const SeedStream stream =
        config.mode == RecordMode::kEcho ? SeedStream::kEchoShots : SeedStream::kForwardShots;
    return derive_seed(config.master_seed, stream, static_cast<std::uint64_t>(state_id), slot);
}

densitysim::MagnetizationVector measure(const DensityMatrix &state, bool sampled,
                                        std::uint64_t shots, std::uint64_t seed) {
    return sampled ? densitysim::sample_magnetizations(state, shots, seed)
                   : densitysim::magnetizations(state);
}

// Prep circuit with every gate re-flagged noisy.
Circuit as_noisy(const Circuit &c) {
    Circuit out(c.n_qubits());
    for (const auto &op : c.ops()) {
        out.add(op.gate, true);
    }
    return out;
}

// Executes fn(task) for task in [0, n_tasks). Exceptions thrown inside the
// OpenMP region are captured and rethrown on the calling thread.
template <typename Fn> void run_tasks(std::int64_t n_tasks, Schedule schedule, Fn &&fn) {
    if (schedule == Schedule::kSequential) {
        for (std::int64_t k = 0; k < n_tasks; ++k) {
            fn(k);
        }
        return;
    }
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t k = 0; k < n_tasks; ++k) {
        try {
            fn(k);
        } catch (...) {
#pragma omp critical(echoqem_datagen_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

} // namespace

EchoDataset generate_echo_dataset(const GenerationConfig &input, Schedule schedule) {
    GenerationConfig config = input;
    config.mode = RecordMode::kEcho;
    config.validate();

    const int n_times = static_cast<int>(config.time_points.size());
    std::vector<Circuit> echoes;
    echoes.reserve(config.time_points.size());
    for (double t : config.time_points) {
        echoes.push_back(
            tfim::build_echo_circuit(config.params, config.layout, t, config.n_trotter));
    }

    const bool sampled = !config.measurement.exact();
    const bool ideal_sampled = sampled && config.measurement.ideal_shots;
    const std::uint64_t shots = config.measurement.shots;
    const NoiseModel noiseless = NoiseModel::noiseless();

    EchoDataset ds;
    ds.config = config;
    ds.records.resize(static_cast<std::size_t>(config.n_states) *
                      static_cast<std::size_t>(n_times));

    run_tasks(static_cast<std::int64_t>(ds.records.size()), schedule, [&](std::int64_t task) {
        const int state_id = static_cast<int>(task / n_times);
        const int time_index = static_cast<int>(task % n_times);
        const std::uint64_t prep_seed = prep_seed_for(config, state_id);
        const Circuit prep =
            tfim::build_prep_circuit(prep_seed, config.layout, config.prep_cnot_prob);
        const DensityMatrix zero(config.layout.n_qubits);
        const DensityMatrix prepared =
            densitysim::run_circuit(prep, zero, noiseless, ExecPolicy::kParallel);

        DataRecord &rec = ds.records[static_cast<std::size_t>(task)];
        rec.mode = RecordMode::kEcho;
        rec.state_id = state_id;
        rec.prep_seed = prep_seed;
        rec.time_index = time_index;
        rec.t = config.time_points[static_cast<std::size_t>(time_index)];
        rec.m_ideal =
            measure(prepared, ideal_sampled, shots, shot_seed(config, state_id, kStateLevel));

        const DensityMatrix start =
            config.noisy_prep
                ? densitysim::run_circuit(as_noisy(prep), zero, config.noise, ExecPolicy::kParallel)
                : prepared;
        const DensityMatrix evolved = densitysim::run_circuit(
            echoes[static_cast<std::size_t>(time_index)], start, config.noise,
            ExecPolicy::kParallel);
        rec.m_noisy = measure(evolved, sampled, shots,
                              shot_seed(config, state_id, static_cast<std::uint64_t>(time_index)));
    });
    return ds;
}

EchoDataset generate_echo_dataset(const IsingParams &params, const Layout &layout,
                                  const NoiseModel &noise, int n_states,
                                  const std::vector<double> &time_points,
                                  int n_trotter_each_way, std::uint64_t seed) {
    GenerationConfig config;
    config.mode = RecordMode::kEcho;
    config.params = params;
    config.layout = layout;
    config.noise = noise;
    config.n_states = n_states;
    config.time_points = time_points;
    config.n_trotter = n_trotter_each_way;
    config.master_seed = seed;
    return generate_echo_dataset(config);
}

EchoDataset generate_forward_testset(const GenerationConfig &input, Schedule schedule) {
    GenerationConfig config = input;
    config.mode = RecordMode::kForward;
    config.validate();

    const int n_times = static_cast<int>(config.time_points.size());
    std::vector<Circuit> forwards;
    std::vector<Eigen::MatrixXcd> exact;
    for (double t : config.time_points) {
        forwards.push_back(
            tfim::build_forward_circuit(config.params, config.layout, t, config.n_trotter));
        exact.push_back(tfim::exact_unitary(config.params, config.layout, t));
    }

    const bool sampled = !config.measurement.exact();
    const bool ideal_sampled = sampled && config.measurement.ideal_shots;
    const std::uint64_t shots = config.measurement.shots;
    const NoiseModel noiseless = NoiseModel::noiseless();
    const int n = config.layout.n_qubits;
    const Eigen::Index dim = Eigen::Index{1} << n;

    EchoDataset ds;
    ds.config = config;
    ds.records.resize(static_cast<std::size_t>(config.n_states) *
                      static_cast<std::size_t>(n_times));

    run_tasks(static_cast<std::int64_t>(ds.records.size()), schedule, [&](std::int64_t task) {
        const int state_id = static_cast<int>(task / n_times);
        const int time_index = static_cast<int>(task % n_times);
        const std::size_t ti = static_cast<std::size_t>(time_index);
        const std::uint64_t prep_seed = prep_seed_for(config, state_id);
        const Circuit prep =
            tfim::build_prep_circuit(prep_seed, config.layout, config.prep_cnot_prob);
        const DensityMatrix zero(n);
        const DensityMatrix prepared =
            densitysim::run_circuit(prep, zero, noiseless, ExecPolicy::kParallel);

        DataRecord &rec = ds.records[static_cast<std::size_t>(task)];
        rec.mode = RecordMode::kForward;
        rec.state_id = state_id;
        rec.prep_seed = prep_seed;
        rec.time_index = time_index;
        rec.t = config.time_points[ti];

        const DensityMatrix ideal =
            densitysim::run_circuit(forwards[ti], prepared, noiseless, ExecPolicy::kParallel);
        rec.m_ideal = measure(ideal, ideal_sampled, shots,
                              shot_seed(config, state_id, 2 * static_cast<std::uint64_t>(ti) + 1));

        const DensityMatrix start =
            config.noisy_prep
                ? densitysim::run_circuit(as_noisy(prep), zero, config.noise, ExecPolicy::kParallel)
                : prepared;
        const DensityMatrix noisy =
            densitysim::run_circuit(forwards[ti], start, config.noise, ExecPolicy::kParallel);
        rec.m_noisy =
            measure(noisy, sampled, shots, shot_seed(config, state_id, 2 * static_cast<std::uint64_t>(ti)));

        Eigen::MatrixXcd rho0(dim, dim);
        for (Eigen::Index r = 0; r < dim; ++r) {
            for (Eigen::Index c = 0; c < dim; ++c) {
                rho0(r, c) = prepared(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
            }
        }
        const Eigen::MatrixXcd rho_t = exact[ti] * rho0 * exact[ti].adjoint();
        std::vector<densitysim::Complex> elements(static_cast<std::size_t>(dim * dim));
        for (Eigen::Index r = 0; r < dim; ++r) {
            for (Eigen::Index c = 0; c < dim; ++c) {
                elements[static_cast<std::size_t>(r * dim + c)] = rho_t(r, c);
            }
        }
        rec.m_exact = densitysim::magnetizations(
            DensityMatrix::from_elements(n, std::move(elements)));
    });
    return ds;
}

EchoDataset generate_forward_testset(const IsingParams &params, const Layout &layout,
                                     const NoiseModel &noise, int n_states, int n_time_points,
                                     double t_max, int n_trotter, std::uint64_t seed) {
    GenerationConfig config;
    config.mode = RecordMode::kForward;
    config.params = params;
    config.layout = layout;
    config.noise = noise;
    config.n_states = n_states;
    config.time_points = uniform_time_grid(n_time_points, t_max);
    config.n_trotter = n_trotter;
    config.master_seed = seed;
    return generate_forward_testset(config);
}

EchoDataset generate(const GenerationConfig &config, Schedule schedule) {
    return config.mode == RecordMode::kEcho ? generate_echo_dataset(config, schedule)
                                            : generate_forward_testset(config, schedule);
}

DatasetSplit split_dataset(const std::vector<DataRecord> &records, const SplitSpec &spec) {
    const std::size_t needed = spec.n_train + spec.n_val + spec.n_test;
    if (needed > records.size()) {
        throw InvalidSplit(fmt::format("split needs {} + {} + {} = {} records, dataset has {}",
                                       spec.n_train, spec.n_val, spec.n_test, needed,
                                       records.size()));
    }
    std::vector<std::size_t> order(records.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(spec.shuffle_seed);
    rng.shuffle(std::span<std::size_t>(order));

    DatasetSplit out;
    auto take = [&](std::size_t begin, std::size_t count, std::vector<DataRecord> &dst) {
        dst.reserve(count);
        for (std::size_t k = begin; k < begin + count; ++k) {
            dst.push_back(records[order[k]]);
        }
    };
    take(0, spec.n_train, out.train);
    take(spec.n_train, spec.n_val, out.val);
    take(spec.n_train + spec.n_val, spec.n_test, out.test);
    return out;
}

} // namespace echoqem::datagen
