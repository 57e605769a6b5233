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

#include "echoqem/cli/config.hpp"

#include <fstream>
#include <initializer_list>
#include <iterator>
#include <set>

#include <fmt/format.h>

#include "echoqem/datagen/dataset_io.hpp"
#include "echoqem/errors.hpp"
#include "echoqem/seeding.hpp"

namespace echoqem::cli {

using json_util::optional;

namespace {

void check_keys(const Json &j, std::string_view context,
                std::initializer_list<std::string_view> allowed) {
    if (!j.is_object()) {
        throw ParseError(fmt::format("'{}' must be an object", context));
    }
    const std::set<std::string_view> names(allowed);
    for (const auto &item : j.items()) {
        if (!names.count(item.key())) {
            throw ParseError(fmt::format("unknown key '{}.{}'", context, item.key()));
        }
    }
}

const Json &section_or_empty(const Json &j, const char *key) {
    static const Json empty = Json::object();
    const auto it = j.find(key);
    return it == j.end() ? empty : *it;
}

template <typename T> void put_optional(Json &j, const char *key, const std::optional<T> &v) {
    if (v) j[key] = *v;
}

template <typename T>
std::optional<T> get_optional(const Json &j, std::string_view key, std::string_view ctx) {
    if (j.find(std::string(key)) == j.end()) return std::nullopt;
    return json_util::require<T>(j, key, ctx);
}

} // namespace

datagen::GenerationConfig ExperimentConfig::echo_generation() const {
    datagen::GenerationConfig g;
    g.mode = datagen::RecordMode::kEcho;
    g.params = ising;
    g.params.n_spins = layout.n_qubits;
    g.layout = layout;
    g.noise = noise;
    g.measurement = measurement;
    g.master_seed = master_seed;
    g.n_states = echo.n_states;
    g.time_points = echo.time_points;
    g.n_trotter = echo.n_trotter_each_way;
    g.prep_cnot_prob = echo.prep_cnot_prob;
    g.noisy_prep = echo.noisy_prep;
    return g;
}

datagen::GenerationConfig ExperimentConfig::forward_generation() const {
    datagen::GenerationConfig g = echo_generation();
    g.mode = datagen::RecordMode::kForward;
    g.n_states = forward.n_states;
    g.time_points = forward.n_time_points >= 2
                        ? datagen::uniform_time_grid(forward.n_time_points, forward.t_max)
                        : std::vector<double>{};
    g.n_trotter = forward.n_trotter;
    return g;
}

datagen::SplitSpec ExperimentConfig::split_spec() const {
    return datagen::SplitSpec{split.n_train, split.n_val, split.n_test,
                              split.seed.value_or(derive_seed(master_seed, SeedStream::kSplit))};
}

nn::TrainConfig ExperimentConfig::train_config() const {
    nn::TrainConfig c;
    c.lr = train.lr;
    c.beta1 = train.beta1;
    c.beta2 = train.beta2;
    c.epsilon = train.epsilon;
    c.batch_size = train.batch_size;
    c.epochs = train.epochs;
    c.init_seed = train.init_seed.value_or(derive_seed(master_seed, SeedStream::kInit));
    c.shuffle_seed = train.shuffle_seed.value_or(derive_seed(master_seed, SeedStream::kShuffle));
    return c;
}

metrics::SweepConfig ExperimentConfig::sweep_config() const {
    metrics::SweepConfig s;
    s.widths = sweep.widths;
    s.q2_levels = sweep.q2_levels;
    s.n_realizations = sweep.n_realizations;
    s.n_train = sweep.n_train;
    s.n_val = sweep.n_val;
    s.n_test = sweep.n_test;
    s.train = train_config();
    s.master_seed = master_seed;
    return s;
}

void ExperimentConfig::validate() const {
    echo_generation().validate();
    if (forward.n_time_points < 2) {
        throw InvalidParameter("forward.n_time_points must be >= 2");
    }
    if (!(forward.t_max > 0.0)) {
        throw InvalidParameter("forward.t_max must be > 0");
    }
    forward_generation().validate();
    if (split.n_train == 0 || split.n_val == 0 || split.n_test == 0) {
        throw InvalidSplit("split sizes must be positive");
    }
    if (train.width < 1) {
        throw InvalidParameter(fmt::format("train.width must be >= 1, got {}", train.width));
    }
    train_config().validate();
    sweep_config().validate();
}

Json to_json(const ExperimentConfig &c) {
    Json j;
    j["master_seed"] = c.master_seed;
    j["ising"] = Json{{"h", c.ising.h}, {"J", c.ising.J}};
    j["layout"] = c.layout == tfim::ladder_layout_6() ? Json("ladder6") : datagen::to_json(c.layout);
    j["noise"] = datagen::to_json(c.noise);
    j["measurement"] = datagen::to_json(c.measurement);
    j["echo"] = Json{{"n_states", c.echo.n_states},
                     {"time_points", c.echo.time_points},
                     {"n_trotter_each_way", c.echo.n_trotter_each_way},
                     {"prep_cnot_prob", c.echo.prep_cnot_prob},
                     {"noisy_prep", c.echo.noisy_prep}};
    j["forward"] = Json{{"n_states", c.forward.n_states},
                        {"n_time_points", c.forward.n_time_points},
                        {"t_max", c.forward.t_max},
                        {"n_trotter", c.forward.n_trotter}};
    Json split{{"n_train", c.split.n_train}, {"n_val", c.split.n_val}, {"n_test", c.split.n_test}};
    put_optional(split, "seed", c.split.seed);
    j["split"] = split;
    Json train{{"width", c.train.width},     {"lr", c.train.lr},
               {"beta1", c.train.beta1},     {"beta2", c.train.beta2},
               {"epsilon", c.train.epsilon}, {"batch_size", c.train.batch_size},
               {"epochs", c.train.epochs}};
    put_optional(train, "init_seed", c.train.init_seed);
    put_optional(train, "shuffle_seed", c.train.shuffle_seed);
    j["train"] = train;
    j["sweep"] = Json{{"widths", c.sweep.widths},
                      {"q2_levels", c.sweep.q2_levels},
                      {"n_realizations", c.sweep.n_realizations},
                      {"n_train", c.sweep.n_train},
                      {"n_val", c.sweep.n_val},
                      {"n_test", c.sweep.n_test}};
    return j;
}

ExperimentConfig experiment_config_from_json(const Json &j) {
    check_keys(j, "config",
               {"master_seed", "ising", "layout", "noise", "measurement", "echo", "forward",
                "split", "train", "sweep"});
    ExperimentConfig c;
    c.master_seed = optional<std::uint64_t>(j, "master_seed", "config", c.master_seed);

    const Json &ising = section_or_empty(j, "ising");
    check_keys(ising, "ising", {"h", "J"});
    c.ising.h = optional<double>(ising, "h", "ising", c.ising.h);
    c.ising.J = optional<double>(ising, "J", "ising", c.ising.J);

    if (j.contains("layout")) c.layout = datagen::layout_from_json(j.at("layout"));
    c.ising.n_spins = c.layout.n_qubits;

    const Json &noise = section_or_empty(j, "noise");
    check_keys(noise, "noise", {"q1", "q2"});
    c.noise.q1 = optional<double>(noise, "q1", "noise", c.noise.q1);
    c.noise.q2 = optional<double>(noise, "q2", "noise", c.noise.q2);

    const Json &meas = section_or_empty(j, "measurement");
    check_keys(meas, "measurement", {"shots", "ideal_shots"});
    c.measurement = datagen::measurement_from_json(meas);

    const Json &echo = section_or_empty(j, "echo");
    check_keys(echo, "echo",
               {"n_states", "time_points", "n_trotter_each_way", "prep_cnot_prob", "noisy_prep"});
    c.echo.n_states = optional<int>(echo, "n_states", "echo", c.echo.n_states);
    c.echo.time_points = optional<std::vector<double>>(echo, "time_points", "echo", c.echo.time_points);
    c.echo.n_trotter_each_way =
        optional<int>(echo, "n_trotter_each_way", "echo", c.echo.n_trotter_each_way);
    c.echo.prep_cnot_prob = optional<double>(echo, "prep_cnot_prob", "echo", c.echo.prep_cnot_prob);
    c.echo.noisy_prep = optional<bool>(echo, "noisy_prep", "echo", c.echo.noisy_prep);

    const Json &fwd = section_or_empty(j, "forward");
    check_keys(fwd, "forward", {"n_states", "n_time_points", "t_max", "n_trotter"});
    c.forward.n_states = optional<int>(fwd, "n_states", "forward", c.forward.n_states);
    c.forward.n_time_points = optional<int>(fwd, "n_time_points", "forward", c.forward.n_time_points);
    c.forward.t_max = optional<double>(fwd, "t_max", "forward", c.forward.t_max);
    c.forward.n_trotter = optional<int>(fwd, "n_trotter", "forward", c.forward.n_trotter);

    const Json &split = section_or_empty(j, "split");
    check_keys(split, "split", {"n_train", "n_val", "n_test", "seed"});
    c.split.n_train = optional<std::size_t>(split, "n_train", "split", c.split.n_train);
    c.split.n_val = optional<std::size_t>(split, "n_val", "split", c.split.n_val);
    c.split.n_test = optional<std::size_t>(split, "n_test", "split", c.split.n_test);
    c.split.seed = get_optional<std::uint64_t>(split, "seed", "split");

    const Json &train = section_or_empty(j, "train");
    check_keys(train, "train",
               {"width", "lr", "beta1", "beta2", "epsilon", "batch_size", "epochs", "init_seed",
                "shuffle_seed"});
    c.train.width = optional<int>(train, "width", "train", c.train.width);
    c.train.lr = optional<double>(train, "lr", "train", c.train.lr);
    c.train.beta1 = optional<double>(train, "beta1", "train", c.train.beta1);
    c.train.beta2 = optional<double>(train, "beta2", "train", c.train.beta2);
    c.train.epsilon = optional<double>(train, "epsilon", "train", c.train.epsilon);
    c.train.batch_size = optional<int>(train, "batch_size", "train", c.train.batch_size);
    c.train.epochs = optional<int>(train, "epochs", "train", c.train.epochs);
    c.train.init_seed = get_optional<std::uint64_t>(train, "init_seed", "train");
    c.train.shuffle_seed = get_optional<std::uint64_t>(train, "shuffle_seed", "train");

    const Json &sweep = section_or_empty(j, "sweep");
    check_keys(sweep, "sweep", {"widths", "q2_levels", "n_realizations", "n_train", "n_val", "n_test"});
    c.sweep.widths = optional<std::vector<int>>(sweep, "widths", "sweep", c.sweep.widths);
    c.sweep.q2_levels = optional<std::vector<double>>(sweep, "q2_levels", "sweep", c.sweep.q2_levels);
    c.sweep.n_realizations = optional<int>(sweep, "n_realizations", "sweep", c.sweep.n_realizations);
    c.sweep.n_train = optional<std::size_t>(sweep, "n_train", "sweep", c.sweep.n_train);
    c.sweep.n_val = optional<std::size_t>(sweep, "n_val", "sweep", c.sweep.n_val);
    c.sweep.n_test = optional<std::size_t>(sweep, "n_test", "sweep", c.sweep.n_test);
    return c;
}

ExperimentConfig parse_config(const std::string &text, const std::string &source) {
    ExperimentConfig c = experiment_config_from_json(json_util::parse_with_location(text, source));
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FileError("cannot open config '" + path.string() + "'");
    }
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    try {
        return parse_config(text, path.string());
    } catch (const ParseError &e) {
        const std::string what = e.what();
        if (what.rfind(path.string(), 0) == 0) throw;
        throw ParseError(fmt::format("{}: {}", path.string(), what));
    }
}

std::string file_digest(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FileError("cannot open '" + path.string() + "'");
    }
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[1 << 16];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        for (std::streamsize k = 0; k < in.gcount(); ++k) {
            h ^= static_cast<unsigned char>(buf[k]);
            h *= 0x100000001b3ULL;
        }
    }
    return fmt::format("{:016x}", h);
}

} // namespace echoqem::cli
