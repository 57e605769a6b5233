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

#include "echoqem/neuralnet/model_io.hpp"

#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>

#include <fmt/format.h>

#include "echoqem/errors.hpp"

namespace echoqem::nn {

using json_util::require;

namespace {

constexpr const char *kFormat = "echoqem-mlp";
constexpr int kVersion = 1;

void write_array(std::ostream &out, const double *data, Eigen::Index n) {
    out << '[';
    for (Eigen::Index k = 0; k < n; ++k) {
        if (k) out << ',';
        out << fmt::format("{:.17g}", data[k]);
    }
    out << ']';
}

template <typename M>
void read_array(const Json &j, const char *key, M &dst) {
    const auto values = require<std::vector<double>>(j, key, "model");
    if (values.size() != static_cast<std::size_t>(dst.size())) {
        throw ShapeError(fmt::format("model.{} has {} entries, expected {}", key, values.size(),
                                     dst.size()));
    }
    std::copy(values.begin(), values.end(), dst.data());
}

Json metrics_to_json(const ModelMetrics &m) {
    return Json{{"epochs_run", m.epochs_run},
                {"best_epoch", m.best_epoch},
                {"best_val_loss", m.best_val_loss},
                {"final_train_loss", m.final_train_loss},
                {"final_val_loss", m.final_val_loss}};
}

ModelMetrics metrics_from_json(const Json &j) {
    ModelMetrics m;
    m.epochs_run = require<int>(j, "epochs_run", "metrics");
    m.best_epoch = require<int>(j, "best_epoch", "metrics");
    m.best_val_loss = require<double>(j, "best_val_loss", "metrics");
    m.final_train_loss = require<double>(j, "final_train_loss", "metrics");
    m.final_val_loss = require<double>(j, "final_val_loss", "metrics");
    return m;
}

} // namespace

ModelMetrics ModelMetrics::from_result(const TrainResult &result) {
    ModelMetrics m;
    m.epochs_run = static_cast<int>(result.history.size());
    m.best_epoch = result.best_epoch;
    m.best_val_loss = result.best_val_loss;
    if (!result.history.empty()) {
        m.final_train_loss = result.history.back().train_loss;
        m.final_val_loss = result.history.back().val_loss;
    }
    return m;
}

Json to_json(const TrainConfig &cfg) {
    return Json{{"lr", cfg.lr},
                {"beta1", cfg.beta1},
                {"beta2", cfg.beta2},
                {"epsilon", cfg.epsilon},
                {"batch_size", cfg.batch_size},
                {"epochs", cfg.epochs},
                {"init_seed", cfg.init_seed},
                {"shuffle_seed", cfg.shuffle_seed}};
}

TrainConfig train_config_from_json(const Json &j) {
    TrainConfig c;
    c.lr = require<double>(j, "lr", "train_config");
    c.beta1 = require<double>(j, "beta1", "train_config");
    c.beta2 = require<double>(j, "beta2", "train_config");
    c.epsilon = require<double>(j, "epsilon", "train_config");
    c.batch_size = require<int>(j, "batch_size", "train_config");
    c.epochs = require<int>(j, "epochs", "train_config");
    c.init_seed = require<std::uint64_t>(j, "init_seed", "train_config");
    c.shuffle_seed = require<std::uint64_t>(j, "shuffle_seed", "train_config");
    return c;
}

void write_model(std::ostream &out, const ModelFile &file) {
    const MlpModel &m = file.model;
    out << "{\n";
    out << fmt::format("  \"format\": \"{}\",\n  \"version\": {},\n", kFormat, kVersion);
    out << fmt::format("  \"n_in\": {},\n  \"n_hidden\": {},\n  \"n_out\": {},\n", m.n_in,
                       m.n_hidden, m.n_out);
    out << "  \"hidden_activation\": \"relu\",\n  \"output_activation\": \"tanh\",\n";
    out << "  \"W1\": ";
    write_array(out, m.W1.data(), m.W1.size());
    out << ",\n  \"b1\": ";
    write_array(out, m.b1.data(), m.b1.size());
    out << ",\n  \"W2\": ";
    write_array(out, m.W2.data(), m.W2.size());
    out << ",\n  \"b2\": ";
    write_array(out, m.b2.data(), m.b2.size());
    out << ",\n  \"train_config\": " << to_json(file.train_config).dump();
    out << ",\n  \"metrics\": " << metrics_to_json(file.metrics).dump();
    out << ",\n  \"provenance\": " << file.provenance.dump();
    out << "\n}\n";
}

ModelFile read_model(std::istream &in) {
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    const Json j = json_util::parse_with_location(text, "model");
    if (json_util::optional<std::string>(j, "format", "model", "") != kFormat) {
        throw ParseError("model: not an echoqem model file (bad 'format')");
    }
    const auto hidden_act = require<std::string>(j, "hidden_activation", "model");
    const auto output_act = require<std::string>(j, "output_activation", "model");
    if (hidden_act != "relu" || output_act != "tanh") {
        throw ParseError(fmt::format("model: unsupported activations '{}'/'{}'", hidden_act,
                                     output_act));
    }

    ModelFile file;
    MlpModel &m = file.model;
    m.n_in = require<int>(j, "n_in", "model");
    m.n_hidden = require<int>(j, "n_hidden", "model");
    m.n_out = require<int>(j, "n_out", "model");
    if (m.n_in < 1 || m.n_hidden < 1 || m.n_out < 1) {
        throw ShapeError("model: layer sizes must be positive");
    }
    m.W1.resize(m.n_hidden, m.n_in);
    m.b1.resize(m.n_hidden);
    m.W2.resize(m.n_out, m.n_hidden);
    m.b2.resize(m.n_out);
    read_array(j, "W1", m.W1);
    read_array(j, "b1", m.b1);
    read_array(j, "W2", m.W2);
    read_array(j, "b2", m.b2);
    if (!m.all_finite()) {
        throw InvalidInput("model: non-finite parameter");
    }
    file.train_config = train_config_from_json(json_util::section(j, "train_config", "model"));
    file.metrics = metrics_from_json(json_util::section(j, "metrics", "model"));
    file.provenance = json_util::optional<Json>(j, "provenance", "model", Json::object());
    return file;
}

void save_model(const std::filesystem::path &path, const ModelFile &file) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw FileError("cannot open '" + path.string() + "' for writing");
    }
    write_model(out, file);
    if (!out) {
        throw FileError("write failed for '" + path.string() + "'");
    }
}

ModelFile load_model(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FileError("cannot open model '" + path.string() + "'");
    }
    return read_model(in);
}

void write_history_csv(std::ostream &out, const std::vector<EpochStats> &history) {
    out << "epoch,train_loss,val_loss\n";
    for (const EpochStats &e : history) {
        out << fmt::format("{},{:.17g},{:.17g}\n", e.epoch, e.train_loss, e.val_loss);
    }
}

} // namespace echoqem::nn
