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

// Model files are a single JSON document:
//
//   {
//     "format": "echoqem-mlp", "version": 1,
//     "n_in": 6, "n_hidden": H, "n_out": 6,
//     "hidden_activation": "relu", "output_activation": "tanh",
//     "W1": [H*6 numbers, row-major], "b1": [H],
//     "W2": [6*H numbers, row-major], "b2": [6],
//     "train_config": {...}, "metrics": {...}, "provenance": {...}
//   }
//
// Every weight is printed with 17 significant digits, so reloading gives the
// identical doubles.

#include <filesystem>
#include <iosfwd>

#include "echoqem/json_util.hpp"
#include "echoqem/neuralnet/mlp.hpp"

namespace echoqem::nn {

using json_util::Json;

struct ModelMetrics {
    int epochs_run = 0;
    int best_epoch = 0;
    double best_val_loss = 0.0;
    double final_train_loss = 0.0;
    double final_val_loss = 0.0;

    static ModelMetrics from_result(const TrainResult &result);
    friend bool operator==(const ModelMetrics &, const ModelMetrics &) = default;
};

struct ModelFile {
    MlpModel model;
    TrainConfig train_config;
    ModelMetrics metrics;
    /// Free-form record of what produced the model (config snapshot, dataset
    /// digest, split seeds).
    Json provenance = Json::object();
};

Json to_json(const TrainConfig &cfg);
TrainConfig train_config_from_json(const Json &j);

void write_model(std::ostream &out, const ModelFile &file);
ModelFile read_model(std::istream &in);

void save_model(const std::filesystem::path &path, const ModelFile &file);
ModelFile load_model(const std::filesystem::path &path);

/// epoch,train_loss,val_loss
void write_history_csv(std::ostream &out, const std::vector<EpochStats> &history);

} // namespace echoqem::nn
