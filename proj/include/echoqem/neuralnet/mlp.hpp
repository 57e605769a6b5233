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

// One-hidden-layer perceptron  f(x) = tanh(W2 relu(W1 x + b1) + b2)
// trained with Adam on the mean squared error
//
//   L = (1/B) sum_b sum_j (f(x_b)_j - y_b,j)^2
//
// (mean over samples of the per-sample summed squared error).
// ReLU'(0) is taken as 0.

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "echoqem/datagen/datagen.hpp"

namespace echoqem::nn {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using datagen::MagnetizationVector;

inline constexpr int kSpinDim = 6;

struct MlpModel {
    int n_in = kSpinDim;
    int n_hidden = 0;
    int n_out = kSpinDim;
    Matrix W1; // n_hidden x n_in
    Vector b1; // n_hidden
    Matrix W2; // n_out x n_hidden
    Vector b2; // n_out

    std::size_t parameter_count() const;
    bool all_finite() const;

    /// Parameters in the order W1 (row-major), b1, W2 (row-major), b2.
    std::vector<double> flatten() const;
    void unflatten(std::span<const double> params);

    friend bool operator==(const MlpModel &a, const MlpModel &b);
};

/// Same layout as the model it belongs to.
struct Gradients {
    Matrix W1;
    Vector b1;
    Matrix W2;
    Vector b2;

    static Gradients zeros_like(const MlpModel &model);
    std::vector<double> flatten() const;
};

struct TrainConfig {
    double lr = 3e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    int batch_size = 80;
    int epochs = 100;
    std::uint64_t init_seed = 0;
    std::uint64_t shuffle_seed = 0;

    void validate() const;
    friend bool operator==(const TrainConfig &, const TrainConfig &) = default;
};

struct AdamState {
    Gradients m;
    Gradients v;
    std::int64_t step = 0;

    static AdamState zeros_like(const MlpModel &model);
};

/// Inputs and targets, one sample per row.
struct Batch {
    Matrix x;
    Matrix y;

    std::size_t size() const noexcept { return static_cast<std::size_t>(x.rows()); }

    /// x = m_noisy, y = m_ideal.
    static Batch from_records(const std::vector<datagen::DataRecord> &records);
    Batch rows(std::span<const std::size_t> indices) const;
};

/// W ~ U(-1/sqrt(fan_in), 1/sqrt(fan_in)), biases zero. Draw order: W1 then
/// W2, row-major, from one engine seeded by init_seed.
MlpModel init_model(int n_hidden, std::uint64_t init_seed);

MagnetizationVector forward(const MlpModel &model, std::span<const double> x);
Matrix forward_batch(const MlpModel &model, const Matrix &x);

/// Throws InvalidInput for an empty batch and ShapeError on width mismatch.
double mse_loss(const MlpModel &model, const Batch &batch);

/// Exact gradients of mse_loss.
Gradients backward(const MlpModel &model, const Batch &batch);

/// Bias-corrected Adam update; increments state.step.
void adam_step(MlpModel &model, const Gradients &grads, AdamState &state,
               const TrainConfig &cfg);

struct EpochStats {
    int epoch = 0;
    double train_loss = 0.0; // sample-weighted mean of mini-batch losses
    double val_loss = 0.0;   // full validation set, after the epoch
};

struct TrainResult {
    MlpModel best_model;
    std::vector<EpochStats> history;
    int best_epoch = 0;
    double best_val_loss = 0.0;
};

/// Mini-batch Adam for cfg.epochs epochs. The sample order is reshuffled
/// every epoch from one engine seeded by cfg.shuffle_seed; the last partial
/// batch is kept. Returns the parameters with the lowest validation loss.
TrainResult train(MlpModel model, const Batch &train_set, const Batch &val_set,
                  const TrainConfig &cfg);

/// Corrected vectors f(m_noisy) for each record.
std::vector<MagnetizationVector> predict_dataset(const MlpModel &model,
                                                 const std::vector<datagen::DataRecord> &records);

} // namespace echoqem::nn
