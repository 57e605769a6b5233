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

#include "echoqem/neuralnet/mlp.hpp"

#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "echoqem/errors.hpp"
#include "echoqem/seeding.hpp"

namespace echoqem::nn {

std::size_t MlpModel::parameter_count() const {
    return static_cast<std::size_t>(W1.size() + b1.size() + W2.size() + b2.size());
}

bool MlpModel::all_finite() const {
    return W1.allFinite() && b1.allFinite() && W2.allFinite() && b2.allFinite();
}

namespace {

template <typename M> void push_all(std::vector<double> &out, const M &m) {
    // Row-major storage for matrices, so data() order is row-major.
    out.insert(out.end(), m.data(), m.data() + m.size());
}

template <typename M> std::size_t pull_all(M &m, std::span<const double> src, std::size_t at) {
    std::copy(src.begin() + static_cast<std::ptrdiff_t>(at),
              src.begin() + static_cast<std::ptrdiff_t>(at + static_cast<std::size_t>(m.size())),
              m.data());
    return at + static_cast<std::size_t>(m.size());
}

void check_width(const MlpModel &model, const Batch &batch) {
    if (batch.x.cols() != model.n_in || batch.y.cols() != model.n_out ||
        batch.x.rows() != batch.y.rows()) {
        throw ShapeError(fmt::format("batch shape ({}x{}, {}x{}) does not fit a {}-{}-{} model",
                                     batch.x.rows(), batch.x.cols(), batch.y.rows(),
                                     batch.y.cols(), model.n_in, model.n_hidden, model.n_out));
    }
}

} // namespace

std::vector<double> MlpModel::flatten() const {
    std::vector<double> out;
    out.reserve(parameter_count());
    push_all(out, W1);
    push_all(out, b1);
    push_all(out, W2);
    push_all(out, b2);
    return out;
}

void MlpModel::unflatten(std::span<const double> params) {
    if (params.size() != parameter_count()) {
        throw ShapeError(fmt::format("expected {} parameters, got {}", parameter_count(),
                                     params.size()));
    }
    std::size_t at = 0;
    at = pull_all(W1, params, at);
    at = pull_all(b1, params, at);
    at = pull_all(W2, params, at);
    pull_all(b2, params, at);
}

bool operator==(const MlpModel &a, const MlpModel &b) {
    return a.n_in == b.n_in && a.n_hidden == b.n_hidden && a.n_out == b.n_out &&
           a.W1 == b.W1 && a.b1 == b.b1 && a.W2 == b.W2 && a.b2 == b.b2;
}

Gradients Gradients::zeros_like(const MlpModel &model) {
    return Gradients{Matrix::Zero(model.n_hidden, model.n_in), Vector::Zero(model.n_hidden),
                     Matrix::Zero(model.n_out, model.n_hidden), Vector::Zero(model.n_out)};
}

std::vector<double> Gradients::flatten() const {
    std::vector<double> out;
    push_all(out, W1);
    push_all(out, b1);
    push_all(out, W2);
    push_all(out, b2);
    return out;
}

void TrainConfig::validate() const {
    if (!(lr > 0.0)) throw InvalidParameter(fmt::format("lr must be > 0, got {}", lr));
    if (!(beta1 >= 0.0 && beta1 < 1.0)) throw InvalidParameter("beta1 must be in [0, 1)");
    if (!(beta2 >= 0.0 && beta2 < 1.0)) throw InvalidParameter("beta2 must be in [0, 1)");
    if (!(epsilon > 0.0)) throw InvalidParameter("epsilon must be > 0");
    if (batch_size < 1) throw InvalidParameter("batch_size must be >= 1");
    if (epochs < 1) throw InvalidParameter("epochs must be >= 1");
}

AdamState AdamState::zeros_like(const MlpModel &model) {
    return AdamState{Gradients::zeros_like(model), Gradients::zeros_like(model), 0};
}

Batch Batch::from_records(const std::vector<datagen::DataRecord> &records) {
    Batch b;
    const auto n = static_cast<Eigen::Index>(records.size());
    b.x.resize(n, kSpinDim);
    b.y.resize(n, kSpinDim);
    for (Eigen::Index r = 0; r < n; ++r) {
        const auto &rec = records[static_cast<std::size_t>(r)];
        if (rec.m_noisy.size() != kSpinDim || rec.m_ideal.size() != kSpinDim) {
            throw ShapeError(fmt::format("record has {} spins, the network expects {}",
                                         rec.m_noisy.size(), kSpinDim));
        }
        for (int j = 0; j < kSpinDim; ++j) {
            b.x(r, j) = rec.m_noisy[static_cast<std::size_t>(j)];
            b.y(r, j) = rec.m_ideal[static_cast<std::size_t>(j)];
        }
    }
    return b;
}

Batch Batch::rows(std::span<const std::size_t> indices) const {
    Batch b;
    const auto n = static_cast<Eigen::Index>(indices.size());
    b.x.resize(n, x.cols());
    b.y.resize(n, y.cols());
    for (Eigen::Index r = 0; r < n; ++r) {
        const auto src = static_cast<Eigen::Index>(indices[static_cast<std::size_t>(r)]);
        b.x.row(r) = x.row(src);
        b.y.row(r) = y.row(src);
    }
    return b;
}

MlpModel init_model(int n_hidden, std::uint64_t init_seed) {
    if (n_hidden < 1) {
        throw InvalidParameter(fmt::format("n_hidden must be >= 1, got {}", n_hidden));
    }
    MlpModel m;
    m.n_hidden = n_hidden;
    m.W1.resize(n_hidden, m.n_in);
    m.b1 = Vector::Zero(n_hidden);
    m.W2.resize(m.n_out, n_hidden);
    m.b2 = Vector::Zero(m.n_out);

    Rng rng(init_seed);
    const double bound1 = 1.0 / std::sqrt(static_cast<double>(m.n_in));
    for (Eigen::Index k = 0; k < m.W1.size(); ++k) {
        m.W1.data()[k] = rng.uniform(-bound1, bound1);
    }
    const double bound2 = 1.0 / std::sqrt(static_cast<double>(n_hidden));
    for (Eigen::Index k = 0; k < m.W2.size(); ++k) {
        m.W2.data()[k] = rng.uniform(-bound2, bound2);
    }
    return m;
}

Matrix forward_batch(const MlpModel &model, const Matrix &x) {
    if (x.cols() != model.n_in) {
        throw ShapeError(fmt::format("input width {} != model input {}", x.cols(), model.n_in));
    }
    Matrix hidden = (x * model.W1.transpose()).rowwise() + model.b1.transpose();
    hidden = hidden.cwiseMax(0.0);
    Matrix out = (hidden * model.W2.transpose()).rowwise() + model.b2.transpose();
    return out.array().tanh().matrix();
}

MagnetizationVector forward(const MlpModel &model, std::span<const double> x) {
    Matrix in(1, static_cast<Eigen::Index>(x.size()));
    for (std::size_t j = 0; j < x.size(); ++j) {
        in(0, static_cast<Eigen::Index>(j)) = x[j];
    }
    const Matrix out = forward_batch(model, in);
    return MagnetizationVector(out.data(), out.data() + out.size());
}

double mse_loss(const MlpModel &model, const Batch &batch) {
    if (batch.size() == 0) {
        throw InvalidInput("mse_loss: empty batch");
    }
    check_width(model, batch);
    const Matrix out = forward_batch(model, batch.x);
    return (out - batch.y).squaredNorm() / static_cast<double>(batch.size());
}

Gradients backward(const MlpModel &model, const Batch &batch) {
    if (batch.size() == 0) {
        throw InvalidInput("backward: empty batch");
    }
    check_width(model, batch);
    const double inv_n = 1.0 / static_cast<double>(batch.size());

    const Matrix pre_hidden = (batch.x * model.W1.transpose()).rowwise() + model.b1.transpose();
    const Matrix hidden = pre_hidden.cwiseMax(0.0);
    const Matrix out =
        ((hidden * model.W2.transpose()).rowwise() + model.b2.transpose()).array().tanh().matrix();

    // dL/dz2 = 2 (o - y) (1 - o^2) / B
    const Matrix d_out =
        ((2.0 * inv_n) * (out - batch.y).array() * (1.0 - out.array().square())).matrix();
    Matrix d_hidden = d_out * model.W2;
    d_hidden = (pre_hidden.array() > 0.0).select(d_hidden, 0.0);

    Gradients g;
    g.W2 = d_out.transpose() * hidden;
    g.b2 = d_out.colwise().sum().transpose();
    g.W1 = d_hidden.transpose() * batch.x;
    g.b1 = d_hidden.colwise().sum().transpose();
    return g;
}

void adam_step(MlpModel &model, const Gradients &grads, AdamState &state,
               const TrainConfig &cfg) {
    state.step += 1;
    const double t = static_cast<double>(state.step);
    const double correction1 = 1.0 - std::pow(cfg.beta1, t);
    const double correction2 = 1.0 - std::pow(cfg.beta2, t);

    auto update = [&](auto &param, const auto &g, auto &m, auto &v) {
        m = cfg.beta1 * m + (1.0 - cfg.beta1) * g;
        v = cfg.beta2 * v + (1.0 - cfg.beta2) * g.cwiseProduct(g);
        param.array() -= cfg.lr * (m.array() / correction1) /
                         ((v.array() / correction2).sqrt() + cfg.epsilon);
    };
    update(model.W1, grads.W1, state.m.W1, state.v.W1);
    update(model.b1, grads.b1, state.m.b1, state.v.b1);
    update(model.W2, grads.W2, state.m.W2, state.v.W2);
    update(model.b2, grads.b2, state.m.b2, state.v.b2);
}

TrainResult train(MlpModel model, const Batch &train_set, const Batch &val_set,
                  const TrainConfig &cfg) {
    cfg.validate();
    if (train_set.size() == 0 || val_set.size() == 0) {
        throw InvalidInput("train: training and validation sets must be nonempty");
    }
    check_width(model, train_set);
    check_width(model, val_set);

    AdamState adam = AdamState::zeros_like(model);
    Rng shuffler(cfg.shuffle_seed);
    std::vector<std::size_t> order(train_set.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const std::size_t batch = static_cast<std::size_t>(cfg.batch_size);

    TrainResult result;
    result.history.reserve(static_cast<std::size_t>(cfg.epochs));
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        shuffler.shuffle(std::span<std::size_t>(order));
        double loss_sum = 0.0;
        for (std::size_t start = 0; start < order.size(); start += batch) {
            const std::size_t count = std::min(batch, order.size() - start);
            const Batch mini = train_set.rows(std::span<const std::size_t>(order).subspan(start, count));
            loss_sum += mse_loss(model, mini) * static_cast<double>(count);
            adam_step(model, backward(model, mini), adam, cfg);
        }
        EpochStats stats;
        stats.epoch = epoch;
        stats.train_loss = loss_sum / static_cast<double>(order.size());
        stats.val_loss = mse_loss(model, val_set);
        result.history.push_back(stats);
        if (epoch == 0 || stats.val_loss < result.best_val_loss) {
            result.best_val_loss = stats.val_loss;
            result.best_epoch = epoch;
            result.best_model = model;
        }
    }
    return result;
}

std::vector<MagnetizationVector> predict_dataset(const MlpModel &model,
                                                 const std::vector<datagen::DataRecord> &records) {
    Matrix x(static_cast<Eigen::Index>(records.size()), model.n_in);
    for (std::size_t r = 0; r < records.size(); ++r) {
        if (records[r].m_noisy.size() != static_cast<std::size_t>(model.n_in)) {
            throw ShapeError(fmt::format("record has {} spins, model expects {}",
                                         records[r].m_noisy.size(), model.n_in));
        }
        for (int j = 0; j < model.n_in; ++j) {
            x(static_cast<Eigen::Index>(r), j) = records[r].m_noisy[static_cast<std::size_t>(j)];
        }
    }
    const Matrix out = x.rows() > 0 ? forward_batch(model, x) : Matrix(0, model.n_out);
    std::vector<MagnetizationVector> corrected(records.size());
    for (std::size_t r = 0; r < records.size(); ++r) {
        const auto row = out.row(static_cast<Eigen::Index>(r));
        corrected[r].assign(row.data(), row.data() + row.size());
    }
    return corrected;
}

} // namespace echoqem::nn
