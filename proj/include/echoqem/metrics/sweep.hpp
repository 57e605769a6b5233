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

// Hidden-width study. For every noise level q2 one full dataset is
// generated; for every (q2, width, realization) cell a model is trained on a
// random subset of that dataset and scored on the subset's test part.
//
// Seeds, all derived from SweepConfig::master_seed:
//   subset  : derive_seed(master, kSubset, bits(q2), realization)
//   init    : derive_seed(master, kInit, width)        (identical clones)
//   shuffle : derive_seed(master, kShuffle, width, realization)
// A realization therefore sees the same subset at every width.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "echoqem/metrics/metrics.hpp"
#include "echoqem/neuralnet/mlp.hpp"

namespace echoqem::metrics {

struct SweepConfig {
    std::vector<int> widths{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 25, 50, 100, 200};
    std::vector<double> q2_levels{0.003, 0.007, 0.01};
    int n_realizations = 50;
    std::size_t n_train = 4000;
    std::size_t n_val = 1000;
    std::size_t n_test = 1000;
    /// lr, betas, epsilon, batch size and epochs; the seeds are ignored.
    nn::TrainConfig train;
    std::uint64_t master_seed = 0;

    void validate() const;
    std::size_t n_cells() const noexcept {
        return widths.size() * q2_levels.size() * static_cast<std::size_t>(n_realizations);
    }
};

struct CellKey {
    double q2 = 0.0;
    int width = 0;
    int realization = 0;

    friend bool operator==(const CellKey &, const CellKey &) = default;
};

struct SweepCell {
    CellKey key;
    double mean_k = 0.0;
    double fraction_k_positive = 0.0;
    std::size_t n_excluded = 0;
    AbsStats before;
    AbsStats after;
    double best_val_loss = 0.0;
};

struct SweepResult {
    double q2 = 0.0;
    int hidden_width = 0;
    std::vector<double> realization_k; // by realization index
    double mean_k = 0.0;
    double std_k = 0.0; // population standard deviation
    AbsStats before;    // each statistic averaged over realizations
    AbsStats after;
};

/// Trains and scores one cell on `records` (the full dataset for key.q2).
SweepCell run_sweep_cell(const std::vector<DataRecord> &records, const SweepConfig &cfg,
                         const CellKey &key);

/// Returns the full dataset for a noise level. Called once per level, before
/// any cell of that level runs.
using DatasetProvider = std::function<std::vector<DataRecord>(double q2)>;

/// Optional per-cell persistence. `load` returns a cached cell or nothing;
/// `store` is called once for every freshly computed cell and may be called
/// concurrently from several threads.
struct CellCache {
    std::function<std::optional<SweepCell>(const CellKey &)> load;
    std::function<void(const SweepCell &)> store;
};

/// Cells run concurrently (OpenMP); output order is q2-major, then width,
/// independent of scheduling.
std::vector<SweepResult> width_sweep(const SweepConfig &cfg, const DatasetProvider &provider,
                                     const CellCache *cache = nullptr,
                                     std::vector<SweepCell> *cells_out = nullptr);

/// Groups cells by (q2, width) in cfg order. Throws InvalidInput if a cell
/// is missing.
std::vector<SweepResult> aggregate_cells(const SweepConfig &cfg,
                                         const std::vector<SweepCell> &cells);

} // namespace echoqem::metrics
