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

#include "echoqem/metrics/sweep.hpp"

#include <bit>
#include <cmath>
#include <exception>

#include <fmt/format.h>

#include "echoqem/errors.hpp"
#include "echoqem/seeding.hpp"

namespace echoqem::metrics {

void SweepConfig::validate() const {
    if (widths.empty()) throw InvalidParameter("sweep: widths must be nonempty");
    if (q2_levels.empty()) throw InvalidParameter("sweep: q2_levels must be nonempty");
    for (int w : widths) {
        if (w < 1) throw InvalidParameter(fmt::format("sweep: width {} must be >= 1", w));
    }
    for (double q : q2_levels) {
        if (!(q >= 0.0 && q <= 1.0)) {
            throw InvalidParameter(fmt::format("sweep: q2 {} outside [0, 1]", q));
        }
    }
    if (n_realizations < 1) throw InvalidParameter("sweep: n_realizations must be >= 1");
    if (n_train == 0 || n_val == 0 || n_test == 0) {
        throw InvalidParameter("sweep: train/val/test sizes must be positive");
    }
    train.validate();
}

SweepCell run_sweep_cell(const std::vector<DataRecord> &records, const SweepConfig &cfg,
                         const CellKey &key) {
    datagen::SplitSpec spec{cfg.n_train, cfg.n_val, cfg.n_test,
                            derive_seed(cfg.master_seed, SeedStream::kSubset,
                                        std::bit_cast<std::uint64_t>(key.q2),
                                        static_cast<std::uint64_t>(key.realization))};
    const datagen::DatasetSplit split = datagen::split_dataset(records, spec);

    nn::TrainConfig tc = cfg.train;
    tc.init_seed = derive_seed(cfg.master_seed, SeedStream::kInit,
                               static_cast<std::uint64_t>(key.width));
    tc.shuffle_seed = derive_seed(cfg.master_seed, SeedStream::kShuffle,
                                  static_cast<std::uint64_t>(key.width),
                                  static_cast<std::uint64_t>(key.realization));

    const nn::TrainResult trained =
        nn::train(nn::init_model(key.width, tc.init_seed), nn::Batch::from_records(split.train),
                  nn::Batch::from_records(split.val), tc);
    const CorrectionReport report = evaluate_echo_testset(trained.best_model, split.test);

    SweepCell cell;
    cell.key = key;
    cell.mean_k = report.summary.mean_k;
    cell.fraction_k_positive = report.summary.fraction_k_positive;
    cell.n_excluded = report.summary.n_excluded;
    cell.before = report.summary.before;
    cell.after = report.summary.after;
    cell.best_val_loss = trained.best_val_loss;
    return cell;
}

std::vector<SweepResult> aggregate_cells(const SweepConfig &cfg,
                                         const std::vector<SweepCell> &cells) {
    std::vector<SweepResult> out;
    for (double q2 : cfg.q2_levels) {
        for (int width : cfg.widths) {
            SweepResult r;
            r.q2 = q2;
            r.hidden_width = width;
            r.realization_k.assign(static_cast<std::size_t>(cfg.n_realizations), 0.0);
            std::vector<bool> seen(static_cast<std::size_t>(cfg.n_realizations), false);
            for (const SweepCell &c : cells) {
                if (c.key.q2 != q2 || c.key.width != width) continue;
                if (c.key.realization < 0 || c.key.realization >= cfg.n_realizations) continue;
                const auto idx = static_cast<std::size_t>(c.key.realization);
                r.realization_k[idx] = c.mean_k;
                seen[idx] = true;
                r.before.max += c.before.max;
                r.before.median += c.before.median;
                r.before.mean += c.before.mean;
                r.after.max += c.after.max;
                r.after.median += c.after.median;
                r.after.mean += c.after.mean;
            }
            for (std::size_t k = 0; k < seen.size(); ++k) {
                if (!seen[k]) {
                    throw InvalidInput(fmt::format("sweep: missing cell q2={} width={} realization={}",
                                                   q2, width, k));
                }
            }
            const double n = static_cast<double>(cfg.n_realizations);
            double sum = 0.0;
            for (double k : r.realization_k) sum += k;
            r.mean_k = sum / n;
            double ss = 0.0;
            for (double k : r.realization_k) ss += (k - r.mean_k) * (k - r.mean_k);
            r.std_k = std::sqrt(ss / n);
            for (AbsStats *s : {&r.before, &r.after}) {
                s->max /= n;
                s->median /= n;
                s->mean /= n;
            }
            out.push_back(std::move(r));
        }
    }
    return out;
}

std::vector<SweepResult> width_sweep(const SweepConfig &cfg, const DatasetProvider &provider,
                                     const CellCache *cache, std::vector<SweepCell> *cells_out) {
    cfg.validate();
    std::vector<SweepCell> cells;
    cells.reserve(cfg.n_cells());

    for (double q2 : cfg.q2_levels) {
        std::vector<CellKey> keys;
        for (int width : cfg.widths) {
            for (int r = 0; r < cfg.n_realizations; ++r) {
                keys.push_back(CellKey{q2, width, r});
            }
        }
        std::vector<std::optional<SweepCell>> done(keys.size());
        bool all_cached = true;
        for (std::size_t k = 0; k < keys.size(); ++k) {
            if (cache && cache->load) done[k] = cache->load(keys[k]);
            all_cached = all_cached && done[k].has_value();
        }
        if (!all_cached) {
            const std::vector<DataRecord> records = provider(q2);
            std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
            for (std::int64_t k = 0; k < static_cast<std::int64_t>(keys.size()); ++k) {
                auto &slot = done[static_cast<std::size_t>(k)];
                if (slot) continue;
                try {
                    slot = run_sweep_cell(records, cfg, keys[static_cast<std::size_t>(k)]);
                    if (cache && cache->store) cache->store(*slot);
                } catch (...) {
#pragma omp critical(echoqem_sweep_failure)
                    if (!failure) failure = std::current_exception();
                }
            }
            if (failure) std::rethrow_exception(failure);
        }
        for (auto &c : done) cells.push_back(*c);
    }

    std::vector<SweepResult> results = aggregate_cells(cfg, cells);
    if (cells_out) *cells_out = std::move(cells);
    return results;
}

} // namespace echoqem::metrics
