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

#include "echoqem/metrics/exports.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>

#include <fmt/format.h>

#include "echoqem/errors.hpp"

namespace echoqem::metrics {

using json_util::require;

namespace {

std::string num(double v) { return fmt::format("{:.17g}", v); }

void write_vector(std::ostream &out, const MagnetizationVector &v) {
    for (double x : v) out << ',' << num(x);
}

} // namespace

std::vector<std::size_t> order_by_k(std::span<const RecordCorrection> rows) {
    std::vector<std::size_t> order(rows.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto &ka = rows[a].k;
        const auto &kb = rows[b].k;
        if (ka && kb) return *ka < *kb;
        return ka.has_value() && !kb.has_value();
    });
    return order;
}

std::vector<std::size_t> order_by_state_k(std::span<const StateK> states) {
    std::vector<std::size_t> order(states.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return states[a].mean_k < states[b].mean_k;
    });
    return order;
}

void write_records_csv(std::ostream &out, const std::vector<DataRecord> &records,
                       const CorrectionReport &report) {
    if (records.size() != report.rows.size() || records.size() != report.corrected.size()) {
        throw ShapeError("write_records_csv: report does not match the records");
    }
    const std::size_t width = records.empty() ? 6 : records.front().m_ideal.size();
    out << "rank,state_id,time_index,t,dM_noisy,dM_corrected,K";
    for (const char *name : {"m_ideal", "m_noisy", "m_corrected"}) {
        for (std::size_t j = 0; j < width; ++j) out << ',' << name << '_' << j;
    }
    out << '\n';
    const auto order = order_by_k(report.rows);
    for (std::size_t rank = 0; rank < order.size(); ++rank) {
        const std::size_t i = order[rank];
        const RecordCorrection &row = report.rows[i];
        out << fmt::format("{},{},{},{},{},{},{}", rank, row.state_id, row.time_index, num(row.t),
                           num(row.dm_before), num(row.dm_after), row.k ? num(*row.k) : "");
        write_vector(out, records[i].m_ideal);
        write_vector(out, records[i].m_noisy);
        write_vector(out, report.corrected[i]);
        out << '\n';
    }
}

void write_k_per_state_csv(std::ostream &out, const ForwardReport &report) {
    out << "rank,state_id,mean_K,mean_spin_K,n_defined,n_excluded\n";
    const auto order = order_by_state_k(report.states);
    for (std::size_t rank = 0; rank < order.size(); ++rank) {
        const StateK &s = report.states[order[rank]];
        out << fmt::format("{},{},{},{},{},{}\n", rank, s.state_id, num(s.mean_k),
                           num(s.mean_spin_k), s.n_defined, s.n_excluded);
    }
}

void write_trajectories_csv(std::ostream &out, const std::vector<DataRecord> &records,
                            const std::vector<MagnetizationVector> &corrected) {
    if (records.size() != corrected.size()) {
        throw ShapeError("write_trajectories_csv: record and prediction counts differ");
    }
    out << "state_id,time_index,t,spin,m_ideal,m_noisy,m_corrected,m_exact\n";
    auto mean = [](const MagnetizationVector &v) {
        return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    };
    for (std::size_t i = 0; i < records.size(); ++i) {
        const DataRecord &r = records[i];
        const std::string prefix = fmt::format("{},{},{}", r.state_id, r.time_index, num(r.t));
        for (std::size_t j = 0; j < r.m_ideal.size(); ++j) {
            out << fmt::format("{},{},{},{},{},{}\n", prefix, j, num(r.m_ideal[j]),
                               num(r.m_noisy[j]), num(corrected[i][j]),
                               r.m_exact ? num((*r.m_exact)[j]) : "");
        }
        out << fmt::format("{},avg,{},{},{},{}\n", prefix, num(mean(r.m_ideal)),
                           num(mean(r.m_noisy)), num(mean(corrected[i])),
                           r.m_exact ? num(mean(*r.m_exact)) : "");
    }
}

void write_sweep_stats_csv(std::ostream &out, const std::vector<SweepResult> &results) {
    out << "q2,width,n_realizations,mean_K,std_K,"
           "max_abs_dM_before,median_abs_dM_before,mean_abs_dM_before,"
           "max_abs_dM_after,median_abs_dM_after,mean_abs_dM_after\n";
    for (const SweepResult &r : results) {
        out << fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", num(r.q2), r.hidden_width,
                           r.realization_k.size(), num(r.mean_k), num(r.std_k), num(r.before.max),
                           num(r.before.median), num(r.before.mean), num(r.after.max),
                           num(r.after.median), num(r.after.mean));
    }
}

void write_sweep_cells_csv(std::ostream &out, const std::vector<SweepCell> &cells) {
    out << "q2,width,realization,mean_K,fraction_K_positive,n_excluded,best_val_loss,"
           "max_abs_dM_before,median_abs_dM_before,mean_abs_dM_before,"
           "max_abs_dM_after,median_abs_dM_after,mean_abs_dM_after\n";
    for (const SweepCell &c : cells) {
        out << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{}\n", num(c.key.q2), c.key.width,
                           c.key.realization, num(c.mean_k), num(c.fraction_k_positive),
                           c.n_excluded, num(c.best_val_loss), num(c.before.max),
                           num(c.before.median), num(c.before.mean), num(c.after.max),
                           num(c.after.median), num(c.after.mean));
    }
}

Json to_json(const AbsStats &s) {
    return Json{{"max", s.max}, {"median", s.median}, {"mean", s.mean}};
}

Json to_json(const ReportSummary &s) {
    return Json{{"n_records", s.n_records},
                {"n_defined", s.n_defined},
                {"n_excluded", s.n_excluded},
                {"fraction_k_positive", s.fraction_k_positive},
                {"mean_k", s.mean_k},
                {"abs_dm_before", to_json(s.before)},
                {"abs_dm_after", to_json(s.after)}};
}

Json to_json(const SweepCell &c) {
    return Json{{"q2", c.key.q2},
                {"width", c.key.width},
                {"realization", c.key.realization},
                {"mean_k", c.mean_k},
                {"fraction_k_positive", c.fraction_k_positive},
                {"n_excluded", c.n_excluded},
                {"best_val_loss", c.best_val_loss},
                {"abs_dm_before", to_json(c.before)},
                {"abs_dm_after", to_json(c.after)}};
}

AbsStats abs_stats_from_json(const Json &j) {
    return AbsStats{require<double>(j, "max", "stats"), require<double>(j, "median", "stats"),
                    require<double>(j, "mean", "stats")};
}

SweepCell sweep_cell_from_json(const Json &j) {
    SweepCell c;
    c.key.q2 = require<double>(j, "q2", "cell");
    c.key.width = require<int>(j, "width", "cell");
    c.key.realization = require<int>(j, "realization", "cell");
    c.mean_k = require<double>(j, "mean_k", "cell");
    c.fraction_k_positive = require<double>(j, "fraction_k_positive", "cell");
    c.n_excluded = require<std::size_t>(j, "n_excluded", "cell");
    c.best_val_loss = require<double>(j, "best_val_loss", "cell");
    c.before = abs_stats_from_json(json_util::section(j, "abs_dm_before", "cell"));
    c.after = abs_stats_from_json(json_util::section(j, "abs_dm_after", "cell"));
    return c;
}

} // namespace echoqem::metrics
