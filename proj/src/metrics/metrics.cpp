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

#include "echoqem/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <fmt/format.h>

#include "echoqem/errors.hpp"

namespace echoqem::metrics {

double delta_m(std::span<const double> m_ideal, std::span<const double> m_other) {
    if (m_ideal.size() != m_other.size()) {
        throw InvalidInput(fmt::format("delta_m: lengths differ ({} vs {})", m_ideal.size(),
                                       m_other.size()));
    }
    if (m_ideal.empty()) {
        throw InvalidInput("delta_m: empty vectors");
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < m_ideal.size(); ++j) {
        sum += m_ideal[j] - m_other[j];
    }
    return sum / static_cast<double>(m_ideal.size());
}

std::optional<double> correction_k(double dm_before, double dm_after) {
    if (dm_before == 0.0) {
        return std::nullopt;
    }
    return 1.0 - std::abs(dm_after) / std::abs(dm_before);
}

AbsStats abs_stats(std::span<const double> values) {
    AbsStats s;
    if (values.empty()) {
        return s;
    }
    std::vector<double> a(values.size());
    std::transform(values.begin(), values.end(), a.begin(), [](double v) { return std::abs(v); });
    double sum = 0.0;
    for (double v : a) sum += v;
    s.mean = sum / static_cast<double>(a.size());
    std::sort(a.begin(), a.end());
    s.max = a.back();
    const std::size_t mid = a.size() / 2;
    s.median = a.size() % 2 ? a[mid] : 0.5 * (a[mid - 1] + a[mid]);
    return s;
}

ReportSummary summarize(std::span<const RecordCorrection> rows) {
    ReportSummary s;
    s.n_records = rows.size();
    std::vector<double> before, after;
    before.reserve(rows.size());
    after.reserve(rows.size());
    std::size_t positive = 0;
    double k_sum = 0.0;
    for (const RecordCorrection &r : rows) {
        before.push_back(r.dm_before);
        after.push_back(r.dm_after);
        if (!r.k) {
            ++s.n_excluded;
            continue;
        }
        ++s.n_defined;
        k_sum += *r.k;
        if (*r.k > 0.0) ++positive;
    }
    if (s.n_defined > 0) {
        s.fraction_k_positive = static_cast<double>(positive) / static_cast<double>(s.n_defined);
        s.mean_k = k_sum / static_cast<double>(s.n_defined);
    }
    s.before = abs_stats(before);
    s.after = abs_stats(after);
    return s;
}

CorrectionReport build_report(const std::vector<DataRecord> &records,
                              const std::vector<MagnetizationVector> &corrected) {
    if (records.size() != corrected.size()) {
        throw ShapeError(fmt::format("{} records but {} corrected vectors", records.size(),
                                     corrected.size()));
    }
    CorrectionReport report;
    report.rows.reserve(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        const DataRecord &rec = records[i];
        RecordCorrection row;
        row.state_id = rec.state_id;
        row.time_index = rec.time_index;
        row.t = rec.t;
        row.dm_before = delta_m(rec.m_ideal, rec.m_noisy);
        row.dm_after = delta_m(rec.m_ideal, corrected[i]);
        row.k = correction_k(row.dm_before, row.dm_after);
        report.rows.push_back(row);
    }
    report.corrected = corrected;
    report.summary = summarize(report.rows);
    return report;
}

CorrectionReport evaluate_echo_testset(const nn::MlpModel &model,
                                       const std::vector<DataRecord> &test_records) {
    if (test_records.empty()) {
        throw InvalidInput("evaluate_echo_testset: empty test set");
    }
    return build_report(test_records, nn::predict_dataset(model, test_records));
}

ForwardReport build_forward_report(const std::vector<DataRecord> &records,
                                   const std::vector<MagnetizationVector> &corrected) {
    ForwardReport out;
    out.records = build_report(records, corrected);

    struct Acc {
        double k_sum = 0.0;
        int k_n = 0;
        int excluded = 0;
        double spin_sum = 0.0;
        int spin_n = 0;
    };
    std::map<int, Acc> by_state;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const RecordCorrection &row = out.records.rows[i];
        Acc &acc = by_state[row.state_id];
        if (row.k) {
            acc.k_sum += *row.k;
            ++acc.k_n;
        } else {
            ++acc.excluded;
        }
        const DataRecord &rec = records[i];
        for (std::size_t j = 0; j < rec.m_ideal.size(); ++j) {
            const auto k = correction_k(rec.m_ideal[j] - rec.m_noisy[j],
                                        rec.m_ideal[j] - corrected[i][j]);
            if (k) {
                acc.spin_sum += *k;
                ++acc.spin_n;
            }
        }
    }

    std::size_t positive = 0, spin_positive = 0;
    double k_total = 0.0, spin_total = 0.0;
    for (const auto &[state_id, acc] : by_state) {
        if (acc.k_n == 0) continue;
        StateK s;
        s.state_id = state_id;
        s.mean_k = acc.k_sum / acc.k_n;
        s.mean_spin_k = acc.spin_n ? acc.spin_sum / acc.spin_n : 0.0;
        s.n_defined = acc.k_n;
        s.n_excluded = acc.excluded;
        if (s.mean_k > 0.0) ++positive;
        if (s.mean_spin_k > 0.0) ++spin_positive;
        k_total += s.mean_k;
        spin_total += s.mean_spin_k;
        out.states.push_back(s);
    }
    if (!out.states.empty()) {
        const double n = static_cast<double>(out.states.size());
        out.fraction_states_k_positive = static_cast<double>(positive) / n;
        out.fraction_states_spin_k_positive = static_cast<double>(spin_positive) / n;
        out.mean_state_k = k_total / n;
        out.mean_state_spin_k = spin_total / n;
    }
    return out;
}

ForwardReport evaluate_forward(const nn::MlpModel &model,
                               const std::vector<DataRecord> &forward_records) {
    if (forward_records.empty()) {
        throw InvalidInput("evaluate_forward: empty record set");
    }
    return build_forward_report(forward_records, nn::predict_dataset(model, forward_records));
}

} // namespace echoqem::metrics
