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

// Error measures on magnetization vectors.
//
//   dM(a, b) = (1/N) sum_j (a_j - b_j)
//   K        = 1 - |dM_after| / |dM_before|
//
// K is 1 for a perfect correction, 0 for none, negative when the correction
// made things worse. It is undefined when dM_before == 0; such records are
// left out of every K aggregate and counted separately.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "echoqem/datagen/datagen.hpp"
#include "echoqem/neuralnet/mlp.hpp"

namespace echoqem::metrics {

using datagen::DataRecord;
using datagen::MagnetizationVector;

/// Throws InvalidInput on length mismatch or empty input.
double delta_m(std::span<const double> m_ideal, std::span<const double> m_other);

std::optional<double> correction_k(double dm_before, double dm_after);

struct AbsStats {
    double max = 0.0;
    double median = 0.0;
    double mean = 0.0;

    friend bool operator==(const AbsStats &, const AbsStats &) = default;
};

/// max / median / mean of |values|. Median of an even count is the mean of
/// the two middle values. All zero for empty input.
AbsStats abs_stats(std::span<const double> values);

struct RecordCorrection {
    int state_id = 0;
    int time_index = 0;
    double t = 0.0;
    double dm_before = 0.0; // dM(m_ideal, m_noisy)
    double dm_after = 0.0;  // dM(m_ideal, m_corrected)
    std::optional<double> k;
};

struct ReportSummary {
    std::size_t n_records = 0;
    std::size_t n_defined = 0;  // records with a defined K
    std::size_t n_excluded = 0; // dM_before == 0
    double fraction_k_positive = 0.0; // over defined records
    double mean_k = 0.0;              // over defined records
    AbsStats before;
    AbsStats after;
};

struct CorrectionReport {
    std::vector<RecordCorrection> rows;
    std::vector<MagnetizationVector> corrected;
    ReportSummary summary;
};

/// Per-record rows and aggregates from records and their corrected vectors.
CorrectionReport build_report(const std::vector<DataRecord> &records,
                              const std::vector<MagnetizationVector> &corrected);

ReportSummary summarize(std::span<const RecordCorrection> rows);

/// Throws InvalidInput for an empty test set.
CorrectionReport evaluate_echo_testset(const nn::MlpModel &model,
                                       const std::vector<DataRecord> &test_records);

struct StateK {
    int state_id = 0;
    double mean_k = 0.0;         // over time points with a defined K
    double mean_spin_k = 0.0;    // single-spin K, over spins and time points
    int n_defined = 0;
    int n_excluded = 0;
};

struct ForwardReport {
    CorrectionReport records;
    /// One entry per state that has at least one defined K, by state_id.
    std::vector<StateK> states;
    double fraction_states_k_positive = 0.0;
    double mean_state_k = 0.0;
    /// Same reduction with K evaluated spin by spin instead of on the chain
    /// average.
    double fraction_states_spin_k_positive = 0.0;
    double mean_state_spin_k = 0.0;
};

ForwardReport evaluate_forward(const nn::MlpModel &model,
                               const std::vector<DataRecord> &forward_records);

ForwardReport build_forward_report(const std::vector<DataRecord> &records,
                                   const std::vector<MagnetizationVector> &corrected);

} // namespace echoqem::metrics
