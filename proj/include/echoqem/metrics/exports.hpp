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

// CSV and JSON exports. Every floating-point column is written with 17
// significant digits, so values (and K recomputed from the exported dM
// columns) reload exactly.
//
// records.csv      rank,state_id,time_index,t,dM_noisy,dM_corrected,K,
//                  m_ideal_0..5,m_noisy_0..5,m_corrected_0..5
//                  sorted by K ascending (stable); undefined K last, blank.
// k_per_state.csv  rank,state_id,mean_K,mean_spin_K,n_defined,n_excluded
//                  sorted by mean_K ascending (stable).
// trajectories.csv state_id,time_index,t,spin,m_ideal,m_noisy,m_corrected,
//                  m_exact; spin is 0..5, or "avg" for the chain average.
//                  m_exact is blank for records without it.
// sweep_stats.csv  q2,width,n_realizations,mean_K,std_K,
//                  max_abs_dM_before,median_abs_dM_before,mean_abs_dM_before,
//                  max_abs_dM_after,median_abs_dM_after,mean_abs_dM_after
// sweep_cells.csv  q2,width,realization,mean_K,fraction_K_positive,
//                  n_excluded,best_val_loss, then the six |dM| columns.

#include <iosfwd>
#include <span>
#include <vector>

#include "echoqem/json_util.hpp"
#include "echoqem/metrics/metrics.hpp"
#include "echoqem/metrics/sweep.hpp"

namespace echoqem::metrics {

using json_util::Json;

/// Row order by ascending K; rows without K go last. Ties keep input order.
std::vector<std::size_t> order_by_k(std::span<const RecordCorrection> rows);

/// Row order by ascending mean K; ties keep input order.
std::vector<std::size_t> order_by_state_k(std::span<const StateK> states);

void write_records_csv(std::ostream &out, const std::vector<DataRecord> &records,
                       const CorrectionReport &report);

void write_k_per_state_csv(std::ostream &out, const ForwardReport &report);

void write_trajectories_csv(std::ostream &out, const std::vector<DataRecord> &records,
                            const std::vector<MagnetizationVector> &corrected);

void write_sweep_stats_csv(std::ostream &out, const std::vector<SweepResult> &results);
void write_sweep_cells_csv(std::ostream &out, const std::vector<SweepCell> &cells);

Json to_json(const AbsStats &s);
Json to_json(const ReportSummary &s);
Json to_json(const SweepCell &cell);
AbsStats abs_stats_from_json(const Json &j);
SweepCell sweep_cell_from_json(const Json &j);

} // namespace echoqem::metrics
