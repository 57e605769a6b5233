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

// Dataset files are line-delimited JSON. Line 1 is a header object
//
//   {"format":"echoqem-dataset","version":1,"n_records":N,"config":{...}}
//
// where "config" is the full GenerationConfig. Each following line is one
// record:
//
//   {"mode":"echo","state_id":0,"prep_seed":...,"time_index":0,"t":0.0,
//    "m_ideal":[6 numbers],"m_noisy":[6 numbers],"m_exact":[6 numbers]}
//
// "m_exact" is present for forward records only. Doubles are written in
// shortest round-trip form, so files reload bit-exactly.

#include <filesystem>
#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "echoqem/datagen/datagen.hpp"

namespace echoqem::datagen {

using Json = nlohmann::ordered_json;

Json to_json(const IsingParams &params);
Json to_json(const Layout &layout);
Json to_json(const NoiseModel &noise);
Json to_json(const MeasurementMode &mode);
Json to_json(const GenerationConfig &config);
Json to_json(const DataRecord &record);

// Readers throw ParseError naming the offending key.
IsingParams ising_from_json(const Json &j);
Layout layout_from_json(const Json &j);
NoiseModel noise_from_json(const Json &j);
MeasurementMode measurement_from_json(const Json &j);
GenerationConfig generation_config_from_json(const Json &j);
DataRecord record_from_json(const Json &j);

void write_dataset(std::ostream &out, const EchoDataset &ds);
EchoDataset read_dataset(std::istream &in);

void save_dataset(const std::filesystem::path &path, const EchoDataset &ds);
EchoDataset load_dataset(const std::filesystem::path &path);

/// CSV header:
/// mode,state_id,prep_seed,time_index,t,m_ideal_0..m_ideal_5,
/// m_noisy_0..m_noisy_5,m_exact_0..m_exact_5 (blank when absent)
void write_dataset_csv(std::ostream &out, const EchoDataset &ds);

} // namespace echoqem::datagen
