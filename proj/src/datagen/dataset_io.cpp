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

#include "echoqem/datagen/dataset_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include <fmt/format.h>

#include "echoqem/errors.hpp"
#include "echoqem/json_util.hpp"

namespace echoqem::datagen {

using json_util::require;

namespace {

constexpr const char *kFormat = "echoqem-dataset";
constexpr int kVersion = 1;

} // namespace

Json to_json(const IsingParams &params) {
    return Json{{"h", params.h}, {"J", params.J}, {"n_spins", params.n_spins}};
}

Json to_json(const Layout &layout) {
    Json edges = Json::array();
    for (const auto &[a, b] : layout.edges) {
        edges.push_back(Json::array({a, b}));
    }
    return Json{{"n_qubits", layout.n_qubits}, {"edges", edges}};
}

Json to_json(const NoiseModel &noise) { return Json{{"q1", noise.q1}, {"q2", noise.q2}}; }

Json to_json(const MeasurementMode &mode) {
    return Json{{"shots", mode.shots}, {"ideal_shots", mode.ideal_shots}};
}

Json to_json(const GenerationConfig &config) {
    return Json{{"mode", mode_name(config.mode)},
                {"ising", to_json(config.params)},
                {"layout", to_json(config.layout)},
                {"noise", to_json(config.noise)},
                {"measurement", to_json(config.measurement)},
                {"master_seed", config.master_seed},
                {"n_states", config.n_states},
                {"time_points", config.time_points},
                {"n_trotter", config.n_trotter},
                {"prep_cnot_prob", config.prep_cnot_prob},
                {"noisy_prep", config.noisy_prep}};
}

Json to_json(const DataRecord &record) {
    Json j{{"mode", mode_name(record.mode)},
           {"state_id", record.state_id},
           {"prep_seed", record.prep_seed},
           {"time_index", record.time_index},
           {"t", record.t},
           {"m_ideal", record.m_ideal},
           {"m_noisy", record.m_noisy}};
    if (record.m_exact) {
        j["m_exact"] = *record.m_exact;
    }
    return j;
}

IsingParams ising_from_json(const Json &j) {
    IsingParams p;
    p.h = require<double>(j, "h", "ising");
    p.J = require<double>(j, "J", "ising");
    p.n_spins = json_util::optional<int>(j, "n_spins", "ising", 6);
    return p;
}

Layout layout_from_json(const Json &j) {
    if (j.is_string()) {
        if (j.get<std::string>() == "ladder6") {
            return tfim::ladder_layout_6();
        }
        throw ParseError("unknown layout name '" + j.get<std::string>() + "'");
    }
    Layout layout;
    layout.n_qubits = require<int>(j, "n_qubits", "layout");
    layout.edges = require<std::vector<std::pair<int, int>>>(j, "edges", "layout");
    return layout;
}

NoiseModel noise_from_json(const Json &j) {
    return NoiseModel{require<double>(j, "q1", "noise"), require<double>(j, "q2", "noise")};
}

MeasurementMode measurement_from_json(const Json &j) {
    MeasurementMode m;
    m.shots = json_util::optional<std::uint64_t>(j, "shots", "measurement", 0);
    m.ideal_shots = json_util::optional<bool>(j, "ideal_shots", "measurement", false);
    return m;
}

GenerationConfig generation_config_from_json(const Json &j) {
    GenerationConfig c;
    c.mode = parse_mode(require<std::string>(j, "mode", "config"));
    c.params = ising_from_json(json_util::section(j, "ising", "config"));
    c.layout = layout_from_json(json_util::section(j, "layout", "config"));
    c.noise = noise_from_json(json_util::section(j, "noise", "config"));
    c.measurement = measurement_from_json(json_util::section(j, "measurement", "config"));
    c.master_seed = require<std::uint64_t>(j, "master_seed", "config");
    c.n_states = require<int>(j, "n_states", "config");
    c.time_points = require<std::vector<double>>(j, "time_points", "config");
    c.n_trotter = require<int>(j, "n_trotter", "config");
    c.prep_cnot_prob = require<double>(j, "prep_cnot_prob", "config");
    c.noisy_prep = require<bool>(j, "noisy_prep", "config");
    return c;
}

DataRecord record_from_json(const Json &j) {
    DataRecord r;
    r.mode = parse_mode(require<std::string>(j, "mode", "record"));
    r.state_id = require<int>(j, "state_id", "record");
    r.prep_seed = require<std::uint64_t>(j, "prep_seed", "record");
    r.time_index = require<int>(j, "time_index", "record");
    r.t = require<double>(j, "t", "record");
    r.m_ideal = require<std::vector<double>>(j, "m_ideal", "record");
    r.m_noisy = require<std::vector<double>>(j, "m_noisy", "record");
    if (j.contains("m_exact")) {
        r.m_exact = require<std::vector<double>>(j, "m_exact", "record");
    }
    if (r.m_ideal.size() != r.m_noisy.size() ||
        (r.m_exact && r.m_exact->size() != r.m_ideal.size())) {
        throw ShapeError("record magnetization vectors differ in length");
    }
    return r;
}

void write_dataset(std::ostream &out, const EchoDataset &ds) {
    const Json header{{"format", kFormat},
                      {"version", kVersion},
                      {"n_records", ds.records.size()},
                      {"config", to_json(ds.config)}};
    out << header.dump() << '\n';
    for (const DataRecord &r : ds.records) {
        out << to_json(r).dump() << '\n';
    }
}

EchoDataset read_dataset(std::istream &in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError("dataset: empty input");
    }
    const Json header = json_util::parse_with_location(line, "dataset header");
    if (json_util::optional<std::string>(header, "format", "header", "") != kFormat) {
        throw ParseError("dataset: not an echoqem dataset (bad 'format')");
    }
    EchoDataset ds;
    ds.config = generation_config_from_json(json_util::section(header, "config", "header"));
    const auto expected = require<std::size_t>(header, "n_records", "header");
    ds.records.reserve(expected);
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        ds.records.push_back(
            record_from_json(json_util::parse_with_location(line, fmt::format("dataset line {}", line_no))));
    }
    if (ds.records.size() != expected) {
        throw ParseError(fmt::format("dataset: header announces {} records, found {}", expected,
                                     ds.records.size()));
    }
    return ds;
}

void save_dataset(const std::filesystem::path &path, const EchoDataset &ds) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw FileError("cannot open '" + path.string() + "' for writing");
    }
    write_dataset(out, ds);
    if (!out) {
        throw FileError("write failed for '" + path.string() + "'");
    }
}

EchoDataset load_dataset(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FileError("cannot open dataset '" + path.string() + "'");
    }
    return read_dataset(in);
}

void write_dataset_csv(std::ostream &out, const EchoDataset &ds) {
    const std::size_t width = ds.records.empty() ? 6 : ds.records.front().m_ideal.size();
    out << "mode,state_id,prep_seed,time_index,t";
    for (const char *name : {"m_ideal", "m_noisy", "m_exact"}) {
        for (std::size_t k = 0; k < width; ++k) {
            out << ',' << name << '_' << k;
        }
    }
    out << '\n';
    for (const DataRecord &r : ds.records) {
        out << fmt::format("{},{},{},{},{}", mode_name(r.mode), r.state_id, r.prep_seed,
                           r.time_index, r.t);
        for (double v : r.m_ideal) out << ',' << fmt::format("{}", v);
        for (double v : r.m_noisy) out << ',' << fmt::format("{}", v);
        for (std::size_t k = 0; k < width; ++k) {
            out << ',';
            if (r.m_exact) out << fmt::format("{}", (*r.m_exact)[k]);
        }
        out << '\n';
    }
}

} // namespace echoqem::datagen
