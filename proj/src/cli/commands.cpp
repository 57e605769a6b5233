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

#include "echoqem/cli/commands.hpp"

#include <bit>
#include <fstream>
#include <functional>
#include <mutex>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <omp.h>

#include "echoqem/datagen/dataset_io.hpp"
#include "echoqem/errors.hpp"
#include "echoqem/metrics/exports.hpp"
#include "echoqem/metrics/metrics.hpp"
#include "echoqem/metrics/sweep.hpp"
#include "echoqem/neuralnet/model_io.hpp"

namespace echoqem::cli {

namespace fs = std::filesystem;

namespace {

void ensure_dir(const fs::path &dir) {
    if (dir.empty()) return;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw FileError(fmt::format("cannot create directory '{}': {}", dir.string(), ec.message()));
    }
}

void refuse_overwrite(const fs::path &path, bool force) {
    if (!force && fs::exists(path)) {
        throw FileError(fmt::format("'{}' exists; pass --force to overwrite", path.string()));
    }
}

/// Writes to a sibling temporary file, then renames over `path`, so readers
/// never see a half-written file.
void write_atomic(const fs::path &path, const std::function<void(std::ostream &)> &body) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw FileError(fmt::format("cannot open '{}' for writing", tmp.string()));
        body(out);
        out.flush();
        if (!out) throw FileError(fmt::format("write failed for '{}'", tmp.string()));
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        throw FileError(fmt::format("cannot move '{}' to '{}': {}", tmp.string(), path.string(),
                                    ec.message()));
    }
}

Json split_to_json(const datagen::SplitSpec &s) {
    return Json{{"n_train", s.n_train},
                {"n_val", s.n_val},
                {"n_test", s.n_test},
                {"seed", s.shuffle_seed}};
}

datagen::SplitSpec split_from_json(const Json &j) {
    return datagen::SplitSpec{json_util::require<std::size_t>(j, "n_train", "split"),
                              json_util::require<std::size_t>(j, "n_val", "split"),
                              json_util::require<std::size_t>(j, "n_test", "split"),
                              json_util::require<std::uint64_t>(j, "seed", "split")};
}

std::string summary_line(const metrics::ReportSummary &s) {
    return fmt::format("records={} excluded={} fraction_K_positive={:.4f} mean_K={:.4f} "
                       "mean_abs_dM_noisy={:.6g} mean_abs_dM_corrected={:.6g}",
                       s.n_records, s.n_excluded, s.fraction_k_positive, s.mean_k, s.before.mean,
                       s.after.mean);
}

} // namespace

ExperimentConfig resolve_config(const CommonOptions &common) {
    ExperimentConfig cfg = common.config.empty() ? ExperimentConfig{} : load_config(common.config);
    if (common.seed) cfg.master_seed = *common.seed;
    if (common.shots) cfg.measurement.shots = *common.shots;
    cfg.validate();
    return cfg;
}

void apply_jobs(int jobs) {
    if (jobs < 0) throw InvalidParameter(fmt::format("--jobs must be >= 0, got {}", jobs));
    if (jobs > 0) omp_set_num_threads(jobs);
}

EvalMode parse_eval_mode(const std::string &name) {
    if (name == "echo-test") return EvalMode::kEchoTest;
    if (name == "forward") return EvalMode::kForward;
    throw InvalidParameter(fmt::format("unknown eval mode '{}' (echo-test | forward)", name));
}

CircuitKind parse_circuit_kind(const std::string &name) {
    if (name == "echo") return CircuitKind::kEcho;
    if (name == "forward") return CircuitKind::kForward;
    if (name == "prep") return CircuitKind::kPrep;
    if (name == "step") return CircuitKind::kStep;
    throw InvalidParameter(
        fmt::format("unknown circuit kind '{}' (echo | forward | prep | step)", name));
}

void cmd_generate(const GenerateOptions &opts, std::ostream &log) {
    apply_jobs(opts.common.jobs);
    ExperimentConfig cfg = resolve_config(opts.common);
    if (opts.states) cfg.echo.n_states = *opts.states;
    if (opts.time_points) cfg.echo.time_points = *opts.time_points;
    cfg.validate();

    ensure_dir(opts.common.out);
    const fs::path echo_path = opts.common.out / "echo.jsonl";
    const fs::path forward_path = opts.common.out / "forward.jsonl";
    refuse_overwrite(echo_path, opts.common.force);
    if (opts.forward) refuse_overwrite(forward_path, opts.common.force);

    const datagen::EchoDataset echo = datagen::generate_echo_dataset(cfg.echo_generation());
    write_atomic(echo_path, [&](std::ostream &o) { datagen::write_dataset(o, echo); });
    if (opts.csv) {
        write_atomic(opts.common.out / "echo.csv",
                     [&](std::ostream &o) { datagen::write_dataset_csv(o, echo); });
    }
    fmt::print(log, "wrote {} echo records to {}\n", echo.records.size(), echo_path.string());

    if (opts.forward) {
        const datagen::EchoDataset fwd = datagen::generate_forward_testset(cfg.forward_generation());
        write_atomic(forward_path, [&](std::ostream &o) { datagen::write_dataset(o, fwd); });
        if (opts.csv) {
            write_atomic(opts.common.out / "forward.csv",
                         [&](std::ostream &o) { datagen::write_dataset_csv(o, fwd); });
        }
        fmt::print(log, "wrote {} forward records to {}\n", fwd.records.size(),
                   forward_path.string());
    }
}

void cmd_train(const TrainOptions &opts, std::ostream &log) {
    apply_jobs(opts.common.jobs);
    ExperimentConfig cfg = resolve_config(opts.common);
    if (opts.width) cfg.train.width = *opts.width;
    if (opts.epochs) cfg.train.epochs = *opts.epochs;
    cfg.validate();

    ensure_dir(opts.common.out);
    const fs::path model_path = opts.common.out / "model.json";
    const fs::path history_path = opts.common.out / "history.csv";
    refuse_overwrite(model_path, opts.common.force);
    refuse_overwrite(history_path, opts.common.force);

    const datagen::EchoDataset ds = datagen::load_dataset(opts.dataset);
    const datagen::SplitSpec spec = cfg.split_spec();
    const datagen::DatasetSplit split = datagen::split_dataset(ds.records, spec);
    const nn::TrainConfig tc = cfg.train_config();
    fmt::print(log, "training width {} for {} epochs on {} records (val {}, test {})\n",
               cfg.train.width, tc.epochs, split.train.size(), split.val.size(),
               split.test.size());

    const nn::TrainResult result =
        nn::train(nn::init_model(cfg.train.width, tc.init_seed),
                  nn::Batch::from_records(split.train), nn::Batch::from_records(split.val), tc);

    nn::ModelFile file;
    file.model = result.best_model;
    file.train_config = tc;
    file.metrics = nn::ModelMetrics::from_result(result);
    file.provenance = Json{{"config", to_json(cfg)},
                           {"dataset", opts.dataset.string()},
                           {"dataset_digest", file_digest(opts.dataset)},
                           {"generation", datagen::to_json(ds.config)},
                           {"split", split_to_json(spec)}};
    write_atomic(model_path, [&](std::ostream &o) { nn::write_model(o, file); });
    write_atomic(history_path, [&](std::ostream &o) { nn::write_history_csv(o, result.history); });
    fmt::print(log, "best epoch {} val_loss {:.6g}; {} parameters written to {}\n",
               result.best_epoch, result.best_val_loss, file.model.parameter_count(),
               model_path.string());
}

void cmd_eval(const EvalOptions &opts, std::ostream &log) {
    apply_jobs(opts.common.jobs);
    ensure_dir(opts.common.out);
    const fs::path records_path = opts.common.out / "records.csv";
    const fs::path summary_path = opts.common.out / "summary.json";
    const fs::path kps_path = opts.common.out / "k_per_state.csv";
    const fs::path traj_path = opts.common.out / "trajectories.csv";
    refuse_overwrite(records_path, opts.common.force);
    refuse_overwrite(summary_path, opts.common.force);
    if (opts.mode == EvalMode::kForward) {
        refuse_overwrite(kps_path, opts.common.force);
        refuse_overwrite(traj_path, opts.common.force);
    }

    const nn::ModelFile model = nn::load_model(opts.model);
    const datagen::EchoDataset ds = datagen::load_dataset(opts.dataset);
    if (!ds.records.empty() &&
        ds.records.front().m_noisy.size() != static_cast<std::size_t>(model.model.n_in)) {
        throw ShapeError(fmt::format("model expects {} spins, dataset has {}", model.model.n_in,
                                     ds.records.front().m_noisy.size()));
    }

    Json summary{{"mode", opts.mode == EvalMode::kEchoTest ? "echo-test" : "forward"},
                 {"model", opts.model.string()},
                 {"model_digest", file_digest(opts.model)},
                 {"dataset", opts.dataset.string()},
                 {"dataset_digest", file_digest(opts.dataset)},
                 {"model_provenance", model.provenance}};

    if (opts.mode == EvalMode::kEchoTest) {
        datagen::SplitSpec spec;
        if (model.provenance.contains("split")) {
            spec = split_from_json(model.provenance.at("split"));
        } else {
            spec = resolve_config(opts.common).split_spec();
        }
        const datagen::DatasetSplit split = datagen::split_dataset(ds.records, spec);
        const metrics::CorrectionReport report =
            metrics::evaluate_echo_testset(model.model, split.test);
        write_atomic(records_path,
                     [&](std::ostream &o) { metrics::write_records_csv(o, split.test, report); });
        summary["split"] = split_to_json(spec);
        summary["summary"] = metrics::to_json(report.summary);
        write_atomic(summary_path, [&](std::ostream &o) { o << summary.dump(2) << '\n'; });
        fmt::print(log, "echo-test {}\n", summary_line(report.summary));
        return;
    }

    const metrics::ForwardReport report = metrics::evaluate_forward(model.model, ds.records);
    write_atomic(records_path,
                 [&](std::ostream &o) { metrics::write_records_csv(o, ds.records, report.records); });
    write_atomic(kps_path, [&](std::ostream &o) { metrics::write_k_per_state_csv(o, report); });
    write_atomic(traj_path, [&](std::ostream &o) {
        metrics::write_trajectories_csv(o, ds.records, report.records.corrected);
    });
    summary["summary"] = metrics::to_json(report.records.summary);
    summary["states"] = Json{{"n_states", report.states.size()},
                             {"fraction_states_k_positive", report.fraction_states_k_positive},
                             {"mean_state_k", report.mean_state_k},
                             {"fraction_states_spin_k_positive",
                              report.fraction_states_spin_k_positive},
                             {"mean_state_spin_k", report.mean_state_spin_k}};
    write_atomic(summary_path, [&](std::ostream &o) { o << summary.dump(2) << '\n'; });
    fmt::print(log, "forward states={} fraction_states_K_positive={:.4f} mean_state_K={:.4f} "
                    "(single-spin: {:.4f}, {:.4f})\n",
               report.states.size(), report.fraction_states_k_positive, report.mean_state_k,
               report.fraction_states_spin_k_positive, report.mean_state_spin_k);
    fmt::print(log, "forward {}\n", summary_line(report.records.summary));
}

namespace {

/// Everything besides (q2, width, realization) that a cell result depends on.
std::string sweep_fingerprint(const ExperimentConfig &cfg, const metrics::SweepConfig &sc) {
    datagen::GenerationConfig gen = cfg.echo_generation();
    gen.noise.q2 = 0.0;
    const Json j{{"generation", datagen::to_json(gen)},
                 {"train", nn::to_json(sc.train)},
                 {"n_train", sc.n_train},
                 {"n_val", sc.n_val},
                 {"n_test", sc.n_test},
                 {"master_seed", sc.master_seed}};
    const std::string text = j.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return fmt::format("{:016x}", h);
}

} // namespace

void cmd_sweep(const SweepOptions &opts, std::ostream &log) {
    apply_jobs(opts.common.jobs);
    ExperimentConfig cfg = resolve_config(opts.common);
    if (opts.realizations) cfg.sweep.n_realizations = *opts.realizations;
    if (opts.widths) cfg.sweep.widths = *opts.widths;
    if (opts.q2_levels) cfg.sweep.q2_levels = *opts.q2_levels;
    if (opts.epochs) cfg.train.epochs = *opts.epochs;
    cfg.validate();
    const metrics::SweepConfig sc = cfg.sweep_config();
    const std::string fingerprint = sweep_fingerprint(cfg, sc);

    const fs::path data_dir = opts.common.out / "datasets";
    const fs::path cell_dir = opts.common.out / "cells";
    ensure_dir(data_dir);
    ensure_dir(cell_dir);
    std::mutex log_mutex;
    auto warn = [&](const std::string &msg) {
        std::lock_guard lock(log_mutex);
        fmt::print(log, "warning: {}\n", msg);
    };

    auto cell_path = [&](const metrics::CellKey &k) {
        return cell_dir / fmt::format("q2_{}_w{}_r{}.json", k.q2, k.width, k.realization);
    };

    metrics::CellCache cache;
    cache.load = [&](const metrics::CellKey &k) -> std::optional<metrics::SweepCell> {
        const fs::path p = cell_path(k);
        if (opts.common.force || !fs::exists(p)) return std::nullopt;
        try {
            std::ifstream in(p, std::ios::binary);
            const std::string text{std::istreambuf_iterator<char>(in),
                                   std::istreambuf_iterator<char>()};
            const Json j = json_util::parse_with_location(text, p.string());
            if (json_util::require<std::string>(j, "fingerprint", "cell") != fingerprint) {
                warn(fmt::format("{} was produced by a different configuration; recomputing",
                                 p.string()));
                return std::nullopt;
            }
            metrics::SweepCell cell = metrics::sweep_cell_from_json(j);
            if (!(cell.key == k)) {
                warn(fmt::format("{} holds a different cell; recomputing", p.string()));
                return std::nullopt;
            }
            return cell;
        } catch (const Error &e) {
            warn(fmt::format("corrupt cell cache {} ({}); recomputing", p.string(), e.what()));
            return std::nullopt;
        }
    };
    cache.store = [&](const metrics::SweepCell &cell) {
        Json j = metrics::to_json(cell);
        j["fingerprint"] = fingerprint;
        write_atomic(cell_path(cell.key), [&](std::ostream &o) { o << j.dump() << '\n'; });
    };

    const metrics::DatasetProvider provider = [&](double q2) {
        datagen::GenerationConfig gen = cfg.echo_generation();
        gen.noise.q2 = q2;
        const fs::path p = data_dir / fmt::format("echo_q2_{}.jsonl", q2);
        if (!opts.common.force && fs::exists(p)) {
            try {
                datagen::EchoDataset ds = datagen::load_dataset(p);
                if (ds.config == gen) {
                    fmt::print(log, "reusing dataset {}\n", p.string());
                    return ds.records;
                }
                warn(fmt::format("{} was generated with a different configuration; regenerating",
                                 p.string()));
            } catch (const Error &e) {
                warn(fmt::format("corrupt dataset {} ({}); regenerating", p.string(), e.what()));
            }
        }
        fmt::print(log, "generating {} echo records at q2={}\n",
                   static_cast<std::size_t>(gen.n_states) * gen.time_points.size(), q2);
        datagen::EchoDataset ds = datagen::generate_echo_dataset(gen);
        write_atomic(p, [&](std::ostream &o) { datagen::write_dataset(o, ds); });
        return ds.records;
    };

    fmt::print(log, "sweep: {} widths x {} noise levels x {} realizations = {} cells\n",
               sc.widths.size(), sc.q2_levels.size(), sc.n_realizations, sc.n_cells());
    std::vector<metrics::SweepCell> cells;
    const auto results = metrics::width_sweep(sc, provider, &cache, &cells);

    write_atomic(opts.common.out / "sweep_stats.csv",
                 [&](std::ostream &o) { metrics::write_sweep_stats_csv(o, results); });
    write_atomic(opts.common.out / "sweep_cells.csv",
                 [&](std::ostream &o) { metrics::write_sweep_cells_csv(o, cells); });
    write_atomic(opts.common.out / "sweep_config.json", [&](std::ostream &o) {
        o << Json{{"config", to_json(cfg)}, {"fingerprint", fingerprint}}.dump(2) << '\n';
    });
    for (const auto &r : results) {
        fmt::print(log, "q2={} width={} mean_K={:.4f} std_K={:.4f}\n", r.q2, r.hidden_width,
                   r.mean_k, r.std_k);
    }
}

std::string format_gate_counts(const densitysim::Circuit &circuit) {
    const auto counts = circuit.gate_counts();
    auto get = [&](const char *name) {
        const auto it = counts.find(name);
        return it == counts.end() ? 0 : it->second;
    };
    return fmt::format("counts CNOT={} RX={} RZ={} U2={} total={}", get("CNOT"), get("RX"),
                       get("RZ"), get("U2"), circuit.size());
}

void cmd_inspect_circuit(const InspectOptions &opts, std::ostream &out) {
    const ExperimentConfig cfg = resolve_config(opts.common);
    const datagen::GenerationConfig echo = cfg.echo_generation();
    densitysim::Circuit circuit(cfg.layout.n_qubits);
    switch (opts.kind) {
    case CircuitKind::kEcho:
        circuit = tfim::build_echo_circuit(echo.params, cfg.layout,
                                           opts.t.value_or(cfg.echo.time_points.back()),
                                           opts.steps.value_or(cfg.echo.n_trotter_each_way));
        break;
    case CircuitKind::kForward:
        circuit = tfim::build_forward_circuit(echo.params, cfg.layout,
                                              opts.t.value_or(cfg.forward.t_max),
                                              opts.steps.value_or(cfg.forward.n_trotter));
        break;
    case CircuitKind::kPrep:
        if (opts.state_id < 0) throw InvalidParameter("--state-id must be >= 0");
        circuit = tfim::build_prep_circuit(datagen::prep_seed_for(echo, opts.state_id), cfg.layout,
                                           cfg.echo.prep_cnot_prob);
        break;
    case CircuitKind::kStep:
        circuit = tfim::trotter_step(echo.params, cfg.layout, opts.t.value_or(0.1));
        break;
    }
    out << circuit.dump() << format_gate_counts(circuit) << '\n';
}

} // namespace echoqem::cli
