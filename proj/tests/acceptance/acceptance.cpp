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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. The pipeline stages run through the
// echoqem executable, twice, in two sibling directories with identical
// relative paths so that the determinism check can compare files byte for
// byte.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "echoqem/cli/config.hpp"
#include "echoqem/datagen/dataset_io.hpp"
#include "echoqem/densitysim/simulator.hpp"
#include "echoqem/json_util.hpp"
#include "echoqem/metrics/metrics.hpp"
#include "echoqem/metrics/sweep.hpp"
#include "echoqem/neuralnet/model_io.hpp"
#include "echoqem/tfim/tfim.hpp"
#include "nn_oracle.hpp"
#include "test_util.hpp"

namespace {

namespace fs = std::filesystem;
using namespace echoqem;
using json_util::Json;
using testing::read_file;

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Suite {
    fs::path work;
    fs::path paper_cfg;
    fs::path zero_noise_cfg;
    // Set by the pipeline stage; later criteria depend on it.
    bool pipeline_ok = false;
    std::string pipeline_error;
    std::vector<std::string> notes;
};

/// Runs the CLI inside `cwd`; returns the exit status.
int run_in(const fs::path &cwd, const std::string &args, const std::string &log_name) {
    const std::string cmd = fmt::format("cd '{}' && '{}' {} >>'{}' 2>&1", cwd.string(),
                                        ECHOQEM_CLI_PATH, args, (cwd / log_name).string());
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void must_run(const fs::path &cwd, const std::string &args, const std::string &log_name) {
    const int code = run_in(cwd, args, log_name);
    if (code != 0) {
        throw std::runtime_error(fmt::format("'echoqem {}' exited with {} (see {})", args, code,
                                             (cwd / log_name).string()));
    }
}

Json read_json(const fs::path &p) { return Json::parse(read_file(p)); }

/// Parses "counts CNOT=.. RX=.. RZ=.." from an inspect-circuit listing.
std::map<std::string, int> read_counts(const fs::path &listing) {
    const std::string text = read_file(listing);
    const auto at = text.rfind("counts ");
    if (at == std::string::npos) throw std::runtime_error("no counts line in " + listing.string());
    std::map<std::string, int> counts;
    std::stringstream ss(text.substr(at + 7));
    std::string item;
    while (ss >> item) {
        const auto eq = item.find('=');
        if (eq != std::string::npos) counts[item.substr(0, eq)] = std::stoi(item.substr(eq + 1));
    }
    return counts;
}

/// One replicate of every CLI-driven stage.
void run_replicate(const Suite &s, const fs::path &dir, bool with_forward_eval) {
    fs::create_directories(dir);
    must_run(dir, fmt::format("generate --config '{}' --out c1", s.zero_noise_cfg.string()),
             "cli.log");
    must_run(dir, "inspect-circuit --kind echo --out c2_echo.txt", "cli.log");
    must_run(dir, "inspect-circuit --kind forward --out c2_forward.txt", "cli.log");

    const std::string cfg = fmt::format("--config '{}'", s.paper_cfg.string());
    must_run(dir, fmt::format("generate {} --forward --out c6/data", cfg), "cli.log");
    must_run(dir, fmt::format("train {} --dataset c6/data/echo.jsonl --out c6/model", cfg),
             "cli.log");
    must_run(dir,
             fmt::format("eval {} --model c6/model/model.json --dataset c6/data/echo.jsonl "
                         "--out c6/echo_eval",
                         cfg),
             "cli.log");
    if (with_forward_eval) {
        must_run(dir,
                 fmt::format("eval {} --mode forward --model c6/model/model.json "
                             "--dataset c6/data/forward.jsonl --out c7",
                             cfg),
                 "cli.log");
    }
}

Outcome echo_identity(Suite &s) {
    const auto ds = datagen::load_dataset(s.work / "run1/c1/echo.jsonl");
    double worst = 0.0;
    std::size_t states = 0;
    for (const auto &r : ds.records) {
        for (std::size_t j = 0; j < r.m_ideal.size(); ++j) {
            worst = std::max(worst, std::abs(r.m_noisy[j] - r.m_ideal[j]));
        }
        states = std::max(states, static_cast<std::size_t>(r.state_id) + 1);
    }
    const bool shape = ds.records.size() == 250 && states == 50 && ds.config.noise.q1 == 0.0 &&
                       ds.config.noise.q2 == 0.0 && ds.config.measurement.exact();
    return {shape && worst < 1e-9,
            fmt::format("{} records from {} states, max |m_noisy - m_ideal| = {:.3g} (< 1e-9)",
                        ds.records.size(), states, worst)};
}

Outcome gate_counts(Suite &s) {
    const auto echo = read_counts(s.work / "run1/c2_echo.txt");
    const auto fwd = read_counts(s.work / "run1/c2_forward.txt");
    auto ok = [](const std::map<std::string, int> &c) {
        return c.at("CNOT") == 280 && c.at("RZ") == 140 && c.at("RX") == 120;
    };
    return {ok(echo) && ok(fwd),
            fmt::format("echo CNOT={} RZ={} RX={}; forward CNOT={} RZ={} RX={}", echo.at("CNOT"),
                        echo.at("RZ"), echo.at("RX"), fwd.at("CNOT"), fwd.at("RZ"), fwd.at("RX"))};
}

Outcome trotter_order(Suite &) {
    const tfim::IsingParams params;
    const auto layout = tfim::ladder_layout_6();
    const double t = std::numbers::pi;
    const Eigen::MatrixXcd exact = tfim::exact_unitary(params, layout, t);
    auto error = [&](int n) {
        return tfim::operator_distance(
            tfim::circuit_unitary(tfim::build_forward_circuit(params, layout, t, n)), exact);
    };
    const double e10 = error(10), e20 = error(20), e40 = error(40);
    const double r1 = e20 / e10, r2 = e40 / e20;
    auto in_band = [](double r) { return r >= 0.3 && r <= 0.7; };
    return {in_band(r1) && in_band(r2),
            fmt::format("errors N=10/20/40: {:.4g} {:.4g} {:.4g}; ratios {:.4f} {:.4f} (in [0.3, 0.7])",
                        e10, e20, e40, r1, r2)};
}

Outcome channels(Suite &) {
    using densitysim::DensityMatrix;
    double worst_kraus = 0.0;
    for (int k = 0; k < 100; ++k) {
        const int n = 6;
        const int q = k % n;
        const double p = 0.01 + 0.98 * (k / 99.0);
        const DensityMatrix rho = testing::random_state(n, 5000 + static_cast<std::uint64_t>(k));
        const auto a = densitysim::apply_depolarizing_1q(rho, q, p);
        const auto b = densitysim::apply_depolarizing_1q_kraus(rho, q, p);
        worst_kraus = std::max(worst_kraus, a.max_abs_diff(b));
    }

    const auto layout = tfim::ladder_layout_6();
    const auto echo = tfim::build_echo_circuit({}, layout, std::numbers::pi / 2, 10);
    const DensityMatrix start = densitysim::run_circuit(
        tfim::build_prep_circuit(2024, layout), DensityMatrix(6), densitysim::NoiseModel::noiseless());
    double worst_trace = 0, worst_herm = 0, lowest_eig = 1;
    std::size_t steps = 0;
    densitysim::run_circuit(echo, start, densitysim::NoiseModel{1e-4, 0.01},
                            densitysim::ExecPolicy::kParallel,
                            [&](std::size_t, const DensityMatrix &st) {
                                ++steps;
                                worst_trace = std::max(worst_trace, std::abs(st.trace() - 1.0));
                                worst_herm = std::max(worst_herm, st.hermiticity_error());
                                lowest_eig = std::min(lowest_eig, st.min_eigenvalue());
                            });
    const bool pass = worst_kraus < 1e-12 && steps == echo.size() && worst_trace < 1e-12 &&
                      worst_herm < 1e-12 && lowest_eig > -1e-12;
    return {pass, fmt::format("Kraus vs definition max diff {:.3g} over 100 states; after each of "
                              "{} gates: |tr-1| <= {:.3g}, hermiticity err <= {:.3g}, "
                              "min eigenvalue >= {:.3g}",
                              worst_kraus, steps, worst_trace, worst_herm, lowest_eig)};
}

Outcome gradients(Suite &) {
    double worst = 0.0;
    for (int width : {1, 8, 200}) {
        for (int draw = 0; draw < 10; ++draw) {
            const auto seed = static_cast<std::uint64_t>(width * 100 + draw);
            const auto cmp = testing::compare_gradients(testing::random_model(width, seed),
                                                        testing::random_batch(16, seed + 7));
            worst = std::max(worst, cmp.worst_relative_error);
        }
    }
    return {worst < 1e-5,
            fmt::format("widths 1/8/200 x 10 batches, worst relative error {:.3g} (< 1e-5)", worst)};
}

Outcome echo_mitigation(Suite &s) {
    if (!s.pipeline_ok) return {false, "pipeline did not run: " + s.pipeline_error};
    const Json summary = read_json(s.work / "run1/c6/echo_eval/summary.json").at("summary");
    const auto n_data = datagen::load_dataset(s.work / "run1/c6/data/echo.jsonl").records.size();
    const auto model = nn::load_model(s.work / "run1/c6/model/model.json");
    const double frac = summary.at("fraction_k_positive").get<double>();
    const double before = summary.at("abs_dm_before").at("mean").get<double>();
    const double after = summary.at("abs_dm_after").at("mean").get<double>();
    const auto n_test = summary.at("n_records").get<std::size_t>();
    const bool setup = n_data == 12000 && n_test == 2000 && model.model.n_hidden == 200 &&
                       model.metrics.epochs_run == 100;
    return {setup && frac >= 0.80 && frac <= 0.95 && after < before,
            fmt::format("{} records, {} test; fraction K>0 = {:.4f} (in [0.80, 0.95]); mean |dM| "
                        "{:.4g} -> {:.4g}",
                        n_data, n_test, frac, before, after)};
}

Outcome forward_transfer(Suite &s) {
    if (!s.pipeline_ok) return {false, "pipeline did not run: " + s.pipeline_error};
    const Json states = read_json(s.work / "run1/c7/summary.json").at("states");
    const double frac = states.at("fraction_states_k_positive").get<double>();
    const auto n_states = states.at("n_states").get<std::size_t>();

    // Diagnostics: other reductions over the same per-record values.
    const auto ds = datagen::load_dataset(s.work / "run1/c6/data/forward.jsonl");
    const auto model = nn::load_model(s.work / "run1/c6/model/model.json");
    const auto rep = metrics::evaluate_forward(model.model, ds.records);
    std::map<int, std::vector<const metrics::RecordCorrection *>> by_state;
    for (const auto &row : rep.records.rows) by_state[row.state_id].push_back(&row);
    std::size_t median_pos = 0, ratio_pos = 0;
    for (const auto &[id, rows] : by_state) {
        std::vector<double> ks;
        double before = 0, after = 0;
        for (const auto *r : rows) {
            if (r->k) ks.push_back(*r->k);
            before += std::abs(r->dm_before);
            after += std::abs(r->dm_after);
        }
        std::sort(ks.begin(), ks.end());
        const std::size_t m = ks.size();
        const double median = m % 2 ? ks[m / 2] : (ks[m / 2 - 1] + ks[m / 2]) / 2;
        median_pos += median > 0;
        ratio_pos += after < before;
    }
    const double n = static_cast<double>(by_state.size());
    s.notes.push_back(fmt::format(
        "criterion 7 diagnostics: states with median-over-time K > 0: {:.2f}; states with mean "
        "|dM_corrected| < mean |dM_noisy|: {:.2f}; per-record fraction K>0: {:.4f}; "
        "most negative per-record K: {:.4g}",
        median_pos / n, ratio_pos / n, rep.records.summary.fraction_k_positive,
        [&] {
            double lo = 0;
            for (const auto &r : rep.records.rows) {
                if (r.k) lo = std::min(lo, *r.k);
            }
            return lo;
        }()));
    s.notes.push_back(fmt::format(
        "single-spin K (soft check): fraction of states with mean single-spin K>0 = {:.2f} vs "
        "{:.2f} for the chain average",
        states.at("fraction_states_spin_k_positive").get<double>(), frac));
    return {n_states == 100 && ds.records.size() == 2000 && frac >= 0.75,
            fmt::format("{} states x 20 time points; fraction of states with mean K>0 = {:.4f} "
                        "(>= 0.75)",
                        n_states, frac)};
}

Outcome width_saturation(Suite &s) {
    if (!s.pipeline_ok) return {false, "pipeline did not run: " + s.pipeline_error};
    const cli::ExperimentConfig cfg = cli::load_config(s.paper_cfg);
    metrics::SweepConfig sc = cfg.sweep_config();
    sc.widths = {1, 2, 4, 8, 200};
    sc.q2_levels = {0.01};
    sc.n_realizations = 10;
    const fs::path data = s.work / "run1/c6/data/echo.jsonl";
    const auto results = metrics::width_sweep(sc, [&](double q2) {
        auto ds = datagen::load_dataset(data);
        if (ds.config.noise.q2 != q2) throw std::runtime_error("dataset noise level mismatch");
        return ds.records;
    });
    std::string table, ratio_table;
    for (const auto &r : results) {
        table += fmt::format(" w{}={:.4f}+-{:.4f}", r.hidden_width, r.mean_k, r.std_k);
        ratio_table += fmt::format(" w{}={:.4f}", r.hidden_width, 1 - r.after.mean / r.before.mean);
    }
    s.notes.push_back("criterion 8 diagnostic, 1 - mean|dM_after| / mean|dM_before| by width:" +
                      ratio_table);
    bool monotone = true;
    for (std::size_t i = 0; i + 1 < results.size() && results[i + 1].hidden_width <= 8; ++i) {
        const double pooled =
            std::sqrt((results[i].std_k * results[i].std_k +
                       results[i + 1].std_k * results[i + 1].std_k) / 2);
        monotone = monotone && results[i + 1].mean_k >= results[i].mean_k - pooled;
    }
    const double k8 = results[3].mean_k, k200 = results[4].mean_k;
    const bool saturated = k8 >= 0.9 * k200;
    return {monotone && saturated,
            fmt::format("mean K by width:{}; monotone to 8 within pooled std: {}; K(8) = {:.4f} vs "
                        "0.9 K(200) = {:.4f}",
                        table, monotone ? "yes" : "no", k8, 0.9 * k200)};
}

Outcome shrinkage(Suite &s) {
    if (!s.pipeline_ok) return {false, "pipeline did not run: " + s.pipeline_error};
    const auto ds = datagen::load_dataset(s.work / "run1/c6/data/echo.jsonl");
    double ideal = 0, noisy = 0;
    auto avg = [](const std::vector<double> &v) {
        double a = 0;
        for (double x : v) a += x;
        return a / static_cast<double>(v.size());
    };
    for (const auto &r : ds.records) {
        ideal += std::abs(avg(r.m_ideal));
        noisy += std::abs(avg(r.m_noisy));
    }
    const double n = static_cast<double>(ds.records.size());
    return {ds.config.noise.q2 == 0.01 && noisy < ideal,
            fmt::format("q2={}: mean |M_noisy| = {:.5f} < mean |M_ideal| = {:.5f}",
                        ds.config.noise.q2, noisy / n, ideal / n)};
}

Outcome determinism(Suite &s) {
    if (!s.pipeline_ok) return {false, "pipeline did not run: " + s.pipeline_error};
    const std::vector<std::string> files{
        "c1/echo.jsonl",         "c2_echo.txt",           "c2_forward.txt",
        "c6/data/echo.jsonl",    "c6/data/forward.jsonl", "c6/model/model.json",
        "c6/model/history.csv",  "c6/echo_eval/records.csv", "c6/echo_eval/summary.json"};
    std::vector<std::string> differing;
    for (const auto &f : files) {
        const fs::path a = s.work / "run1" / f, b = s.work / "run2" / f;
        if (!fs::exists(a) || !fs::exists(b) || read_file(a) != read_file(b)) differing.push_back(f);
    }
    std::string list;
    for (const auto &f : differing) list += " " + f;
    return {differing.empty(),
            differing.empty()
                ? fmt::format("{} files byte-identical across two runs", files.size())
                : "differing:" + list};
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"echoqem acceptance suite"};
    std::string workdir = "acceptance_work";
    app.add_option("--workdir", workdir, "Scratch directory (wiped at start)");
    CLI11_PARSE(app, argc, argv);

    Suite s;
    s.work = fs::absolute(workdir);
    fs::remove_all(s.work);
    fs::create_directories(s.work);
    s.paper_cfg = fs::path(ECHOQEM_SOURCE_DIR) / "configs/paper.cfg";

    cli::ExperimentConfig zero = cli::load_config(s.paper_cfg);
    zero.noise = {0.0, 0.0};
    zero.echo.n_states = 50;
    s.zero_noise_cfg = s.work / "zero_noise.cfg";
    {
        std::ofstream out(s.zero_noise_cfg);
        out << cli::to_json(zero).dump(2) << '\n';
    }

    const auto t0 = std::chrono::steady_clock::now();
    try {
        run_replicate(s, s.work / "run1", true);
        run_replicate(s, s.work / "run2", false);
        s.pipeline_ok = true;
    } catch (const std::exception &e) {
        s.pipeline_error = e.what();
    }
    const double pipeline_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    struct Criterion {
        int id;
        const char *name;
        std::function<Outcome(Suite &)> check;
    };
    const std::vector<Criterion> criteria{
        {1, "echo identity", echo_identity},
        {2, "gate counts", gate_counts},
        {3, "Trotter order", trotter_order},
        {4, "channel correctness", channels},
        {5, "gradient check", gradients},
        {6, "echo-test mitigation", echo_mitigation},
        {7, "forward transfer", forward_transfer},
        {8, "width saturation", width_saturation},
        {9, "depolarizing shrinkage", shrinkage},
        {10, "determinism", determinism},
    };

    int failures = 0;
    for (const auto &c : criteria) {
        Outcome o;
        const auto start = std::chrono::steady_clock::now();
        try {
            o = c.check(s);
        } catch (const std::exception &e) {
            o = {false, std::string("error: ") + e.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += !o.pass;
        std::cout << fmt::format("{} criterion {:>2} ({}): {} [{:.1f}s]", o.pass ? "PASS" : "FAIL",
                                 c.id, c.name, o.detail, secs)
                  << std::endl;
    }
    for (const auto &note : s.notes) std::cout << "note: " << note << '\n';
    std::cout << fmt::format("pipeline stages (two replicates) took {:.0f}s\n", pipeline_s);
    std::cout << fmt::format("{} of {} criteria passed\n", criteria.size() - failures,
                             criteria.size());
    return failures == 0 ? 0 : 1;
}
