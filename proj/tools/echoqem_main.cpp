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

// echoqem: generate / train / eval / sweep / inspect-circuit.
// Exit status: 0 on success, otherwise the ErrorCategory code of the failure
// (2 also covers command-line usage errors).

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "echoqem/cli/commands.hpp"
#include "echoqem/errors.hpp"

namespace {

using namespace echoqem;

void add_common(CLI::App *cmd, cli::CommonOptions &common, bool with_out = true) {
    cmd->add_option("--config", common.config, "Experiment config file (JSON)");
    if (with_out) cmd->add_option("--out", common.out, "Output directory")->required();
    cmd->add_option("--seed", common.seed, "Override master_seed");
    cmd->add_option("--shots", common.shots, "Measurement shots (0 = exact expectations)");
    cmd->add_option("--jobs", common.jobs, "Worker threads (0 = OpenMP default)");
    cmd->add_flag("--force", common.force, "Overwrite existing outputs / ignore caches");
}

std::vector<double> parse_doubles(const std::string &list) {
    std::vector<double> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception &) {
            throw ParseError(fmt::format("'{}' is not a number (in '{}')", item, list));
        }
    }
    return out;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Neural-network error mitigation for noisy Ising dynamics"};
    app.require_subcommand(1);

    cli::GenerateOptions gen;
    std::optional<std::string> time_points;
    auto *generate = app.add_subcommand("generate", "Generate echo (and forward) datasets");
    add_common(generate, gen.common);
    generate->add_option("--states", gen.states, "Number of prep states");
    generate->add_option("--time-points", time_points, "Comma-separated echo times");
    generate->add_flag("--forward", gen.forward, "Also generate the forward test set");
    generate->add_flag("--csv", gen.csv, "Also write CSV copies");

    cli::TrainOptions train;
    auto *train_cmd = app.add_subcommand("train", "Train the mitigation network");
    add_common(train_cmd, train.common);
    train_cmd->add_option("--dataset", train.dataset, "Echo dataset (.jsonl)")->required();
    train_cmd->add_option("--width", train.width, "Hidden layer width");
    train_cmd->add_option("--epochs", train.epochs, "Training epochs");

    cli::EvalOptions eval;
    std::string eval_mode = "echo-test";
    auto *eval_cmd = app.add_subcommand("eval", "Evaluate a trained model");
    add_common(eval_cmd, eval.common);
    eval_cmd->add_option("--model", eval.model, "Model file")->required();
    eval_cmd->add_option("--dataset", eval.dataset, "Dataset (.jsonl)")->required();
    eval_cmd->add_option("--mode", eval_mode, "echo-test | forward");

    cli::SweepOptions sweep;
    std::optional<std::string> sweep_widths, sweep_q2;
    auto *sweep_cmd = app.add_subcommand("sweep", "Hidden-width / noise-level study");
    add_common(sweep_cmd, sweep.common);
    sweep_cmd->add_option("--realizations", sweep.realizations, "Realizations per cell");
    sweep_cmd->add_option("--widths", sweep_widths, "Comma-separated hidden widths");
    sweep_cmd->add_option("--q2-levels", sweep_q2, "Comma-separated two-qubit noise levels");
    sweep_cmd->add_option("--epochs", sweep.epochs, "Training epochs per cell");

    cli::InspectOptions inspect;
    std::string kind = "echo";
    std::optional<std::string> inspect_out;
    auto *inspect_cmd = app.add_subcommand("inspect-circuit", "Print a circuit's gate listing");
    add_common(inspect_cmd, inspect.common, false);
    inspect_cmd->add_option("--out", inspect_out, "Write the listing to this file");
    inspect_cmd->add_option("--kind", kind, "echo | forward | prep | step");
    inspect_cmd->add_option("--t", inspect.t, "Evolution time (step: dt)");
    inspect_cmd->add_option("--steps", inspect.steps, "Trotter steps (echo: each way)");
    inspect_cmd->add_option("--state-id", inspect.state_id, "Prep state index");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(ErrorCategory::kParse);
    }

    try {
        if (*generate) {
            if (time_points) gen.time_points = parse_doubles(*time_points);
            cli::cmd_generate(gen, std::cerr);
        } else if (*train_cmd) {
            cli::cmd_train(train, std::cerr);
        } else if (*eval_cmd) {
            eval.mode = cli::parse_eval_mode(eval_mode);
            cli::cmd_eval(eval, std::cerr);
        } else if (*sweep_cmd) {
            if (sweep_widths) {
                std::vector<int> widths;
                for (double w : parse_doubles(*sweep_widths)) widths.push_back(static_cast<int>(w));
                sweep.widths = widths;
            }
            if (sweep_q2) sweep.q2_levels = parse_doubles(*sweep_q2);
            cli::cmd_sweep(sweep, std::cerr);
        } else if (*inspect_cmd) {
            inspect.kind = cli::parse_circuit_kind(kind);
            if (inspect_out) {
                std::ofstream out(*inspect_out);
                if (!out) throw FileError("cannot open '" + *inspect_out + "' for writing");
                cli::cmd_inspect_circuit(inspect, out);
            } else {
                cli::cmd_inspect_circuit(inspect, std::cout);
            }
        }
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.exit_code();
    } catch (const std::exception &e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return static_cast<int>(ErrorCategory::kInternal);
    }
    return 0;
}
