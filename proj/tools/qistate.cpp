// Copyright 2026 The qistate Authors
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

// Command-line driver: example2, verify, martingale and convergence.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "qistate/commands.hpp"

namespace {

using qistate::CommandResult;
using qistate::Error;
using qistate::ErrorKind;

std::pair<int, int> parse_range(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw Error(ErrorKind::ConfigInvalid, "--nrange must look like lo:hi");
    try {
        std::size_t used_lo = 0, used_hi = 0;
        const int lo = std::stoi(text.substr(0, colon), &used_lo);
        const int hi = std::stoi(text.substr(colon + 1), &used_hi);
        if (used_lo != colon || used_hi != text.size() - colon - 1) throw std::invalid_argument("trailing");
        return {lo, hi};
    } catch (const std::exception&) {
        throw Error(ErrorKind::ConfigInvalid, "--nrange must look like lo:hi");
    }
}

qistate::ModelConfig load_model(const std::string& path) {
    return qistate::model_config_from_json(qistate::read_json_file(path));
}

qistate::LocalProduct load_observable(const std::string& path, const qistate::ModelConfig& model) {
    const int d = model.state ? model.state->algebra().site_dim() : 2;
    return qistate::observable_from_json(qistate::read_json_file(path), d);
}

int emit(const CommandResult& r, const std::string& name, const std::string& out_dir) {
    const std::string report = r.report.dump(2) + "\n";
    if (out_dir.empty()) {
        std::cout << report;
        if (!r.csv.empty()) std::cout << r.csv;
    } else {
        try {
            std::filesystem::create_directories(out_dir);
            qistate::write_file_atomic(out_dir + "/" + name + ".json", report);
            if (!r.csv.empty()) qistate::write_file_atomic(out_dir + "/" + name + ".csv", r.csv);
        } catch (const std::exception& e) {
            std::cerr << "qistate: " << e.what() << "\n";
            return 2;
        }
        std::cout << (r.exit_code == 0 ? "pass" : "FAIL") << " " << name << " -> " << out_dir << "\n";
    }
    return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Strongly quasi-invariant states: averages, martingales and the permutation model"};
    app.require_subcommand(1);
    app.fallthrough();

    qistate::RunConfig cfg;
    std::string out_dir;
    app.add_option("--out", out_dir, "Directory for JSON report and CSV (stdout when omitted)");
    app.add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
    app.add_option("--exact", cfg.exact, "Exactness tolerance")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--convergence", cfg.convergence, "Convergence tolerance")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app.add_option("--max-enumeration", cfg.max_enumeration, "Largest group enumerated exactly")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);

    double beta = 0.0;
    auto* ex2 = app.add_subcommand("example2", "2x2 rotation example against its closed forms");
    ex2->add_option("--beta", beta, "Inverse temperature")->required();

    std::string model_path;
    auto* verify = app.add_subcommand("verify", "Cocycle, representation, projection, Umegaki and martingale suites");
    verify->add_option("--model", model_path, "Model config JSON")->required();

    std::string obs_path;
    int nmax = 1;
    auto* mart = app.add_subcommand("martingale", "Martingale run and Hypothesis (H) report");
    mart->add_option("--model", model_path, "Model config JSON")->required();
    mart->add_option("--observable", obs_path, "Observable JSON")->required();
    mart->add_option("--nmax", nmax, "Top chain level")->required()->check(CLI::PositiveNumber);

    std::string a_path, b_path, nrange;
    std::size_t mc_samples = 0;
    std::uint64_t mc_seed = 42;
    auto* conv = app.add_subcommand("convergence", "Weak-limit convergence of K_N");
    conv->add_option("--model", model_path, "Model config JSON")->required();
    conv->add_option("--a", a_path, "Observable a JSON")->required();
    conv->add_option("--b", b_path, "Observable b JSON")->required();
    conv->add_option("--nrange", nrange, "lo:hi")->required();
    conv->add_option("--mc-samples", mc_samples, "Monte Carlo samples per N");
    conv->add_option("--seed", mc_seed, "Monte Carlo seed")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (ex2->parsed()) {
        return emit(qistate::run_guarded([&] { return qistate::cmd_example2(beta, cfg); }), "example2", out_dir);
    }
    if (verify->parsed()) {
        return emit(qistate::run_guarded([&] { return qistate::cmd_verify(load_model(model_path), cfg); }), "verify",
                    out_dir);
    }
    if (mart->parsed()) {
        return emit(qistate::run_guarded([&] {
                        const auto model = load_model(model_path);
                        return qistate::cmd_martingale(model, load_observable(obs_path, model), nmax, cfg);
                    }),
                    "martingale", out_dir);
    }
    return emit(qistate::run_guarded([&] {
                    const auto model = load_model(model_path);
                    const auto [lo, hi] = parse_range(nrange);
                    std::optional<qistate::McOptions> mc;
                    if (mc_samples > 0) mc = qistate::McOptions{mc_samples, mc_seed};
                    return qistate::cmd_convergence(model, load_observable(a_path, model),
                                                    load_observable(b_path, model), lo, hi, mc, cfg);
                }),
                "convergence", out_dir);
}
