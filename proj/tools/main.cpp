// Copyright 2026 The SingleRF Authors. All Rights Reserved.
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

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "singlerf/scenario.hpp"
#include "singlerf/version.hpp"

namespace {

using namespace singlerf;

// Exit codes: 0 success, 1 config error, 2 numerical failure, 3 I/O error.
constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitIo = 3;

// Seed precedence: --seed flag, then config file, then SINGLERF_SEED (lowest).
constexpr const char* kSeedEnvVar = "SINGLERF_SEED";

struct CommonFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> samples;
    std::optional<std::string> out_dir;
    std::optional<int> workers;
    std::vector<std::string> formats;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "Scenario config file (JSON or key=value)");
    cmd->add_option("--seed", flags.seed, "Master RNG seed");
    cmd->add_option("--samples", flags.samples, "Monte-Carlo draws per sweep point");
    cmd->add_option("--out", flags.out_dir, "Output directory");
    cmd->add_option("--workers", flags.workers, "Worker threads (0 = hardware concurrency)");
    cmd->add_option("--format", flags.formats, "Output formats: csv, json, plot")
        ->check(CLI::IsMember({"csv", "json", "plot"}));
}

Scenario base_scenario(const CommonFlags& flags, ScenarioKind kind) {
    // Seed layering, lowest first: built-in default, environment variable,
    // config file (when it names a seed), --seed flag.
    Scenario s;
    if (const char* env = std::getenv(kSeedEnvVar)) {
        try {
            s.params.seed = std::stoull(env);
        } catch (const std::exception&) {
            throw ConfigError(std::string(kSeedEnvVar) + " is not a valid unsigned integer: " + env);
        }
    }
    if (!flags.config_path.empty()) {
        s = load_scenario_file(flags.config_path, std::move(s));
    }
    s.kind = kind;  // the subcommand owns the kind

    if (flags.seed) s.params.seed = *flags.seed;
    if (flags.samples) s.params.samples = *flags.samples;
    if (flags.out_dir) s.output_dir = *flags.out_dir;
    if (flags.workers) s.workers = *flags.workers;
    return s;
}

std::vector<OutputFormat> resolve_formats(const CommonFlags& flags) {
    std::vector<OutputFormat> out{OutputFormat::Csv, OutputFormat::Json};
    for (const auto& f : flags.formats) {
        if (f == "plot") out.push_back(OutputFormat::Plot);
    }
    return out;
}

int run_and_emit(Scenario s, const CommonFlags& flags) {
    s.apply_defaults();
    ReportBundle bundle = run_scenario(s);
    if (s.crest_mode != CrestMode::Analytic && !mc_samples_sufficient(s.params.epsilon, s.params.samples)) {
        std::cerr << "warning: samples below 100/epsilon; Monte-Carlo tail quantiles will be noisy\n";
    }
    const auto files = emit_outputs(bundle, resolve_formats(flags));
    for (const auto& f : files) std::cout << f << '\n';
    return kExitOk;
}

int run_validate(const std::string& path) {
    CouplingMatrix m;
    try {
        m = load_coupling(path);
    } catch (const ValidationFailure& e) {
        std::cerr << "invalid: " << e.what() << '\n';
        return kExitNumerical;
    }
    std::cout << "ok: " << m.n() << "x" << m.n() << " coupling matrix, all invariants hold\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Single-RF massive array front-end simulator"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    CommonFlags flags;
    std::vector<int> n_list;
    std::vector<double> eps_list;
    std::vector<double> eta_list;
    std::string mode = "";
    std::string policy = "";
    std::string mismatch = "";
    std::string coupling = "";
    std::string scheme = "";
    std::optional<double> epsilon;
    int elements = 0;
    int symbols = 0;
    int bits = 0;
    std::string validate_path;

    auto* crest = app.add_subcommand("crest", "Crest factor vs element count");
    add_common(crest, flags);
    crest->add_option("--n", n_list, "Element counts (comma separated)")->delimiter(',');
    crest->add_option("--eps", eps_list, "Clipping probabilities")->delimiter(',');
    crest->add_option("--mode", mode, "analytic, mc or both");

    auto* vswr = app.add_subcommand("vswr", "VSWR distribution vs element count");
    add_common(vswr, flags);
    vswr->add_option("--n", n_list, "Element counts")->delimiter(',');
    vswr->add_option("--epsilon", epsilon, "Clipping probability sizing the PA");
    vswr->add_option("--mismatch", mismatch, "power or amplitude");

    auto* distortion = app.add_subcommand("distortion", "Clipping distortion vs element count");
    add_common(distortion, flags);
    distortion->add_option("--n", n_list, "Element counts")->delimiter(',');
    distortion->add_option("--eta", eta_list, "Total efficiencies")->delimiter(',');
    distortion->add_option("--policy", policy, "mmse, equal or both");

    auto* synth = app.add_subcommand("synth", "Per-symbol load synthesis demo");
    add_common(synth, flags);
    synth->add_option("--elements", elements, "Array size");
    synth->add_option("--scheme", scheme, "Constellation (bpsk, qpsk, psk8, qam16, ...)");
    synth->add_option("--symbols", symbols, "Symbols to synthesize");
    synth->add_option("--bits", bits, "Load quantizer resolution");
    synth->add_option("--coupling", coupling, "ideal, expdecay or file:<path>");

    auto* fig4 = app.add_subcommand("fig4", "Run all three sweeps with the default grids");
    add_common(fig4, flags);
    fig4->add_option("--n", n_list, "Element counts")->delimiter(',');
    fig4->add_option("--eps", eps_list, "Clipping probabilities (crest curves)")->delimiter(',');
    fig4->add_option("--eta", eta_list, "Total efficiencies (distortion curves)")->delimiter(',');

    auto* validate = app.add_subcommand("validate", "Check a coupling matrix file");
    validate->add_option("file", validate_path, "Matrix file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (validate->parsed()) return run_validate(validate_path);

        ScenarioKind kind = ScenarioKind::FullFig4;
        if (crest->parsed()) kind = ScenarioKind::CrestSweep;
        if (vswr->parsed()) kind = ScenarioKind::VswrSweep;
        if (distortion->parsed()) kind = ScenarioKind::DistortionSweep;
        if (synth->parsed()) kind = ScenarioKind::SynthDemo;

        Scenario s = base_scenario(flags, kind);
        if (!n_list.empty()) s.n_values = n_list;
        if (!eps_list.empty()) s.eps_values = eps_list;
        if (!eta_list.empty()) s.eta_values = eta_list;
        if (!mode.empty()) s.crest_mode = mode == "analytic" ? CrestMode::Analytic
                                          : mode == "mc"     ? CrestMode::MonteCarlo
                                                             : CrestMode::Both;
        if (!policy.empty()) {
            if (policy == "mmse") {
                s.policies = {ClipPolicy::Mmse};
            } else if (policy == "equal") {
                s.policies = {ClipPolicy::Equal};
            } else if (policy == "both") {
                s.policies = {ClipPolicy::Mmse, ClipPolicy::Equal};
            } else {
                throw ConfigError("policy must be mmse, equal or both");
            }
        }
        if (!mismatch.empty()) {
            if (mismatch == "power") {
                s.params.mismatch_model = MismatchModel::PowerConserving;
            } else if (mismatch == "amplitude") {
                s.params.mismatch_model = MismatchModel::AmplitudeDifference;
            } else {
                throw ConfigError("mismatch must be power or amplitude");
            }
        }
        if (epsilon) s.params.epsilon = *epsilon;
        if (elements > 0) s.synth.elements = elements;
        if (symbols > 0) s.synth.symbols = symbols;
        if (bits > 0) s.synth.bits = bits;
        if (!coupling.empty()) {
            if (coupling == "ideal") {
                s.coupling = IdealCoupling{};
            } else if (coupling == "expdecay") {
                s.coupling = ExpDecayCoupling{};
            } else if (coupling.rfind("file:", 0) == 0) {
                s.coupling = FileCoupling{coupling.substr(5)};
            } else {
                throw ConfigError("coupling must be ideal, expdecay or file:<path>");
            }
        }
        if (!scheme.empty()) {
            // Reuse the scenario parser's scheme grammar via a tiny config.
            nlohmann::json j{{"synth_scheme", scheme}};
            s.synth.scheme = scenario_from_json(j).synth.scheme;
        }

        return run_and_emit(std::move(s), flags);
    } catch (const ParseError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return kExitIo;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
}
