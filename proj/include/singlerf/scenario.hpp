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

#ifndef SINGLERF_SCENARIO_HPP
#define SINGLERF_SCENARIO_HPP

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "singlerf/hardware.hpp"
#include "singlerf/signals.hpp"
#include "singlerf/stats.hpp"

namespace singlerf {

enum class ScenarioKind { CrestSweep, VswrSweep, DistortionSweep, SynthDemo, FullFig4 };

enum class CrestMode { Analytic, MonteCarlo, Both };

const char* to_string(ScenarioKind k);
const char* to_string(CrestMode m);

struct SynthDemoParams {
    int elements = 2;
    ConstellationScheme scheme{PskScheme{4}};
    int symbols = 64;
    int bits = 16;
    double x_min = -500.0;
    double x_max = 500.0;
    cdouble source_impedance{50.0, 0.0};
    int active_index = 0;
};

// A fully resolved experiment description. Deterministic: the same scenario
// (including seed) produces identical numbers on every run and worker count.
struct Scenario {
    ScenarioKind kind = ScenarioKind::FullFig4;
    AnalysisParams params;
    std::vector<int> n_values;        // empty -> kind-specific default grid
    std::vector<double> eps_values;   // empty -> {1e-2, 1e-3, 1e-4}
    std::vector<double> eta_values;   // empty -> {0.7, 0.8, 0.9}
    std::vector<ClipPolicy> policies{ClipPolicy::Mmse, ClipPolicy::Equal};
    CrestMode crest_mode = CrestMode::Analytic;
    CouplingModelKind coupling = ExpDecayCoupling{};  // synth demo input
    SynthDemoParams synth;
    std::string output_dir = ".";
    int workers = 0;  // 0 = hardware concurrency

    void apply_defaults();
    void check() const;
};

// One synthesized symbol/port entry of the demo table.
struct SynthRow {
    int symbol;
    int port;
    cdouble load;
    cdouble quantized;
    FeasibilityClass feasibility;
};

struct SynthSummary {
    std::vector<SynthRow> parasitic_rows;
    std::vector<cdouble> active_feeds;        // per symbol
    std::vector<SynthRow> loadmod_rows;       // load as Z_out; quantized unused
    std::vector<std::vector<cdouble>> loadmod_voltages;  // per symbol Thevenin vector
    double max_residual = 0.0;
    double loadmod_max_residual = 0.0;
    double evm_quantized_db = 0.0;  // flat 16-bit replay vs. targets
    double evm_shaped_db = 0.0;     // noise-shaped replay vs. targets
};

struct RunManifest {
    std::uint64_t seed = 0;
    std::int64_t samples = 0;
    std::string version;
    std::string config_hash;
    double wall_ms = 0.0;  // excluded from the hash; everything else is stable
    std::vector<std::string> files;
    nlohmann::json config;
};

struct ReportBundle {
    std::vector<CurveReport> curves;
    std::optional<SynthSummary> synthesis;
    RunManifest manifest;
};

// Accepts either JSON (first non-space byte '{') or flat key=value lines with
// '#' comments. Unknown keys are config errors, named in the message. Fields
// absent from the config keep their values from `base`, which lets callers
// layer defaults (e.g. an environment seed below an explicit config seed).
Scenario parse_scenario_text(const std::string& text, Scenario base = Scenario{});
Scenario load_scenario_file(const std::string& path, Scenario base = Scenario{});
Scenario scenario_from_json(const nlohmann::json& j, Scenario base = Scenario{});

// Canonical form: every effective field, fixed structure, sorted keys. Two
// configs that parse to the same scenario serialize (and hash) identically.
nlohmann::json scenario_to_json(const Scenario& s);
std::string config_hash(const Scenario& s);

ReportBundle run_scenario(const Scenario& s);

enum class OutputFormat { Csv, Json, Plot };

// Writes one CSV per curve, the synth tables when present, optional two-column
// plot files, and summary.json last; fills manifest.files with every path
// written (summary included) and returns them.
std::vector<std::string> emit_outputs(ReportBundle& bundle, const std::vector<OutputFormat>& formats);

}  // namespace singlerf

#endif  // SINGLERF_SCENARIO_HPP
