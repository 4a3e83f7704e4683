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

#include "singlerf/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "singlerf/format.hpp"
#include "singlerf/version.hpp"

namespace fs = std::filesystem;

namespace singlerf {

namespace {

const std::vector<int> kDefaultNGrid = {1, 2, 5, 10, 20, 50, 100, 200, 500, 1000};
const std::vector<int> kDefaultVswrNGrid = {16, 64, 256, 1024};
const std::vector<double> kDefaultEpsGrid = {1e-2, 1e-3, 1e-4};
const std::vector<double> kDefaultEtaGrid = {0.7, 0.8, 0.9};

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hex16(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<size_t>(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return out;
}

std::string scheme_name(const ConstellationScheme& s) {
    if (const auto* psk = std::get_if<PskScheme>(&s)) return "psk" + std::to_string(psk->order);
    return "qam" + std::to_string(std::get<SquareQamScheme>(s).order);
}

ConstellationScheme parse_scheme(const std::string& name) {
    if (name == "bpsk") return PskScheme{2};
    if (name == "qpsk") return PskScheme{4};
    const auto order_of = [&](size_t from) {
        int order = 0;
        const auto res = std::from_chars(name.data() + from, name.data() + name.size(), order);
        if (res.ec != std::errc{} || res.ptr != name.data() + name.size()) {
            throw ConfigError("unknown constellation scheme '" + name + "'");
        }
        return order;
    };
    if (name.rfind("psk", 0) == 0) return PskScheme{order_of(3)};
    if (name.rfind("qam", 0) == 0) return SquareQamScheme{order_of(3)};
    throw ConfigError("unknown constellation scheme '" + name + "'");
}

ScenarioKind parse_kind(const std::string& name) {
    if (name == "crest") return ScenarioKind::CrestSweep;
    if (name == "vswr") return ScenarioKind::VswrSweep;
    if (name == "distortion") return ScenarioKind::DistortionSweep;
    if (name == "synth") return ScenarioKind::SynthDemo;
    if (name == "fig4") return ScenarioKind::FullFig4;
    throw ConfigError("unknown scenario kind '" + name + "'");
}

CrestMode parse_mode(const std::string& name) {
    if (name == "analytic") return CrestMode::Analytic;
    if (name == "mc") return CrestMode::MonteCarlo;
    if (name == "both") return CrestMode::Both;
    throw ConfigError("mode must be analytic, mc or both, got '" + name + "'");
}

std::vector<ClipPolicy> parse_policy(const std::string& name) {
    if (name == "mmse") return {ClipPolicy::Mmse};
    if (name == "equal") return {ClipPolicy::Equal};
    if (name == "both") return {ClipPolicy::Mmse, ClipPolicy::Equal};
    throw ConfigError("policy must be mmse, equal or both, got '" + name + "'");
}

MismatchModel parse_mismatch(const std::string& name) {
    if (name == "power") return MismatchModel::PowerConserving;
    if (name == "amplitude") return MismatchModel::AmplitudeDifference;
    throw ConfigError("mismatch must be power or amplitude, got '" + name + "'");
}

CouplingModelKind parse_coupling_string(const std::string& value) {
    if (value == "ideal") return IdealCoupling{};
    if (value == "expdecay") return ExpDecayCoupling{};
    if (value.rfind("file:", 0) == 0) return FileCoupling{value.substr(5)};
    throw ConfigError("coupling must be ideal, expdecay or file:<path>, got '" + value + "'");
}

cdouble json_complex(const nlohmann::json& j, const char* what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw ConfigError(std::string(what) + " must be a [re, im] pair");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

CouplingModelKind parse_coupling_json(const nlohmann::json& j) {
    if (j.is_string()) return parse_coupling_string(j.get<std::string>());
    if (!j.is_object()) throw ConfigError("coupling must be a string or an object");
    const std::string model = j.value("model", "");
    if (model == "ideal") {
        IdealCoupling k;
        if (j.contains("z0")) k.z0 = json_complex(j["z0"], "coupling.z0");
        return k;
    }
    if (model == "expdecay") {
        ExpDecayCoupling k;
        if (j.contains("z0")) k.z0 = json_complex(j["z0"], "coupling.z0");
        if (j.contains("mag0")) k.mag0 = j["mag0"].get<double>();
        if (j.contains("kappa")) k.kappa = j["kappa"].get<double>();
        if (j.contains("spacing")) k.spacing = j["spacing"].get<double>();
        return k;
    }
    if (model == "file") {
        if (!j.contains("path")) throw ConfigError("coupling.model=file needs a path");
        return FileCoupling{j["path"].get<std::string>()};
    }
    throw ConfigError("coupling.model must be ideal, expdecay or file");
}

nlohmann::json coupling_to_json(const CouplingModelKind& kind) {
    nlohmann::json j;
    if (const auto* ideal = std::get_if<IdealCoupling>(&kind)) {
        j["model"] = "ideal";
        j["z0"] = {ideal->z0.real(), ideal->z0.imag()};
    } else if (const auto* ed = std::get_if<ExpDecayCoupling>(&kind)) {
        j["model"] = "expdecay";
        j["z0"] = {ed->z0.real(), ed->z0.imag()};
        j["mag0"] = ed->mag0;
        j["kappa"] = ed->kappa;
        j["spacing"] = ed->spacing;
    } else {
        j["model"] = "file";
        j["path"] = std::get<FileCoupling>(kind).path;
    }
    return j;
}

std::string policy_name(const std::vector<ClipPolicy>& p) {
    if (p.size() == 2) return "both";
    return to_string(p.at(0));
}

// Locale-independent counterpart of the shortest() writer.
double parse_double(const std::string& s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{}) throw NumericalError("bad numeric meta value '" + s + "'");
    return v;
}

std::string eta_name(double eta) { return shortest(eta); }

}  // namespace

const char* to_string(ScenarioKind k) {
    switch (k) {
        case ScenarioKind::CrestSweep: return "crest";
        case ScenarioKind::VswrSweep: return "vswr";
        case ScenarioKind::DistortionSweep: return "distortion";
        case ScenarioKind::SynthDemo: return "synth";
        case ScenarioKind::FullFig4: return "fig4";
    }
    return "?";
}

const char* to_string(CrestMode m) {
    switch (m) {
        case CrestMode::Analytic: return "analytic";
        case CrestMode::MonteCarlo: return "mc";
        case CrestMode::Both: return "both";
    }
    return "?";
}

void Scenario::apply_defaults() {
    if (n_values.empty()) {
        n_values = kind == ScenarioKind::VswrSweep ? kDefaultVswrNGrid : kDefaultNGrid;
    }
    if (eps_values.empty()) eps_values = kDefaultEpsGrid;
    if (eta_values.empty()) eta_values = kDefaultEtaGrid;
}

void Scenario::check() const {
    params.check();
    if (n_values.empty()) throw ConfigError("scenario: n_list must not be empty");
    if (eps_values.empty()) throw ConfigError("scenario: eps_list must not be empty");
    if (eta_values.empty()) throw ConfigError("scenario: eta_list must not be empty");
    if (policies.empty()) throw ConfigError("scenario: at least one clip policy required");
    if (!std::is_sorted(n_values.begin(), n_values.end()) ||
        std::adjacent_find(n_values.begin(), n_values.end()) != n_values.end()) {
        throw ConfigError("scenario: n_list must be sorted and distinct");
    }
    for (int n : n_values) {
        if (n < 1) throw ConfigError("scenario: n_list entries must be >= 1");
    }
    for (double e : eps_values) {
        if (!(e > 0.0 && e < 0.5)) throw ConfigError("scenario: eps_list entries must be in (0, 0.5)");
    }
    for (double e : eta_values) {
        if (!(e > 0.0 && e <= 1.0)) throw ConfigError("scenario: eta_list entries must be in (0, 1]");
    }
    if (synth.elements < 2) throw ConfigError("scenario: synth_elements must be >= 2");
    if (synth.symbols < 1) throw ConfigError("scenario: synth_symbols must be >= 1");
    if (workers < 0) throw ConfigError("scenario: workers must be >= 0");
    if (output_dir.empty()) throw ConfigError("scenario: output directory must not be empty");
}

Scenario scenario_from_json(const nlohmann::json& j, Scenario base) {
    if (!j.is_object()) throw ConfigError("config root must be an object");
    Scenario s = std::move(base);
    for (const auto& [key, value] : j.items()) {
        try {
            if (key == "kind") {
                s.kind = parse_kind(value.get<std::string>());
            } else if (key == "epsilon") {
                s.params.epsilon = value.get<double>();
            } else if (key == "eta") {
                s.params.eta = value.get<double>();
            } else if (key == "samples") {
                s.params.samples = value.get<std::int64_t>();
            } else if (key == "seed") {
                s.params.seed = value.get<std::uint64_t>();
            } else if (key == "mismatch") {
                s.params.mismatch_model = parse_mismatch(value.get<std::string>());
            } else if (key == "n_list") {
                s.n_values = value.get<std::vector<int>>();
            } else if (key == "eps_list") {
                s.eps_values = value.get<std::vector<double>>();
            } else if (key == "eta_list") {
                s.eta_values = value.get<std::vector<double>>();
            } else if (key == "policy") {
                s.policies = parse_policy(value.get<std::string>());
            } else if (key == "mode") {
                s.crest_mode = parse_mode(value.get<std::string>());
            } else if (key == "coupling") {
                s.coupling = parse_coupling_json(value);
            } else if (key == "out") {
                s.output_dir = value.get<std::string>();
            } else if (key == "workers") {
                s.workers = value.get<int>();
            } else if (key == "synth_elements") {
                s.synth.elements = value.get<int>();
            } else if (key == "synth_scheme") {
                s.synth.scheme = parse_scheme(value.get<std::string>());
            } else if (key == "synth_symbols") {
                s.synth.symbols = value.get<int>();
            } else if (key == "synth_bits") {
                s.synth.bits = value.get<int>();
            } else if (key == "synth_xmin") {
                s.synth.x_min = value.get<double>();
            } else if (key == "synth_xmax") {
                s.synth.x_max = value.get<double>();
            } else if (key == "synth_source_impedance") {
                s.synth.source_impedance = json_complex(value, "synth_source_impedance");
            } else if (key == "synth_active_index") {
                s.synth.active_index = value.get<int>();
            } else {
                throw ConfigError("unknown config key '" + key + "'");
            }
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError("config key '" + key + "': " + e.what());
        }
    }
    s.apply_defaults();
    s.check();
    return s;
}

Scenario parse_scenario_text(const std::string& text, Scenario base) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("config JSON parse failed: ") + e.what());
        }
        return scenario_from_json(j, std::move(base));
    }

    // Flat key=value form; values keep JSON syntax where it matters (lists).
    nlohmann::json j = nlohmann::json::object();
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        std::string key = line.substr(0, eq == std::string::npos ? line.size() : eq);
        auto trim = [](std::string& s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            s = b == std::string::npos ? "" : s.substr(b, e - b + 1);
        };
        trim(key);
        if (key.empty()) continue;
        if (eq == std::string::npos) {
            throw ParseError("expected key = value", line_no, 1);
        }
        std::string value = line.substr(eq + 1);
        trim(value);

        // Lists become JSON arrays; scalars keep their natural JSON type.
        if (key == "n_list" || key == "eps_list" || key == "eta_list") {
            nlohmann::json arr = nlohmann::json::array();
            std::istringstream vs(value);
            std::string item;
            while (std::getline(vs, item, ',')) {
                trim(item);
                if (item.empty()) continue;
                try {
                    arr.push_back(nlohmann::json::parse(item));
                } catch (const nlohmann::json::exception&) {
                    throw ParseError("bad numeric list item '" + item + "' for " + key, line_no, 1);
                }
            }
            j[key] = arr;
        } else if (key == "epsilon" || key == "eta" || key == "samples" || key == "seed" ||
                   key == "workers" || key == "synth_elements" || key == "synth_symbols" ||
                   key == "synth_bits" || key == "synth_xmin" || key == "synth_xmax" ||
                   key == "synth_active_index") {
            try {
                j[key] = nlohmann::json::parse(value);
            } catch (const nlohmann::json::exception&) {
                throw ParseError("bad numeric value '" + value + "' for " + key, line_no, 1);
            }
        } else {
            j[key] = value;
        }
    }
    return scenario_from_json(j, std::move(base));
}

Scenario load_scenario_file(const std::string& path, Scenario base) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_text(buf.str(), std::move(base));
}

nlohmann::json scenario_to_json(const Scenario& s) {
    nlohmann::json j;
    j["kind"] = to_string(s.kind);
    j["epsilon"] = s.params.epsilon;
    j["eta"] = s.params.eta;
    j["samples"] = s.params.samples;
    j["seed"] = s.params.seed;
    j["mismatch"] = s.params.mismatch_model == MismatchModel::PowerConserving ? "power" : "amplitude";
    j["n_list"] = s.n_values;
    j["eps_list"] = s.eps_values;
    j["eta_list"] = s.eta_values;
    j["policy"] = policy_name(s.policies);
    j["mode"] = to_string(s.crest_mode);
    j["coupling"] = coupling_to_json(s.coupling);
    j["out"] = s.output_dir;
    j["workers"] = s.workers;
    j["synth_elements"] = s.synth.elements;
    j["synth_scheme"] = scheme_name(s.synth.scheme);
    j["synth_symbols"] = s.synth.symbols;
    j["synth_bits"] = s.synth.bits;
    j["synth_xmin"] = s.synth.x_min;
    j["synth_xmax"] = s.synth.x_max;
    j["synth_source_impedance"] = {s.synth.source_impedance.real(), s.synth.source_impedance.imag()};
    j["synth_active_index"] = s.synth.active_index;
    return j;
}

std::string config_hash(const Scenario& s) { return hex16(fnv1a64(scenario_to_json(s).dump())); }

namespace {

void run_crest(const Scenario& s, ReportBundle& out) {
    for (double eps : s.eps_values) {
        if (s.crest_mode != CrestMode::MonteCarlo) {
            CurveReport c;
            c.name = "crest_eps" + sci_short(eps);
            c.x_label = "n";
            c.y_label = "crest_db";
            for (int n : s.n_values) {
                c.x.push_back(n);
                c.y.push_back(crest_factor_analytic(n, eps));
            }
            c.meta["epsilon"] = shortest(eps);
            c.meta["mode"] = "analytic";
            out.curves.push_back(std::move(c));
        }
        if (s.crest_mode != CrestMode::Analytic) {
            CurveReport c;
            c.name = "crest_mc_eps" + sci_short(eps);
            c.x_label = "n";
            c.y_label = "crest_db";
            for (int n : s.n_values) {
                c.x.push_back(n);
                c.y.push_back(crest_factor_mc(n, eps, s.params.samples, s.params.seed, s.workers));
            }
            c.meta["epsilon"] = shortest(eps);
            c.meta["mode"] = "mc";
            c.meta["samples"] = std::to_string(s.params.samples);
            c.meta["seed"] = std::to_string(s.params.seed);
            if (!mc_samples_sufficient(eps, s.params.samples)) {
                c.meta["warning"] = "samples below 100/epsilon; tail quantile is noisy";
            }
            out.curves.push_back(std::move(c));
        }
    }
}

void run_vswr(const Scenario& s, ReportBundle& out) {
    CurveReport median;
    CurveReport p95;
    median.name = "vswr_median";
    p95.name = "vswr_p95";
    median.x_label = p95.x_label = "n";
    median.y_label = "vswr_median";
    p95.y_label = "vswr_p95";

    for (int n : s.n_values) {
        CurveReport hist = vswr_distribution(n, s.params.epsilon, s.params.mismatch_model,
                                             s.params.samples, s.params.seed, s.workers);
        hist.name = "vswr_n" + std::to_string(n);
        median.x.push_back(n);
        median.y.push_back(parse_double(hist.meta.at("median")));
        p95.x.push_back(n);
        p95.y.push_back(parse_double(hist.meta.at("p95")));
        out.curves.push_back(std::move(hist));
    }

    for (CurveReport* c : {&median, &p95}) {
        c->meta["epsilon"] = shortest(s.params.epsilon);
        c->meta["model"] = to_string(s.params.mismatch_model);
        c->meta["samples"] = std::to_string(s.params.samples);
        c->meta["seed"] = std::to_string(s.params.seed);
    }
    out.curves.push_back(std::move(median));
    out.curves.push_back(std::move(p95));
}

void run_distortion(const Scenario& s, ReportBundle& out) {
    const bool want_mmse = std::count(s.policies.begin(), s.policies.end(), ClipPolicy::Mmse) > 0;
    const bool want_equal = std::count(s.policies.begin(), s.policies.end(), ClipPolicy::Equal) > 0;
    for (double eta : s.eta_values) {
        auto [mmse, equal] = distortion_curves_paired(s.n_values, eta, s.params.samples,
                                                      s.params.seed, s.workers);
        if (want_mmse) {
            mmse.name = "dist_eta" + eta_name(eta) + "_mmse";
            out.curves.push_back(std::move(mmse));
        }
        if (want_equal) {
            equal.name = "dist_eta" + eta_name(eta) + "_equal";
            out.curves.push_back(std::move(equal));
        }
    }
}

void run_synth(const Scenario& s, ReportBundle& out) {
    const int n = s.synth.elements;
    const CouplingMatrix z = gen_coupling(s.coupling, n);
    if (z.n() != n) {
        throw ConfigError("synth demo: coupling matrix is " + std::to_string(z.n()) +
                          " elements but synth_elements = " + std::to_string(n));
    }

    ConstellationSpec spec;
    spec.scheme = s.synth.scheme;
    spec.n = n;
    spec.length = s.synth.symbols;
    const auto targets = constellation_targets(spec, s.params.seed);

    LoadGrid grid;
    grid.bits = s.synth.bits;
    grid.x_min = s.synth.x_min;
    grid.x_max = s.synth.x_max;
    grid.check();

    SynthSummary sum;

    // Per-symbol parasitic synthesis.
    std::vector<std::vector<cdouble>> port_loads(static_cast<size_t>(n - 1));
    for (int t = 0; t < s.synth.symbols; ++t) {
        const auto syn = synthesize_parasitic_loads(z, targets[static_cast<size_t>(t)],
                                                    s.synth.active_index, s.synth.source_impedance);
        sum.max_residual = std::max(sum.max_residual, syn.residual);
        sum.active_feeds.push_back(syn.active_feed);
        for (size_t p = 0; p < syn.loads.size(); ++p) {
            port_loads[p].push_back(syn.loads[p]);
        }
    }

    // Quantize each parasitic port's load trajectory, flat and shaped.
    std::vector<std::vector<cdouble>> flat(static_cast<size_t>(n - 1)),
        shaped(static_cast<size_t>(n - 1));
    for (size_t p = 0; p < port_loads.size(); ++p) {
        flat[p] = quantize_loads(port_loads[p], grid).quantized;
        shaped[p] = s.synth.symbols >= 2 ? noise_shape(port_loads[p], grid).quantized
                                         : flat[p];
    }

    // Replay with quantized loads and the exact active voltage, then score.
    auto replay = [&](const std::vector<std::vector<cdouble>>& q) {
        std::vector<PortCurrents> solved;
        solved.reserve(static_cast<size_t>(s.synth.symbols));
        for (int t = 0; t < s.synth.symbols; ++t) {
            ParasiticFeed feed;
            feed.active_index = s.synth.active_index;
            feed.source_voltage = sum.active_feeds[static_cast<size_t>(t)];
            feed.source_impedance = s.synth.source_impedance;
            for (size_t p = 0; p < q.size(); ++p) feed.loads.push_back(q[p][static_cast<size_t>(t)]);
            solved.push_back(solve_currents(z, FeedConfig{feed}));
        }
        return solved;
    };
    sum.evm_quantized_db = evm(targets, replay(flat));
    sum.evm_shaped_db = evm(targets, replay(shaped));

    // Table rows: ports are numbered with the active port skipped.
    for (int t = 0; t < s.synth.symbols; ++t) {
        int port = 0;
        for (size_t p = 0; p < port_loads.size(); ++p, ++port) {
            if (port == s.synth.active_index) ++port;
            SynthRow row;
            row.symbol = t;
            row.port = port;
            row.load = port_loads[p][static_cast<size_t>(t)];
            row.quantized = flat[p][static_cast<size_t>(t)];
            LoadSynthesis tmp;
            tmp.loads = {row.load};
            row.feasibility = classify_feasibility(tmp).front();
            sum.parasitic_rows.push_back(row);
        }
    }

    // Load-modulated synthesis of the same targets under the default rule.
    for (int t = 0; t < s.synth.symbols; ++t) {
        const auto lm = synthesize_load_modulation(z, targets[static_cast<size_t>(t)]);
        sum.loadmod_max_residual = std::max(sum.loadmod_max_residual, lm.residual);
        sum.loadmod_voltages.push_back(lm.thevenin_voltages);
        for (int p = 0; p < n; ++p) {
            SynthRow row;
            row.symbol = t;
            row.port = p;
            row.load = lm.loads[static_cast<size_t>(p)];
            row.quantized = row.load;
            row.feasibility = lm.feasibility[static_cast<size_t>(p)];
            sum.loadmod_rows.push_back(row);
        }
    }

    out.synthesis = std::move(sum);
}

}  // namespace

ReportBundle run_scenario(const Scenario& s) {
    Scenario resolved = s;
    resolved.apply_defaults();
    resolved.check();

    const auto t0 = std::chrono::steady_clock::now();
    ReportBundle out;

    switch (resolved.kind) {
        case ScenarioKind::CrestSweep:
            run_crest(resolved, out);
            break;
        case ScenarioKind::VswrSweep:
            run_vswr(resolved, out);
            break;
        case ScenarioKind::DistortionSweep:
            run_distortion(resolved, out);
            break;
        case ScenarioKind::SynthDemo:
            run_synth(resolved, out);
            break;
        case ScenarioKind::FullFig4: {
            Scenario crest = resolved;
            crest.crest_mode = CrestMode::Analytic;
            run_crest(crest, out);
            run_vswr(resolved, out);
            Scenario dist = resolved;
            dist.policies = {ClipPolicy::Mmse, ClipPolicy::Equal};
            run_distortion(dist, out);
            break;
        }
    }

    out.manifest.seed = resolved.params.seed;
    out.manifest.samples = resolved.params.samples;
    out.manifest.version = kVersion;
    out.manifest.config = scenario_to_json(resolved);
    out.manifest.config_hash = config_hash(resolved);
    out.manifest.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

namespace {

void write_file(const fs::path& path, const std::string& body) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write " + path.string());
    f << body;
    if (!f) throw IoError("write failed: " + path.string());
}

std::string curve_csv(const CurveReport& c) {
    std::string body = c.x_label + "," + c.y_label + "\n";
    for (size_t i = 0; i < c.x.size(); ++i) {
        body += shortest(c.x[i]);
        body += ',';
        body += shortest(c.y[i]);
        body += '\n';
    }
    return body;
}

std::string curve_plot(const CurveReport& c) {
    std::string body = "# curve: " + c.name + "\n";
    for (const auto& [k, v] : c.meta) body += "# " + k + ": " + v + "\n";
    body += "# columns: " + c.x_label + " " + c.y_label + "\n";
    for (size_t i = 0; i < c.x.size(); ++i) {
        body += shortest(c.x[i]);
        body += ' ';
        body += shortest(c.y[i]);
        body += '\n';
    }
    return body;
}

std::string synth_rows_csv(const std::vector<SynthRow>& rows, bool with_quantized) {
    std::string body = with_quantized
                           ? "symbol,port,load_re_ohm,load_im_ohm,quantized_re_ohm,quantized_im_ohm,feasibility\n"
                           : "symbol,port,zout_re_ohm,zout_im_ohm,feasibility\n";
    for (const auto& r : rows) {
        body += std::to_string(r.symbol) + "," + std::to_string(r.port) + ",";
        body += shortest(r.load.real()) + "," + shortest(r.load.imag()) + ",";
        if (with_quantized) {
            body += shortest(r.quantized.real()) + "," + shortest(r.quantized.imag()) + ",";
        }
        body += to_string(r.feasibility);
        body += '\n';
    }
    return body;
}

}  // namespace

std::vector<std::string> emit_outputs(ReportBundle& bundle, const std::vector<OutputFormat>& formats) {
    const std::string out_dir = bundle.manifest.config.value("out", ".");
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + out_dir + ": " + ec.message());

    const bool want_plot = std::count(formats.begin(), formats.end(), OutputFormat::Plot) > 0;
    bundle.manifest.files.clear();

    auto emit = [&](const std::string& name, const std::string& body) {
        const fs::path p = fs::path(out_dir) / name;
        write_file(p, body);
        bundle.manifest.files.push_back(name);
    };

    for (const auto& c : bundle.curves) {
        emit(c.name + ".csv", curve_csv(c));
        if (want_plot) emit(c.name + ".dat", curve_plot(c));
    }

    if (bundle.synthesis) {
        const auto& syn = *bundle.synthesis;
        emit("synth_loads.csv", synth_rows_csv(syn.parasitic_rows, true));
        std::string active = "symbol,v_re_volt,v_im_volt\n";
        for (size_t t = 0; t < syn.active_feeds.size(); ++t) {
            active += std::to_string(t) + "," + shortest(syn.active_feeds[t].real()) + "," +
                      shortest(syn.active_feeds[t].imag()) + "\n";
        }
        emit("synth_active.csv", active);
        emit("synth_loadmod.csv", synth_rows_csv(syn.loadmod_rows, false));
    }

    // Summary goes last so it can reference every file, itself included.
    nlohmann::json summary;
    summary["manifest"]["seed"] = bundle.manifest.seed;
    summary["manifest"]["samples"] = bundle.manifest.samples;
    summary["manifest"]["version"] = bundle.manifest.version;
    summary["manifest"]["config_hash"] = bundle.manifest.config_hash;
    summary["manifest"]["wall_ms"] = bundle.manifest.wall_ms;
    summary["manifest"]["config"] = bundle.manifest.config;
    nlohmann::json curves = nlohmann::json::array();
    for (const auto& c : bundle.curves) {
        nlohmann::json jc;
        jc["name"] = c.name;
        jc["file"] = c.name + ".csv";
        jc["x_label"] = c.x_label;
        jc["y_label"] = c.y_label;
        jc["points"] = c.x.size();
        jc["meta"] = c.meta;
        curves.push_back(std::move(jc));
    }
    summary["curves"] = std::move(curves);
    if (bundle.synthesis) {
        const auto& syn = *bundle.synthesis;
        summary["synthesis"]["max_residual"] = syn.max_residual;
        summary["synthesis"]["loadmod_max_residual"] = syn.loadmod_max_residual;
        summary["synthesis"]["evm_quantized_db"] = syn.evm_quantized_db;
        summary["synthesis"]["evm_shaped_db"] = syn.evm_shaped_db;
        summary["synthesis"]["symbols"] = syn.active_feeds.size();
    }

    bundle.manifest.files.push_back("summary.json");
    summary["manifest"]["files"] = bundle.manifest.files;
    write_file(fs::path(out_dir) / "summary.json", summary.dump(2) + "\n");

    std::vector<std::string> paths;
    paths.reserve(bundle.manifest.files.size());
    for (const auto& f : bundle.manifest.files) paths.push_back((fs::path(out_dir) / f).string());
    return paths;
}

}  // namespace singlerf
