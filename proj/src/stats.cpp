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

#include "singlerf/stats.hpp"

#include <algorithm>
#include <cmath>

#include "singlerf/chi_squared.hpp"
#include "singlerf/format.hpp"
#include "singlerf/parallel.hpp"
#include "singlerf/rng.hpp"

namespace singlerf {

namespace {

constexpr std::int64_t kBlockDraws = 1 << 14;
constexpr std::uint64_t kTagCrest = 0x63726573;  // "cres"
constexpr std::uint64_t kTagDist = 0x64697374;   // "dist"
constexpr std::uint64_t kTagVswr = 0x76737772;   // "vswr"
constexpr std::uint64_t kTagClip = 0x636c6970;   // "clip"

std::int64_t block_count(std::int64_t samples) {
    return (samples + kBlockDraws - 1) / kBlockDraws;
}

void check_epsilon(double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("epsilon must be in (0, 1)");
}

// One draw of normalized total power: mean of n Exp(1) element powers.
// Element powers are |z|^2 of circularly-symmetric Gaussians; the phases do
// not enter any statistic computed here, so they are never generated. Logs
// are taken over products of up to 8 uniforms at a time, which cannot
// underflow ((2^-53)^8 is far above the smallest normal double).
double draw_norm_power(rng::Xoshiro256pp& g, int n) {
    double sum = 0.0;
    int k = n;
    while (k >= 8) {
        double p = g.next_unit();
        for (int t = 0; t < 7; ++t) p *= g.next_unit();
        sum -= std::log(p);
        k -= 8;
    }
    if (k > 0) {
        double p = g.next_unit();
        for (int t = 1; t < k; ++t) p *= g.next_unit();
        sum -= std::log(p);
    }
    return sum / n;
}

// Empirical p-quantile: k-th smallest with k = ceil(p*m), 1-based.
double empirical_quantile(std::vector<double>& samples, double p) {
    const std::int64_t m = static_cast<std::int64_t>(samples.size());
    std::int64_t k = static_cast<std::int64_t>(std::ceil(p * static_cast<double>(m)));
    k = std::clamp<std::int64_t>(k, 1, m);
    std::nth_element(samples.begin(), samples.begin() + (k - 1), samples.end());
    return samples[k - 1];
}

// Exact common magnitude cap: find tau with sum min(m_k, tau)^2 = c for
// sorted magnitudes and c < sum m_k^2. The constraint is piecewise quadratic
// in tau, so the cap solves in one pass over the sorted prefix sums.
double equal_cap(const std::vector<double>& sorted_mags, double c) {
    const int n = static_cast<int>(sorted_mags.size());
    double prefix = 0.0;
    for (int j = 0; j < n; ++j) {
        const double tau2 = (c - prefix) / (n - j);
        if (tau2 <= sorted_mags[j] * sorted_mags[j]) return std::sqrt(std::max(tau2, 0.0));
        prefix += sorted_mags[j] * sorted_mags[j];
    }
    return sorted_mags.empty() ? 0.0 : sorted_mags.back();
}

}  // namespace

const char* to_string(MismatchModel m) {
    return m == MismatchModel::PowerConserving ? "power-conserving" : "amplitude-difference";
}

const char* to_string(ClipPolicy p) { return p == ClipPolicy::Mmse ? "mmse" : "equal"; }

void AnalysisParams::check() const {
    if (!(epsilon > 0.0 && epsilon < 0.5)) throw ConfigError("epsilon must be in (0, 0.5)");
    if (!(eta > 0.0 && eta <= 1.0)) throw ConfigError("eta must be in (0, 1]");
    if (samples < 1) throw ConfigError("samples must be >= 1");
}

double incident_power(int n, double epsilon, double avg_power) {
    if (n < 1) throw ConfigError("incident_power: n must be >= 1");
    check_epsilon(epsilon);
    if (!(avg_power > 0.0)) throw ConfigError("incident_power: avg_power must be > 0");
    const double dof = 2.0 * n;
    return avg_power * math::chi_squared_quantile(1.0 - epsilon, dof) / dof;
}

double crest_factor_analytic(int n, double epsilon) {
    return 10.0 * std::log10(incident_power(n, epsilon, 1.0));
}

bool mc_samples_sufficient(double epsilon, std::int64_t samples) {
    return static_cast<double>(samples) * epsilon >= 100.0;
}

std::vector<double> crest_factor_mc_multi(int n, std::span<const double> epsilons,
                                          std::int64_t samples, std::uint64_t seed, int workers) {
    if (n < 1) throw ConfigError("crest_factor_mc: n must be >= 1");
    for (double e : epsilons) check_epsilon(e);
    if (samples < 1) throw ConfigError("crest_factor_mc: samples must be >= 1");

    std::vector<double> power(static_cast<size_t>(samples));
    const std::int64_t blocks = block_count(samples);
    par::for_blocks(blocks, workers, [&](std::int64_t b) {
        rng::Xoshiro256pp g(rng::derive_stream(seed, kTagCrest, static_cast<std::uint64_t>(n),
                                               static_cast<std::uint64_t>(b)));
        const std::int64_t lo = b * kBlockDraws;
        const std::int64_t hi = std::min(samples, lo + kBlockDraws);
        for (std::int64_t s = lo; s < hi; ++s) power[static_cast<size_t>(s)] = draw_norm_power(g, n);
    });

    std::vector<double> out;
    out.reserve(epsilons.size());
    for (double e : epsilons) {
        out.push_back(10.0 * std::log10(empirical_quantile(power, 1.0 - e)));
    }
    return out;
}

double crest_factor_mc(int n, double epsilon, std::int64_t samples, std::uint64_t seed, int workers) {
    const double eps[] = {epsilon};
    return crest_factor_mc_multi(n, eps, samples, seed, workers).front();
}

ClipResult clip_currents(const PortCurrents& desired, double p_inc, ClipPolicy policy) {
    if (!(p_inc > 0.0)) throw ConfigError("clip_currents: p_inc must be > 0");
    if (!desired.all_finite()) throw ConfigError("clip_currents: currents must be finite");

    const double p = desired.sum_power();
    const int n = desired.n();

    ClipResult out;
    if (p <= p_inc) {
        out.clipped = desired;
        out.scale_or_cap = policy == ClipPolicy::Mmse
                               ? 1.0
                               : (n > 0 ? desired.i.cwiseAbs().maxCoeff() : 0.0);
        out.sample_distortion = 0.0;
        return out;
    }

    if (policy == ClipPolicy::Mmse) {
        const double s = std::sqrt(p_inc / p);
        out.clipped.i = desired.i * s;
        out.scale_or_cap = s;
        out.sample_distortion = (1.0 - s) * (1.0 - s) * p;
        return out;
    }

    std::vector<double> mags(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) mags[static_cast<size_t>(k)] = std::abs(desired.i(k));
    std::sort(mags.begin(), mags.end());
    const double tau = equal_cap(mags, p_inc);

    out.clipped.i.resize(n);
    double distortion = 0.0;
    for (int k = 0; k < n; ++k) {
        const double m = std::abs(desired.i(k));
        if (m > tau) {
            out.clipped.i(k) = desired.i(k) * (tau / m);
            distortion += (m - tau) * (m - tau);
        } else {
            out.clipped.i(k) = desired.i(k);
        }
    }
    out.scale_or_cap = tau;
    out.sample_distortion = distortion;
    return out;
}

namespace {

struct DistPoint {
    double err_mmse = 0.0;
    double err_equal = 0.0;
    double power = 0.0;
    std::int64_t clipped = 0;
};

// Paired-draw distortion accumulation for one n. Total power is first drawn
// with the grouped-log kernel; only draws near or over the cap are re-drawn
// element-wise (same uniforms, via a state rewind) to get per-element
// magnitudes, so the expensive path runs on roughly an eps fraction of draws.
DistPoint distortion_point(int n, double p_inc, std::int64_t samples, std::uint64_t seed,
                           int workers) {
    const std::int64_t blocks = block_count(samples);
    std::vector<DistPoint> partial(static_cast<size_t>(blocks));

    par::for_blocks(blocks, workers, [&](std::int64_t b) {
        rng::Xoshiro256pp g(rng::derive_stream(seed, kTagDist, static_cast<std::uint64_t>(n),
                                               static_cast<std::uint64_t>(b)));
        DistPoint acc;
        std::vector<double> m2(static_cast<size_t>(n));
        std::vector<double> mags(static_cast<size_t>(n));
        const double inv_n = 1.0 / n;
        const std::int64_t lo = b * kBlockDraws;
        const std::int64_t hi = std::min(samples, lo + kBlockDraws);

        for (std::int64_t s = lo; s < hi; ++s) {
            rng::Xoshiro256pp snapshot = g;
            const double coarse = draw_norm_power(g, n);
            // Guard band absorbs the rounding difference between the grouped
            // and element-wise sums; both consume the same n uniforms.
            if (coarse <= p_inc * (1.0 - 1e-12)) {
                acc.power += coarse;
                continue;
            }

            g = snapshot;
            double total = 0.0;
            for (int k = 0; k < n; ++k) {
                m2[static_cast<size_t>(k)] = g.next_exp() * inv_n;
                total += m2[static_cast<size_t>(k)];
            }
            acc.power += total;
            if (total <= p_inc) continue;

            ++acc.clipped;
            const double s_mmse = std::sqrt(p_inc / total);
            acc.err_mmse += (1.0 - s_mmse) * (1.0 - s_mmse) * total;

            for (int k = 0; k < n; ++k) mags[static_cast<size_t>(k)] = std::sqrt(m2[static_cast<size_t>(k)]);
            std::sort(mags.begin(), mags.end());
            const double tau = equal_cap(mags, p_inc);
            double err = 0.0;
            for (int k = n - 1; k >= 0; --k) {
                const double d = mags[static_cast<size_t>(k)] - tau;
                if (d <= 0.0) break;  // sorted: remaining magnitudes are below the cap
                err += d * d;
            }
            acc.err_equal += err;
        }
        partial[static_cast<size_t>(b)] = acc;
    });

    DistPoint total;
    for (const auto& p : partial) {
        total.err_mmse += p.err_mmse;
        total.err_equal += p.err_equal;
        total.power += p.power;
        total.clipped += p.clipped;
    }
    return total;
}

}  // namespace

std::pair<CurveReport, CurveReport> distortion_curves_paired(std::span<const int> n_values,
                                                             double eta, std::int64_t samples,
                                                             std::uint64_t seed, int workers) {
    if (!(eta > 0.0 && eta <= 1.0)) throw ConfigError("distortion curve: eta must be in (0, 1]");
    if (samples < 1) throw ConfigError("distortion curve: samples must be >= 1");
    for (int n : n_values) {
        if (n < 1) throw ConfigError("distortion curve: all n must be >= 1");
    }

    const double p_inc = 1.0 / eta;
    CurveReport mmse;
    CurveReport equal;
    mmse.x_label = equal.x_label = "n";
    mmse.y_label = equal.y_label = "normalized distortion";
    std::string clip_counts;

    for (int n : n_values) {
        const DistPoint pt = distortion_point(n, p_inc, samples, seed, workers);
        mmse.x.push_back(n);
        equal.x.push_back(n);
        mmse.y.push_back(pt.power > 0.0 ? pt.err_mmse / pt.power : 0.0);
        equal.y.push_back(pt.power > 0.0 ? pt.err_equal / pt.power : 0.0);
        if (!clip_counts.empty()) clip_counts += ',';
        clip_counts += std::to_string(pt.clipped);
    }

    for (CurveReport* c : {&mmse, &equal}) {
        c->meta["eta"] = shortest(eta);
        c->meta["p_inc"] = shortest(p_inc);
        c->meta["samples"] = std::to_string(samples);
        c->meta["seed"] = std::to_string(seed);
        c->meta["clip_counts"] = clip_counts;
    }
    mmse.meta["policy"] = to_string(ClipPolicy::Mmse);
    equal.meta["policy"] = to_string(ClipPolicy::Equal);
    return {std::move(mmse), std::move(equal)};
}

CurveReport distortion_curve(std::span<const int> n_values, double eta, ClipPolicy policy,
                             std::int64_t samples, std::uint64_t seed, int workers) {
    auto [mmse, equal] = distortion_curves_paired(n_values, eta, samples, seed, workers);
    return policy == ClipPolicy::Mmse ? std::move(mmse) : std::move(equal);
}

MismatchSample mismatch_sample(double radiated, double p_inc, MismatchModel model) {
    if (!(p_inc > 0.0)) throw ConfigError("mismatch_sample: p_inc must be > 0");
    if (radiated < 0.0) throw ConfigError("mismatch_sample: radiated power must be >= 0");

    double gamma = 0.0;
    if (model == MismatchModel::PowerConserving) {
        gamma = std::max(0.0, 1.0 - radiated / p_inc);
    } else {
        gamma = std::abs(1.0 - std::sqrt(std::min(radiated, p_inc) / p_inc));
    }
    gamma = std::min(gamma, 1.0);

    MismatchSample out;
    out.gamma_mag = gamma;
    out.vswr = gamma >= 1.0 ? kVswrCap : std::min((1.0 + gamma) / (1.0 - gamma), kVswrCap);
    return out;
}

CurveReport vswr_distribution(int n, double epsilon, MismatchModel model, std::int64_t samples,
                              std::uint64_t seed, int workers) {
    if (n < 1) throw ConfigError("vswr_distribution: n must be >= 1");
    check_epsilon(epsilon);
    if (samples < 1) throw ConfigError("vswr_distribution: samples must be >= 1");

    const double p_inc = incident_power(n, epsilon, 1.0);

    std::vector<double> vswr(static_cast<size_t>(samples));
    const std::int64_t blocks = block_count(samples);
    par::for_blocks(blocks, workers, [&](std::int64_t b) {
        rng::Xoshiro256pp g(rng::derive_stream(seed, kTagVswr, static_cast<std::uint64_t>(n),
                                               static_cast<std::uint64_t>(b)));
        const std::int64_t lo = b * kBlockDraws;
        const std::int64_t hi = std::min(samples, lo + kBlockDraws);
        for (std::int64_t s = lo; s < hi; ++s) {
            const double p = draw_norm_power(g, n);
            vswr[static_cast<size_t>(s)] = mismatch_sample(p, p_inc, model).vswr;
        }
    });

    // Log-spaced histogram over [1, cap]; pdf normalized by linear bin width.
    constexpr int kBins = 120;
    const double log_cap = std::log10(kVswrCap);
    std::vector<std::int64_t> counts(kBins, 0);
    for (double v : vswr) {
        int idx = static_cast<int>(std::log10(std::max(v, 1.0)) / log_cap * kBins);
        idx = std::clamp(idx, 0, kBins - 1);
        ++counts[static_cast<size_t>(idx)];
    }

    CurveReport report;
    report.x_label = "vswr_bin_center";
    report.y_label = "pdf";
    report.x.resize(kBins);
    report.y.resize(kBins);
    for (int i = 0; i < kBins; ++i) {
        const double lo = std::pow(10.0, log_cap * i / kBins);
        const double hi = std::pow(10.0, log_cap * (i + 1) / kBins);
        report.x[static_cast<size_t>(i)] = 0.5 * (lo + hi);
        report.y[static_cast<size_t>(i)] =
            static_cast<double>(counts[static_cast<size_t>(i)]) /
            (static_cast<double>(samples) * (hi - lo));
    }

    std::vector<double> scratch = vswr;
    const double median = empirical_quantile(scratch, 0.5);
    scratch = vswr;
    const double p95 = empirical_quantile(scratch, 0.95);

    report.meta["n"] = std::to_string(n);
    report.meta["epsilon"] = shortest(epsilon);
    report.meta["model"] = to_string(model);
    report.meta["p_inc"] = shortest(p_inc);
    report.meta["samples"] = std::to_string(samples);
    report.meta["seed"] = std::to_string(seed);
    report.meta["median"] = shortest(median);
    report.meta["p95"] = shortest(p95);
    return report;
}

double clip_fraction_mc(int n, double p_inc, std::int64_t samples, std::uint64_t seed, int workers) {
    if (n < 1) throw ConfigError("clip_fraction_mc: n must be >= 1");
    if (!(p_inc > 0.0)) throw ConfigError("clip_fraction_mc: p_inc must be > 0");
    if (samples < 1) throw ConfigError("clip_fraction_mc: samples must be >= 1");

    const std::int64_t blocks = block_count(samples);
    std::vector<std::int64_t> partial(static_cast<size_t>(blocks), 0);
    par::for_blocks(blocks, workers, [&](std::int64_t b) {
        rng::Xoshiro256pp g(rng::derive_stream(seed, kTagClip, static_cast<std::uint64_t>(n),
                                               static_cast<std::uint64_t>(b)));
        const std::int64_t lo = b * kBlockDraws;
        const std::int64_t hi = std::min(samples, lo + kBlockDraws);
        std::int64_t count = 0;
        for (std::int64_t s = lo; s < hi; ++s) {
            if (draw_norm_power(g, n) > p_inc) ++count;
        }
        partial[static_cast<size_t>(b)] = count;
    });

    std::int64_t total = 0;
    for (auto c : partial) total += c;
    return static_cast<double>(total) / static_cast<double>(samples);
}

PaBudget pa_power_budget(PaClass pa, double avg_radiated, double crest_db) {
    if (!(avg_radiated > 0.0)) throw ConfigError("pa_power_budget: avg_radiated must be > 0");
    if (crest_db < 0.0) throw ConfigError("pa_power_budget: crest_db must be >= 0");

    PaBudget out;
    if (pa == PaClass::ClassA) {
        // Constant draw sized at the peak, 25% peak efficiency.
        const double peak = avg_radiated * std::pow(10.0, crest_db / 10.0);
        out.dc_input = peak / 0.25;
    } else {
        // Switching PA at 80% efficiency on the average radiated power.
        out.dc_input = avg_radiated / 0.80;
    }
    out.dissipated_heat = out.dc_input - avg_radiated;
    return out;
}

}  // namespace singlerf
