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

#ifndef SINGLERF_STATS_HPP
#define SINGLERF_STATS_HPP

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "singlerf/feed.hpp"

namespace singlerf {

// Statistics of a single-PA array driving i.i.d. complex Gaussian element
// signals. The instantaneous total power sum |i_k|^2 of n elements at total
// average power P is P/(2n) times a chi-squared variable with 2n degrees of
// freedom, which is what everything below exploits: the (1-eps) power
// quantile shrinks toward the mean as n grows, so crest factor, mismatch and
// clipping distortion all collapse in the massive regime.

enum class MismatchModel {
    PowerConserving,      // |G| = max(0, 1 - P/P_inc): undelivered power fraction read as reflection
    AmplitudeDifference,  // |G| = |1 - sqrt(min(P, P_inc)/P_inc)|: amplitude shortfall
};

enum class ClipPolicy {
    Mmse,   // least-squares projection onto the power ball: uniform scaling
    Equal,  // common magnitude cap, phases preserved
};

enum class PaClass { ClassA, ClassF };

const char* to_string(MismatchModel m);
const char* to_string(ClipPolicy p);

struct AnalysisParams {
    double epsilon = 1e-3;  // clipping probability, in (0, 0.5)
    double eta = 0.8;       // target total efficiency, in (0, 1]
    std::int64_t samples = 1'000'000;
    std::uint64_t seed = 1;
    MismatchModel mismatch_model = MismatchModel::PowerConserving;

    void check() const;  // throws ConfigError on out-of-range fields
};

struct MismatchSample {
    double gamma_mag;  // |G| in [0, 1]
    double vswr;       // (1 + |G|)/(1 - |G|), capped at kVswrCap
};

struct ClipResult {
    PortCurrents clipped;
    double scale_or_cap;       // MMSE scale factor, or the Equal magnitude cap
    double sample_distortion;  // ||i - i_hat||^2; 0 when no clipping occurred
};

// Generic container for one sweep curve plus its run metadata.
struct CurveReport {
    std::string name;
    std::string x_label;
    std::string y_label;
    std::vector<double> x;
    std::vector<double> y;
    std::map<std::string, std::string> meta;
};

inline constexpr double kVswrCap = 1e6;

// Available PA power for clip probability eps: the (1-eps) quantile of the
// instantaneous total power, avg_power * Q(1-eps; chi^2_2n)/(2n).
double incident_power(int n, double epsilon, double avg_power);

// 10*log10 of the quantile ratio. The crest factor is the square root of the
// peak-to-average power ratio, so 20*log10(crest) and 10*log10(PAPR) agree;
// this value is both.
double crest_factor_analytic(int n, double epsilon);

// Empirical (1-eps) quantile of the normalized total power over Monte-Carlo
// draws, in dB. Deterministic for fixed (seed), independent of workers.
double crest_factor_mc(int n, double epsilon, std::int64_t samples, std::uint64_t seed,
                       int workers = 1);

// Several clip probabilities against one set of draws (one generation pass,
// one quantile per epsilon). crest_factor_mc(n, e, ...) equals the
// single-element case of this.
std::vector<double> crest_factor_mc_multi(int n, std::span<const double> epsilons,
                                          std::int64_t samples, std::uint64_t seed,
                                          int workers = 1);

// Tail-mass precondition for crest_factor_mc: samples >= 100/epsilon.
bool mc_samples_sufficient(double epsilon, std::int64_t samples);

// Clips a desired current vector to the available power p_inc. MMSE scales
// uniformly by sqrt(p_inc/P) (the least-squares projection); Equal caps all
// magnitudes at a common threshold chosen so the clipped power equals p_inc.
ClipResult clip_currents(const PortCurrents& desired, double p_inc, ClipPolicy policy);

// Normalized distortion E||i - i_hat||^2 / E||i||^2 versus n, with the PA
// sized for total efficiency eta (P_inc = avg_power/eta).
CurveReport distortion_curve(std::span<const int> n_values, double eta, ClipPolicy policy,
                             std::int64_t samples, std::uint64_t seed, int workers = 1);

// Both policies from the same draws (paired comparison), cheaper than two
// independent sweeps. Index 0 = MMSE, 1 = Equal.
std::pair<CurveReport, CurveReport> distortion_curves_paired(std::span<const int> n_values,
                                                             double eta, std::int64_t samples,
                                                             std::uint64_t seed, int workers = 1);

// Maps one draw's radiated power to a reflection sample under the model.
MismatchSample mismatch_sample(double radiated, double p_inc, MismatchModel model);

// Empirical VSWR pdf over Gaussian draws with the PA sized at the (1-eps)
// power quantile. Histogram bins are log-spaced over [1, kVswrCap]; meta
// carries the exact sample median and 95th percentile.
CurveReport vswr_distribution(int n, double epsilon, MismatchModel model, std::int64_t samples,
                              std::uint64_t seed, int workers = 1);

// Fraction of draws whose total power exceeds p_inc; the clip-rate companion
// of incident_power (sized at the quantile, the fraction converges to eps).
double clip_fraction_mc(int n, double p_inc, std::int64_t samples, std::uint64_t seed,
                        int workers = 1);

struct PaBudget {
    double dc_input;         // watts drawn from the supply
    double dissipated_heat;  // watts lost as heat
};

// Class A is sized at peak power with 25% peak efficiency and constant draw;
// class F runs switched at ~80% efficiency on the average.
PaBudget pa_power_budget(PaClass pa, double avg_radiated, double crest_db);

}  // namespace singlerf

#endif  // SINGLERF_STATS_HPP
