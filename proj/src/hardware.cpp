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

#include "singlerf/hardware.hpp"

#include <cmath>

namespace singlerf {

void LoadGrid::check() const {
    if (bits < 1 || bits > 24) throw ConfigError("load grid: bits must be in [1, 24]");
    if (!(x_min < x_max)) throw ConfigError("load grid: need x_min < x_max");
}

double LoadGrid::snap(double x) const {
    if (x <= x_min) return x_min;
    if (x >= x_max) return x_max;
    const double t = (x - x_min) / step();
    // Nearest level with ties resolved downward.
    double k = std::ceil(t - 0.5);
    if (k < 0.0) k = 0.0;
    const double max_k = static_cast<double>(levels() - 1);
    if (k > max_k) k = max_k;
    return x_min + k * step();
}

namespace {

struct Component {
    double value;
    bool clamped;
};

Component snap_counted(const LoadGrid& grid, double x) {
    return {grid.snap(x), !grid.in_range(x)};
}

}  // namespace

QuantizationReport quantize_loads(std::span<const cdouble> loads, const LoadGrid& grid) {
    grid.check();
    QuantizationReport report;
    report.quantized.reserve(loads.size());
    report.per_symbol_error.reserve(loads.size());

    for (const auto& x : loads) {
        const Component re = snap_counted(grid, x.real());
        const Component im = snap_counted(grid, x.imag());
        report.clamped += (re.clamped ? 1 : 0) + (im.clamped ? 1 : 0);
        const cdouble q{re.value, im.value};
        report.quantized.push_back(q);
        report.per_symbol_error.push_back(std::abs(q - x));
    }
    return report;
}

QuantizationReport noise_shape(std::span<const cdouble> loads, const LoadGrid& grid) {
    grid.check();
    if (loads.size() < 2) throw ConfigError("noise_shape: sequence length must be >= 2");

    QuantizationReport report;
    report.quantized.reserve(loads.size());
    report.per_symbol_error.reserve(loads.size());

    double carry_re = 0.0;
    double carry_im = 0.0;
    for (const auto& x : loads) {
        const double in_re = x.real() + carry_re;
        const double in_im = x.imag() + carry_im;
        const Component re = snap_counted(grid, x.real());  // clamp accounting on raw input
        const Component im = snap_counted(grid, x.imag());
        report.clamped += (re.clamped ? 1 : 0) + (im.clamped ? 1 : 0);

        const double q_re = grid.snap(in_re);
        const double q_im = grid.snap(in_im);
        carry_re = in_re - q_re;
        carry_im = in_im - q_im;

        const cdouble q{q_re, q_im};
        report.quantized.push_back(q);
        report.per_symbol_error.push_back(std::abs(q - x));
    }
    return report;
}

double saw_filter_loss(double power_w, double loss_db) {
    if (power_w < 0.0) throw ConfigError("saw_filter_loss: power must be >= 0");
    if (!(loss_db >= 0.0 && loss_db <= 3.0)) throw ConfigError("saw_filter_loss: loss_db must be in [0, 3]");
    return power_w * std::pow(10.0, -loss_db / 10.0);
}

double circulator_dump(double p_inc, double p_rad) {
    if (p_rad < 0.0 || p_inc < 0.0) throw ConfigError("circulator_dump: powers must be >= 0");
    // Clipped power may land a rounding step above the budget; that is not a
    // contract violation, anything beyond the clip tolerance is.
    if (p_rad > p_inc * (1.0 + 1e-9)) {
        throw ConfigError("circulator_dump: radiated power exceeds incident; clip the currents first");
    }
    return std::max(0.0, p_inc - p_rad);
}

double evm(std::span<const PortCurrents> reference, std::span<const PortCurrents> actual) {
    if (reference.size() != actual.size()) throw ConfigError("evm: sequence lengths differ");
    double err = 0.0;
    double ref = 0.0;
    for (size_t s = 0; s < reference.size(); ++s) {
        if (reference[s].n() != actual[s].n()) throw ConfigError("evm: dimension mismatch");
        err += (reference[s].i - actual[s].i).squaredNorm();
        ref += reference[s].i.squaredNorm();
    }
    if (!(ref > 0.0)) throw ConfigError("evm: reference power is zero");
    if (err == 0.0) return kEvmFloorDb;
    return std::max(10.0 * std::log10(err / ref), kEvmFloorDb);
}

}  // namespace singlerf
