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

#ifndef SINGLERF_HARDWARE_HPP
#define SINGLERF_HARDWARE_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "singlerf/feed.hpp"

namespace singlerf {

// Discrete-load implementation layer: switched pin-diode banks realize one of
// 2^bits predefined load values per axis. Complex loads quantize real and
// imaginary parts independently on the same grid (two independent banks).
struct LoadGrid {
    int bits = 16;
    double x_min = -500.0;  // ohms
    double x_max = 500.0;   // ohms

    std::int64_t levels() const { return std::int64_t{1} << bits; }
    double step() const { return (x_max - x_min) / static_cast<double>(levels() - 1); }
    bool in_range(double x) const { return x >= x_min && x <= x_max; }
    // Nearest grid point, ties to the lower level; out-of-range values clamp.
    double snap(double x) const;

    void check() const;  // throws ConfigError on bad bits/range
};

struct QuantizationReport {
    std::vector<cdouble> quantized;
    std::vector<double> per_symbol_error;  // |quantized - input| per symbol
    std::int64_t clamped = 0;              // out-of-range components, counted not thrown
    std::optional<double> evm_db;          // filled by pipelines that re-solve currents
};

// Memoryless nearest-level quantization.
QuantizationReport quantize_loads(std::span<const cdouble> loads, const LoadGrid& grid);

// First-order error-feedback quantization: each symbol's residual is added to
// the next input before snapping, pushing the error spectrum out of the low
// band. Real and imaginary accumulators are independent.
QuantizationReport noise_shape(std::span<const cdouble> loads, const LoadGrid& grid);

// Frequency-flat insertion loss of the passive post-processing filter.
double saw_filter_loss(double power_w, double loss_db = 1.5);

// Power absorbed by the circulator's dump resistor. Exact bookkeeping:
// dumped + radiated = incident. Callers must clip first (p_rad <= p_inc).
double circulator_dump(double p_inc, double p_rad);

inline constexpr double kEvmFloorDb = -300.0;

// Error vector magnitude 10*log10(sum ||ref - act||^2 / sum ||ref||^2), with
// an exact match reported at the floor instead of -inf.
double evm(std::span<const PortCurrents> reference, std::span<const PortCurrents> actual);

}  // namespace singlerf

#endif  // SINGLERF_HARDWARE_HPP
