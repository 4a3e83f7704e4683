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

#include "singlerf/signals.hpp"

#include <cmath>

namespace singlerf {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;
constexpr std::uint64_t kGaussianTag = 0x67617573;  // "gaus"
constexpr std::uint64_t kSymbolTag = 0x73796d62;    // "symb"

bool is_power_of_two(int v) { return v >= 1 && (v & (v - 1)) == 0; }

void check_gaussian(const GaussianSpec& spec) {
    if (spec.n < 1) throw ConfigError("signal spec: element count must be >= 1");
    if (!(spec.total_avg_power > 0.0)) throw ConfigError("signal spec: total_avg_power must be > 0");
}

}  // namespace

GaussianCurrentStream::GaussianCurrentStream(const GaussianSpec& spec, std::uint64_t seed,
                                             std::uint64_t stream_index)
    : spec_(spec),
      per_element_var_(spec.total_avg_power / spec.n),
      rng_(rng::derive_stream(seed, kGaussianTag, stream_index)) {
    check_gaussian(spec);
}

void GaussianCurrentStream::next(PortCurrents& out) {
    if (out.n() != spec_.n) out.i.resize(spec_.n);
    for (int k = 0; k < spec_.n; ++k) out.i(k) = rng_.next_circular_gaussian(per_element_var_);
}

PortCurrents GaussianCurrentStream::next() {
    PortCurrents out;
    next(out);
    return out;
}

std::vector<PortCurrents> draw_gaussian_currents(const GaussianSpec& spec, std::uint64_t seed, int count) {
    if (count < 1) throw ConfigError("draw_gaussian_currents: count must be >= 1");
    GaussianCurrentStream stream(spec, seed);
    std::vector<PortCurrents> out(count);
    for (auto& draw : out) stream.next(draw);
    return out;
}

std::vector<cdouble> constellation_points(const ConstellationScheme& scheme) {
    std::vector<cdouble> pts;

    if (const auto* psk = std::get_if<PskScheme>(&scheme)) {
        if (!is_power_of_two(psk->order) || psk->order < 2) {
            throw ConfigError("PSK order must be a power of two, >= 2");
        }
        pts.reserve(psk->order);
        for (int k = 0; k < psk->order; ++k) {
            const double phi = kTwoPi * k / psk->order;
            pts.emplace_back(std::cos(phi), std::sin(phi));  // unit modulus
        }
        return pts;
    }

    const auto& qam = std::get<SquareQamScheme>(scheme);
    const int side = static_cast<int>(std::lround(std::sqrt(double(qam.order))));
    if (side * side != qam.order || !is_power_of_two(side) || side < 2) {
        throw ConfigError("square QAM order must be 4, 16, 64, ... (a power of 4)");
    }
    // Odd-integer grid, exhaustively normalized: E|s|^2 = 2(M-1)/3.
    const double scale = 1.0 / std::sqrt(2.0 * (qam.order - 1) / 3.0);
    pts.reserve(qam.order);
    for (int a = 0; a < side; ++a) {
        for (int b = 0; b < side; ++b) {
            pts.emplace_back(scale * (2 * a - side + 1), scale * (2 * b - side + 1));
        }
    }
    return pts;
}

std::vector<PortCurrents> constellation_targets(const ConstellationSpec& spec, std::uint64_t seed) {
    if (spec.n < 1) throw ConfigError("constellation spec: element count must be >= 1");
    if (spec.length < 1) throw ConfigError("constellation spec: length must be >= 1");
    if (!(spec.total_avg_power > 0.0)) throw ConfigError("constellation spec: total_avg_power must be > 0");

    const auto pts = constellation_points(spec.scheme);
    const double amp = std::sqrt(spec.total_avg_power / spec.n);
    const std::uint64_t order = pts.size();

    rng::Xoshiro256pp gen(rng::derive_stream(seed, kSymbolTag));
    std::vector<PortCurrents> out(spec.length);
    for (auto& draw : out) {
        draw.i.resize(spec.n);
        for (int k = 0; k < spec.n; ++k) {
            // Unbiased index draw via rejection on the top multiple of order.
            const std::uint64_t bound = order * (~std::uint64_t{0} / order);
            std::uint64_t r = gen.next_u64();
            while (r >= bound) r = gen.next_u64();
            draw.i(k) = amp * pts[static_cast<size_t>(r % order)];
        }
    }
    return out;
}

}  // namespace singlerf
