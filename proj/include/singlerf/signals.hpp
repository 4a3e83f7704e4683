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

#ifndef SINGLERF_SIGNALS_HPP
#define SINGLERF_SIGNALS_HPP

#include <cstdint>
#include <variant>
#include <vector>

#include "singlerf/feed.hpp"
#include "singlerf/rng.hpp"

namespace singlerf {

// i.i.d. circularly-symmetric complex Gaussian element signals with per-element
// variance total_avg_power / n, so the expected total power is total_avg_power.
struct GaussianSpec {
    int n = 1;
    double total_avg_power = 1.0;
};

struct PskScheme {
    int order = 4;  // power of two, >= 2
};

struct SquareQamScheme {
    int order = 16;  // 4, 16, 64, ... (4^k)
};

using ConstellationScheme = std::variant<PskScheme, SquareQamScheme>;

struct ConstellationSpec {
    ConstellationScheme scheme{PskScheme{4}};
    int n = 1;
    int length = 1;               // symbols to draw
    double total_avg_power = 1.0;
};

// Value-like generator: copyable, seekable by stream index. Streams with
// distinct indices are statistically independent, so Monte-Carlo workers can
// each own one without coordination.
class GaussianCurrentStream {
  public:
    GaussianCurrentStream(const GaussianSpec& spec, std::uint64_t seed, std::uint64_t stream_index = 0);

    void next(PortCurrents& out);
    PortCurrents next();

  private:
    GaussianSpec spec_;
    double per_element_var_;
    rng::Xoshiro256pp rng_;
};

// Materializing conveniences. draw_gaussian_currents(spec, seed, count) equals
// stream (seed, index 0) read count times; prefer the stream for large counts.
std::vector<PortCurrents> draw_gaussian_currents(const GaussianSpec& spec, std::uint64_t seed, int count);

// Per-element i.i.d. uniform symbols from the scheme's constellation,
// normalized to unit average power then scaled so the expected vector total
// power is total_avg_power. PSK symbols are constant-modulus before scaling.
std::vector<PortCurrents> constellation_targets(const ConstellationSpec& spec, std::uint64_t seed);

// Constellation points at unit average power (exhaustively normalized).
std::vector<cdouble> constellation_points(const ConstellationScheme& scheme);

}  // namespace singlerf

#endif  // SINGLERF_SIGNALS_HPP
