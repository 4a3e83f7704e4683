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

#ifndef SINGLERF_RNG_HPP
#define SINGLERF_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>

// Self-contained deterministic RNG stack. Standard-library distributions are
// implementation-defined, so all draws are generated explicitly here: the same
// (seed, stream) pair yields the same values on every build and worker count.

namespace singlerf::rng {

struct SplitMix64 {
    std::uint64_t state;

    constexpr std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
};

// Substream splitting rule: absorb (tag, a, b) into a splitmix64 chain,
//   s0 = SM(master); s1 = SM(s0 ^ tag); s2 = SM(s1 ^ a); key = SM(s2 ^ b)
// where SM is a single splitmix64 step seeded with the given state. Distinct
// (tag, a, b) triples give statistically independent generators, so parallel
// workers can own disjoint blocks without sharing state.
constexpr std::uint64_t derive_stream(std::uint64_t master, std::uint64_t tag,
                                      std::uint64_t a = 0, std::uint64_t b = 0) {
    SplitMix64 sm{master};
    std::uint64_t s = sm.next();
    sm.state = s ^ tag;
    s = sm.next();
    sm.state = s ^ a;
    s = sm.next();
    sm.state = s ^ b;
    return sm.next();
}

// xoshiro256++ (Blackman & Vigna), seeded by splitmix64 expansion.
class Xoshiro256pp {
  public:
    explicit Xoshiro256pp(std::uint64_t seed) {
        SplitMix64 sm{seed};
        for (auto& w : s_) w = sm.next();
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform on (0, 1]; never 0, so logs are always finite.
    double next_unit() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

    // Exp(1) draw.
    double next_exp() { return -std::log(next_unit()); }

    // Circularly-symmetric complex Gaussian with E|z|^2 = var.
    std::complex<double> next_circular_gaussian(double var) {
        const double u1 = next_unit();
        const double u2 = next_unit();
        const double r = std::sqrt(-var * std::log(u1));
        const double phi = 2.0 * 3.14159265358979323846 * u2;
        return {r * std::cos(phi), r * std::sin(phi)};
    }

  private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4];
};

}  // namespace singlerf::rng

#endif  // SINGLERF_RNG_HPP
