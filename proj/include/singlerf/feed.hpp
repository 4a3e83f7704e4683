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

#ifndef SINGLERF_FEED_HPP
#define SINGLERF_FEED_HPP

#include <complex>
#include <variant>
#include <vector>

#include "singlerf/coupling.hpp"

namespace singlerf {

// The three front-end feeding architectures share one current equation:
//   i = (Z + diag(loading))^-1 * v
// and differ only in how (loading, v) are assembled. solve_currents performs
// that assembly and a pivoted LU solve with a condition check.

// One RF chain per element: source impedance Z_n and voltage v_n at each port.
struct ConventionalFeed {
    std::vector<cdouble> source_impedances;  // ohms
    std::vector<cdouble> voltages;           // volts
};

// Single fed element; every other port terminated in a tunable load and
// excited through mutual coupling only.
struct ParasiticFeed {
    int active_index = 0;
    cdouble source_voltage{0.0, 0.0};    // volts, at the active port
    cdouble source_impedance{50.0, 0.0}; // RF-chain output + matching, ohms
    std::vector<cdouble> loads;          // x_n at parasitic ports, in port order with the active port skipped
};

// All elements driven from one carrier through per-element loading networks,
// represented by their Thevenin voltage / output impedance pairs.
struct LoadModulatedFeed {
    std::vector<cdouble> thevenin_voltages;   // volts
    std::vector<cdouble> output_impedances;   // ohms
};

using FeedConfig = std::variant<ConventionalFeed, ParasiticFeed, LoadModulatedFeed>;

struct PortCurrents {
    Eigen::VectorXcd i;  // amperes

    int n() const { return static_cast<int>(i.size()); }
    // Sum-power functional sum |i_k|^2 (ideal-coupling normalization).
    double sum_power() const { return i.squaredNorm(); }
    bool all_finite() const;
};

// Radiated power against a coupled matrix, Re(i^H Z i), RMS phasors.
double radiated_power(const CouplingMatrix& z, const PortCurrents& currents);

// Open circuits are represented by a finite large reactance so that the
// linear algebra stays total.
inline constexpr double kOpenCircuitOhms = 1e12;
// Effective matrices with an estimated condition number beyond this are
// rejected instead of silently producing noise.
inline constexpr double kConditionLimit = 1e12;
inline constexpr double kSolveResidualLimit = 1e-10;
inline constexpr double kFeasibilityTolOhms = 1e-6;

PortCurrents solve_currents(const CouplingMatrix& z, const FeedConfig& feed);

enum class FeasibilityClass {
    PurelyReactive,  // |Re(x)| <= tol: implementable with reactance alone
    PassiveLossy,    // Re(x) > tol: needs a resistive part
    RequiresActive,  // Re(x) < -tol: needs a negative-resistance circuit
};

const char* to_string(FeasibilityClass c);

struct LoadSynthesis {
    // Parasitic synthesis: loads are the per-parasitic-port x_n (active port
    // skipped). Load-modulated synthesis: loads are the output impedances and
    // thevenin_voltages the matching source terms.
    std::vector<cdouble> loads;
    std::vector<cdouble> thevenin_voltages;
    cdouble active_feed{0.0, 0.0};  // parasitic only: required source voltage
    double residual = 0.0;          // max relative error of re-solved currents vs. target
    std::vector<FeasibilityClass> feasibility;
};

// Inverts the current equation for a parasitic array: given the full desired
// current vector, returns the parasitic loads and the active-port voltage
// that reproduce it. Fails (naming the port) when a desired parasitic current
// is numerically zero; such an element must be open-circuited instead.
LoadSynthesis synthesize_parasitic_loads(const CouplingMatrix& z, const PortCurrents& desired,
                                         int active_index = 0,
                                         cdouble source_impedance = cdouble{50.0, 0.0});

// The load-modulated inverse is underdetermined (Thevenin pair per port, one
// equation), so the output impedances are fixed by convention.
enum class OutputImpedanceRule {
    ConjugateSelf,  // Z_out,n = conj(z[n][n]) (per-port conjugate match); default
    SystemZ0,       // Z_out,n = z_ref
};

LoadSynthesis synthesize_load_modulation(const CouplingMatrix& z, const PortCurrents& desired,
                                         OutputImpedanceRule rule = OutputImpedanceRule::ConjugateSelf);

std::vector<FeasibilityClass> classify_feasibility(const LoadSynthesis& s,
                                                   double tol_r = kFeasibilityTolOhms);

}  // namespace singlerf

#endif  // SINGLERF_FEED_HPP
