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

#ifndef SINGLERF_COUPLING_HPP
#define SINGLERF_COUPLING_HPP

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "singlerf/errors.hpp"

namespace singlerf {

using cdouble = std::complex<double>;

// N x N complex impedance matrix relating port voltages to port currents.
// Diagonal entries are element self-impedances, off-diagonals the mutual
// couplings between elements. A physical array is reciprocal (symmetric z)
// and passive (Hermitian part positive semidefinite); validate_coupling
// checks both. Treated as immutable once built.
struct CouplingMatrix {
    Eigen::MatrixXcd z;    // ohms
    double z_ref = 50.0;   // system reference impedance, ohms

    int n() const { return static_cast<int>(z.rows()); }
};

// Uncoupled array: z0 on the diagonal, zero elsewhere.
struct IdealCoupling {
    cdouble z0{50.0, 0.0};
};

// Synthetic stand-in for mutual coupling on a uniform line of elements:
//   z[n][m] = mag0 * exp(-kappa*d) * exp(-j*2*pi*d),  d = |n - m| * spacing,
// with z0 on the diagonal. Not an electromagnetic model; it exists so that
// coupled-matrix code paths have a parametric, always-valid source.
struct ExpDecayCoupling {
    cdouble z0{50.0, 10.0};
    double mag0 = 20.0;     // coupling magnitude scale, ohms
    double kappa = 2.0;     // decay rate per wavelength
    double spacing = 0.5;   // inter-element spacing, wavelengths
};

// Import from the plain-text matrix format (see load_coupling).
struct FileCoupling {
    std::string path;
};

using CouplingModelKind = std::variant<IdealCoupling, ExpDecayCoupling, FileCoupling>;

enum class CouplingInvariant {
    Square,          // z must be n x n with n >= 1
    Reciprocity,     // z[n][m] == z[m][n] within 1e-9 relative
    Passivity,       // Hermitian part eigenvalues >= -1e-9
    SelfResistance,  // Re(z[n][n]) > 0
};

const char* to_string(CouplingInvariant inv);

struct InvariantViolation {
    CouplingInvariant kind;
    int row = -1;            // worst offender (eigenvalue index for Passivity)
    int col = -1;
    double magnitude = 0.0;  // size of the worst violation
    std::string detail;
};

struct ValidationReport {
    std::vector<InvariantViolation> violations;

    bool ok() const { return violations.empty(); }
    std::string summary() const;
};

// Carries the report when an operation refuses an invalid matrix.
struct ValidationFailure : NumericalError {
    explicit ValidationFailure(ValidationReport r)
        : NumericalError("coupling matrix failed validation: " + r.summary()), report(std::move(r)) {}
    ValidationReport report;
};

inline constexpr double kReciprocityTol = 1e-9;
inline constexpr double kPassivityTol = -1e-9;

// Never throws; reports every violated invariant with its worst offender.
ValidationReport validate_coupling(const CouplingMatrix& m);

// Generates a matrix from the given model; the result always passes
// validate_coupling or the call fails (generated-not-passive for aggressive
// ExpDecay parameters, named eigenvalue in the message).
CouplingMatrix gen_coupling(const CouplingModelKind& kind, int n);

// Plain-text format: first content line "N", then N lines of N whitespace
// separated complex entries written "re,im" (e.g. "50,-3.2"); '#' starts a
// comment. Parsing is locale-independent. The loaded matrix must validate.
CouplingMatrix load_coupling(const std::string& path);

// Writes the same format with shortest round-trip decimals, so a
// save/load cycle reproduces every entry bit-exactly.
void save_coupling(const CouplingMatrix& m, const std::string& path);

}  // namespace singlerf

#endif  // SINGLERF_COUPLING_HPP
