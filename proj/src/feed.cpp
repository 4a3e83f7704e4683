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

#include "singlerf/feed.hpp"

#include <cmath>
#include <sstream>

namespace singlerf {

namespace {

struct Assembled {
    Eigen::VectorXcd loading;  // diagonal loading entries
    Eigen::VectorXcd v;        // feeding vector
};

Assembled assemble(int n, const FeedConfig& feed) {
    Assembled a;
    a.loading = Eigen::VectorXcd::Zero(n);
    a.v = Eigen::VectorXcd::Zero(n);

    if (const auto* conv = std::get_if<ConventionalFeed>(&feed)) {
        if (static_cast<int>(conv->source_impedances.size()) != n ||
            static_cast<int>(conv->voltages.size()) != n) {
            throw ConfigError("conventional feed arity does not match the coupling matrix");
        }
        for (int k = 0; k < n; ++k) {
            a.loading(k) = conv->source_impedances[k];
            a.v(k) = conv->voltages[k];
        }
        return a;
    }

    if (const auto* par = std::get_if<ParasiticFeed>(&feed)) {
        if (par->active_index < 0 || par->active_index >= n) {
            throw ConfigError("parasitic feed active_index out of range");
        }
        if (static_cast<int>(par->loads.size()) != n - 1) {
            throw ConfigError("parasitic feed needs one load per parasitic port");
        }
        int li = 0;
        for (int k = 0; k < n; ++k) {
            if (k == par->active_index) {
                a.loading(k) = par->source_impedance;
                a.v(k) = par->source_voltage;
            } else {
                a.loading(k) = par->loads[li++];
            }
        }
        return a;
    }

    const auto& lm = std::get<LoadModulatedFeed>(feed);
    if (static_cast<int>(lm.thevenin_voltages.size()) != n ||
        static_cast<int>(lm.output_impedances.size()) != n) {
        throw ConfigError("load-modulated feed arity does not match the coupling matrix");
    }
    for (int k = 0; k < n; ++k) {
        a.loading(k) = lm.output_impedances[k];
        a.v(k) = lm.thevenin_voltages[k];
    }
    return a;
}

// Pivoted LU solve with condition estimate, one refinement step and a
// residual gate.
Eigen::VectorXcd guarded_solve(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& v) {
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
    const double rcond = lu.rcond();
    if (!(rcond > 0.0) || 1.0 / rcond > kConditionLimit) {
        std::ostringstream os;
        os << "effective matrix is numerically singular: condition estimate ";
        if (rcond > 0.0) {
            os << 1.0 / rcond;
        } else {
            os << "inf";
        }
        os << " exceeds threshold " << kConditionLimit;
        throw NumericalError(os.str());
    }

    Eigen::VectorXcd x = lu.solve(v);
    const double vnorm = v.norm();
    if (vnorm == 0.0) return Eigen::VectorXcd::Zero(v.size());

    Eigen::VectorXcd r = v - a * x;
    if (r.norm() / vnorm > 0.25 * kSolveResidualLimit) {
        x += lu.solve(r);
        r = v - a * x;
    }
    const double rel = r.norm() / vnorm;
    if (rel > kSolveResidualLimit) {
        std::ostringstream os;
        os << "solve residual " << rel << " exceeds " << kSolveResidualLimit
           << " (condition estimate " << 1.0 / rcond << ")";
        throw NumericalError(os.str());
    }
    return x;
}

}  // namespace

bool PortCurrents::all_finite() const {
    for (int k = 0; k < n(); ++k) {
        if (!std::isfinite(i(k).real()) || !std::isfinite(i(k).imag())) return false;
    }
    return true;
}

double radiated_power(const CouplingMatrix& z, const PortCurrents& currents) {
    if (currents.n() != z.n()) throw ConfigError("radiated_power: dimension mismatch");
    const cdouble q = currents.i.adjoint() * (z.z * currents.i);
    return q.real();
}

const char* to_string(FeasibilityClass c) {
    switch (c) {
        case FeasibilityClass::PurelyReactive: return "purely-reactive";
        case FeasibilityClass::PassiveLossy: return "passive-lossy";
        case FeasibilityClass::RequiresActive: return "requires-active";
    }
    return "?";
}

PortCurrents solve_currents(const CouplingMatrix& z, const FeedConfig& feed) {
    if (z.z.rows() != z.z.cols() || z.z.rows() < 1) {
        throw ConfigError("solve_currents: coupling matrix must be square, n >= 1");
    }
    const int n = z.n();
    const Assembled a = assemble(n, feed);

    Eigen::MatrixXcd eff = z.z;
    eff.diagonal() += a.loading;

    return PortCurrents{guarded_solve(eff, a.v)};
}

LoadSynthesis synthesize_parasitic_loads(const CouplingMatrix& z, const PortCurrents& desired,
                                         int active_index, cdouble source_impedance) {
    const int n = z.n();
    if (desired.n() != n) throw ConfigError("synthesize_parasitic_loads: dimension mismatch");
    if (active_index < 0 || active_index >= n) {
        throw ConfigError("synthesize_parasitic_loads: active_index out of range");
    }
    if (!desired.all_finite()) throw ConfigError("synthesize_parasitic_loads: target currents must be finite");

    const double max_mag = desired.i.cwiseAbs().maxCoeff();

    // Row k of (Z + diag)*i = v with v_k = 0 gives x_k = -(Z i)_k / i_k.
    const Eigen::VectorXcd zi = z.z * desired.i;

    LoadSynthesis out;
    out.loads.reserve(n - 1);
    for (int k = 0; k < n; ++k) {
        if (k == active_index) continue;
        if (std::abs(desired.i(k)) <= 1e-12 * max_mag) {
            std::ostringstream os;
            os << "desired current at parasitic port " << k
               << " is numerically zero; open-circuit that element instead of synthesizing a load";
            throw SynthesisError(os.str(), k);
        }
        out.loads.push_back(-zi(k) / desired.i(k));
    }
    out.active_feed = zi(active_index) + source_impedance * desired.i(active_index);

    ParasiticFeed feed;
    feed.active_index = active_index;
    feed.source_voltage = out.active_feed;
    feed.source_impedance = source_impedance;
    feed.loads = out.loads;
    const PortCurrents check = solve_currents(z, FeedConfig{feed});
    out.residual = max_mag > 0.0 ? (check.i - desired.i).cwiseAbs().maxCoeff() / max_mag : 0.0;

    out.feasibility = classify_feasibility(out);
    return out;
}

LoadSynthesis synthesize_load_modulation(const CouplingMatrix& z, const PortCurrents& desired,
                                         OutputImpedanceRule rule) {
    const int n = z.n();
    if (desired.n() != n) throw ConfigError("synthesize_load_modulation: dimension mismatch");
    if (!desired.all_finite()) throw ConfigError("synthesize_load_modulation: target currents must be finite");

    LoadSynthesis out;
    out.loads.resize(n);
    for (int k = 0; k < n; ++k) {
        out.loads[k] = rule == OutputImpedanceRule::ConjugateSelf ? std::conj(z.z(k, k))
                                                                  : cdouble{z.z_ref, 0.0};
    }

    // v = (Z + diag(Z_out)) * i, evaluated directly; exact by construction.
    Eigen::VectorXcd v = z.z * desired.i;
    for (int k = 0; k < n; ++k) v(k) += out.loads[k] * desired.i(k);
    out.thevenin_voltages.assign(v.data(), v.data() + n);

    LoadModulatedFeed feed;
    feed.thevenin_voltages = out.thevenin_voltages;
    feed.output_impedances = out.loads;
    const PortCurrents check = solve_currents(z, FeedConfig{feed});
    const double max_mag = desired.i.cwiseAbs().maxCoeff();
    out.residual = max_mag > 0.0 ? (check.i - desired.i).cwiseAbs().maxCoeff() / max_mag : 0.0;

    out.feasibility = classify_feasibility(out);
    return out;
}

std::vector<FeasibilityClass> classify_feasibility(const LoadSynthesis& s, double tol_r) {
    std::vector<FeasibilityClass> out;
    out.reserve(s.loads.size());
    for (const auto& x : s.loads) {
        if (std::abs(x.real()) <= tol_r) {
            out.push_back(FeasibilityClass::PurelyReactive);
        } else if (x.real() > tol_r) {
            out.push_back(FeasibilityClass::PassiveLossy);
        } else {
            out.push_back(FeasibilityClass::RequiresActive);
        }
    }
    return out;
}

}  // namespace singlerf
