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

#include "singlerf/chi_squared.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace singlerf::math {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = std::numeric_limits<double>::min() / kEps;

// P(a, x) by its power series, valid and fast for x < a + 1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 10000; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * kEps) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Q(a, x) by modified Lentz continued fraction, valid for x >= a + 1.
double gamma_q_cf(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// log of the gamma(a, 1) density at x, used as the Newton derivative.
double log_gamma_pdf(double a, double x) {
    return (a - 1.0) * std::log(x) - x - std::lgamma(a);
}

}  // namespace

double regularized_gamma_p(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("regularized_gamma_p: need a > 0, x >= 0");
    if (x == 0.0) return 0.0;
    return (x < a + 1.0) ? gamma_p_series(a, x) : 1.0 - gamma_q_cf(a, x);
}

double regularized_gamma_q(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("regularized_gamma_q: need a > 0, x >= 0");
    if (x == 0.0) return 1.0;
    return (x < a + 1.0) ? 1.0 - gamma_p_series(a, x) : gamma_q_cf(a, x);
}

double chi_squared_cdf(double x, double dof) {
    if (!(dof > 0.0)) throw std::invalid_argument("chi_squared_cdf: dof must be positive");
    if (x <= 0.0) return 0.0;
    return regularized_gamma_p(0.5 * dof, 0.5 * x);
}

double chi_squared_quantile(double p, double dof) {
    if (!(dof > 0.0)) throw std::invalid_argument("chi_squared_quantile: dof must be positive");
    if (!(p >= 0.0 && p < 1.0)) throw std::invalid_argument("chi_squared_quantile: p must be in [0, 1)");
    if (p == 0.0) return 0.0;

    const double a = 0.5 * dof;

    // Wilson-Hilferty start: chi2 ~ dof * (1 - 2/(9 dof) + z sqrt(2/(9 dof)))^3.
    // Inverse-normal via Acklam-style rational fit is overkill here; a crude
    // Newton on the normal CDF would do, but the bracketed gamma Newton below
    // fixes any start error anyway, so a two-branch approximation suffices.
    const double z = [p] {
        // Beasley-Springer-Moro approximation of the standard normal quantile.
        static const double a_[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                    -2.759285104469687e+02, 1.383577518672690e+02,
                                    -3.066479806614716e+01, 2.506628277459239e+00};
        static const double b_[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                    -1.556989798598866e+02, 6.680131188771972e+01,
                                    -1.328068155288572e+01};
        static const double c_[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                    -2.400758277161838e+00, -2.549732539343734e+00,
                                    4.374664141464968e+00,  2.938163982698783e+00};
        static const double d_[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                    2.445134137142996e+00, 3.754408661907416e+00};
        const double pl = 0.02425;
        if (p < pl) {
            const double q = std::sqrt(-2.0 * std::log(p));
            return (((((c_[0] * q + c_[1]) * q + c_[2]) * q + c_[3]) * q + c_[4]) * q + c_[5]) /
                   ((((d_[0] * q + d_[1]) * q + d_[2]) * q + d_[3]) * q + 1.0);
        }
        if (p > 1.0 - pl) {
            const double q = std::sqrt(-2.0 * std::log(1.0 - p));
            return -(((((c_[0] * q + c_[1]) * q + c_[2]) * q + c_[3]) * q + c_[4]) * q + c_[5]) /
                   ((((d_[0] * q + d_[1]) * q + d_[2]) * q + d_[3]) * q + 1.0);
        }
        const double q = p - 0.5;
        const double r = q * q;
        return (((((a_[0] * r + a_[1]) * r + a_[2]) * r + a_[3]) * r + a_[4]) * r + a_[5]) * q /
               (((((b_[0] * r + b_[1]) * r + b_[2]) * r + b_[3]) * r + b_[4]) * r + 1.0);
    }();
    const double wh = 2.0 / (9.0 * dof);
    double x = dof * std::pow(1.0 - wh + z * std::sqrt(wh), 3);
    if (!(x > 0.0)) x = 0.5 * dof;

    // Solve on the smaller tail: for p >= 0.5, 1 - p is exact (Sterbenz), so
    // iterating on Q(a, x/2) = 1 - p avoids cancellation near p -> 1.
    const bool upper = p >= 0.5;
    const double target = upper ? 1.0 - p : p;

    // Bracket the root, then Newton with bisection fallback.
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 200; ++it) {
        // f increases in x in both formulations.
        const double f = upper ? target - regularized_gamma_q(a, 0.5 * x)
                               : regularized_gamma_p(a, 0.5 * x) - target;
        if (f > 0.0) {
            hi = std::min(hi, x);
        } else {
            lo = std::max(lo, x);
        }
        const double pdf = 0.5 * std::exp(log_gamma_pdf(a, 0.5 * x));
        double next = (pdf > 0.0) ? x - f / pdf : x;
        if (!(next > lo && next < hi)) {
            next = std::isinf(hi) ? 2.0 * x : 0.5 * (lo + hi);
        }
        if (std::fabs(next - x) <= 1e-14 * x) {
            x = next;
            break;
        }
        x = next;
    }
    return x;
}

}  // namespace singlerf::math
