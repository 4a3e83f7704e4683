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

#include "singlerf/coupling.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace singlerf {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;

// Writes a double with the shortest representation that round-trips.
void append_shortest(std::string& out, double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, res.ptr);
}

// Gershgorin lower bound on the eigenvalues of a Hermitian matrix. When the
// bound already clears the passivity tolerance the exact (O(n^3)) solve is
// skipped, which keeps validation O(n^2) for well-behaved matrices.
double gershgorin_lower_bound(const Eigen::MatrixXcd& h) {
    const int n = static_cast<int>(h.rows());
    double lb = std::numeric_limits<double>::infinity();
    for (int r = 0; r < n; ++r) {
        double radius = 0.0;
        for (int c = 0; c < n; ++c) {
            if (c != r) radius += std::abs(h(r, c));
        }
        lb = std::min(lb, h(r, r).real() - radius);
    }
    return lb;
}

}  // namespace

const char* to_string(CouplingInvariant inv) {
    switch (inv) {
        case CouplingInvariant::Square: return "square";
        case CouplingInvariant::Reciprocity: return "reciprocity";
        case CouplingInvariant::Passivity: return "passivity";
        case CouplingInvariant::SelfResistance: return "self-resistance";
    }
    return "?";
}

std::string ValidationReport::summary() const {
    if (violations.empty()) return "ok";
    std::ostringstream os;
    for (size_t i = 0; i < violations.size(); ++i) {
        const auto& v = violations[i];
        if (i) os << "; ";
        os << to_string(v.kind) << " at (" << v.row << "," << v.col << "): " << v.detail;
    }
    return os.str();
}

ValidationReport validate_coupling(const CouplingMatrix& m) {
    ValidationReport report;
    const auto& z = m.z;

    if (z.rows() != z.cols() || z.rows() < 1) {
        InvariantViolation v;
        v.kind = CouplingInvariant::Square;
        v.row = static_cast<int>(z.rows());
        v.col = static_cast<int>(z.cols());
        v.magnitude = std::abs(double(z.rows() - z.cols()));
        v.detail = "matrix is " + std::to_string(z.rows()) + "x" + std::to_string(z.cols());
        report.violations.push_back(std::move(v));
        return report;  // remaining checks need a square matrix
    }
    const int n = m.n();

    // Reciprocity: z[r][c] == z[c][r] within relative tolerance.
    {
        double worst = 0.0;
        int wr = -1, wc = -1;
        for (int r = 0; r < n; ++r) {
            for (int c = r + 1; c < n; ++c) {
                const double denom = std::max(std::abs(z(r, c)), std::abs(z(c, r)));
                if (denom == 0.0) continue;
                const double rel = std::abs(z(r, c) - z(c, r)) / denom;
                if (rel > worst) {
                    worst = rel;
                    wr = r;
                    wc = c;
                }
            }
        }
        if (worst > kReciprocityTol) {
            InvariantViolation v;
            v.kind = CouplingInvariant::Reciprocity;
            v.row = wr;
            v.col = wc;
            v.magnitude = worst;
            std::ostringstream os;
            os << "relative asymmetry " << worst;
            v.detail = os.str();
            report.violations.push_back(std::move(v));
        }
    }

    // Self resistance: every diagonal real part strictly positive.
    {
        double worst = std::numeric_limits<double>::infinity();
        int wi = -1;
        for (int r = 0; r < n; ++r) {
            if (z(r, r).real() < worst) {
                worst = z(r, r).real();
                wi = r;
            }
        }
        if (!(worst > 0.0)) {
            InvariantViolation v;
            v.kind = CouplingInvariant::SelfResistance;
            v.row = wi;
            v.col = wi;
            v.magnitude = worst;
            std::ostringstream os;
            os << "Re(z[" << wi << "][" << wi << "]) = " << worst;
            v.detail = os.str();
            report.violations.push_back(std::move(v));
        }
    }

    // Passivity: Hermitian part positive semidefinite (within tolerance).
    {
        const Eigen::MatrixXcd h = 0.5 * (z + z.adjoint());
        if (gershgorin_lower_bound(h) < kPassivityTol) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
            int idx = 0;
            const double min_eig = es.eigenvalues().minCoeff(&idx);
            if (min_eig < kPassivityTol) {
                InvariantViolation v;
                v.kind = CouplingInvariant::Passivity;
                v.row = idx;
                v.col = idx;
                v.magnitude = min_eig;
                std::ostringstream os;
                os << "Hermitian-part eigenvalue " << min_eig;
                v.detail = os.str();
                report.violations.push_back(std::move(v));
            }
        }
    }

    return report;
}

CouplingMatrix gen_coupling(const CouplingModelKind& kind, int n) {
    if (n < 1) throw ConfigError("gen_coupling: element count must be >= 1");

    if (const auto* file = std::get_if<FileCoupling>(&kind)) {
        return load_coupling(file->path);
    }

    CouplingMatrix m;
    m.z = Eigen::MatrixXcd::Zero(n, n);

    if (const auto* ideal = std::get_if<IdealCoupling>(&kind)) {
        if (!(ideal->z0.real() > 0.0)) throw ConfigError("gen_coupling: Ideal z0 needs Re(z0) > 0");
        m.z.diagonal().setConstant(ideal->z0);
        return m;
    }

    const auto& ed = std::get<ExpDecayCoupling>(kind);
    if (!(ed.z0.real() > 0.0)) throw ConfigError("gen_coupling: ExpDecay z0 needs Re(z0) > 0");
    if (ed.kappa < 0.0) throw ConfigError("gen_coupling: ExpDecay kappa must be >= 0");
    if (!(ed.spacing > 0.0)) throw ConfigError("gen_coupling: ExpDecay spacing must be > 0");

    // Build one triangle and mirror it, so the result is exactly symmetric.
    for (int r = 0; r < n; ++r) {
        m.z(r, r) = ed.z0;
        for (int c = r + 1; c < n; ++c) {
            const double d = (c - r) * ed.spacing;
            const cdouble zc = ed.mag0 * std::exp(-ed.kappa * d) *
                               std::exp(cdouble(0.0, -kTwoPi * d));
            m.z(r, c) = zc;
            m.z(c, r) = zc;
        }
    }

    auto report = validate_coupling(m);
    if (!report.ok()) throw ValidationFailure(std::move(report));
    return m;
}

namespace {

// Parses "re,im" at token_start (1-based column col) of the given line.
cdouble parse_entry(const std::string& token, int line, int col) {
    const auto comma = token.find(',');
    if (comma == std::string::npos || token.find(',', comma + 1) != std::string::npos) {
        throw ParseError("matrix entry must be written re,im", line, col);
    }
    double re = 0.0, im = 0.0;
    const char* b = token.data();
    auto r1 = std::from_chars(b, b + comma, re);
    if (r1.ec != std::errc{} || r1.ptr != b + comma) {
        throw ParseError("bad real part '" + token.substr(0, comma) + "'", line, col);
    }
    const char* ib = b + comma + 1;
    const char* ie = b + token.size();
    auto r2 = std::from_chars(ib, ie, im);
    if (r2.ec != std::errc{} || r2.ptr != ie) {
        throw ParseError("bad imaginary part '" + token.substr(comma + 1) + "'",
                         line, col + static_cast<int>(comma) + 1);
    }
    return {re, im};
}

struct Token {
    std::string text;
    int col;  // 1-based
};

std::vector<Token> tokenize(const std::string& raw) {
    std::vector<Token> out;
    size_t i = 0;
    while (i < raw.size()) {
        if (raw[i] == '#') break;
        if (std::isspace(static_cast<unsigned char>(raw[i]))) {
            ++i;
            continue;
        }
        const size_t start = i;
        while (i < raw.size() && !std::isspace(static_cast<unsigned char>(raw[i])) && raw[i] != '#') ++i;
        out.push_back({raw.substr(start, i - start), static_cast<int>(start) + 1});
    }
    return out;
}

}  // namespace

CouplingMatrix load_coupling(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open coupling file: " + path);

    std::string raw;
    int line_no = 0;
    int n = -1;
    int row = 0;
    CouplingMatrix m;

    while (std::getline(in, raw)) {
        ++line_no;
        const auto tokens = tokenize(raw);
        if (tokens.empty()) continue;

        if (n < 0) {
            if (tokens.size() != 1) {
                throw ParseError("expected a single element count", line_no, tokens[1].col);
            }
            const auto& t = tokens[0];
            auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), n);
            if (res.ec != std::errc{} || res.ptr != t.text.data() + t.text.size() || n < 1) {
                throw ParseError("bad element count '" + t.text + "'", line_no, t.col);
            }
            m.z = Eigen::MatrixXcd::Zero(n, n);
            continue;
        }

        if (row >= n) {
            throw ParseError("unexpected content after " + std::to_string(n) + " matrix rows",
                             line_no, tokens[0].col);
        }
        if (static_cast<int>(tokens.size()) != n) {
            const int col = tokens.size() > static_cast<size_t>(n) ? tokens[n].col : static_cast<int>(raw.size()) + 1;
            throw ParseError("expected " + std::to_string(n) + " entries, got " +
                                 std::to_string(tokens.size()),
                             line_no, col);
        }
        for (int c = 0; c < n; ++c) {
            m.z(row, c) = parse_entry(tokens[c].text, line_no, tokens[c].col);
        }
        ++row;
    }

    if (n < 0) throw ParseError("missing element count line", line_no + 1, 1);
    if (row != n) {
        throw ParseError("expected " + std::to_string(n) + " matrix rows, got " + std::to_string(row),
                         line_no + 1, 1);
    }

    auto report = validate_coupling(m);
    if (!report.ok()) throw ValidationFailure(std::move(report));
    return m;
}

void save_coupling(const CouplingMatrix& m, const std::string& path) {
    std::string out;
    out += "# coupling matrix, entries re,im in ohms\n";
    out += std::to_string(m.n());
    out += '\n';
    for (int r = 0; r < m.n(); ++r) {
        for (int c = 0; c < m.n(); ++c) {
            if (c) out += ' ';
            append_shortest(out, m.z(r, c).real());
            out += ',';
            append_shortest(out, m.z(r, c).imag());
        }
        out += '\n';
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write coupling file: " + path);
    f << out;
    if (!f) throw IoError("write failed: " + path);
}

}  // namespace singlerf
