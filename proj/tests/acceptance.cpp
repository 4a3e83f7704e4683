// Acceptance suite: runs every release gate at full scale and prints one
// pass/fail line per criterion. Exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "singlerf/hardware.hpp"
#include "singlerf/rng.hpp"
#include "singlerf/scenario.hpp"
#include "singlerf/signals.hpp"
#include "singlerf/stats.hpp"

using namespace singlerf;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

class Criterion {
  public:
    Criterion(int id, std::string name) : id_(id), name_(std::move(name)) {
        start_ = std::chrono::steady_clock::now();
    }

    void check(bool ok, const std::string& detail) {
        if (!ok && first_failure_.empty()) first_failure_ = detail;
        ok_ = ok_ && ok;
        if (!notes_.empty()) notes_ += "; ";
        notes_ += detail;
    }

    bool ok() const { return ok_; }

    ~Criterion() {
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        if (ok_) {
            std::printf("[PASS] criterion %2d: %s (%.1fs) -- %s\n", id_, name_.c_str(), secs,
                        notes_.c_str());
        } else {
            ++g_failures;
            std::printf("[FAIL] criterion %2d: %s (%.1fs) -- %s\n", id_, name_.c_str(), secs,
                        first_failure_.c_str());
        }
        std::fflush(stdout);
    }

  private:
    int id_;
    std::string name_;
    bool ok_ = true;
    std::string notes_;
    std::string first_failure_;
    std::chrono::steady_clock::time_point start_;
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void criterion_1() {
    Criterion c(1, "crest factor point value at n=100, eps=1e-3");
    const double db = crest_factor_analytic(100, 1e-3);
    c.check(std::fabs(db - 1.17) <= 0.10, "got " + fmt(db) + " dB, window 1.17 +/- 0.10 dB");
}

void criterion_2() {
    Criterion c(2, "crest factor curve shape and Monte-Carlo agreement");

    for (double eps : {1e-2, 1e-3, 1e-4}) {
        double prev = crest_factor_analytic(1, eps);
        bool decreasing = true;
        for (int n = 2; n <= 1000; ++n) {
            const double cur = crest_factor_analytic(n, eps);
            if (!(cur < prev)) {
                decreasing = false;
                break;
            }
            prev = cur;
        }
        c.check(decreasing, "strictly decreasing over n=1..1000 at eps=" + fmt(eps));
    }

    bool ordered = true;
    for (int n = 1; n <= 1000; ++n) {
        const double c2 = crest_factor_analytic(n, 1e-2);
        const double c3 = crest_factor_analytic(n, 1e-3);
        const double c4 = crest_factor_analytic(n, 1e-4);
        if (!(c3 > c2 && c4 > c3)) {
            ordered = false;
            break;
        }
    }
    c.check(ordered, "strictly increasing as eps decreases at every n");

    const std::int64_t samples = 10'000'000;
    const std::vector<double> eps_list{1e-2, 1e-3};
    double worst = 0.0;
    for (int n : {1, 10, 100, 1000}) {
        const auto mc = crest_factor_mc_multi(n, eps_list, samples, 42, 0);
        for (size_t k = 0; k < eps_list.size(); ++k) {
            const double gap = std::fabs(mc[k] - crest_factor_analytic(n, eps_list[k]));
            worst = std::max(worst, gap);
        }
    }
    c.check(worst <= 0.05, "max |mc - analytic| = " + fmt(worst) + " dB at 1e7 samples (limit 0.05)");
}

void criterion_3() {
    Criterion c(3, "crest factor asymptote toward 0 dB");
    const double db = crest_factor_analytic(100000, 1e-3);
    c.check(db < 0.1 && db > 0.0, "crest(1e5, 1e-3) = " + fmt(db) + " dB (limit 0.1)");
}

void criterion_4() {
    Criterion c(4, "vswr concentration trend under both mismatch models");
    const std::int64_t samples = 1'000'000;
    for (auto model : {MismatchModel::PowerConserving, MismatchModel::AmplitudeDifference}) {
        double prev_median = std::numeric_limits<double>::infinity();
        double prev_p95 = std::numeric_limits<double>::infinity();
        double median_1024 = 0.0;
        bool monotone = true;
        for (int n : {16, 64, 256, 1024}) {
            const auto hist = vswr_distribution(n, 1e-3, model, samples, 42, 0);
            const double median = std::stod(hist.meta.at("median"));
            const double p95 = std::stod(hist.meta.at("p95"));
            if (median > prev_median || p95 > prev_p95) monotone = false;
            prev_median = median;
            prev_p95 = p95;
            if (n == 1024) median_1024 = median;
        }
        c.check(monotone, std::string(to_string(model)) + ": median and p95 non-increasing, median(1024)=" +
                              fmt(median_1024));
        if (model == MismatchModel::PowerConserving) {
            c.check(median_1024 < 1.5,
                    "power-conserving median(1024) = " + fmt(median_1024) + " (limit 1.5)");
        }
    }
}

void criterion_5() {
    Criterion c(5, "distortion trend, collapse, and per-draw projection optimality");
    const std::vector<int> ns{8, 16, 32, 64, 128, 256, 512, 1024};
    const std::int64_t samples = 1'000'000;
    const auto [mmse, equal] = distortion_curves_paired(ns, 0.8, samples, 42, 0);

    for (const auto* curve : {&mmse, &equal}) {
        bool monotone = true;
        for (size_t k = 1; k < curve->y.size(); ++k) {
            if (curve->y[k] > curve->y[k - 1]) monotone = false;
        }
        c.check(monotone, curve->meta.at("policy") + " D(n) non-increasing");
        const double d16 = curve->y[1];
        const double d1024 = curve->y[7];
        c.check(d1024 < d16 / 10.0, curve->meta.at("policy") + " D(1024)=" + fmt(d1024) +
                                        " < D(16)/10=" + fmt(d16 / 10.0));
    }

    // Per-draw projection optimality through the public clip operation.
    std::int64_t clipped = 0;
    bool optimal = true;
    for (int n : {2, 8, 64}) {
        GaussianCurrentStream stream(GaussianSpec{n, 1.0}, 42, static_cast<std::uint64_t>(n));
        const double p_inc = 1.0 / 0.8;
        for (int s = 0; s < 30000; ++s) {
            const auto draw = stream.next();
            if (draw.sum_power() <= p_inc) continue;
            ++clipped;
            const auto m = clip_currents(draw, p_inc, ClipPolicy::Mmse);
            const auto e = clip_currents(draw, p_inc, ClipPolicy::Equal);
            if (m.sample_distortion > e.sample_distortion + 1e-12 * draw.sum_power()) {
                optimal = false;
            }
        }
    }
    c.check(clipped > 1000, "clipped draws observed: " + std::to_string(clipped));
    c.check(optimal, "D_mmse <= D_equal on every clipped draw");
}

void criterion_6() {
    Criterion c(6, "current solver against closed forms and cofactor inversion");

    rng::Xoshiro256pp g(606);
    double worst_diag = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + static_cast<int>(g.next_u64() % 16);
        const cdouble z0{20.0 + 80.0 * g.next_unit(), 30.0 * (2.0 * g.next_unit() - 1.0)};
        const auto z = gen_coupling(IdealCoupling{z0}, n);
        ConventionalFeed feed;
        for (int k = 0; k < n; ++k) {
            feed.source_impedances.push_back({60.0 * g.next_unit(), 40.0 * (g.next_unit() - 0.5)});
            feed.voltages.push_back(g.next_circular_gaussian(1.0));
        }
        const auto sol = solve_currents(z, FeedConfig{feed});
        for (int k = 0; k < n; ++k) {
            const cdouble expected = feed.voltages[static_cast<size_t>(k)] /
                                     (z0 + feed.source_impedances[static_cast<size_t>(k)]);
            worst_diag = std::max(worst_diag, std::abs(sol.i(k) - expected) / std::abs(expected));
        }
    }
    c.check(worst_diag <= 1e-12, "diagonal closed form, worst rel err " + fmt(worst_diag));

    CouplingMatrix z2;
    z2.z.resize(2, 2);
    z2.z << cdouble{50, 0}, cdouble{10, 0}, cdouble{10, 0}, cdouble{50, 0};
    ConventionalFeed f2;
    f2.source_impedances = {cdouble{0, 0}, cdouble{0, 0}};
    f2.voltages = {cdouble{1, 0}, cdouble{0, 0}};
    const auto i2 = solve_currents(z2, FeedConfig{f2});
    const double err2 = std::max(std::abs(i2.i(0) - cdouble{50.0 / 2400.0, 0.0}),
                                 std::abs(i2.i(1) - cdouble{-10.0 / 2400.0, 0.0}));
    c.check(err2 <= 1e-10, "2x2 hand inversion err " + fmt(err2));

    double worst_cof = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 1 + static_cast<int>(g.next_u64() % 4);
        Eigen::MatrixXd b(n, n), x(n, n);
        for (int r = 0; r < n; ++r) {
            for (int cc = 0; cc < n; ++cc) b(r, cc) = 2.0 * g.next_unit() - 1.0;
        }
        for (int r = 0; r < n; ++r) {
            for (int cc = r; cc < n; ++cc) {
                x(r, cc) = 20.0 * (2.0 * g.next_unit() - 1.0);
                x(cc, r) = x(r, cc);
            }
        }
        CouplingMatrix z;
        z.z = (b * b.transpose() + 5.0 * n * Eigen::MatrixXd::Identity(n, n)).cast<cdouble>() +
              cdouble{0.0, 1.0} * x.cast<cdouble>();
        ConventionalFeed feed;
        Eigen::MatrixXcd eff = z.z;
        Eigen::VectorXcd v(n);
        for (int k = 0; k < n; ++k) {
            feed.source_impedances.push_back({50.0 * g.next_unit(), 20.0 * (g.next_unit() - 0.5)});
            feed.voltages.push_back(g.next_circular_gaussian(1.0));
            eff(k, k) += feed.source_impedances[static_cast<size_t>(k)];
            v(k) = feed.voltages[static_cast<size_t>(k)];
        }
        const Eigen::VectorXcd expected = oracles::inverse_cofactor(eff) * v;
        const auto sol = solve_currents(z, FeedConfig{feed});
        const double scale = expected.cwiseAbs().maxCoeff();
        for (int k = 0; k < n; ++k) {
            worst_cof = std::max(worst_cof, std::abs(sol.i(k) - expected(k)) / scale);
        }
    }
    c.check(worst_cof <= 1e-9, "cofactor brute force n<=4 over 100 matrices, worst rel err " + fmt(worst_cof));
}

void criterion_7() {
    Criterion c(7, "synthesis round trips over random arrays and targets");
    rng::Xoshiro256pp g(707);

    auto random_coupling = [&](int n) {
        Eigen::MatrixXd b(n, n), x(n, n);
        for (int r = 0; r < n; ++r) {
            for (int cc = 0; cc < n; ++cc) b(r, cc) = 2.0 * g.next_unit() - 1.0;
        }
        for (int r = 0; r < n; ++r) {
            for (int cc = r; cc < n; ++cc) {
                x(r, cc) = 20.0 * (2.0 * g.next_unit() - 1.0);
                x(cc, r) = x(r, cc);
            }
        }
        CouplingMatrix z;
        z.z = (b * b.transpose() + 5.0 * n * Eigen::MatrixXd::Identity(n, n)).cast<cdouble>() +
              cdouble{0.0, 1.0} * x.cast<cdouble>();
        return z;
    };

    double worst_par = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 2 + static_cast<int>(g.next_u64() % 7);
        const auto z = random_coupling(n);
        PortCurrents target;
        target.i.resize(n);
        for (int k = 0; k < n; ++k) target.i(k) = g.next_circular_gaussian(1e-4);
        const int active = static_cast<int>(g.next_u64() % static_cast<std::uint64_t>(n));
        const auto syn = synthesize_parasitic_loads(z, target, active, {50.0, 5.0});
        worst_par = std::max(worst_par, syn.residual);
    }
    c.check(worst_par <= 1e-9, "parasitic worst residual " + fmt(worst_par) + " over 1000 pairs");

    double worst_lm = 0.0;
    for (auto rule : {OutputImpedanceRule::ConjugateSelf, OutputImpedanceRule::SystemZ0}) {
        for (int trial = 0; trial < 1000; ++trial) {
            const int n = 2 + static_cast<int>(g.next_u64() % 7);
            const auto z = random_coupling(n);
            PortCurrents target;
            target.i.resize(n);
            for (int k = 0; k < n; ++k) target.i(k) = g.next_circular_gaussian(1e-4);
            const auto syn = synthesize_load_modulation(z, target, rule);
            worst_lm = std::max(worst_lm, syn.residual);
        }
    }
    c.check(worst_lm <= 1e-9,
            "load-modulated worst residual " + fmt(worst_lm) + " over 1000 pairs per convention");
}

void criterion_8() {
    Criterion c(8, "clip-rate calibration at the sized incident power");
    const std::int64_t samples = 10'000'000;
    struct Point {
        int n;
        double eps;
    };
    for (const auto& pt : {Point{10, 1e-2}, Point{100, 1e-3}}) {
        const double p_inc = incident_power(pt.n, pt.eps, 1.0);
        const double frac = clip_fraction_mc(pt.n, p_inc, samples, 42, 0);
        const double sigma = std::sqrt(pt.eps * (1.0 - pt.eps) / static_cast<double>(samples));
        c.check(std::fabs(frac - pt.eps) <= 3.0 * sigma,
                "n=" + std::to_string(pt.n) + ": rate " + fmt(frac) + " vs eps " + fmt(pt.eps) +
                    " (3 sigma = " + fmt(3.0 * sigma) + ")");
    }
}

void criterion_9() {
    Criterion c(9, "hardware models: quantizer law, saw loss, circulator, pa budgets");

    rng::Xoshiro256pp g(909);
    std::vector<cdouble> loads;
    for (int k = 0; k < 20000; ++k) {
        loads.emplace_back(-500.0 + 1000.0 * g.next_unit(), -500.0 + 1000.0 * g.next_unit());
    }
    double prev = 0.0;
    bool law_ok = true;
    for (int bits = 8; bits <= 15; ++bits) {
        const auto rep = quantize_loads(loads, LoadGrid{bits, -500.0, 500.0});
        double acc = 0.0;
        for (double e : rep.per_symbol_error) acc += e * e;
        const double rms = std::sqrt(acc / static_cast<double>(rep.per_symbol_error.size()));
        if (bits > 8) {
            const double ratio_db = 20.0 * std::log10(prev / rms);
            if (ratio_db < 5.02 || ratio_db > 7.02) law_ok = false;
        }
        prev = rms;
    }
    c.check(law_ok, "-6.02 dB/bit within +/-1 dB over bits 8..15");

    const double saw = saw_filter_loss(1.0, 2.0);
    c.check(std::fabs(saw - 0.63095734448019325) <= 1e-12, "saw 2 dB: 1 W -> " + fmt(saw) + " W");

    bool energy_ok = true;
    for (int trial = 0; trial < 1000; ++trial) {
        const double p_inc = 10.0 * g.next_unit();
        const double p_rad = p_inc * g.next_unit();
        const double dump = circulator_dump(p_inc, p_rad);
        if (std::fabs(dump + p_rad - p_inc) > 1e-12 * p_inc) energy_ok = false;
    }
    c.check(energy_ok, "circulator energy balance exact to 1e-12");

    const auto a = pa_power_budget(PaClass::ClassA, 1.0, 0.0);
    const auto f = pa_power_budget(PaClass::ClassF, 1.0, 0.0);
    c.check(std::fabs(a.dc_input - 4.0) <= 1e-12 && std::fabs(f.dc_input - 1.25) <= 1e-12 &&
                std::fabs(a.dc_input / f.dc_input - 3.2) <= 1e-12,
            "class A 4 W vs class F 1.25 W per W radiated (ratio 3.2)");
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) return "<missing " + p.string() + ">";
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void criterion_10() {
    Criterion c(10, "fig4 determinism: byte-identical CSVs across runs and workers");
    const fs::path base = fs::temp_directory_path() / "singlerf_acceptance_fig4";
    fs::remove_all(base);
    const fs::path dirs[3] = {base / "w1", base / "w2", base / "w1_again"};
    const int workers[3] = {1, 2, 1};

    bool ran_ok = true;
    for (int r = 0; r < 3; ++r) {
        std::ostringstream cmd;
        cmd << SINGLERF_CLI_PATH << " fig4 --seed 42 --samples 50000 --workers " << workers[r]
            << " --out " << dirs[r].string() << " > /dev/null 2>&1";
        if (std::system(cmd.str().c_str()) != 0) ran_ok = false;
    }
    c.check(ran_ok, "three fig4 runs exited cleanly");
    if (!ran_ok) return;

    std::vector<std::string> csvs;
    for (const auto& e : fs::directory_iterator(dirs[0])) {
        if (e.path().extension() == ".csv") csvs.push_back(e.path().filename().string());
    }
    std::sort(csvs.begin(), csvs.end());
    c.check(csvs.size() >= 10, std::to_string(csvs.size()) + " csv files per run");

    bool identical = true;
    std::string offender;
    for (const auto& name : csvs) {
        const std::string body = slurp(dirs[0] / name);
        if (body != slurp(dirs[1] / name) || body != slurp(dirs[2] / name)) {
            identical = false;
            offender = name;
            break;
        }
    }
    c.check(identical, identical ? "all csv bodies byte-identical across workers 1/2 and reruns"
                                 : "mismatch in " + offender);
    fs::remove_all(base);
}

}  // namespace

int main() {
    std::printf("singlerf acceptance suite\n");
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    if (g_failures == 0) {
        std::printf("all criteria passed\n");
    } else {
        std::printf("%d criteria FAILED\n", g_failures);
    }
    return g_failures;
}
