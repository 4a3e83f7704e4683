#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "singlerf/coupling.hpp"

using namespace singlerf;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const char* name) {
    return fs::temp_directory_path() / name;
}

CouplingMatrix from_rows(std::initializer_list<std::initializer_list<cdouble>> rows) {
    CouplingMatrix m;
    const int n = static_cast<int>(rows.size());
    const int cols = static_cast<int>(rows.begin()->size());
    m.z.resize(n, cols);
    int r = 0;
    for (const auto& row : rows) {
        int c = 0;
        for (const auto& v : row) m.z(r, c++) = v;
        ++r;
    }
    return m;
}

}  // namespace

TEST_SUITE("coupling") {

TEST_CASE("scaled identity validates clean") {
    const auto m = gen_coupling(IdealCoupling{{50.0, 0.0}}, 4);
    CHECK(validate_coupling(m).ok());
    CHECK(m.z(0, 0) == cdouble{50.0, 0.0});
    CHECK(m.z(0, 1) == cdouble{0.0, 0.0});
}

TEST_CASE("asymmetry is a reciprocity violation at the right entry") {
    const auto m = from_rows({{{50, 0}, {1, 0}}, {{2, 0}, {50, 0}}});
    const auto report = validate_coupling(m);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].kind == CouplingInvariant::Reciprocity);
    CHECK(report.violations[0].row == 0);
    CHECK(report.violations[0].col == 1);
    CHECK(report.violations[0].magnitude == doctest::Approx(0.5));
}

TEST_CASE("symmetric indefinite matrix fails passivity") {
    // eigenvalues of [[1,2],[2,1]] are 3 and -1
    const auto m = from_rows({{{1, 0}, {2, 0}}, {{2, 0}, {1, 0}}});
    const auto report = validate_coupling(m);
    REQUIRE(!report.ok());
    bool found = false;
    for (const auto& v : report.violations) {
        if (v.kind == CouplingInvariant::Passivity) {
            found = true;
            CHECK(v.magnitude == doctest::Approx(-1.0).epsilon(1e-9));
        }
    }
    CHECK(found);
}

TEST_CASE("non-positive self resistance is flagged") {
    const auto m = from_rows({{{-5, 3}, {0, 0}}, {{0, 0}, {50, 0}}});
    const auto report = validate_coupling(m);
    bool found = false;
    for (const auto& v : report.violations) {
        if (v.kind == CouplingInvariant::SelfResistance) {
            found = true;
            CHECK(v.row == 0);
            CHECK(v.magnitude == doctest::Approx(-5.0));
        }
    }
    CHECK(found);
}

TEST_CASE("non-square matrix reports only the shape violation") {
    CouplingMatrix m;
    m.z.resize(2, 3);
    m.z.setZero();
    const auto report = validate_coupling(m);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].kind == CouplingInvariant::Square);
}

TEST_CASE("ideal generator honors n and z0") {
    const auto m = gen_coupling(IdealCoupling{{73.0, 5.0}}, 3);
    CHECK(m.n() == 3);
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
            CHECK(m.z(r, c) == (r == c ? cdouble{73.0, 5.0} : cdouble{0.0, 0.0}));
        }
    }
}

TEST_CASE("huge decay rate is effectively ideal") {
    ExpDecayCoupling k;
    k.kappa = 1e6;
    const auto m = gen_coupling(k, 4);
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            if (r != c) CHECK(std::abs(m.z(r, c)) < 1e-12);
        }
    }
}

TEST_CASE("default expdecay parameters validate for n across the supported range") {
    std::vector<int> sizes;
    for (int n = 1; n <= 64; ++n) sizes.push_back(n);
    for (int n : {100, 128, 250, 257, 512, 777, 1000, 1024}) sizes.push_back(n);
    for (int n : sizes) {
        const auto m = gen_coupling(ExpDecayCoupling{}, n);
        CAPTURE(n);
        CHECK(validate_coupling(m).ok());
        // exact symmetry by construction
        for (int r = 0; r < std::min(n, 16); ++r) {
            for (int c = r + 1; c < std::min(n, 16); ++c) {
                CHECK(m.z(r, c) == m.z(c, r));
            }
        }
    }
}

TEST_CASE("aggressive expdecay parameters are rejected as not passive") {
    ExpDecayCoupling k;
    k.mag0 = 500.0;  // off-diagonal dominates the 50-ohm diagonal
    k.kappa = 0.0;
    CHECK_THROWS_AS(gen_coupling(k, 8), ValidationFailure);
    try {
        gen_coupling(k, 8);
    } catch (const ValidationFailure& e) {
        REQUIRE(!e.report.violations.empty());
        CHECK(e.report.violations[0].kind == CouplingInvariant::Passivity);
        CHECK(e.report.violations[0].magnitude < 0.0);  // the offending eigenvalue
    }
}

TEST_CASE("known file round trips to the scaled identity") {
    const auto path = temp_file("singlerf_ideal2.txt");
    {
        std::ofstream f(path);
        f << "# comment line\n2\n50,0 0,0\n0,0 50,0\n";
    }
    const auto m = load_coupling(path.string());
    CHECK(m.n() == 2);
    CHECK(m.z(0, 0) == cdouble{50.0, 0.0});
    CHECK(m.z(1, 0) == cdouble{0.0, 0.0});
    fs::remove(path);
}

TEST_CASE("wrong column count is a parse error with location") {
    const auto path = temp_file("singlerf_badcols.txt");
    {
        std::ofstream f(path);
        f << "2\n50,0 0,0 1,0\n0,0 50,0\n";
    }
    CHECK_THROWS_AS(load_coupling(path.string()), ParseError);
    try {
        load_coupling(path.string());
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
    }
    fs::remove(path);
}

TEST_CASE("malformed entries report line and column") {
    const auto path = temp_file("singlerf_badentry.txt");
    {
        std::ofstream f(path);
        f << "1\nfifty,0\n";
    }
    try {
        load_coupling(path.string());
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
        CHECK(e.column == 1);
    }
    fs::remove(path);
}

TEST_CASE("a loaded matrix must validate") {
    const auto path = temp_file("singlerf_nonrecip.txt");
    {
        std::ofstream f(path);
        f << "2\n50,0 1,0\n2,0 50,0\n";
    }
    CHECK_THROWS_AS(load_coupling(path.string()), ValidationFailure);
    fs::remove(path);
}

TEST_CASE("save then load preserves every entry bit-exactly") {
    ExpDecayCoupling k;
    k.z0 = {47.3, 9.12};
    k.mag0 = 13.7;
    k.kappa = 1.618;
    k.spacing = 0.37;
    const auto m = gen_coupling(k, 9);
    const auto path = temp_file("singlerf_roundtrip.txt");
    save_coupling(m, path.string());
    const auto back = load_coupling(path.string());
    REQUIRE(back.n() == m.n());
    for (int r = 0; r < m.n(); ++r) {
        for (int c = 0; c < m.n(); ++c) {
            CHECK(back.z(r, c).real() == m.z(r, c).real());
            CHECK(back.z(r, c).imag() == m.z(r, c).imag());
        }
    }
    fs::remove(path);
}

TEST_CASE("missing file is an io error") {
    CHECK_THROWS_AS(load_coupling("/nonexistent/definitely_missing.txt"), IoError);
}

TEST_CASE("generator rejects bad arguments") {
    CHECK_THROWS_AS(gen_coupling(IdealCoupling{{50.0, 0.0}}, 0), ConfigError);
    CHECK_THROWS_AS(gen_coupling(IdealCoupling{{-1.0, 0.0}}, 2), ConfigError);
    ExpDecayCoupling bad;
    bad.spacing = 0.0;
    CHECK_THROWS_AS(gen_coupling(bad, 2), ConfigError);
}

}  // TEST_SUITE
