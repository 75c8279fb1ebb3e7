#include <doctest.h>

#include <cstring>
#include <sstream>

#include "hjb/oracle.hpp"
#include "hjb/problem.hpp"

using namespace hjb;

namespace {

CoefficientClosures ou_closures() {
    CoefficientClosures c;
    c.a = [](Point, int) { return SymMat{1.0, 0.0, 1.0}; };
    c.b = [](Point x, int) { return Vec2{-x[0], -x[1]}; };
    c.c0 = [](Point, int) { return 0.0; };
    c.l = [](Point, int) { return 0.0; };
    return c;
}

}  // namespace

TEST_CASE("sampling constant and linear coefficients") {
    const Grid g = build_grid(1, 2.0, 5);
    const Coefficients c = sample_coefficients(ou_closures(), g, ControlSet{1, ""});
    CHECK(c.n_nodes == 5);
    CHECK(c.n_controls == 1);
    for (int node = 0; node < 5; ++node) {
        CHECK(c.a[c.at(node, 0)].a11 == 1.0);
        CHECK(c.b[c.at(node, 0)].v1 == -g.coord(node)[0]);
        CHECK(c.l[c.at(node, 0)] == 0.0);
    }
}

TEST_CASE("running cost of the explicit 1d example evaluates to -2 at the origin") {
    auto closures = ou_closures();
    closures.l = [](Point x, int) {
        const double x2 = x[0] * x[0];
        const double d = x2 + 1.0;
        return 2.0 * (x2 * x2 + 2.0 * x2 - 1.0) / (d * d);
    };
    const Grid g = build_grid(1, 6.0, 481);
    const Coefficients c = sample_coefficients(closures, g, ControlSet{1, ""});
    CHECK(c.l[c.at(g.origin_node(), 0)] == doctest::Approx(-2.0).epsilon(1e-15));
}

TEST_CASE("indefinite diffusion matrix is rejected with location info") {
    auto closures = ou_closures();
    closures.a = [](Point, int) { return SymMat{-1.0, 0.0, 1.0}; };
    const Grid g = build_grid(2, 1.0, 3);
    try {
        sample_coefficients(closures, g, ControlSet{1, ""});
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("positive semidefinite") != std::string::npos);
        CHECK(std::string(e.what()).find("node") != std::string::npos);
    }
}

TEST_CASE("negative zeroth-order coefficient is rejected") {
    auto closures = ou_closures();
    closures.c0 = [](Point, int) { return -0.5; };
    CHECK_THROWS_AS(sample_coefficients(closures, build_grid(1, 1.0, 3), ControlSet{1, ""}),
                    ConfigError);
}

TEST_CASE("resampling is bitwise idempotent") {
    auto closures = ou_closures();
    closures.l = [](Point x, int alpha) { return std::sin(x[0]) + alpha; };
    const Grid g = build_grid(1, 3.0, 41);
    const Coefficients c1 = sample_coefficients(closures, g, ControlSet{3, ""});
    const Coefficients c2 = sample_coefficients(closures, g, ControlSet{3, ""});
    CHECK(std::memcmp(c1.l.data(), c2.l.data(), c1.l.size() * sizeof(double)) == 0);
    CHECK(std::memcmp(c1.b.data(), c2.b.data(), c1.b.size() * sizeof(Vec2)) == 0);
}

TEST_CASE("a built from any sigma closure passes the psd check") {
    Rng rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        const double s11 = rng.uniform(-3.0, 3.0), s12 = rng.uniform(-3.0, 3.0);
        const double s21 = rng.uniform(-3.0, 3.0), s22 = rng.uniform(-3.0, 3.0);
        CoefficientClosures c;
        c.sigma = [=](Point, int) { return Mat2{s11, s12, s21, s22}; };
        c.a = [&c](Point x, int alpha) { return sigma_squared(c.sigma(x, alpha), 2); };
        c.b = [](Point, int) { return Vec2{}; };
        c.c0 = [](Point, int) { return 0.0; };
        c.l = [](Point, int) { return 0.0; };
        CHECK_NOTHROW(sample_coefficients(c, build_grid(2, 1.0, 3), ControlSet{1, ""}));
    }
}

TEST_CASE("sigma inconsistent with a is rejected") {
    auto closures = ou_closures();
    closures.sigma = [](Point, int) { return Mat2{2.0, 0.0, 0.0, 1.0}; };  // sigma^2 = 4 != 1
    CHECK_THROWS_AS(sample_coefficients(closures, build_grid(1, 1.0, 3), ControlSet{1, ""}),
                    ConfigError);
}

TEST_CASE("csv import round-trips a sampled table") {
    const Grid g = build_grid(1, 1.0, 3);
    auto closures = ou_closures();
    closures.l = [](Point x, int alpha) { return x[0] + alpha; };
    const Coefficients ref = sample_coefficients(closures, g, ControlSet{2, ""});

    std::ostringstream csv;
    csv << "node_index,alpha_index,a_11,b_1,c0,l\n";
    for (int node = 0; node < 3; ++node)
        for (int alpha = 0; alpha < 2; ++alpha) {
            const int k = ref.at(node, alpha);
            csv << node << ',' << alpha << ',' << ref.a[k].a11 << ',' << ref.b[k].v1 << ','
                << ref.c0[k] << ',' << ref.l[k] << '\n';
        }
    std::istringstream in(csv.str());
    const Coefficients got = load_coefficients_csv(in, g);
    CHECK(got.n_controls == 2);
    for (size_t k = 0; k < ref.l.size(); ++k) {
        CHECK(got.l[k] == doctest::Approx(ref.l[k]).epsilon(1e-12));
        CHECK(got.b[k].v1 == doctest::Approx(ref.b[k].v1).epsilon(1e-12));
    }
}

TEST_CASE("csv import rejects malformed tables") {
    const Grid g = build_grid(1, 1.0, 3);
    SUBCASE("missing pairs") {
        std::istringstream in("0,0,1,0,0,0\n1,0,1,0,0,0\n");
        CHECK_THROWS_AS(load_coefficients_csv(in, g), ConfigError);
    }
    SUBCASE("wrong column count") {
        std::istringstream in("0,0,1,0,0\n");
        CHECK_THROWS_AS(load_coefficients_csv(in, g), ConfigError);
    }
    SUBCASE("duplicate pair") {
        std::istringstream in("0,0,1,0,0,0\n0,0,1,0,0,0\n1,0,1,0,0,0\n2,0,1,0,0,0\n");
        CHECK_THROWS_AS(load_coefficients_csv(in, g), ConfigError);
    }
    SUBCASE("psd violation") {
        std::istringstream in("0,0,-1,0,0,0\n1,0,1,0,0,0\n2,0,1,0,0,0\n");
        CHECK_THROWS_AS(load_coefficients_csv(in, g), ConfigError);
    }
}

TEST_CASE("problem validation enforces the pucci restrictions") {
    ProblemSpec p;
    p.grid = build_grid(2, 1.0, 3);
    p.controls = ControlSet{1, ""};
    p.coeffs = sample_coefficients(ou_closures(), p.grid, p.controls);
    p.mode = OperatorMode::PucciMinus;
    p.pucci_lambda = 1.0;
    p.pucci_Lambda = 2.0;
    CHECK_THROWS_AS(validate(p), ConfigError);  // pucci needs dim 1

    p.grid = build_grid(1, 1.0, 3);
    p.coeffs = sample_coefficients(ou_closures(), p.grid, p.controls);
    p.pucci_lambda = 3.0;  // lambda > Lambda
    CHECK_THROWS_AS(validate(p), ConfigError);
    p.pucci_lambda = 1.0;
    CHECK_NOTHROW(validate(p));
}

TEST_CASE("mode names round-trip") {
    for (OperatorMode m : {OperatorMode::HjbInf, OperatorMode::HjbSup, OperatorMode::PucciMinus,
                           OperatorMode::PucciPlus})
        CHECK(mode_from_string(to_string(m)) == m);
    CHECK_THROWS_AS(mode_from_string("isaacs"), ConfigError);
}
