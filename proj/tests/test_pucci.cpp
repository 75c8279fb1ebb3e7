#include <doctest.h>

#include <cmath>

#include "hjb/oracle.hpp"
#include "hjb/pucci.hpp"

using namespace hjb;

namespace {

SymMat random_sym(Rng& rng, double scale = 3.0) {
    return SymMat{rng.uniform(-scale, scale), rng.uniform(-scale, scale),
                  rng.uniform(-scale, scale)};
}

SymMat random_psd(Rng& rng) {
    const double s11 = rng.uniform(-2.0, 2.0), s12 = rng.uniform(-2.0, 2.0);
    const double s21 = rng.uniform(-2.0, 2.0), s22 = rng.uniform(-2.0, 2.0);
    return sigma_squared(Mat2{s11, s12, s21, s22}, 2);
}

}  // namespace

TEST_CASE("pucci operators vanish on the zero matrix") {
    const PucciParams p{1.0, 2.0};
    CHECK(pucci_minus(SymMat{}, 2, p) == 0.0);
    CHECK(pucci_plus(SymMat{}, 2, p) == 0.0);
    CHECK(pucci_minus(SymMat{}, 1, p) == 0.0);
}

// Expected values derived from the sampling oracle over admissible matrices;
// the closed form must sit at (or below) the sampled minimum, with the gap
// inside the acceptance budget 0.05 (1 + |X|_F).
TEST_CASE("closed form against the sampling oracle on reference matrices") {
    const PucciParams p{1.0, 2.0};

    const SymMat mixed{1.0, 0.0, -1.0};  // eigenvalues +1, -1
    CHECK(pucci_minus(mixed, 2, p) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(pucci_plus(mixed, 2, p) == doctest::Approx(1.0).epsilon(1e-15));

    const SymMat ident{1.0, 0.0, 1.0};
    CHECK(pucci_minus(ident, 2, p) == doctest::Approx(-4.0).epsilon(1e-15));

    const double guard = 1e-13;  // roundoff on attained samples
    const PucciSampleResult s_mixed = pucci_sampling(mixed, 2, p, 10000, 42);
    CHECK(s_mixed.min_val >= pucci_minus(mixed, 2, p) - guard);
    CHECK(s_mixed.min_val == doctest::Approx(-1.0).epsilon(0.02));
    CHECK(s_mixed.max_val <= pucci_plus(mixed, 2, p) + guard);
    CHECK(s_mixed.max_val == doctest::Approx(1.0).epsilon(0.02));

    const PucciSampleResult s_ident = pucci_sampling(ident, 2, p, 10000, 42);
    CHECK(s_ident.min_val >= pucci_minus(ident, 2, p) - guard);
    CHECK(s_ident.min_val - (-4.0) <= 0.02);

    // In dimension 1 the sampler sees the scalar interval directly and the
    // 1e4-sample minimum lands within 0.02 of the closed form.
    const SymMat scalar{1.0, 0.0, 0.0};
    const PucciSampleResult s1 = pucci_sampling(scalar, 1, p, 10000, 42);
    CHECK(s1.min_val >= pucci_minus(scalar, 1, p) - guard);
    CHECK(s1.min_val == doctest::Approx(-2.0).epsilon(0.02));
}

TEST_CASE("duality: pucci_plus(X) = -pucci_minus(-X)") {
    const PucciParams p{0.5, 4.0};
    Rng rng(7);
    for (int i = 0; i < 200; ++i) {
        const SymMat x = random_sym(rng);
        const SymMat neg{-x.a11, -x.a12, -x.a22};
        CHECK(pucci_plus(x, 2, p) == doctest::Approx(-pucci_minus(neg, 2, p)).epsilon(1e-12));
    }
}

TEST_CASE("positive homogeneity to 1e-12") {
    const PucciParams p{1.0, 2.0};
    Rng rng(8);
    for (int i = 0; i < 200; ++i) {
        const SymMat x = random_sym(rng);
        const double t = rng.uniform(0.0, 5.0);
        const SymMat tx{t * x.a11, t * x.a12, t * x.a22};
        CHECK(pucci_minus(tx, 2, p) ==
              doctest::Approx(t * pucci_minus(x, 2, p)).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("superadditivity of the minimal operator") {
    const PucciParams p{1.0, 3.0};
    Rng rng(9);
    for (int i = 0; i < 200; ++i) {
        const SymMat x = random_sym(rng), y = random_sym(rng);
        const SymMat sum{x.a11 + y.a11, x.a12 + y.a12, x.a22 + y.a22};
        CHECK(pucci_minus(sum, 2, p) >=
              pucci_minus(x, 2, p) + pucci_minus(y, 2, p) - 1e-12);
    }
}

TEST_CASE("degenerate ellipticity: psd bumps only decrease pucci_minus") {
    const PucciParams p{1.0, 2.0};
    Rng rng(10);
    for (int i = 0; i < 200; ++i) {
        const SymMat x = random_sym(rng);
        const SymMat q = random_psd(rng);
        const SymMat xq{x.a11 + q.a11, x.a12 + q.a12, x.a22 + q.a22};
        CHECK(pucci_minus(xq, 2, p) <= pucci_minus(x, 2, p) + 1e-12);
    }
}

TEST_CASE("minimal operator never exceeds the maximal one") {
    const PucciParams p{0.5, 2.5};
    Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        const SymMat x = random_sym(rng);
        CHECK(pucci_minus(x, 2, p) <= pucci_plus(x, 2, p) + 1e-15);
    }
}

TEST_CASE("non-symmetric input is rejected") {
    CHECK_THROWS_AS(sym_from_entries(1.0, 0.5, 0.7, 2.0), ConfigError);
    CHECK_NOTHROW(sym_from_entries(1.0, 0.5, 0.5, 2.0));
}

TEST_CASE("eigenvalues satisfy the characteristic polynomial") {
    Rng rng(12);
    for (int i = 0; i < 100; ++i) {
        const SymMat x = random_sym(rng);
        const auto e = sym_eigenvalues(x, 2);
        const double det = x.a11 * x.a22 - x.a12 * x.a12;
        for (double ev : e) {
            const double res = ev * ev - (x.a11 + x.a22) * ev + det;
            CHECK(std::abs(res) < 1e-10 * std::max(1.0, ev * ev));
        }
        CHECK(e[0] <= e[1]);
    }
}

TEST_CASE("pucci parameter validation") {
    CHECK_THROWS_AS(pucci_minus(SymMat{1, 0, 1}, 2, PucciParams{2.0, 1.0}), ConfigError);
    CHECK_THROWS_AS(pucci_minus(SymMat{1, 0, 1}, 2, PucciParams{0.0, 1.0}), ConfigError);
}

TEST_CASE("radial hessian of the quadratic profile is the identity") {
    const RadialProfile phi = quadratic_profile();
    for (int dim : {1, 2}) {
        const RadialHessian h = radial_hessian_eigs(phi, 1.7, dim);
        CHECK(h.radial == doctest::Approx(1.0));
        CHECK(h.tangential == doctest::Approx(1.0));
        CHECK(h.multiplicity == dim - 1);
    }
}

TEST_CASE("radial hessian of log r at r=2 in the plane") {
    const RadialHessian h = radial_hessian_eigs(log_profile(), 2.0, 2);
    CHECK(h.radial == doctest::Approx(-0.25).epsilon(1e-15));
    CHECK(h.tangential == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(h.multiplicity == 1);
}

TEST_CASE("radial hessian of the power profile, cross-checked by differences") {
    const double beta = 1.5;
    const RadialProfile phi = power_profile(beta);
    for (double r : {0.5, 1.0, 2.0, 3.7}) {
        const RadialHessian h = radial_hessian_eigs(phi, r, 2);
        CHECK(h.radial == doctest::Approx((beta - 1.0) * std::pow(r, beta - 2.0)).epsilon(1e-13));
        CHECK(h.tangential == doctest::Approx(std::pow(r, beta - 2.0)).epsilon(1e-13));
        const double eps = 1e-5;
        const double fd1 = (phi.phi(r + eps) - phi.phi(r - eps)) / (2.0 * eps);
        const double fd2 = (phi.phi(r + eps) - 2.0 * phi.phi(r) + phi.phi(r - eps)) / (eps * eps);
        CHECK(phi.dphi(r) == doctest::Approx(fd1).epsilon(1e-8));
        CHECK(phi.d2phi(r) == doctest::Approx(fd2).epsilon(1e-5));
    }
}

TEST_CASE("radius zero is rejected") {
    CHECK_THROWS_AS(radial_hessian_eigs(quadratic_profile(), 0.0, 2), ConfigError);
}

// The paper-side identity: feeding the log-profile eigenvalues through the
// minimal operator gives -Lambda (N-1)/r^2 + lambda/r^2.
TEST_CASE("log profile reproduces the radial pucci formula") {
    for (const PucciParams p : {PucciParams{1.0, 2.0}, PucciParams{0.5, 4.0}}) {
        for (int k = 1; k <= 20; ++k) {
            const double r = 0.3 * k;
            const RadialHessian h = radial_hessian_eigs(log_profile(), r, 2);
            double eigs[2] = {h.radial, h.tangential};
            const double got = pucci_minus_eigs(eigs, 2, p);
            const double want = -p.Lambda / (r * r) + p.lambda / (r * r);
            CHECK(got == doctest::Approx(want).epsilon(1e-12));
        }
    }
}

TEST_CASE("inverse power profile matches the bounded lyapunov candidate") {
    const RadialProfile phi = inverse_power_profile(1.0, 2.0);  // 1/2 - 1/r
    CHECK(phi.phi(2.0) == doctest::Approx(0.0));
    CHECK(phi.phi(4.0) == doctest::Approx(0.25));
    CHECK(phi.dphi(2.0) == doctest::Approx(0.25));
    CHECK(phi.d2phi(2.0) == doctest::Approx(-0.25));
}
