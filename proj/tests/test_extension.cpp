#include "doctest.h"

#include <cmath>
#include <memory>

#include "ahpl/errors.hpp"
#include "ahpl/extension.hpp"
#include "ahpl/matcalc.hpp"
#include "ahpl/unimodal.hpp"

using namespace ahpl;
using namespace ahpl::unimodal;
using namespace ahpl::extension;

namespace {

// Cubic monomial, used to exercise a nonzero closed-form dzbar.
struct CubicMap final : RealMap1D {
    Jet1 real_jet(double x, int ord) const override {
        Jet1 j;
        j.ord = ord;
        j.c[0] = x * x * x;
        if (ord >= 1) j.c[1] = 3 * x * x;
        if (ord >= 2) j.c[2] = 3 * x;
        if (ord >= 3) j.c[3] = 1;
        return j;
    }
};

std::shared_ptr<const RealMap1D> feigenbaum_renormalization(int n) {
    FamilySpec quad;
    static double a = find_feigenbaum(quad, 1e-12);
    Tower t = build_tower(quad.make(a), n);
    return std::make_shared<RenormalizedMap>(t.renormalization(n));
}

}  // namespace

TEST_CASE("truncation is exact for polynomials of degree <= m") {
    UnimodalMap f(1.3, 2);
    AHExtension ext = extend(f, 3);
    Rng rng(5);
    for (int i = 0; i < 100; ++i) {
        Complex z(rng.uniform(-1, 1), rng.uniform(-1, 1));
        Complex direct = 1.0 - 1.3 * z * z;
        CHECK(std::abs(ext.value(z) - direct) < 1e-14);
        CHECK(std::abs(ext.dzbar(z)) == 0.0);
    }
    // holomorphic point: mu = 0, K = 1
    auto [mu, K] = ext.mu_and_K(Complex(0.5, 0.3));
    CHECK(std::abs(mu) == 0.0);
    CHECK(K == 1.0);
}

TEST_CASE("dzbar closed form for the cubic at m = 2") {
    AHExtension ext(std::make_shared<CubicMap>(), 2);
    for (double y : {0.05, 0.1, 0.4}) {
        for (double x : {-0.7, 0.2, 0.9}) {
            Complex db = ext.dzbar(Complex(x, y));
            CHECK(db.real() == doctest::Approx(-1.5 * y * y).epsilon(1e-13));
            CHECK(std::abs(db.imag()) < 1e-15);
        }
    }
}

TEST_CASE("mu vanishes on the real axis for any base map") {
    AHExtension ext(std::make_shared<CubicMap>(), 2);
    for (double x : {0.3, 0.6, 1.1}) {
        auto [mu, K] = ext.mu_and_K(Complex(x, 0.0));
        CHECK(std::abs(mu) == 0.0);
        CHECK(K == 1.0);
    }
}

TEST_CASE("CriticalPoint fires where dz F vanishes") {
    UnimodalMap f(1.3, 2);
    AHExtension ext = extend(f, 3);
    CHECK_THROWS_AS(ext.mu_and_K(Complex(0.0, 0.0)), CriticalPoint);
}

TEST_CASE("dzbar equals the value assembled from DF entries") {
    AHExtension ext(std::make_shared<CubicMap>(), 2);
    Rng rng(17);
    for (int i = 0; i < 200; ++i) {
        Complex z(rng.uniform(-1, 1), rng.uniform(-0.5, 0.5));
        Complex closed = ext.dzbar(z);
        Complex assembled = ext.df(z).dzbar();
        CHECK(std::abs(closed - assembled) < 1e-12);
    }
}

TEST_CASE("extension is symmetric about the real axis") {
    AHExtension ext = extend(UnimodalMap(1.37, 4), 3);
    Rng rng(23);
    for (int i = 0; i < 200; ++i) {
        Complex z(rng.uniform(-1, 1), rng.uniform(-0.5, 0.5));
        CHECK(std::abs(ext.value(std::conj(z)) - std::conj(ext.value(z))) < 1e-13);
        // DF(conj z) = S DF(z) S with S = diag(1, -1)
        matcalc::Mat2 a = ext.df(std::conj(z)), b = ext.df(z);
        CHECK(std::abs(a.m[0][0] - b.m[0][0]) < 1e-12);
        CHECK(std::abs(a.m[0][1] + b.m[0][1]) < 1e-12);
        CHECK(std::abs(a.m[1][0] + b.m[1][0]) < 1e-12);
        CHECK(std::abs(a.m[1][1] - b.m[1][1]) < 1e-12);
    }
}

TEST_CASE("DF is the conformal matrix of f'(x) on the real axis") {
    UnimodalMap f(1.41, 2);
    AHExtension ext = extend(f, 3);
    for (double x : {-0.8, -0.2, 0.4, 0.9}) {
        matcalc::Mat2 d = ext.df(Complex(x, 0.0));
        matcalc::Mat2 expect = matcalc::Mat2::conformal(Complex(f.deriv(1, x), 0.0));
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) CHECK(std::abs(d.m[i][j] - expect.m[i][j]) < 1e-13);
    }
}

TEST_CASE("jacobian_jet agrees with finite differences") {
    AHExtension cubic(std::make_shared<CubicMap>(), 2);
    auto eval = [&](Complex w) { return cubic.value(w); };
    for (Complex z : {Complex(0.0, 1.0), Complex(0.5, 0.2), Complex(-0.3, -0.6)}) {
        matcalc::Jet2 jj = cubic.jacobian_jet(z);
        matcalc::Jet2 fd = matcalc::fd_jet2(eval, z, 1e-5);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) CHECK(std::abs(jj.D.m[i][j] - fd.D.m[i][j]) < 1e-6);
        CHECK(jj.D2.max_abs_diff(fd.D2) < 1e-4);
        CHECK(jj.D2.hessian_symmetry_residual() < 1e-12);
    }

    AHExtension quart = extend(UnimodalMap(1.59, 4), 3);
    auto eval4 = [&](Complex w) { return quart.value(w); };
    for (Complex z : {Complex(0.4, 0.3), Complex(-0.7, 0.1)}) {
        matcalc::Jet2 jj = quart.jacobian_jet(z);
        matcalc::Jet2 fd = matcalc::fd_jet2(eval4, z, 1e-5);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) CHECK(std::abs(jj.D.m[i][j] - fd.D.m[i][j]) < 1e-6);
        CHECK(jj.D2.max_abs_diff(fd.D2) < 1e-4);
    }
}

TEST_CASE("verify_order: exact polynomial case degenerates") {
    AHExtension ext = extend(UnimodalMap(1.3, 2), 3);
    CHECK_THROWS_AS(verify_order(ext), DegenerateSamples);
}

TEST_CASE("verify_order fits the truncation order on renormalizations") {
    auto r1 = feigenbaum_renormalization(1);  // quartic polynomial in x
    for (int m : {2, 3}) {
        AHExtension ext(r1, m);
        OrderFit fit = verify_order(ext);
        CHECK(fit.slope == doctest::Approx(static_cast<double>(m)).epsilon(0.05 / m));
        CHECK(fit.pass);
    }
    // doubling m doubles the fitted slope
    auto r2 = feigenbaum_renormalization(2);  // degree-16 polynomial
    AHExtension e3(r2, 3), e6(r2, 6);
    OrderFit f3 = verify_order(e3), f6 = verify_order(e6);
    CHECK(f3.pass);
    CHECK(f6.pass);
    CHECK(f6.slope == doctest::Approx(2.0 * f3.slope).epsilon(0.02));
}

TEST_CASE("quasiregular strip height bounds |mu| below the margin") {
    auto r1 = feigenbaum_renormalization(1);
    AHExtension ext(r1, 3);
    double ymax = quasiregular_strip_height(ext, 0.5);
    CHECK(ymax > 0.0);
    Rng rng(31);
    for (int i = 0; i < 200; ++i) {
        double x = rng.uniform(-0.95, 0.95);
        double y = rng.uniform(1e-6, 0.9 * ymax);
        Complex z(x, y);
        try {
            CHECK(std::abs(ext.mu(z)) < 1.0);
        } catch (const CriticalPoint&) {
            // sampled too close to a critical point of the renormalization
        }
    }
}

TEST_CASE("perturbed family keeps the mu-decay slope of the truncation") {
    UnimodalMap f(1.4011, 2);
    f.set_perturbation(1e-3, 3);
    AHExtension ext = extend(f, 3);
    StripSpec strip;
    strip.x_lo = 0.2;
    strip.x_hi = 0.7;
    OrderFit fit = verify_order(ext, strip);
    CHECK(fit.slope == doctest::Approx(3.0).epsilon(0.05 / 3));
}

TEST_CASE("InsufficientJets when the truncation order exceeds the jet cap") {
    UnimodalMap f(1.3, 2);
    CHECK_THROWS_AS(extend(f, kMaxJetOrder), InsufficientJets);
}
