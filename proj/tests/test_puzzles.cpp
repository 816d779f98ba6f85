#include "doctest.h"

#include <cmath>
#include <memory>

#include "ahpl/dynamics.hpp"
#include "ahpl/errors.hpp"
#include "ahpl/extension.hpp"
#include "ahpl/puzzles.hpp"
#include "ahpl/unimodal.hpp"

using namespace ahpl;
using namespace ahpl::unimodal;
using namespace ahpl::puzzles;

namespace {

struct Lab {
    double a;
    Tower tower;
    std::shared_ptr<const extension::AHExtension> ext;
};

const Lab& lab() {
    static Lab l = [] {
        FamilySpec quad;
        double a = find_feigenbaum(quad, 1e-12);
        UnimodalMap f = quad.make(a);
        return Lab{a, build_tower(f, 8),
                   std::make_shared<extension::AHExtension>(extension::extend(f, 3))};
    }();
    return l;
}

bool inside(const std::vector<Complex>& poly, Complex z) {
    int crossings = 0;
    std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        Complex a = poly[i] - z, b = poly[(i + 1) % n] - z;
        if ((a.imag() > 0) != (b.imag() > 0)) {
            double xc = a.real() + a.imag() * (b.real() - a.real()) / (a.imag() - b.imag());
            if (xc > 0) ++crossings;
        }
    }
    return crossings % 2 == 1;
}

}  // namespace

TEST_CASE("critical nest: X_1 reproduces the traced boundary of U") {
    dynamics::AHPLMap map = dynamics::build_domains(lab().ext, lab().tower, 3, 2.0);
    Nest nest = equipotential_nest(map, Complex(0, 0), 1);
    REQUIRE(nest.levels.size() == 2);
    const Curve& x1 = nest.levels[1];
    double al = std::abs(map.lambda);
    for (Complex v : x1.pts) {
        double expect = map.boundary_radius(std::arg(v)) / al;
        CHECK(std::abs(std::abs(v) - expect) < 2e-3 * map.c_V);
    }
}

TEST_CASE("critical nest diameters shrink geometrically") {
    dynamics::AHPLMap map = dynamics::build_domains(lab().ext, lab().tower, 4, 2.0);
    Nest nest = equipotential_nest(map, Complex(0, 0), 6);
    REQUIRE(nest.levels.size() == 7);
    for (std::size_t j = 1; j < nest.levels.size(); ++j) {
        CHECK(nest.levels[j].diam_euclid < nest.levels[j - 1].diam_euclid * 1.0001);
        // vertex containment in the previous level
        for (std::size_t k = 0; k < nest.levels[j].pts.size(); k += 7)
            CHECK(inside(nest.levels[j - 1].pts, nest.levels[j].pts[k]));
    }
    // pure equipotential preimages shrink onto the filled Julia set, so the
    // diameters saturate at diam(K); the excess decays
    std::vector<double> drop;
    for (std::size_t j = 1; j < nest.levels.size(); ++j)
        drop.push_back(nest.levels[j - 1].diam_euclid - nest.levels[j].diam_euclid);
    CHECK(drop[0] > 0.1);
    for (std::size_t j = 2; j < drop.size(); ++j) CHECK(drop[j] < drop[j - 1]);
    // interior levels have finite hyperbolic diameter in V
    CHECK(std::isinf(nest.levels[0].diam_hyp));
    CHECK(std::isfinite(nest.levels[2].diam_hyp));
}

TEST_CASE("nest base outside V is rejected") {
    dynamics::AHPLMap map = dynamics::build_domains(lab().ext, lab().tower, 3, 2.0);
    CHECK_THROWS_AS(equipotential_nest(map, Complex(3.0, 0.0), 2), PullbackEscaped);
}

TEST_CASE("beta fixed point: exact Chebyshev values") {
    UnimodalMap f(2.0, 2);
    Tower t = build_tower(f, 0);
    BetaResult beta = beta_fixed_point(t, 0);
    CHECK(beta.x == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(beta.multiplier == doctest::Approx(4.0).epsilon(1e-10));
}

TEST_CASE("beta fixed point: repelling at every Feigenbaum level") {
    const Tower& t = lab().tower;
    for (int n = 0; n <= 8; ++n) {
        BetaResult beta = beta_fixed_point(t, n);
        CHECK(beta.multiplier > 1.0);
        double al = std::abs(t.level(n).lambda);
        // beta_n sits on the boundary of the invariant interval, strictly
        // outside Delta_{0,n} and inside U_n
        CHECK(std::abs(beta.x) > al);
        CHECK(std::abs(beta.x) < 2.0 * al);
        // fixed-point residual
        double v = beta.x;
        for (long long i = 0; i < t.level(n).q; ++i) v = t.base(v);
        CHECK(std::abs(v - beta.x) < 1e-10 * std::max(al, std::abs(beta.x)));
    }
}

TEST_CASE("external ray at angle 0 lands on the beta fixed point") {
    // Chebyshev: fixed points of 1-2x^2 are -1 (beta) and 1/2
    Ray r0 = polynomial_ray(2.0, 0.0, 40);
    CHECK(r0.landed);
    CHECK(r0.accumulation_diameter < 1e-6);
    CHECK(r0.landing_point.real() == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(std::abs(r0.landing_point.imag()) < 1e-9);

    // angle 1/2 lands on the preimage tau(beta) = +1
    Ray rh = polynomial_ray(2.0, 0.5, 40);
    CHECK(rh.landed);
    CHECK(rh.landing_point.real() == doctest::Approx(1.0).epsilon(1e-6));

    // Feigenbaum parameter: the landing point is the repelling fixed point
    double a = lab().a;
    Ray rf = polynomial_ray(a, 0.0, 48);
    CHECK(rf.landed);
    double beta = (-1.0 - std::sqrt(1.0 + 4.0 * a)) / (2.0 * a);
    CHECK(rf.landing_point.real() == doctest::Approx(beta).epsilon(1e-6));
    double p = 1.0 - a * beta * beta;
    CHECK(p == doctest::Approx(beta).epsilon(1e-9));       // fixed
    CHECK(std::abs(2.0 * a * beta) > 1.0);                 // repelling
}

TEST_CASE("ray segments decay and the ray is forward-functorial") {
    double a = lab().a;
    Ray r = polynomial_ray(a, 1.0 / 3.0, 44);
    Ray r2 = polynomial_ray(a, 2.0 / 3.0, 44);
    // segment diameters tend to zero along the trace
    for (std::size_t i = 30; i + 1 < r.pts.size(); ++i) {
        double seg = std::abs(r.pts[i + 1] - r.pts[i]);
        double seg_prev = std::abs(r.pts[i] - r.pts[i - 1]);
        CHECK(seg < std::max(seg_prev, 1e-10) * 1.2);
    }
    CHECK(std::abs(r.pts[40] - r.pts[39]) < 1e-4);
    // p(R_t(n+1)) follows R_{2t}(n)
    for (std::size_t i = 15; i < 40; ++i) {
        Complex image = 1.0 - a * r.pts[i + 1] * r.pts[i + 1];
        CHECK(std::abs(image - r2.pts[i]) < 1e-6 * std::max(1.0, std::abs(r2.pts[i])));
    }
}

TEST_CASE("shrinking diagnostic on Julia-set points off the real axis") {
    dynamics::AHPLMap map = dynamics::build_domains(lab().ext, lab().tower, 4, 2.0);
    auto per3 = dynamics::find_periodic(map, 3);
    std::vector<Complex> samples;
    for (const auto& pt : per3)
        if (!pt.real_point && std::abs(pt.z.imag()) > 0.05) samples.push_back(pt.z);
    REQUIRE(samples.size() >= 2);
    ShrinkTable table = shrinking_diagnostic(map, samples, 6);
    CHECK(table.failed == 0);
    for (const auto& row : table.rows) {
        CHECK(row.ok);
        CHECK(row.fitted_ratio < 0.95);
        CHECK(row.fitted_ratio > 0.0);
    }
}

TEST_CASE("shrinking diagnostic reports escaped samples without aborting") {
    dynamics::AHPLMap map = dynamics::build_domains(lab().ext, lab().tower, 4, 2.0);
    double xr = map.x_right / std::abs(map.lambda);
    std::vector<Complex> samples{Complex(0.999 * xr, 0.02)};
    ShrinkTable table = shrinking_diagnostic(map, samples, 5);
    CHECK(table.failed == 1);
    CHECK_FALSE(table.rows[0].ok);
    CHECK_FALSE(table.rows[0].reason.empty());
}

TEST_CASE("conjugacy evidence: itineraries agree with the model polynomial") {
    dynamics::AHPLMap map = dynamics::build_domains(lab().ext, lab().tower, 2, 2.0);
    ConjugacyReport rep = conjugacy_evidence(map, lab().a, 512);
    CHECK(rep.first_disagreement == -1);

    // perturbing the model parameter produces a finite disagreement index
    ConjugacyReport bad = conjugacy_evidence(map, lab().a + 1e-3, 2048);
    CHECK(bad.first_disagreement >= 1);
}

TEST_CASE("conjugacy evidence flags orbits leaving the interval") {
    dynamics::AHPLMap map = dynamics::build_domains(lab().ext, lab().tower, 2, 2.0);
    CHECK_THROWS_AS(conjugacy_evidence(map, 2.2, 64), OrbitLeftInterval);
}
