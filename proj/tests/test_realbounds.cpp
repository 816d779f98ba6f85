#include "doctest.h"

#include <cmath>
#include <vector>

#include "ahpl/errors.hpp"
#include "ahpl/realbounds.hpp"
#include "ahpl/unimodal.hpp"

using namespace ahpl;
using namespace ahpl::unimodal;
using namespace ahpl::realbounds;

namespace {

Tower feigenbaum_tower(int depth) {
    FamilySpec quad;
    static double a = find_feigenbaum(quad, 1e-12);
    return build_tower(quad.make(a), depth);
}

}  // namespace

TEST_CASE("S_0 is the empty sum") {
    Tower t = feigenbaum_tower(1);
    CHECK(compute_Sn(t, 0) == 0.0);
}

TEST_CASE("S_1 and S_1* match the hand computation at the Feigenbaum parameter") {
    Tower t = feigenbaum_tower(2);
    double a = t.base.a();
    double al = std::abs(1.0 - a);  // |lambda_1|
    double f_al = 1.0 - a * al * al;
    double s1_hand = (1.0 - f_al) / f_al;  // |Delta_1| / d(0, Delta_1)
    CHECK(s1_hand == doctest::Approx(0.291).epsilon(2e-3));
    CHECK(compute_Sn(t, 1) == doctest::Approx(s1_hand).epsilon(1e-12));

    double s1_star_hand = sqr(1.0 - f_al) / (2.0 * al);
    CHECK(s1_star_hand == doctest::Approx(0.0631).epsilon(5e-3));
    CHECK(compute_Sn_star(t, 1, 2) == doctest::Approx(s1_star_hand).epsilon(1e-12));
}

TEST_CASE("reversed summation order changes S_n below 1e-12 relative") {
    Tower t = feigenbaum_tower(10);
    for (int n = 1; n <= 10; ++n) {
        double a = compute_Sn(t, n);
        double b = compute_Sn_reversed(t, n);
        CHECK(std::abs(a - b) <= 1e-12 * std::abs(a));
    }
}

TEST_CASE("scaling ratios lie strictly inside (0,1); central ratio is universal") {
    Tower t = feigenbaum_tower(10);
    for (int n = 0; n < 10; ++n) {
        auto [lo, hi] = scaling_ratios(t, n);
        CHECK(lo > 0.0);
        CHECK(hi < 1.0);
        CHECK(lo <= hi);
    }
    double central = t.level(9).intervals[0].length() / t.level(8).intervals[0].length();
    CHECK(central == doctest::Approx(0.3995).epsilon(1e-3));
}

TEST_CASE("doubling towers put exactly two children in each parent") {
    Tower t = feigenbaum_tower(6);
    for (int n = 0; n < 6; ++n) {
        const auto& parents = t.level(n).intervals;
        const auto& children = t.level(n + 1).intervals;
        std::vector<int> count(parents.size(), 0);
        for (const Interval& J : children) {
            for (std::size_t p = 0; p < parents.size(); ++p)
                if (parents[p].contains(J, 1e-11)) {
                    ++count[p];
                    break;
                }
        }
        for (int c : count) CHECK(c == 2);
    }
}

TEST_CASE("S recursion: S_{n+1} <= beta_hat S_n + 1/alpha_hat") {
    Tower t = feigenbaum_tower(11);
    for (int n = 2; n <= 10; ++n) {
        auto [alpha, beta] = scaling_ratios(t, n);
        double lhs = compute_Sn(t, n + 1);
        CHECK(lhs <= beta * compute_Sn(t, n) + 1.0 / alpha + 1e-12);
    }
}

TEST_CASE("S_n is bounded and S_n* <= S_n / fitted C0") {
    Tower t = feigenbaum_tower(12);
    double c0 = fit_critical_coefficient(t.base);
    CHECK(c0 > 0.0);
    double smax_early = 0.0;
    for (int n = 3; n <= 5; ++n) smax_early = std::max(smax_early, compute_Sn(t, n));
    for (int n = 1; n <= 12; ++n) {
        double sn = compute_Sn(t, n);
        double snstar = compute_Sn_star(t, n, 2);
        CHECK(snstar <= sn / c0 + 1e-12);
        if (n >= 3) CHECK(sn <= 1.5 * smax_early);
    }
}

TEST_CASE("derivative comparability: definition checks on small cases") {
    Tower t = feigenbaum_tower(4);
    const TowerLevel& lv = t.level(3);

    // mean value theorem: the one-step ratio straddles 1 on Delta_1
    double rmin = 1e300, rmax = 0.0;
    for (int i = 0; i <= 200; ++i) {
        double x = lv.intervals[1].lo + lv.intervals[1].length() * i / 200.0;
        double r = std::abs(t.base.deriv(1, x)) * lv.intervals[1].length() /
                   lv.intervals[2].length();
        rmin = std::min(rmin, r);
        rmax = std::max(rmax, r);
    }
    CHECK(rmin <= 1.0 + 1e-9);
    CHECK(rmax >= 1.0 - 1e-9);

    double khat = derivative_comparability(t, 3);
    CHECK(khat >= 1.0);
    CHECK(std::isfinite(khat));
}

TEST_CASE("K_hat has no growth trend across levels") {
    Tower t = feigenbaum_tower(10);
    std::vector<double> lk;
    for (int n = 3; n <= 10; ++n) lk.push_back(std::log(derivative_comparability(t, n)));
    double n_mean = 0, y_mean = 0;
    for (std::size_t i = 0; i < lk.size(); ++i) {
        n_mean += static_cast<double>(i);
        y_mean += lk[i];
    }
    n_mean /= lk.size();
    y_mean /= lk.size();
    double num = 0, den = 0;
    for (std::size_t i = 0; i < lk.size(); ++i) {
        num += (i - n_mean) * (lk[i] - y_mean);
        den += (i - n_mean) * (i - n_mean);
    }
    CHECK(std::abs(num / den) < 0.02);
}

TEST_CASE("renorm C2 norms: n = 0 is the map itself") {
    UnimodalMap f(1.4, 2);
    Tower t = build_tower(f, 1);
    C2Norms norms = renorm_c2_norm(t, 0, 1024);
    CHECK(norms.c0 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(norms.c1 == doctest::Approx(2.8).epsilon(1e-6));  // |f'(x)| = 2 a |x| at x = 1
    CHECK(norms.c2 == doctest::Approx(2.8).epsilon(1e-12));
}

TEST_CASE("renorm C0 norm never exceeds 1") {
    Tower t = feigenbaum_tower(9);
    for (int n = 0; n <= 9; ++n) {
        C2Norms norms = renorm_c2_norm(t, n, 512);
        CHECK(norms.c0 <= 1.0 + 1e-12);
    }
}

TEST_CASE("C1 and C2 norms stay uniformly bounded across levels") {
    Tower t = feigenbaum_tower(9);
    double c1_min = 1e300, c1_max = 0, c2_min = 1e300, c2_max = 0;
    for (int n = 2; n <= 9; ++n) {
        C2Norms norms = renorm_c2_norm(t, n, 1024);
        c1_min = std::min(c1_min, norms.c1);
        c1_max = std::max(c1_max, norms.c1);
        c2_min = std::min(c2_min, norms.c2);
        c2_max = std::max(c2_max, norms.c2);
    }
    CHECK(c1_max / c1_min < 10.0);
    CHECK(c2_max / c2_min < 10.0);
}

TEST_CASE("bounds_report rows are complete and LevelMissing fires") {
    Tower t = feigenbaum_tower(4);
    BoundsReport rep = bounds_report(t, 4);
    CHECK(rep.rows.size() == 5);
    for (const auto& row : rep.rows) {
        CHECK(row.q == t.level(row.n).q);
        if (row.n > 0) CHECK(row.Sn > 0.0);
    }
    CHECK_THROWS_AS(bounds_report(t, 5), LevelMissing);
    CHECK_THROWS_AS(compute_Sn(t, 9), LevelMissing);
}
