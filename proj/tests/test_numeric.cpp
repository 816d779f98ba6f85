#include "doctest.h"

#include <cmath>

#include "ahpl/numeric.hpp"

using namespace ahpl;

TEST_CASE("double-double keeps bits binary64 loses") {
    DD one(1.0);
    DD tiny(1e-20);
    DD s = one + tiny;
    DD back = s - one;
    CHECK(to_double(back) == doctest::Approx(1e-20).epsilon(1e-12));

    // product rounding: (1+2^-30)^2 = 1 + 2^-29 + 2^-60
    DD x = DD(1.0) + DD(std::ldexp(1.0, -30));
    DD y = x * x;
    DD expect = DD(1.0) + DD(std::ldexp(1.0, -29)) + DD(std::ldexp(1.0, -60));
    CHECK(std::abs(to_double(y - expect)) < 1e-30);
}

TEST_CASE("double-double division round trips") {
    DD a(3.0), b(7.0);
    DD q = a / b;
    DD r = q * b - a;
    CHECK(std::abs(to_double(r)) < 1e-30);
}

TEST_CASE("compensated summation beats naive order dependence") {
    CompensatedSum cs;
    cs.add(1.0);
    for (int i = 0; i < 1000; ++i) cs.add(1e-18);
    cs.add(-1.0);
    CHECK(cs.value() == doctest::Approx(1e-15).epsilon(1e-6));
}

TEST_CASE("rng is deterministic for a fixed seed") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());
}

TEST_CASE("interval helpers") {
    Interval J{-0.3, 0.3};
    CHECK(J.length() == doctest::Approx(0.6));
    CHECK(J.dist_to_zero() == 0.0);
    Interval K{0.77, 1.0};
    CHECK(K.dist_to_zero() == doctest::Approx(0.77));
    CHECK(Interval{-1, 1}.contains(J));
    CHECK_FALSE(J.contains(Interval{-1, 1}));
}
