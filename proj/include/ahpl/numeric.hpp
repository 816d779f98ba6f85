#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace ahpl {

using Complex = std::complex<double>;

// ---------------------------------------------------------------------------
// Double-double scalar.  Towers deeper than ~12 levels exhaust binary64 on
// |lambda_n| ~ 0.4^n, so the core iteration is templated on the scalar type
// and can run on this instead.

struct DD {
    double hi = 0.0;
    double lo = 0.0;

    DD() = default;
    DD(double h) : hi(h), lo(0.0) {}
    DD(double h, double l) : hi(h), lo(l) {}

    explicit operator double() const { return hi + lo; }
};

namespace detail {
inline DD two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}
inline DD quick_two_sum(double a, double b) {  // requires |a| >= |b|
    double s = a + b;
    return {s, b - (s - a)};
}
inline DD two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}
}  // namespace detail

inline DD operator+(DD a, DD b) {
    DD s = detail::two_sum(a.hi, b.hi);
    s.lo += a.lo + b.lo;
    return detail::quick_two_sum(s.hi, s.lo);
}
inline DD operator-(DD a) { return {-a.hi, -a.lo}; }
inline DD operator-(DD a, DD b) { return a + (-b); }
inline DD operator*(DD a, DD b) {
    DD p = detail::two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return detail::quick_two_sum(p.hi, p.lo);
}
inline DD operator/(DD a, DD b) {
    double q1 = a.hi / b.hi;
    DD r = a - b * DD(q1);
    double q2 = r.hi / b.hi;
    r = r - b * DD(q2);
    double q3 = r.hi / b.hi;
    DD q = detail::quick_two_sum(q1, q2);
    return q + DD(q3);
}
inline bool operator<(DD a, DD b) { return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo); }
inline bool operator>(DD a, DD b) { return b < a; }
inline bool operator<=(DD a, DD b) { return !(b < a); }
inline bool operator>=(DD a, DD b) { return !(a < b); }
inline DD abs(DD a) { return a.hi < 0 || (a.hi == 0 && a.lo < 0) ? -a : a; }
inline double to_double(DD a) { return a.hi + a.lo; }
inline double to_double(double a) { return a; }

// ---------------------------------------------------------------------------
// Compensated (Neumaier) summation.

class CompensatedSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// ---------------------------------------------------------------------------
// Deterministic RNG.  mt19937_64 has a standard-defined sequence; the helpers
// below avoid std::uniform_real_distribution, whose output is
// implementation-defined.

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform() {  // [0, 1)
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }
    std::uint64_t bits() { return gen_(); }
    int index(int n) { return static_cast<int>(gen_() % static_cast<std::uint64_t>(n)); }
    Complex in_disk(Complex center, double radius) {
        for (;;) {
            double x = uniform(-1.0, 1.0), y = uniform(-1.0, 1.0);
            if (x * x + y * y <= 1.0) return center + radius * Complex(x, y);
        }
    }

private:
    std::mt19937_64 gen_;
};

// ---------------------------------------------------------------------------
// Small helpers.

inline double sqr(double x) { return x * x; }

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double length() const { return hi - lo; }
    bool contains(double x) const { return lo <= x && x <= hi; }
    bool contains(const Interval& o, double slack = 0.0) const {
        return lo - slack <= o.lo && o.hi <= hi + slack;
    }
    double dist_to_zero() const {  // Euclidean distance from the origin
        if (lo > 0) return lo;
        if (hi < 0) return -hi;
        return 0.0;
    }
};

}  // namespace ahpl
