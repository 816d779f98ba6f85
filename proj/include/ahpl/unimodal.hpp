#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "ahpl/errors.hpp"
#include "ahpl/numeric.hpp"

namespace ahpl::unimodal {

// ---------------------------------------------------------------------------
// Truncated univariate Taylor jets.  c[k] holds f^(k)(x0)/k!.

inline constexpr int kMaxJetOrder = 12;

struct Jet1 {
    int ord = 0;
    std::array<double, kMaxJetOrder + 1> c{};

    static Jet1 constant(double v, int ord);
    static Jet1 variable(double x0, int ord);

    double value() const { return c[0]; }
    double deriv(int k) const;  // k-th derivative (k! * c[k])

    Jet1 operator+(const Jet1& o) const;
    Jet1 operator-(const Jet1& o) const;
    Jet1 operator*(const Jet1& o) const;
    Jet1 scaled(double s) const;
    Jet1 pow_int(int n) const;        // integer power by repeated squaring
    Jet1 pow_real(double p) const;    // |value|^p branch, value != 0
};

// ---------------------------------------------------------------------------
// The closed-form family f(x) = 1 - a*|x|^d with even critical order d,
// optionally perturbed by eps*|x|^(pm + 1/2) to break C^r smoothness.

class UnimodalMap {
public:
    UnimodalMap(double a, int d = 2);

    double a() const { return a_; }
    int d() const { return d_; }

    void set_perturbation(double eps, int pm) {
        eps_ = eps;
        pm_ = pm;
    }
    double perturbation_eps() const { return eps_; }

    template <class S>
    S value(S x) const {
        S xp = x;
        for (int i = 1; i < d_; ++i) xp = xp * x;
        S r = S(1.0) - S(a_) * xp;
        if (eps_ != 0.0) r = r + S(eps_ * perturb_abs_pow(to_double(x)));
        return r;
    }

    template <class S>
    void value_and_deriv(S x, S& f, S& fp) const {
        S xp1 = S(1.0);  // x^(d-1)
        for (int i = 1; i < d_; ++i) xp1 = xp1 * x;
        f = S(1.0) - S(a_) * (xp1 * x);
        fp = S(-a_ * d_) * xp1;
        if (eps_ != 0.0) {
            double xd = to_double(x);
            f = f + S(eps_ * perturb_abs_pow(xd));
            fp = fp + S(eps_ * perturb_abs_pow_deriv(xd));
        }
    }

    double operator()(double x) const { return value(x); }
    double deriv(int k, double x) const;  // exact k-th derivative
    Jet1 real_jet(double x, int ord) const;
    Jet1 apply_jet(const Jet1& u) const;  // jet of f(u(t))

    // |f'(x)| >= C0*|x|^(d-1) with C0 = a*d for the unperturbed family.
    double critical_coefficient() const { return a_ * d_; }

private:
    double perturb_abs_pow(double x) const;        // |x|^(pm+1/2)
    double perturb_abs_pow_deriv(double x) const;  // d/dx of the above

    double a_;
    int d_;
    double eps_ = 0.0;
    int pm_ = 3;
};

// Interface for maps that expose exact real jets (the family itself and its
// renormalizations).
class RealMap1D {
public:
    virtual ~RealMap1D() = default;
    virtual Jet1 real_jet(double x, int ord) const = 0;
    virtual int max_jet_order() const { return kMaxJetOrder; }
    double value(double x) const { return real_jet(x, 0).value(); }
};

class FamilyMapView final : public RealMap1D {
public:
    explicit FamilyMapView(UnimodalMap f) : f_(std::move(f)) {}
    Jet1 real_jet(double x, int ord) const override { return f_.real_jet(x, ord); }
    const UnimodalMap& map() const { return f_; }

private:
    UnimodalMap f_;
};

// R^n f (x) = lambda^{-1} f^q (lambda x), evaluated by chaining base jets.
class RenormalizedMap final : public RealMap1D {
public:
    RenormalizedMap(UnimodalMap base, double lambda, long long q)
        : base_(std::move(base)), lambda_(lambda), q_(q) {}

    Jet1 real_jet(double x, int ord) const override;
    double lambda() const { return lambda_; }
    long long q() const { return q_; }
    const UnimodalMap& base() const { return base_; }

private:
    UnimodalMap base_;
    double lambda_;
    long long q_;
};

// ---------------------------------------------------------------------------
// Renormalization detection and towers.

struct DetectOptions {
    int p_max = 64;
    double endpoint_slack = 1e-13;
    double superstable_tol = 1e-12;
    int unimodality_samples = 33;
};

struct DetectResult {
    int p = 0;
    double lambda = 0.0;
};

// Smallest p > 1 such that f^p restricted to [-|lambda|, |lambda|] is unimodal
// and maps that interval into itself, lambda = f^p(0).  Returns nullopt when
// the scan passes p_max; throws SuperstableDegenerate when the qualifying p
// has f^p(0) = 0.
std::optional<DetectResult> detect_renormalization(const RealMap1D& f,
                                                   const DetectOptions& opts = {});

// Composed object evaluating Rf = lambda^{-1} f^p (lambda x) with jets.
std::shared_ptr<RealMap1D> renormalize(const UnimodalMap& f, const DetectOptions& opts = {});

struct TowerLevel {
    int n = 0;
    int period = 0;  // a_n, period of R^n f; 0 when not determined (last level)
    long long q = 1;
    double lambda = 1.0;
    std::vector<Interval> intervals;
};

struct TowerOptions {
    DetectOptions detect;
    double precision_floor = 1e-14;
    bool use_dd = false;  // double-double scalars for the scaling ladder
};

struct Tower {
    UnimodalMap base;
    std::vector<TowerLevel> levels;

    int depth() const { return static_cast<int>(levels.size()) - 1; }
    const TowerLevel& level(int n) const {
        if (n < 0 || n > depth()) throw LevelMissing("tower level " + std::to_string(n));
        return levels[static_cast<std::size_t>(n)];
    }
    RenormalizedMap renormalization(int n) const {
        const TowerLevel& l = level(n);
        return RenormalizedMap(base, l.lambda, l.q);
    }
};

Tower build_tower(const UnimodalMap& f, int depth, const TowerOptions& opts = {});

// ---------------------------------------------------------------------------
// Parameter search.

struct FamilySpec {
    int d = 2;
    double perturb_eps = 0.0;
    int perturb_m = 3;

    UnimodalMap make(double a) const {
        UnimodalMap f(a, d);
        if (perturb_eps != 0.0) f.set_perturbation(perturb_eps, perturb_m);
        return f;
    }
};

// Parameter with superstable critical orbit of period 2^level (period-doubling
// cascade window), refined in double-double arithmetic.
double superstable_parameter(const FamilySpec& family, int level,
                             double bracket_lo = 0.75, double bracket_hi = 2.0);

// Accumulation point of the period-doubling cascade, via the superstable
// ladder plus geometric extrapolation.
double find_feigenbaum(const FamilySpec& family, double tol = 1e-12,
                       double bracket_lo = 0.75, double bracket_hi = 2.0);

// Parameter realizing a prescribed combinatorics prefix; for a prefix
// [p_0..p_{k-1}] returns the superstable center of prefix+[2], so that
// build_tower(f_a, k) succeeds with exactly the prescribed periods.
// An empty prefix returns the bracket midpoint.
double find_parameter(const FamilySpec& family, const std::vector<int>& prefix,
                      double tol = 1e-12, double bracket_lo = 0.75,
                      double bracket_hi = 2.0);

// Scaling ladder lambda_n = f^{q_n}(0) for the all-period-2 cascade computed
// in double-double arithmetic; independent cross-check for tower scalings.
std::vector<double> feigenbaum_scalings_dd(const FamilySpec& family, double a, int depth);

}  // namespace ahpl::unimodal
