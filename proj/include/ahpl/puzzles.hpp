#pragma once

#include <span>
#include <vector>

#include "ahpl/dynamics.hpp"
#include "ahpl/unimodal.hpp"

namespace ahpl::puzzles {

struct Curve {
    std::vector<Complex> pts;  // closed polyline, rescaled coordinates
    double diam_euclid = 0.0;
    double diam_hyp = 0.0;  // in the ambient disk V; +inf for dV itself
};

struct Nest {
    Complex base;
    std::vector<Curve> levels;  // X_0 = dV, then successive pullbacks
};

struct NestOptions {
    int vertices = 512;
    double newton_tol = 1e-11;  // relative to c_V
    int newton_max_iter = 40;
    int max_wraps = 8;
};

// X_{j+1} = component of G^{-1}(X_j) around the base point, j < depth.
// Throws PullbackEscaped / BranchAmbiguity when the continuation fails.
Nest equipotential_nest(const dynamics::AHPLMap& map, Complex base, int depth,
                        const NestOptions& opts = {});

// Orientation-preserving fixed point of f^{q_n} on the boundary of the
// invariant interval, by real Newton from the endpoints of Delta_{0,n};
// returns the natural-scale location and the multiplier (> 1).
struct BetaResult {
    double x = 0.0;
    double multiplier = 0.0;
};
BetaResult beta_fixed_point(const unimodal::Tower& tower, int n);

// External ray of the real quadratic polynomial 1 - a z^2, traced by Boettcher
// inverse iteration in the conjugate z^2 + c frame.
struct Ray {
    double angle = 0.0;
    std::vector<Complex> pts;  // R(n), marching inward
    bool landed = false;
    double accumulation_diameter = 0.0;
    Complex landing_point{0.0, 0.0};
};

struct RayOptions {
    double outer_radius = 1e8;
    double tol_land = 1e-6;
};

Ray polynomial_ray(double a, double angle, int steps, const RayOptions& opts = {});

// Per-point nest diameters with a geometric-decay fit.
struct ShrinkRow {
    Complex z;
    bool ok = false;
    std::string reason;
    std::vector<double> diams;
    double fitted_ratio = 0.0;  // geometric mean of successive diameter ratios
};

struct ShrinkTable {
    std::vector<ShrinkRow> rows;
    int failed = 0;
};

ShrinkTable shrinking_diagnostic(const dynamics::AHPLMap& map,
                                 std::span<const Complex> samples, int depth,
                                 const NestOptions& opts = {});

// Kneading itineraries (signs of the critical orbit) of the rescaled AHPL real
// trace against the polynomial 1 - a x^2.
struct ConjugacyReport {
    int length = 0;
    int first_disagreement = -1;  // -1: full agreement
};

ConjugacyReport conjugacy_evidence(const dynamics::AHPLMap& map, double poly_a, int length);

}  // namespace ahpl::puzzles
