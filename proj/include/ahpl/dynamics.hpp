#pragma once

#include <climits>
#include <memory>
#include <vector>

#include "ahpl/extension.hpp"
#include "ahpl/hyperbolic.hpp"
#include "ahpl/matcalc.hpp"
#include "ahpl/unimodal.hpp"

namespace ahpl::dynamics {

using extension::AHExtension;
using matcalc::Jet2;
using matcalc::Mat2;

// Scale decomposition: k(z) is the strip index with
// lambda^k / (alpha M) <= |Im z| < lambda^{k-1} / (alpha M), lambda = 1/M;
// k = 0 above the alpha-strip, INT_MAX on the real axis.
struct ScaleIndex {
    double alpha = 10.0;
    double M = 2.0;

    static constexpr int kRealAxis = INT_MAX;
    double lambda() const { return 1.0 / M; }
    int k(Complex z) const;
};

struct BuildOptions {
    int boundary_points = 4096;
    double newton_tol = 1e-12;  // relative to the V radius
    int newton_max_iter = 50;
    double gap_margin = 1e-3;   // U must stay inside (1 - gap) V
};

// The renormalized complex return map z -> F^q(z) on a domain pair U in V at
// one tower level.  V is the round disk of radius c_V |lambda_n| about 0; U is
// the component of (F^q)^{-1}(dV) around 0, traced by predictor-corrector
// continuation.  Natural-scale coordinates except where noted; the rescaled
// view divides by lambda_n, so V has radius c_V there.
class AHPLMap {
public:
    std::shared_ptr<const AHExtension> ext;
    long long q = 1;
    int degree = 2;
    int level = 0;
    double lambda = 1.0;
    double c_V = 2.0;
    double Rv = 2.0;
    std::vector<Complex> boundary;  // U-curve vertices, closed (last != first)
    double r_inner = 0.0, r_outer = 0.0;
    double mod_lower = 0.0, mod_upper = 0.0;  // round-annulus bounds on mod(V \ U)
    double x_right = 0.0;
    double symmetry_residual = 0.0;
    bool star_shaped = false;

    Complex G(Complex z) const;
    std::pair<Complex, Mat2> G_and_DG(Complex z) const;
    Mat2 DG(Complex z) const { return G_and_DG(z).second; }
    Jet2 G_jet2(Complex z) const;

    Complex critical_value() const { return G(Complex(0.0, 0.0)); }

    bool in_V(Complex z) const { return std::abs(z) < Rv; }
    bool in_U(Complex z) const;
    double boundary_radius(double angle) const;

    // rescaled view
    Complex G_rescaled(Complex zh) const { return G(lambda * zh) / lambda; }
    std::pair<Complex, Mat2> G_and_DG_rescaled(Complex zh) const;
    Jet2 G_jet2_rescaled(Complex zh) const;
    bool in_U_rescaled(Complex zh) const { return in_U(lambda * zh); }
    bool in_V_rescaled(Complex zh) const { return std::abs(zh) < c_V; }
    std::vector<Complex> boundary_rescaled() const;

private:
    std::vector<double> radial_;  // radius table over angle bins
    friend AHPLMap build_domains(std::shared_ptr<const AHExtension>, const unimodal::Tower&,
                                 int, double, const BuildOptions&);
};

AHPLMap build_domains(std::shared_ptr<const AHExtension> ext, const unimodal::Tower& tower,
                      int n, double c_V, const BuildOptions& opts = {});

// ---------------------------------------------------------------------------
// Escape-time field over the rescaled V square.

struct EscapeField {
    int res = 0;
    double extent = 2.0;  // half-width of the rescaled grid square
    int max_iter = 0;
    std::vector<int> t;   // row-major; 0 = outside U, max_iter = presumed in K

    int at(int ix, int iy) const { return t[static_cast<std::size_t>(iy) * res + ix]; }
    Complex pixel_center(int ix, int iy) const {
        double h = 2.0 * extent / res;
        return {-extent + (ix + 0.5) * h, -extent + (iy + 0.5) * h};
    }
    long long nonescaping_count() const;
    // fraction of all pixels whose full 3x3 neighborhood is non-escaping
    double interior_fraction() const;
};

EscapeField filled_julia(const AHPLMap& map, int res, int max_iter, int threads = 1);

// ---------------------------------------------------------------------------
// Periodic points.

struct PeriodicPoint {
    Complex z;  // rescaled coords
    int period = 1;      // minimal period under G
    Mat2 deriv;          // D(G^period) on the cycle
    double ev_lo = 0.0, ev_hi = 0.0;  // eigenvalue moduli, sorted
    bool expanding = false;
    bool real_point = false;
    double multiplier = 0.0;  // (f^{q p})' at a real point
    double residual = 0.0;    // |G^p(z) - z|, rescaled
};

struct PeriodicOptions {
    int grid = 64;
    double tol_eig = 1e-9;
    int newton_max = 50;
    double dedup = 1e-8;
    int dropped = 0;  // out: seeds whose Newton run failed
};

// Fixed points of G^p inside U (minimal periods dividing p), Newton-refined
// from a seed grid plus the real subinterval endpoints.
std::vector<PeriodicPoint> find_periodic(const AHPLMap& map, int p, PeriodicOptions& opts);
std::vector<PeriodicPoint> find_periodic(const AHPLMap& map, int p);

// ---------------------------------------------------------------------------
// Hyperbolic expansion along orbits, Y = V \ R (rescaled).

struct ExpansionReport {
    std::vector<double> r;  // r_k = |DG^k v|_Y / |v|_Y
    double eta_hat = 0.0;   // min over k
    double tail_slope = 0.0;
    bool increasing_tail = false;
};

ExpansionReport orbit_expansion(const AHPLMap& map, Complex zh, Complex v, int steps);

}  // namespace ahpl::dynamics
