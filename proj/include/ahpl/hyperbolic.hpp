#pragma once

#include <functional>
#include <span>
#include <vector>

#include "ahpl/matcalc.hpp"
#include "ahpl/numeric.hpp"

namespace ahpl::hyperbolic {

using matcalc::Mat2;

struct Disk {
    Complex center{0.0, 0.0};
    double radius = 1.0;
};

// Plane domains carrying a Poincare metric of curvature -1:
//   UnitDisk                rho = 2 / (1 - |z|^2)
//   Disk(z0, R)             rho = 2R / (R^2 - |z - z0|^2)
//   SlitPlane  (C \ R)      rho = 1 / |Im z|
//   SlitDisk   (V \ R)      half-disks of a disk V with real center, each
//                           carried to the unit disk by an explicit chart
class HyperbolicDomain {
public:
    enum class Kind { UnitDisk, Disk, SlitPlane, SlitDisk };

    static HyperbolicDomain unit_disk();
    static HyperbolicDomain disk(Complex center, double radius);
    static HyperbolicDomain slit_plane();
    static HyperbolicDomain slit_disk(Complex real_center, double radius);

    Kind kind() const { return kind_; }
    const Disk& base_disk() const { return disk_; }

    bool contains(Complex z) const;      // interior, off the slit for slit kinds
    int component(Complex z) const;      // 0 for disks; +1 / -1 for slit kinds

    double rho(Complex z) const;         // throws OutsideDomain / OnSlit
    double dist(Complex z, Complex w) const;  // +inf across components
    double diameter(std::span<const Complex> pts) const;

    double vector_norm(Complex z, Complex v) const { return rho(z) * std::abs(v); }
    double derivative_ratio(Complex z, Complex Fz, const Mat2& DF, Complex v) const;
    double hyperbolic_jacobian(Complex z, Complex Fz, const Mat2& DF) const;

    // Chart of the slit-disk component containing z, onto the unit disk.
    Complex chart(Complex z) const;
    Complex chart_deriv(Complex z) const;
    // Same chart through an independent (Joukowski) route; consistency oracle.
    Complex chart_alternate(Complex z) const;
    Complex chart_alternate_deriv(Complex z) const;
    double rho_via_alternate_chart(Complex z) const;

private:
    HyperbolicDomain(Kind k, Disk d) : kind_(k), disk_(d) {}
    Kind kind_;
    Disk disk_;
};

// Unit-disk distance of the origin to t in [0,1).
inline double disk_dist_from_origin(double t) { return std::log((1.0 + t) / (1.0 - t)); }

// McMullen's universal function sinh(s) log((1+e^-s)/(1-e^-s)).
double mcmullen_phi(double s);       // throws NonPositiveArgument
double mcmullen_one_minus_phi(double s);  // 1 - Phi(s), cancellation-safe
// (1 - (1/3)e^{-2s}) - Phi(s); positive for s > log(2)/2.
double mcmullen_phi_gap(double s);

// Upper bound log((1 - |z|^2 + |z| r) / r) for mod(D \ D(z,r)); throws
// RadiusTooLarge unless 0 < r < 1 - |z|.
double mod_disk_minus_disk(Complex z, double r);
inline double mod_bound_simple(double r) { return std::log(2.0 / r); }
inline double mod_bound_delta(double delta) { return std::log(5.0 / delta); }

// B_theta(t) = 3 (2 + 180 e^{1/(theta e)} C0 t)^2 and
// A_theta(alpha, m) = B_theta(1040 alpha^7 m^2).
double b_theta(double t, double theta, double C0 = 1.0);
double a_theta(double alpha, double m, double theta, double C0 = 1.0);

// ---------------------------------------------------------------------------
// Quasi-isometry verification.

struct TestDiffeo {
    std::function<Complex(Complex)> F;
    std::function<Mat2(Complex)> DF;
    std::function<Complex(Complex)> mu;
};

struct QuasiIsoConfig {
    Disk V{Complex(0.0, 0.0), 1.0};
    double inner_fraction = 0.7;  // sample within this fraction of the radius
    double y_min_fraction = 1e-4;
    int samples = 500;
    std::uint64_t seed = 0x51a51d0;
    std::vector<double> thetas = {0.1, 0.3, 0.5};
};

struct QuasiIsoThetaFit {
    double theta = 0.0;
    double fitted_C = 0.0;
    double worst_violation = 0.0;  // against the fitted C; <= 1e-9 by construction
};

struct QuasiIsoReport {
    std::vector<QuasiIsoThetaFit> fits;
    double fitted_exponent = 0.0;  // slope of log(ratio-1) against log(delta) or log|Im z|
    double max_ratio_dev = 0.0;    // max over samples of max(ratio, 1/ratio) - 1
    double measured_delta = 0.0;   // sup sampled K_phi - 1 (small-dilatation mode)
};

// Small-dilatation mode: a one-parameter family eps -> diffeo with
// K_phi <= 1 + delta(eps); fits C in ratio <= 1 + C delta^{1-theta}.
QuasiIsoReport verify_quasiisometry_small_dilatation(
    const std::function<TestDiffeo(double)>& family, const std::vector<double>& eps_grid,
    const QuasiIsoConfig& cfg = {});

// Asymptotically holomorphic mode: |mu(z)| <= b0 |Im z|^{r-1}; fits C in
// ratio <= 1 + C |Im z|^{(r-1)(1-theta)}.
QuasiIsoReport verify_quasiisometry_asymptotic(const TestDiffeo& phi, double r,
                                               const QuasiIsoConfig& cfg = {});

}  // namespace ahpl::hyperbolic
