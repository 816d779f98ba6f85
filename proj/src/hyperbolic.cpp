#include "ahpl/hyperbolic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ahpl/errors.hpp"

namespace ahpl::hyperbolic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double mobius_dist_unit(Complex z, Complex w) {
    double t = std::abs(z - w) / std::abs(1.0 - std::conj(z) * w);
    return std::log((1.0 + t) / (1.0 - t));
}

}  // namespace

HyperbolicDomain HyperbolicDomain::unit_disk() {
    return {Kind::UnitDisk, Disk{Complex(0, 0), 1.0}};
}
HyperbolicDomain HyperbolicDomain::disk(Complex center, double radius) {
    if (!(radius > 0)) throw ConfigError("disk radius must be positive");
    return {Kind::Disk, Disk{center, radius}};
}
HyperbolicDomain HyperbolicDomain::slit_plane() {
    return {Kind::SlitPlane, Disk{Complex(0, 0), 1.0}};
}
HyperbolicDomain HyperbolicDomain::slit_disk(Complex real_center, double radius) {
    if (std::abs(real_center.imag()) > 0)
        throw ConfigError("slit disk requires a real center");
    if (!(radius > 0)) throw ConfigError("disk radius must be positive");
    return {Kind::SlitDisk, Disk{real_center, radius}};
}

bool HyperbolicDomain::contains(Complex z) const {
    switch (kind_) {
        case Kind::UnitDisk:
            return std::abs(z) < 1.0;
        case Kind::Disk:
            return std::abs(z - disk_.center) < disk_.radius;
        case Kind::SlitPlane:
            return z.imag() != 0.0;
        case Kind::SlitDisk:
            return z.imag() != 0.0 && std::abs(z - disk_.center) < disk_.radius;
    }
    return false;
}

int HyperbolicDomain::component(Complex z) const {
    if (kind_ == Kind::UnitDisk || kind_ == Kind::Disk) return 0;
    return z.imag() > 0 ? 1 : -1;
}

namespace {

void require_inside(const HyperbolicDomain& d, Complex z) {
    if (d.contains(z)) return;
    bool slit_kind = d.kind() == HyperbolicDomain::Kind::SlitPlane ||
                     d.kind() == HyperbolicDomain::Kind::SlitDisk;
    if (slit_kind && z.imag() == 0.0) {
        if (d.kind() == HyperbolicDomain::Kind::SlitPlane ||
            std::abs(z - d.base_disk().center) < d.base_disk().radius)
            throw OnSlit("point lies on the real slit");
    }
    throw OutsideDomain("point outside hyperbolic domain");
}

}  // namespace

Complex HyperbolicDomain::chart(Complex z) const {
    if (kind_ != Kind::SlitDisk) throw ConfigError("chart: not a slit disk");
    bool lower = z.imag() < 0;
    Complex w = (z - disk_.center) / disk_.radius;
    if (lower) w = std::conj(w);
    // upper half-disk -> first quadrant -> upper half-plane -> unit disk
    Complex a = (1.0 + w) / (1.0 - w);
    Complex s = a * a;
    Complex chi = (s - Complex(0, 1)) / (s + Complex(0, 1));
    return lower ? std::conj(chi) : chi;
}

Complex HyperbolicDomain::chart_deriv(Complex z) const {
    if (kind_ != Kind::SlitDisk) throw ConfigError("chart: not a slit disk");
    bool lower = z.imag() < 0;
    Complex w = (z - disk_.center) / disk_.radius;
    if (lower) w = std::conj(w);
    Complex a = (1.0 + w) / (1.0 - w);
    Complex s = a * a;
    Complex dchi_ds = Complex(0, 2) / ((s + Complex(0, 1)) * (s + Complex(0, 1)));
    Complex ds_dw = 2.0 * a * (2.0 / ((1.0 - w) * (1.0 - w)));
    Complex d = dchi_ds * ds_dw / disk_.radius;
    return lower ? std::conj(d) : d;
}

Complex HyperbolicDomain::chart_alternate(Complex z) const {
    if (kind_ != Kind::SlitDisk) throw ConfigError("chart: not a slit disk");
    bool lower = z.imag() < 0;
    Complex w = (z - disk_.center) / disk_.radius;
    if (lower) w = std::conj(w);
    // Joukowski route: upper half-disk -> upper half-plane -> unit disk
    Complex s = -0.5 * (w + 1.0 / w);
    Complex chi = (s - Complex(0, 1)) / (s + Complex(0, 1));
    return lower ? std::conj(chi) : chi;
}

Complex HyperbolicDomain::chart_alternate_deriv(Complex z) const {
    if (kind_ != Kind::SlitDisk) throw ConfigError("chart: not a slit disk");
    bool lower = z.imag() < 0;
    Complex w = (z - disk_.center) / disk_.radius;
    if (lower) w = std::conj(w);
    Complex s = -0.5 * (w + 1.0 / w);
    Complex dchi_ds = Complex(0, 2) / ((s + Complex(0, 1)) * (s + Complex(0, 1)));
    Complex ds_dw = -0.5 * (1.0 - 1.0 / (w * w));
    Complex d = dchi_ds * ds_dw / disk_.radius;
    return lower ? std::conj(d) : d;
}

double HyperbolicDomain::rho_via_alternate_chart(Complex z) const {
    require_inside(*this, z);
    Complex chi = chart_alternate(z);
    return 2.0 / (1.0 - std::norm(chi)) * std::abs(chart_alternate_deriv(z));
}

double HyperbolicDomain::rho(Complex z) const {
    require_inside(*this, z);
    switch (kind_) {
        case Kind::UnitDisk:
            return 2.0 / (1.0 - std::norm(z));
        case Kind::Disk: {
            double R = disk_.radius;
            return 2.0 * R / (R * R - std::norm(z - disk_.center));
        }
        case Kind::SlitPlane:
            return 1.0 / std::abs(z.imag());
        case Kind::SlitDisk: {
            Complex chi = chart(z);
            return 2.0 / (1.0 - std::norm(chi)) * std::abs(chart_deriv(z));
        }
    }
    return 0.0;
}

double HyperbolicDomain::dist(Complex z, Complex w) const {
    require_inside(*this, z);
    require_inside(*this, w);
    switch (kind_) {
        case Kind::UnitDisk:
            return mobius_dist_unit(z, w);
        case Kind::Disk:
            return mobius_dist_unit((z - disk_.center) / disk_.radius,
                                    (w - disk_.center) / disk_.radius);
        case Kind::SlitPlane: {
            if (component(z) != component(w)) return kInf;
            double yz = std::abs(z.imag()), yw = std::abs(w.imag());
            return std::acosh(1.0 + std::norm(z - w) / (2.0 * yz * yw));
        }
        case Kind::SlitDisk: {
            if (component(z) != component(w)) return kInf;
            return mobius_dist_unit(chart(z), chart(w));
        }
    }
    return 0.0;
}

double HyperbolicDomain::diameter(std::span<const Complex> pts) const {
    double d = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            d = std::max(d, dist(pts[i], pts[j]));
    return d;
}

double HyperbolicDomain::derivative_ratio(Complex z, Complex Fz, const Mat2& DF,
                                          Complex v) const {
    return rho(Fz) * std::abs(DF.apply(v)) / (rho(z) * std::abs(v));
}

double HyperbolicDomain::hyperbolic_jacobian(Complex z, Complex Fz, const Mat2& DF) const {
    return DF.det() * sqr(rho(Fz) / rho(z));
}

// ---------------------------------------------------------------------------

double mcmullen_phi(double s) {
    if (!(s > 0)) throw NonPositiveArgument("Phi requires s > 0");
    double t = std::exp(-s);
    if (t < 0.1) return 1.0 - mcmullen_one_minus_phi(s);
    return std::sinh(s) * 2.0 * std::atanh(t);
}

double mcmullen_one_minus_phi(double s) {
    if (!(s > 0)) throw NonPositiveArgument("Phi requires s > 0");
    double t = std::exp(-s);
    if (t < 0.1) {
        // 1 - Phi = sum_{k>=1} 2 t^{2k} / (4k^2 - 1)
        double t2 = t * t, pw = t2, acc = 0.0;
        for (int k = 1; k <= 12; ++k) {
            acc += 2.0 * pw / (4.0 * k * k - 1.0);
            pw *= t2;
        }
        return acc;
    }
    return 1.0 - std::sinh(s) * 2.0 * std::atanh(t);
}

double mcmullen_phi_gap(double s) {
    double t = std::exp(-s);
    if (t < 0.1) {
        // (1/3) t^2 + sum_{k>=2} 2 t^{2k} / (4k^2 - 1)
        double t2 = t * t, pw = t2 * t2, acc = t2 / 3.0;
        for (int k = 2; k <= 12; ++k) {
            acc += 2.0 * pw / (4.0 * k * k - 1.0);
            pw *= t2;
        }
        return acc;
    }
    return (1.0 - t * t / 3.0) - mcmullen_phi(s);
}

double mod_disk_minus_disk(Complex z, double r) {
    double az = std::abs(z);
    if (!(r > 0) || !(r < 1.0 - az))
        throw RadiusTooLarge("need 0 < r < 1 - |z|");
    return std::log((1.0 - az * az + az * r) / r);
}

double b_theta(double t, double theta, double C0) {
    return 3.0 * sqr(2.0 + 180.0 * std::exp(1.0 / (theta * std::exp(1.0))) * C0 * t);
}

double a_theta(double alpha, double m, double theta, double C0) {
    return b_theta(1040.0 * std::pow(alpha, 7) * m * m, theta, C0);
}

// ---------------------------------------------------------------------------
// Quasi-isometry fits

namespace {

struct SampleDev {
    double dev = 0.0;    // max(ratio, 1/ratio) - 1
    double scale = 0.0;  // delta or |Im z|, the variable of the fit
};

std::vector<Complex> sample_points(const QuasiIsoConfig& cfg, Rng& rng) {
    std::vector<Complex> pts;
    pts.reserve(static_cast<std::size_t>(cfg.samples));
    const Disk& V = cfg.V;
    while (pts.size() < static_cast<std::size_t>(cfg.samples)) {
        Complex z = rng.in_disk(V.center, cfg.inner_fraction * V.radius);
        if (std::abs(z.imag()) < cfg.y_min_fraction * V.radius) continue;
        pts.push_back(z);
    }
    return pts;
}

double ratio_dev(const HyperbolicDomain& Y, const TestDiffeo& phi, Complex z, Rng& rng) {
    Mat2 D = phi.DF(z);
    if (D.det() <= 0) throw NotDiffeo("det DF <= 0 at a sampled point");
    Complex Fz = phi.F(z);
    if (!Y.contains(Fz) || Y.component(Fz) != Y.component(z)) return -1.0;
    double worst = 1.0;
    for (int k = 0; k < 4; ++k) {
        double ang = rng.uniform(0.0, 6.283185307179586);
        Complex v(std::cos(ang), std::sin(ang));
        double r = Y.derivative_ratio(z, Fz, D, v);
        worst = std::max(worst, std::max(r, 1.0 / r));
    }
    return worst - 1.0;
}

QuasiIsoReport fit_report(const std::vector<SampleDev>& devs,
                          const std::vector<double>& thetas, double exponent_base) {
    QuasiIsoReport rep;
    double lx_mean = 0, ly_mean = 0;
    int used = 0;
    for (const SampleDev& s : devs) {
        rep.max_ratio_dev = std::max(rep.max_ratio_dev, s.dev);
        if (s.dev > 1e-14 && s.scale > 0) {
            lx_mean += std::log(s.scale);
            ly_mean += std::log(s.dev);
            ++used;
        }
    }
    if (used >= 2) {
        lx_mean /= used;
        ly_mean /= used;
        double num = 0, den = 0;
        for (const SampleDev& s : devs) {
            if (s.dev > 1e-14 && s.scale > 0) {
                num += (std::log(s.scale) - lx_mean) * (std::log(s.dev) - ly_mean);
                den += sqr(std::log(s.scale) - lx_mean);
            }
        }
        rep.fitted_exponent = den > 0 ? num / den : 0.0;
    }
    for (double theta : thetas) {
        QuasiIsoThetaFit fit;
        fit.theta = theta;
        for (const SampleDev& s : devs) {
            if (s.scale <= 0) continue;
            double bound_scale = std::pow(s.scale, exponent_base * (1.0 - theta));
            if (bound_scale > 0) fit.fitted_C = std::max(fit.fitted_C, s.dev / bound_scale);
        }
        for (const SampleDev& s : devs) {
            if (s.scale <= 0) continue;
            double bound = fit.fitted_C * std::pow(s.scale, exponent_base * (1.0 - theta));
            fit.worst_violation = std::max(fit.worst_violation, s.dev - bound);
        }
        rep.fits.push_back(fit);
    }
    return rep;
}

}  // namespace

QuasiIsoReport verify_quasiisometry_small_dilatation(
    const std::function<TestDiffeo(double)>& family, const std::vector<double>& eps_grid,
    const QuasiIsoConfig& cfg) {
    HyperbolicDomain Y = HyperbolicDomain::slit_disk(cfg.V.center, cfg.V.radius);
    Rng rng(cfg.seed);
    std::vector<Complex> pts = sample_points(cfg, rng);

    std::vector<SampleDev> devs;
    double max_delta = 0.0;
    for (double eps : eps_grid) {
        TestDiffeo phi = family(eps);
        double dev = 0.0, delta = 0.0;
        for (Complex z : pts) {
            double d = ratio_dev(Y, phi, z, rng);
            if (d >= 0) dev = std::max(dev, d);
            double am = std::abs(phi.mu(z));
            delta = std::max(delta, (1.0 + am) / (1.0 - am) - 1.0);
        }
        devs.push_back({dev, delta});
        max_delta = std::max(max_delta, delta);
    }
    QuasiIsoReport rep = fit_report(devs, cfg.thetas, 1.0);
    rep.measured_delta = max_delta;
    return rep;
}

QuasiIsoReport verify_quasiisometry_asymptotic(const TestDiffeo& phi, double r,
                                               const QuasiIsoConfig& cfg) {
    HyperbolicDomain Y = HyperbolicDomain::slit_disk(cfg.V.center, cfg.V.radius);
    Rng rng(cfg.seed);
    std::vector<Complex> pts = sample_points(cfg, rng);

    std::vector<SampleDev> devs;
    double max_delta = 0.0;
    for (Complex z : pts) {
        double d = ratio_dev(Y, phi, z, rng);
        if (d < 0) continue;
        devs.push_back({d, std::abs(z.imag())});
        double am = std::abs(phi.mu(z));
        max_delta = std::max(max_delta, (1.0 + am) / (1.0 - am) - 1.0);
    }
    QuasiIsoReport rep = fit_report(devs, cfg.thetas, r - 1.0);
    rep.measured_delta = max_delta;
    return rep;
}

}  // namespace ahpl::hyperbolic
