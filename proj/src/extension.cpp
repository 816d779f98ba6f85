#include "ahpl/extension.hpp"

#include <cmath>

#include "ahpl/errors.hpp"

namespace ahpl::extension {

using unimodal::Jet1;

AHExtension::AHExtension(std::shared_ptr<const unimodal::RealMap1D> base, int m)
    : base_(std::move(base)), m_(m) {
    if (m_ < 2) throw ConfigError("truncation order m must be >= 2");
    if (m_ + 2 > base_->max_jet_order())
        throw InsufficientJets("base map lacks order-" + std::to_string(m_ + 2) + " jets");
}

namespace {

// Horner sum of c_k (iy)^k / k! given c_k = f^(k)(x) / k! jet coefficients.
Complex vertical_sum(const Jet1& j, int lo, int hi, double y) {
    Complex iy(0.0, y);
    Complex acc(0.0, 0.0);
    for (int k = hi; k >= lo; --k) acc = acc * iy + Complex(j.c[static_cast<std::size_t>(k)], 0.0);
    return acc;
}

}  // namespace

Complex AHExtension::value(Complex z) const {
    Jet1 j = base_->real_jet(z.real(), m_);
    return vertical_sum(j, 0, m_, z.imag());
}

Complex AHExtension::dzbar(Complex z) const {
    // (1/2) f^(m+1)(x) (iy)^m / m!  =  (1/2) (m+1) c_{m+1} (iy)^m
    Jet1 j = base_->real_jet(z.real(), m_ + 1);
    Complex iym = std::pow(Complex(0.0, z.imag()), m_);
    return 0.5 * (m_ + 1) * j.c[static_cast<std::size_t>(m_ + 1)] * iym;
}

Complex AHExtension::dz(Complex z) const {
    // F_x = sum_{k<=m} f^(k+1)(x)(iy)^k/k!; dz = F_x - dzbar
    Jet1 j = base_->real_jet(z.real(), m_ + 1);
    Jet1 shift;  // coefficients of f'(x + t): shift.c[k] = f^(k+1)(x)/k!
    shift.ord = m_;
    for (int k = 0; k <= m_; ++k)
        shift.c[static_cast<std::size_t>(k)] = (k + 1) * j.c[static_cast<std::size_t>(k + 1)];
    Complex fx = vertical_sum(shift, 0, m_, z.imag());
    Complex iym = std::pow(Complex(0.0, z.imag()), m_);
    Complex db = 0.5 * (m_ + 1) * j.c[static_cast<std::size_t>(m_ + 1)] * iym;
    return fx - db;
}

Mat2 AHExtension::df(Complex z) const {
    Complex p = dz(z), q = dzbar(z);
    Complex fx = p + q;
    Complex fy = Complex(0, 1) * (p - q);
    Mat2 d;
    d.m[0][0] = fx.real();
    d.m[1][0] = fx.imag();
    d.m[0][1] = fy.real();
    d.m[1][1] = fy.imag();
    return d;
}

Jet2 AHExtension::jacobian_jet(Complex z) const {
    Jet1 j = base_->real_jet(z.real(), m_ + 2);
    double y = z.imag();

    // F, F_x, F_xx as vertical sums of shifted jets; F_y, F_xy, F_yy by
    // differentiating the sum in y term by term.
    Jet1 d1, d2;
    d1.ord = m_;
    d2.ord = m_;
    for (int k = 0; k <= m_; ++k) {
        d1.c[static_cast<std::size_t>(k)] = (k + 1) * j.c[static_cast<std::size_t>(k + 1)];
        d2.c[static_cast<std::size_t>(k)] =
            (k + 1) * (k + 2) * j.c[static_cast<std::size_t>(k + 2)];
    }
    Complex F = vertical_sum(j, 0, m_, y);
    Complex Fx = vertical_sum(d1, 0, m_, y);
    Complex Fxx = vertical_sum(d2, 0, m_, y);

    // F_y = i sum_{k>=1} f^(k)(x) (iy)^{k-1} / (k-1)!
    Jet1 dy, dyy, dxy;
    dy.ord = m_ - 1;
    for (int k = 0; k <= m_ - 1; ++k)
        dy.c[static_cast<std::size_t>(k)] = (k + 1) * j.c[static_cast<std::size_t>(k + 1)];
    Complex Fy = Complex(0, 1) * vertical_sum(dy, 0, m_ - 1, y);

    dxy.ord = m_ - 1;
    for (int k = 0; k <= m_ - 1; ++k)
        dxy.c[static_cast<std::size_t>(k)] =
            (k + 1) * (k + 2) * j.c[static_cast<std::size_t>(k + 2)];
    Complex Fxy = Complex(0, 1) * vertical_sum(dxy, 0, m_ - 1, y);

    Complex Fyy(0.0, 0.0);
    if (m_ >= 2) {
        dyy.ord = m_ - 2;
        for (int k = 0; k <= m_ - 2; ++k)
            dyy.c[static_cast<std::size_t>(k)] =
                (k + 1) * (k + 2) * j.c[static_cast<std::size_t>(k + 2)];
        Fyy = -vertical_sum(dyy, 0, m_ - 2, y);
    }

    Jet2 out;
    out.value = F;
    out.D.m[0][0] = Fx.real();
    out.D.m[1][0] = Fx.imag();
    out.D.m[0][1] = Fy.real();
    out.D.m[1][1] = Fy.imag();
    out.D2.set_hess(0, Mat2{{{Fxx.real(), Fxy.real()}, {Fxy.real(), Fyy.real()}}});
    out.D2.set_hess(1, Mat2{{{Fxx.imag(), Fxy.imag()}, {Fxy.imag(), Fyy.imag()}}});
    return out;
}

std::pair<Complex, double> AHExtension::mu_and_K(Complex z, double tol) const {
    Complex p = dz(z);
    if (std::abs(p) < tol)
        throw CriticalPoint("dz F vanishes near z = (" + std::to_string(z.real()) + ", " +
                            std::to_string(z.imag()) + ")");
    Complex mu = dzbar(z) / p;
    double am = std::abs(mu);
    double K = (1.0 + am) / (1.0 - am);
    return {mu, K};
}

AHExtension extend(std::shared_ptr<const unimodal::RealMap1D> base, int m) {
    return AHExtension(std::move(base), m);
}

AHExtension extend(const unimodal::UnimodalMap& f, int m) {
    return AHExtension(std::make_shared<unimodal::FamilyMapView>(f), m);
}

OrderFit verify_order(const AHExtension& ext, const StripSpec& strip) {
    std::vector<double> lx, ly;
    bool any = false;
    for (int ix = 0; ix < strip.nx; ++ix) {
        double x = strip.x_lo + (strip.x_hi - strip.x_lo) * ix / std::max(1, strip.nx - 1);
        for (int iy = 0; iy < strip.ny; ++iy) {
            double t = static_cast<double>(iy) / std::max(1, strip.ny - 1);
            double y = strip.y_lo * std::pow(strip.y_hi / strip.y_lo, t);
            Complex mu = ext.mu(Complex(x, y));
            double am = std::abs(mu);
            if (am >= 1e-300) any = true;
            lx.push_back(std::log(y));
            ly.push_back(am >= 1e-300 ? std::log(am) : -690.0);
        }
    }
    if (!any) throw DegenerateSamples("mu vanishes identically on the strip");

    double mx = 0, my = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= lx.size();
    my /= ly.size();
    double num = 0, den = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        num += (lx[i] - mx) * (ly[i] - my);
        den += (lx[i] - mx) * (lx[i] - mx);
    }
    OrderFit fit;
    fit.slope = num / den;
    fit.constant = std::exp(my - fit.slope * mx);
    fit.pass = std::abs(fit.slope - ext.m()) < 0.05;
    return fit;
}

double quasiregular_strip_height(const AHExtension& ext, double margin, int samples) {
    double sup = 0.0;
    for (int i = 0; i <= samples; ++i) {
        double x = -1.0 + 2.0 * i / samples;
        unimodal::Jet1 j = ext.base().real_jet(x, ext.m() + 1);
        double fact = 1.0;
        for (int k = 2; k <= ext.m() + 1; ++k) fact *= k;
        sup = std::max(sup, std::abs(j.c[static_cast<std::size_t>(ext.m() + 1)]) * fact);
    }
    if (sup == 0.0) return 1e300;  // exactly holomorphic
    double mfact = 1.0;
    for (int k = 2; k <= ext.m(); ++k) mfact *= k;
    return std::pow(mfact * margin / sup, 1.0 / ext.m());
}

}  // namespace ahpl::extension
