#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "ahpl/matcalc.hpp"
#include "ahpl/unimodal.hpp"

namespace ahpl::extension {

using matcalc::Jet2;
using matcalc::Mat2;

// Asymptotically holomorphic extension by truncated vertical Taylor sum:
//   F(x + iy) = sum_{k=0}^{m} f^(k)(x) (iy)^k / k!
// so that dbar F(x+iy) = (1/2) f^(m+1)(x) (iy)^m / m! in closed form and the
// extension is asymptotically holomorphic of order m+1.
class AHExtension {
public:
    AHExtension(std::shared_ptr<const unimodal::RealMap1D> base, int m);

    int m() const { return m_; }
    int order() const { return m_ + 1; }  // asymptotic holomorphy order r
    const unimodal::RealMap1D& base() const { return *base_; }

    Complex value(Complex z) const;
    Complex dz(Complex z) const;     // Wirtinger d/dz
    Complex dzbar(Complex z) const;  // Wirtinger d/dzbar, closed form
    Mat2 df(Complex z) const;
    Jet2 jacobian_jet(Complex z) const;

    // mu = dzbar F / dz F and K = (1+|mu|)/(1-|mu|); throws CriticalPoint when
    // |dz F| < tol.
    std::pair<Complex, double> mu_and_K(Complex z, double tol = 1e-12) const;
    Complex mu(Complex z, double tol = 1e-12) const { return mu_and_K(z, tol).first; }

private:
    std::shared_ptr<const unimodal::RealMap1D> base_;
    int m_;
};

AHExtension extend(std::shared_ptr<const unimodal::RealMap1D> base, int m);
AHExtension extend(const unimodal::UnimodalMap& f, int m);

struct StripSpec {
    double x_lo = 0.1, x_hi = 0.8;  // avoid critical points of the base map
    double y_lo = 1e-4, y_hi = 1e-2;
    int nx = 8;
    int ny = 24;  // log-spaced in y
};

struct OrderFit {
    double slope = 0.0;      // fitted exponent of |mu| against |Im z|
    double constant = 0.0;   // geometric mean prefactor
    bool pass = false;       // |slope - m| < 0.05
};

// Least-squares slope of log|mu| against log|y| over the strip; throws
// DegenerateSamples when mu vanishes identically (exact polynomial case).
OrderFit verify_order(const AHExtension& ext, const StripSpec& strip = {});

// Largest |y| with a guaranteed |mu| < margin on [-1,1]:
// y_max = (m! margin / sup|f^(m+1)|)^(1/m).
double quasiregular_strip_height(const AHExtension& ext, double margin = 0.5,
                                 int samples = 256);

}  // namespace ahpl::extension
