#include "ahpl/matcalc.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ahpl/errors.hpp"

namespace ahpl::matcalc {

Mat2 Mat2::inverse() const {
    double d = det();
    if (d == 0.0) throw NumericError("Mat2::inverse: singular matrix");
    return {{{m[1][1] / d, -m[0][1] / d}, {-m[1][0] / d, m[0][0] / d}}};
}

Mat4 kron(const Mat2& a, const Mat2& b) {
    Mat4 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l)
                    r.m[2 * i + k][2 * j + l] = a.m[i][j] * b.m[k][l];
    return r;
}

double op_norm(const Mat2& a) {
    // Closed form via the larger eigenvalue of A^T A.
    double e = a.m[0][0] * a.m[0][0] + a.m[1][0] * a.m[1][0];
    double g = a.m[0][1] * a.m[0][1] + a.m[1][1] * a.m[1][1];
    double f = a.m[0][0] * a.m[0][1] + a.m[1][0] * a.m[1][1];
    double mid = 0.5 * (e + g);
    double rad = std::sqrt(0.25 * (e - g) * (e - g) + f * f);
    return std::sqrt(std::max(0.0, mid + rad));
}

double op_norm(const Mat24& a) {
    // A A^T is 2x2 symmetric.
    double e = 0, f = 0, g = 0;
    for (int j = 0; j < 4; ++j) {
        e += a.m[0][j] * a.m[0][j];
        f += a.m[0][j] * a.m[1][j];
        g += a.m[1][j] * a.m[1][j];
    }
    double mid = 0.5 * (e + g);
    double rad = std::sqrt(0.25 * (e - g) * (e - g) + f * f);
    return std::sqrt(std::max(0.0, mid + rad));
}

double op_norm(const Mat4& a) {
    // Jacobi eigenvalue iteration on A^T A, tolerance 1e-13.
    double s[4][4];
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            double v = 0;
            for (int k = 0; k < 4; ++k) v += a.m[k][i] * a.m[k][j];
            s[i][j] = v;
        }
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) off += s[i][j] * s[i][j];
        if (off < 1e-26) break;
        for (int p = 0; p < 4; ++p)
            for (int q = p + 1; q < 4; ++q) {
                if (std::abs(s[p][q]) < 1e-300) continue;
                double theta = 0.5 * (s[q][q] - s[p][p]) / s[p][q];
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double sn = t * c;
                for (int k = 0; k < 4; ++k) {
                    double skp = s[k][p], skq = s[k][q];
                    s[k][p] = c * skp - sn * skq;
                    s[k][q] = sn * skp + c * skq;
                }
                for (int k = 0; k < 4; ++k) {
                    double spk = s[p][k], sqk = s[q][k];
                    s[p][k] = c * spk - sn * sqk;
                    s[q][k] = sn * spk + c * sqk;
                }
            }
    }
    double lam = 0;
    for (int i = 0; i < 4; ++i) lam = std::max(lam, s[i][i]);
    return std::sqrt(std::max(0.0, lam));
}

namespace {

// Internal row-vectorized form of the second derivative: row i is the
// row-major flattening of the Hessian of component i.  In this form the
// composition rule is literally D2' = D2 · (B ⊗ B) + A · D2_inner.
struct RowVec2 {
    double r[2][4] = {};
};

RowVec2 to_rowvec(const Mat24& d2) {
    RowVec2 v;
    for (int i = 0; i < 2; ++i) {
        Mat2 h = d2.hess(i);
        v.r[i][0] = h.m[0][0];
        v.r[i][1] = h.m[0][1];
        v.r[i][2] = h.m[1][0];
        v.r[i][3] = h.m[1][1];
    }
    return v;
}

Mat24 from_rowvec(const RowVec2& v) {
    Mat24 d2;
    for (int i = 0; i < 2; ++i) {
        Mat2 h;
        h.m[0][0] = v.r[i][0];
        h.m[0][1] = v.r[i][1];
        h.m[1][0] = v.r[i][2];
        h.m[1][1] = v.r[i][3];
        d2.set_hess(i, h);
    }
    return d2;
}

RowVec2 mul(const RowVec2& v, const Mat4& k) {
    RowVec2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 4; ++j) {
            double s = 0;
            for (int l = 0; l < 4; ++l) s += v.r[i][l] * k.m[l][j];
            r.r[i][j] = s;
        }
    return r;
}

RowVec2 mul(const Mat2& a, const RowVec2& v) {
    RowVec2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 4; ++j)
            r.r[i][j] = a.m[i][0] * v.r[0][j] + a.m[i][1] * v.r[1][j];
    return r;
}

RowVec2 add(const RowVec2& a, const RowVec2& b) {
    RowVec2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 4; ++j) r.r[i][j] = a.r[i][j] + b.r[i][j];
    return r;
}

}  // namespace

Jet2 compose_jet2(const Jet2& outer, const Jet2& inner) {
    Jet2 out;
    out.value = outer.value;
    out.D = outer.D * inner.D;
    Mat4 bb = kron(inner.D, inner.D);
    RowVec2 t1 = mul(to_rowvec(outer.D2), bb);
    RowVec2 t2 = mul(outer.D, to_rowvec(inner.D2));
    out.D2 = from_rowvec(add(t1, t2));
    return out;
}

Jet2 iterate_jet2(const JetProvider& step, Complex z, int k) {
    if (k < 1) throw NumericError("iterate_jet2: k must be >= 1");

    // One pass along the orbit, accumulating Dphi^j and the second-derivative
    // sum as each term becomes available.
    Complex zj = z;
    Mat2 prefix = Mat2::identity();  // Dphi^j at z
    std::vector<Mat2> step_D(k);
    std::vector<RowVec2> terms(k);   // D2phi∘phi^{j-1}·(Dphi^{j-1})^{⊗2}
    for (int j = 0; j < k; ++j) {
        Jet2 sj = step(zj);
        step_D[j] = sj.D;
        terms[j] = mul(to_rowvec(sj.D2), kron(prefix, prefix));
        prefix = sj.D * prefix;
        zj = sj.value;
    }

    // Suffix products Dphi^{k-1-j} evaluated along the orbit multiply each term.
    RowVec2 total = terms[k - 1];
    Mat2 suffix = step_D[k - 1];
    for (int j = k - 2; j >= 0; --j) {
        total = add(total, mul(suffix, terms[j]));
        suffix = suffix * step_D[j];
    }

    Jet2 out;
    out.value = zj;
    out.D = prefix;
    out.D2 = from_rowvec(total);
    return out;
}

Jet2 fd_jet2(const MapEval& f, Complex z, double h) {
    if (!(h > 0)) throw StencilOutsideDomain("fd_jet2: non-positive step");
    const Complex ex(h, 0), ey(0, h);

    auto val = [&](Complex w) {
        Complex v = f(w);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw StencilOutsideDomain("fd_jet2: stencil point not evaluable");
        return v;
    };

    Complex fc = val(z);
    Complex fxp = val(z + ex), fxm = val(z - ex);
    Complex fyp = val(z + ey), fym = val(z - ey);

    Jet2 out;
    out.value = fc;
    Complex fx = (fxp - fxm) / (2 * h);
    Complex fy = (fyp - fym) / (2 * h);
    out.D.m[0][0] = fx.real();
    out.D.m[1][0] = fx.imag();
    out.D.m[0][1] = fy.real();
    out.D.m[1][1] = fy.imag();

    Complex fxx = (fxp - 2.0 * fc + fxm) / (h * h);
    Complex fyy = (fyp - 2.0 * fc + fym) / (h * h);
    Complex fxy = (val(z + ex + ey) - val(z + ex - ey) - val(z - ex + ey) + val(z - ex - ey)) /
                  (4 * h * h);
    Mat2 hu{{{fxx.real(), fxy.real()}, {fxy.real(), fyy.real()}}};
    Mat2 hv{{{fxx.imag(), fxy.imag()}, {fxy.imag(), fyy.imag()}}};
    out.D2.set_hess(0, hu);
    out.D2.set_hess(1, hv);
    return out;
}

}  // namespace ahpl::matcalc
