#pragma once

#include <array>
#include <functional>

#include "ahpl/numeric.hpp"

namespace ahpl::matcalc {

// Planar maps carry first derivatives as 2x2 matrices and second derivatives
// as 2x4 matrices: the juxtaposition [H_u | H_v] of the Hessians of the two
// scalar components.

struct Mat2 {
    double m[2][2] = {{0, 0}, {0, 0}};

    static Mat2 identity() { return {{{1, 0}, {0, 1}}}; }
    static Mat2 scalar(double s) { return {{{s, 0}, {0, s}}}; }
    static Mat2 conformal(Complex w) {  // multiplication by w as a real matrix
        return {{{w.real(), -w.imag()}, {w.imag(), w.real()}}};
    }

    double det() const { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }
    double trace() const { return m[0][0] + m[1][1]; }

    Complex apply(Complex v) const {
        return {m[0][0] * v.real() + m[0][1] * v.imag(),
                m[1][0] * v.real() + m[1][1] * v.imag()};
    }
    Mat2 operator*(const Mat2& o) const {
        Mat2 r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                r.m[i][j] = m[i][0] * o.m[0][j] + m[i][1] * o.m[1][j];
        return r;
    }
    Mat2 operator+(const Mat2& o) const {
        Mat2 r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) r.m[i][j] = m[i][j] + o.m[i][j];
        return r;
    }
    Mat2 operator*(double s) const {
        Mat2 r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) r.m[i][j] = m[i][j] * s;
        return r;
    }
    Mat2 transpose() const { return {{{m[0][0], m[1][0]}, {m[0][1], m[1][1]}}}; }
    Mat2 inverse() const;

    // Complex Wirtinger data of the linear map: dz = (u_x+v_y)/2 + i(v_x-u_y)/2,
    // dzbar = (u_x-v_y)/2 + i(v_x+u_y)/2.
    Complex dz() const { return {0.5 * (m[0][0] + m[1][1]), 0.5 * (m[1][0] - m[0][1])}; }
    Complex dzbar() const { return {0.5 * (m[0][0] - m[1][1]), 0.5 * (m[1][0] + m[0][1])}; }
};

struct Mat4 {
    double m[4][4] = {};
    static Mat4 identity() {
        Mat4 r;
        for (int i = 0; i < 4; ++i) r.m[i][i] = 1.0;
        return r;
    }
};

struct Mat24 {
    // Layout [H_u | H_v]: columns 0..1 are the Hessian of the first component,
    // columns 2..3 the Hessian of the second.
    double m[2][4] = {};

    Mat2 hess(int comp) const {
        Mat2 h;
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) h.m[r][c] = m[r][2 * comp + c];
        return h;
    }
    void set_hess(int comp, const Mat2& h) {
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) m[r][2 * comp + c] = h.m[r][c];
    }
    Mat24 operator+(const Mat24& o) const {
        Mat24 r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 4; ++j) r.m[i][j] = m[i][j] + o.m[i][j];
        return r;
    }
    double max_abs_diff(const Mat24& o) const {
        double d = 0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 4; ++j) d = std::max(d, std::abs(m[i][j] - o.m[i][j]));
        return d;
    }
    double hessian_symmetry_residual() const {
        return std::max(std::abs(m[0][1] - m[1][0]), std::abs(m[0][3] - m[1][2]));
    }
};

Mat4 kron(const Mat2& a, const Mat2& b);

// Largest singular value.
double op_norm(const Mat2& a);
double op_norm(const Mat24& a);
double op_norm(const Mat4& a);

// Value together with first and second derivative of a planar map at a point.
struct Jet2 {
    Complex value;
    Mat2 D;
    Mat24 D2;
};

// Jet of phi∘psi at z from the jet of phi at psi(z) and the jet of psi at z:
// D = Dphi·Dpsi, D2 = D2phi·(Dpsi⊗Dpsi) + Dphi·D2psi.
Jet2 compose_jet2(const Jet2& outer, const Jet2& inner);

// Jet of phi^k at z via the iterate formula
//   D2(phi^k) = D2phi∘phi^{k-1}·(Dphi^{k-1})^{⊗2}
//             + sum_j Dphi^{k-j}∘phi^j · D2phi∘phi^{j-1} · (Dphi^{j-1})^{⊗2}.
// The provider returns the one-step jet at a point and may throw OrbitEscaped.
using JetProvider = std::function<Jet2(Complex)>;
Jet2 iterate_jet2(const JetProvider& step, Complex z, int k);

// Central finite differences, O(h^2); test oracle.
using MapEval = std::function<Complex(Complex)>;
Jet2 fd_jet2(const MapEval& f, Complex z, double h);

inline double fd_default_step(double local_scale) {
    return std::cbrt(2.220446049250313e-16) * local_scale;
}

}  // namespace ahpl::matcalc
