#include "ahpl/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "ahpl/errors.hpp"

namespace ahpl::dynamics {

int ScaleIndex::k(Complex z) const {
    double ay = std::abs(z.imag());
    if (ay == 0.0) return kRealAxis;
    double t = ay * alpha * M;
    if (t > 1.0) return 0;
    double lam = lambda();
    int k = static_cast<int>(std::ceil(std::log(t) / std::log(lam)));
    if (k < 1) k = 1;
    while (std::pow(lam, k) > t) ++k;
    while (k > 1 && std::pow(lam, k - 1) <= t) --k;
    return k;
}

Complex AHPLMap::G(Complex z) const {
    for (long long i = 0; i < q; ++i) z = ext->value(z);
    return z;
}

std::pair<Complex, Mat2> AHPLMap::G_and_DG(Complex z) const {
    Mat2 D = Mat2::identity();
    for (long long i = 0; i < q; ++i) {
        D = ext->df(z) * D;
        z = ext->value(z);
    }
    return {z, D};
}

Jet2 AHPLMap::G_jet2(Complex z) const {
    Jet2 acc = ext->jacobian_jet(z);
    for (long long i = 1; i < q; ++i) acc = matcalc::compose_jet2(ext->jacobian_jet(acc.value), acc);
    return acc;
}

std::pair<Complex, Mat2> AHPLMap::G_and_DG_rescaled(Complex zh) const {
    auto [v, D] = G_and_DG(lambda * zh);
    return {v / lambda, D};
}

Jet2 AHPLMap::G_jet2_rescaled(Complex zh) const {
    Jet2 j = G_jet2(lambda * zh);
    j.value /= lambda;
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 4; ++k) j.D2.m[i][k] *= lambda;
    return j;
}

double AHPLMap::boundary_radius(double angle) const {
    double a = angle < 0 ? angle + 6.283185307179586476925287 : angle;
    double pos = a / 6.283185307179586476925287 * radial_.size();
    std::size_t i0 = static_cast<std::size_t>(pos) % radial_.size();
    std::size_t i1 = (i0 + 1) % radial_.size();
    double frac = pos - std::floor(pos);
    return radial_[i0] * (1 - frac) + radial_[i1] * frac;
}

bool AHPLMap::in_U(Complex z) const {
    double az = std::abs(z);
    if (az >= Rv) return false;
    if (star_shaped) return az < boundary_radius(std::arg(z));
    // winding-number fallback
    int crossings = 0;
    std::size_t n = boundary.size();
    for (std::size_t i = 0; i < n; ++i) {
        Complex a = boundary[i] - z, b = boundary[(i + 1) % n] - z;
        if ((a.imag() > 0) != (b.imag() > 0)) {
            double xc = a.real() + a.imag() * (b.real() - a.real()) / (a.imag() - b.imag());
            if (xc > 0) ++crossings;
        }
    }
    return crossings % 2 == 1;
}

std::vector<Complex> AHPLMap::boundary_rescaled() const {
    std::vector<Complex> out;
    out.reserve(boundary.size());
    for (Complex z : boundary) out.push_back(z / lambda);
    return out;
}

// ---------------------------------------------------------------------------

AHPLMap build_domains(std::shared_ptr<const AHExtension> ext, const unimodal::Tower& tower,
                      int n, double c_V, const BuildOptions& opts) {
    if (!(c_V > 1.0)) throw ConfigError("c_V must exceed 1");
    const unimodal::TowerLevel& lv = tower.level(n);

    AHPLMap map;
    map.ext = std::move(ext);
    map.q = lv.q;
    map.degree = tower.base.d();
    map.level = n;
    map.lambda = lv.lambda;
    map.c_V = c_V;
    map.Rv = c_V * std::abs(lv.lambda);
    const double Rv = map.Rv;

    // real boundary point: smallest x > 0 with |G(x)| = Rv
    double step = Rv / 256.0, x = 0.0, xprev = 0.0;
    while (true) {
        x += step;
        if (x > Rv) throw DomainsTouch("real trace of U covers the diameter of V");
        if (std::abs(map.G(Complex(x, 0))) >= Rv) break;
        xprev = x;
    }
    double lo = xprev, hi = x;
    for (int it = 0; it < 100; ++it) {
        double mid = 0.5 * (lo + hi);
        (std::abs(map.G(Complex(mid, 0))) >= Rv ? hi : lo) = mid;
    }
    map.x_right = 0.5 * (lo + hi);
    if (map.x_right >= Rv * (1.0 - opts.gap_margin))
        throw DomainsTouch("real trace of U reaches dV");
    double sigma = map.G(Complex(map.x_right, 0)).real() > 0 ? 1.0 : -1.0;
    double psi0 = sigma > 0 ? 0.0 : 3.141592653589793238463;

    // Continuation over half the image sweep (pi * degree); the extension is
    // exactly conjugation-equivariant, so the lower half of the curve is the
    // mirror of the upper half, and evenness pins both real endpoints.
    const int N = opts.boundary_points;
    const int half = N / 2;
    const double two_pi = 6.283185307179586476925287;
    const double dpsi = map.degree * two_pi / N;
    std::vector<Complex> curve(static_cast<std::size_t>(N));
    Complex z(map.x_right, 0.0);
    curve[0] = z;
    Complex w_prev = std::polar(Rv, psi0);
    for (int j = 1; j <= half; ++j) {
        Complex w = std::polar(Rv, psi0 + dpsi * j);
        z += map.G_and_DG(z).second.inverse().apply(w - w_prev);
        bool ok = false;
        Complex best = z;
        double best_err = 1e300;
        // rounding of the q-fold iterate floors the attainable residual
        double tol = std::max(opts.newton_tol, 2e-12 * static_cast<double>(map.q)) * Rv;
        for (int it = 0; it < opts.newton_max_iter; ++it) {
            auto [val, DJ] = map.G_and_DG(z);
            double err = std::abs(val - w);
            if (err < best_err) {
                best_err = err;
                best = z;
            }
            if (err < tol) {
                ok = true;
                break;
            }
            z -= DJ.inverse().apply(val - w);
            if (std::abs(z) > Rv * (1.0 + 1e-9))
                throw PullbackEscaped("continuation left V at step " + std::to_string(j));
        }
        if (!ok) {
            if (best_err < 1e3 * tol)
                z = best;
            else
                throw PullbackEscaped("corrector stalled at step " + std::to_string(j));
        }
        if (std::abs(z) > Rv * (1.0 + 1e-9))
            throw PullbackEscaped("boundary left V at step " + std::to_string(j));
        if (j < half) curve[static_cast<std::size_t>(j)] = z;
        w_prev = w;
    }
    // the half-sweep must land on the mirror real endpoint -x_right
    if (std::abs(z - curve.front()) < 1e-6 * Rv)
        throw WindingMismatch("pullback closed after one sheet");
    if (std::abs(z.imag()) > 1e-6 * Rv || z.real() >= 0.0)
        throw WindingMismatch("half sweep missed the mirror endpoint");
    map.symmetry_residual = std::abs(z - Complex(-map.x_right, 0.0)) / Rv;
    curve[static_cast<std::size_t>(half)] = Complex(-map.x_right, 0.0);
    for (int j = half + 1; j < N; ++j)
        curve[static_cast<std::size_t>(j)] = std::conj(curve[static_cast<std::size_t>(N - j)]);
    map.boundary = std::move(curve);

    map.r_inner = 1e300;
    map.r_outer = 0.0;
    for (Complex v : map.boundary) {
        double av = std::abs(v);
        map.r_inner = std::min(map.r_inner, av);
        map.r_outer = std::max(map.r_outer, av);
    }
    if (map.r_outer > Rv * (1.0 - opts.gap_margin))
        throw DomainsTouch("U reaches within the configured gap of dV");
    map.mod_lower = std::log(Rv / map.r_outer);
    map.mod_upper = std::log(Rv / map.r_inner);

    // star-shapedness and the radial lookup table
    std::vector<double> angles(map.boundary.size());
    bool monotone = true;
    double prev = 0.0;  // vertex 0 = (x_right, 0)
    double total = 0.0;
    angles[0] = 0.0;
    for (std::size_t j = 1; j < map.boundary.size(); ++j) {
        double a = std::arg(map.boundary[j]);
        double d = a - prev;
        while (d > 3.141592653589793) d -= two_pi;
        while (d < -3.141592653589793) d += two_pi;
        if (d <= 0) monotone = false;
        total += d;
        angles[j] = angles[j - 1] + d;
        prev = a;
    }
    total += two_pi - angles.back();
    map.star_shaped = monotone && std::abs(total - two_pi) < 1e-6;
    if (map.star_shaped) {
        // vertex 0 lies on the positive real axis, so the unwrapped angles
        // start at 0 and the bins index absolute angle directly
        const int bins = 2048;
        map.radial_.assign(bins, 0.0);
        for (int b = 0; b < bins; ++b) {
            double target = two_pi * b / bins;
            if (target > angles.back()) {
                // wrap segment between the last vertex and the first
                double seg = two_pi - angles.back();
                double frac = seg > 0 ? (target - angles.back()) / seg : 0.0;
                map.radial_[static_cast<std::size_t>(b)] =
                    std::abs(map.boundary.back()) * (1 - frac) +
                    std::abs(map.boundary.front()) * frac;
                continue;
            }
            std::size_t loidx = 0, hiidx = map.boundary.size() - 1;
            while (hiidx - loidx > 1) {
                std::size_t mid = (loidx + hiidx) / 2;
                (angles[mid] <= target ? loidx : hiidx) = mid;
            }
            double seg = angles[hiidx] - angles[loidx];
            double frac = seg > 0 ? (target - angles[loidx]) / seg : 0.0;
            map.radial_[static_cast<std::size_t>(b)] =
                std::abs(map.boundary[loidx]) * (1 - frac) +
                std::abs(map.boundary[hiidx]) * frac;
        }
    }
    return map;
}

// ---------------------------------------------------------------------------

long long EscapeField::nonescaping_count() const {
    long long c = 0;
    for (int v : t)
        if (v == max_iter) ++c;
    return c;
}

double EscapeField::interior_fraction() const {
    long long c = 0;
    for (int iy = 1; iy + 1 < res; ++iy)
        for (int ix = 1; ix + 1 < res; ++ix) {
            bool all = true;
            for (int dy = -1; dy <= 1 && all; ++dy)
                for (int dx = -1; dx <= 1 && all; ++dx)
                    if (at(ix + dx, iy + dy) != max_iter) all = false;
            if (all) ++c;
        }
    return static_cast<double>(c) / (static_cast<double>(res) * res);
}

namespace {

int pixel_exit_time(const AHPLMap& map, Complex zh, int max_iter) {
    Complex z = map.lambda * zh;
    if (!map.in_U(z)) return 0;
    for (int k = 1; k <= max_iter; ++k) {
        for (long long i = 0; i < map.q; ++i) {
            z = map.ext->value(z);
            if (std::abs(z.real()) > 1e100 || std::abs(z.imag()) > 1e100) return k;
        }
        if (!(std::abs(z) <= map.Rv)) return k;
    }
    return max_iter;
}

}  // namespace

EscapeField filled_julia(const AHPLMap& map, int res, int max_iter, int threads) {
    if (res <= 0) throw ConfigError("escape-field resolution must be positive");
    EscapeField field;
    field.res = res;
    field.extent = map.c_V;
    field.max_iter = max_iter;
    field.t.assign(static_cast<std::size_t>(res) * res, 0);

    // conjugation symmetry: compute the upper half rows, mirror the rest
    int half = (res + 1) / 2;
    auto run_rows = [&](int row_lo, int row_hi) {
        for (int iy = row_lo; iy < row_hi; ++iy) {
            int src = res - 1 - iy;  // upper-half row index into the grid
            for (int ix = 0; ix < res; ++ix) {
                Complex zh = field.pixel_center(ix, src);
                field.t[static_cast<std::size_t>(src) * res + ix] =
                    pixel_exit_time(map, zh, max_iter);
            }
        }
    };
    if (threads <= 1) {
        run_rows(0, half);
    } else {
        std::vector<std::thread> pool;
        int chunk = (half + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            int lo = t * chunk, hi = std::min(half, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(run_rows, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    for (int iy = 0; iy < res / 2; ++iy) {
        int mirror = res - 1 - iy;
        for (int ix = 0; ix < res; ++ix)
            field.t[static_cast<std::size_t>(iy) * res + ix] =
                field.t[static_cast<std::size_t>(mirror) * res + ix];
    }
    return field;
}

// ---------------------------------------------------------------------------

namespace {

void eigen_moduli(const Mat2& A, double& lo, double& hi) {
    double tr = A.trace(), det = A.det();
    double disc = 0.25 * tr * tr - det;
    if (disc < 0) {
        lo = hi = std::sqrt(std::max(0.0, det));
    } else {
        double r = std::sqrt(disc);
        double e1 = std::abs(0.5 * tr + r), e2 = std::abs(0.5 * tr - r);
        lo = std::min(e1, e2);
        hi = std::max(e1, e2);
    }
}

}  // namespace

std::vector<PeriodicPoint> find_periodic(const AHPLMap& map, int p, PeriodicOptions& opts) {
    if (p < 1) throw ConfigError("period must be >= 1");
    std::vector<Complex> seeds;
    for (int iy = 0; iy < opts.grid; ++iy)
        for (int ix = 0; ix < opts.grid; ++ix) {
            double hx = 2.0 * map.c_V / opts.grid;
            Complex zh(-map.c_V + (ix + 0.5) * hx, -map.c_V + (iy + 0.5) * hx);
            if (map.in_U_rescaled(zh)) seeds.push_back(zh);
        }
    double xr = map.x_right / std::abs(map.lambda);
    for (double s : {1.0, -1.0}) {
        seeds.push_back(Complex(s, 0.0));
        seeds.push_back(Complex(0.98 * xr * s, 0.0));
        seeds.push_back(Complex(0.5 * xr * s, 0.0));
    }

    std::vector<PeriodicPoint> found;
    opts.dropped = 0;
    for (Complex seed : seeds) {
        Complex zh = seed;
        bool converged = false;
        for (int it = 0; it < opts.newton_max; ++it) {
            Complex w = zh;
            Mat2 D = Mat2::identity();
            bool escaped = false;
            for (int k = 0; k < p; ++k) {
                auto [val, DJ] = map.G_and_DG_rescaled(w);
                D = DJ * D;
                w = val;
                if (std::abs(w) > 3.0 * map.c_V) {
                    escaped = true;
                    break;
                }
            }
            if (escaped) break;
            Complex err = w - zh;
            // the q-fold iterate floors the attainable residual in binary64
            double floor_tol = std::max(1e-11, 2e-12 * static_cast<double>(map.q) * p);
            if (std::abs(err) < floor_tol) {
                converged = true;
                break;
            }
            Mat2 J = D + Mat2::scalar(-1.0);
            if (std::abs(J.det()) < 1e-300) break;
            Complex step = J.inverse().apply(err);
            zh -= step;
            if (std::abs(step) < 1e-13 && std::abs(err) < 1e-8) {
                converged = true;
                break;
            }
            if (std::abs(zh) > 2.0 * map.c_V) break;
        }
        if (!converged) {
            ++opts.dropped;
            continue;
        }
        // whole cycle must live in U
        bool inside = true;
        Complex w = zh;
        for (int k = 0; k < p && inside; ++k) {
            if (!map.in_U_rescaled(w)) inside = false;
            w = map.G_rescaled(w);
        }
        if (!inside) continue;

        // minimal period within p
        int minimal = p;
        for (int m = 1; m < p; ++m) {
            if (p % m != 0) continue;
            Complex v = zh;
            for (int k = 0; k < m; ++k) v = map.G_rescaled(v);
            if (std::abs(v - zh) < 1e-9) {
                minimal = m;
                break;
            }
        }

        bool dup = false;
        for (const PeriodicPoint& other : found)
            if (std::abs(other.z - zh) < opts.dedup) {
                dup = true;
                break;
            }
        if (dup) continue;

        PeriodicPoint pt;
        pt.z = zh;
        pt.period = minimal;
        Mat2 D = Mat2::identity();
        Complex wv = zh;
        for (int k = 0; k < minimal; ++k) {
            auto [val, DJ] = map.G_and_DG_rescaled(wv);
            D = DJ * D;
            wv = val;
        }
        pt.residual = std::abs(wv - zh);
        pt.deriv = D;
        eigen_moduli(D, pt.ev_lo, pt.ev_hi);
        pt.expanding = pt.ev_lo > 1.0 + opts.tol_eig;
        pt.real_point = std::abs(zh.imag()) < 1e-9;
        if (pt.real_point) pt.multiplier = D.m[0][0];
        found.push_back(pt);
    }
    std::sort(found.begin(), found.end(), [](const PeriodicPoint& a, const PeriodicPoint& b) {
        if (a.period != b.period) return a.period < b.period;
        if (a.z.real() != b.z.real()) return a.z.real() < b.z.real();
        return a.z.imag() < b.z.imag();
    });
    return found;
}

std::vector<PeriodicPoint> find_periodic(const AHPLMap& map, int p) {
    PeriodicOptions opts;
    return find_periodic(map, p, opts);
}

ExpansionReport orbit_expansion(const AHPLMap& map, Complex zh, Complex v, int steps) {
    hyperbolic::HyperbolicDomain Y =
        hyperbolic::HyperbolicDomain::slit_disk(Complex(0, 0), map.c_V);
    if (std::abs(zh.imag()) <= 1e-13) throw OrbitHitRealAxis("start point on the real axis");
    if (!map.in_U_rescaled(zh)) throw OrbitEscaped("start point outside U");

    ExpansionReport rep;
    double log_rho0 = std::log(Y.rho(zh));
    double vnorm = std::abs(v);
    Complex vu = v / vnorm;
    double log_growth = 0.0;
    Complex z = zh;
    for (int k = 1; k <= steps; ++k) {
        auto [nz, D] = map.G_and_DG_rescaled(z);
        Complex nv = D.apply(vu);
        double mag = std::abs(nv);
        log_growth += std::log(mag);
        vu = nv / mag;
        z = nz;
        if (std::abs(z.imag()) <= 1e-13)
            throw OrbitHitRealAxis("orbit hit the real axis at step " + std::to_string(k));
        if (!map.in_V_rescaled(z)) throw OrbitEscaped("orbit left V at step " + std::to_string(k));
        if (k < steps && !map.in_U_rescaled(z))
            throw OrbitEscaped("orbit left U at step " + std::to_string(k));
        rep.r.push_back(std::exp(std::log(Y.rho(z)) - log_rho0 + log_growth));
    }
    rep.eta_hat = 1e300;
    for (double r : rep.r) rep.eta_hat = std::min(rep.eta_hat, r);
    // trend over the last third
    std::size_t tail = rep.r.size() - rep.r.size() / 3;
    double mx = 0, my = 0;
    std::size_t cnt = rep.r.size() - tail;
    if (cnt >= 2) {
        for (std::size_t i = tail; i < rep.r.size(); ++i) {
            mx += static_cast<double>(i);
            my += std::log(rep.r[i]);
        }
        mx /= cnt;
        my /= cnt;
        double num = 0, den = 0;
        for (std::size_t i = tail; i < rep.r.size(); ++i) {
            num += (i - mx) * (std::log(rep.r[i]) - my);
            den += (i - mx) * (i - mx);
        }
        rep.tail_slope = den > 0 ? num / den : 0.0;
        rep.increasing_tail = rep.tail_slope > 0.0;
    }
    return rep;
}

}  // namespace ahpl::dynamics
