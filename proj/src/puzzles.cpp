#include "ahpl/puzzles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ahpl/errors.hpp"
#include "ahpl/hyperbolic.hpp"

namespace ahpl::puzzles {

using dynamics::AHPLMap;
using matcalc::Mat2;

namespace {

bool point_in_polyline(const std::vector<Complex>& poly, Complex z) {
    int crossings = 0;
    std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        Complex a = poly[i] - z, b = poly[(i + 1) % n] - z;
        if ((a.imag() > 0) != (b.imag() > 0)) {
            double xc = a.real() + a.imag() * (b.real() - a.real()) / (a.imag() - b.imag());
            if (xc > 0) ++crossings;
        }
    }
    return crossings % 2 == 1;
}

// Newton solve G(z) = w from a seed, rescaled coordinates.
Complex solve_to(const AHPLMap& map, Complex w, Complex z, const NestOptions& opts) {
    double tol = std::max(opts.newton_tol, 2e-12 * static_cast<double>(map.q)) * map.c_V;
    Complex best = z;
    double best_err = 1e300;
    for (int it = 0; it < opts.newton_max_iter; ++it) {
        auto [val, D] = map.G_and_DG_rescaled(z);
        double err = std::abs(val - w);
        if (err < best_err) {
            best_err = err;
            best = z;
        }
        if (err < tol) return z;
        if (std::abs(D.det()) < 1e-300) throw PullbackEscaped("singular derivative in pullback");
        z -= D.inverse().apply(val - w);
        if (std::abs(z) > 1.5 * map.c_V) throw PullbackEscaped("pullback left V");
    }
    if (best_err < 100.0 * tol) return best;
    throw PullbackEscaped("pullback Newton stalled");
}

struct Seed {
    Complex z;
    std::size_t start_index;
};

// For a real base point: the image g(x) leaves the target region through one
// of the target's real crossings; bisect to that crossing and snap to the
// matching vertex.
Seed seed_from_real_axis(const AHPLMap& map, const std::vector<Complex>& target,
                         double base, const NestOptions& opts) {
    double g0 = map.G_rescaled(Complex(base, 0.0)).real();
    double lo_val = -1e300, hi_val = 1e300;
    std::size_t lo_idx = 0, hi_idx = 0;
    for (std::size_t k = 0; k < target.size(); ++k) {
        if (std::abs(target[k].imag()) > 1e-9 * map.c_V) continue;
        double v = target[k].real();
        if (v < g0 && v > lo_val) {
            lo_val = v;
            lo_idx = k;
        }
        if (v > g0 && v < hi_val) {
            hi_val = v;
            hi_idx = k;
        }
    }
    if (lo_val == -1e300 && hi_val == 1e300)
        throw PullbackEscaped("target curve has no real vertices to anchor the seed");

    double step = map.c_V / 1024.0;
    double x = base, xprev = base;
    double cap = 1.2 * map.x_right / std::abs(map.lambda);
    bool through_hi = false;
    while (true) {
        x += step;
        if (x > cap) throw PullbackEscaped("no real exit point for the pullback seed");
        double g = map.G_rescaled(Complex(x, 0.0)).real();
        if (g >= hi_val) {
            through_hi = true;
            break;
        }
        if (g <= lo_val) {
            through_hi = false;
            break;
        }
        xprev = x;
    }
    double target_val = through_hi ? hi_val : lo_val;
    std::size_t idx = through_hi ? hi_idx : lo_idx;
    for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (xprev + x);
        double g = map.G_rescaled(Complex(mid, 0.0)).real();
        bool before = through_hi ? g < target_val : g > target_val;
        (before ? xprev : x) = mid;
    }
    return {solve_to(map, target[idx], Complex(x, 0.0), opts), idx};
}

// Off-axis base: continue the branch along a segment from G(base) to a nearby
// target vertex; retry other vertices when the path runs near a critical value.
Seed seed_from_interior(const AHPLMap& map, const std::vector<Complex>& target,
                        Complex base, const NestOptions& opts) {
    Complex w_from = map.G_rescaled(base);
    std::size_t k_best = 0;
    double d_best = 1e300;
    for (std::size_t k = 0; k < target.size(); ++k) {
        double d = std::abs(target[k] - w_from);
        if (d < d_best) {
            d_best = d;
            k_best = k;
        }
    }
    const int tries = 8;
    for (int t = 0; t < tries; ++t) {
        std::size_t k = (k_best + t * target.size() / tries) % target.size();
        Complex z = base;
        Complex w_to = target[k];
        try {
            const int sub = 64;
            for (int s = 1; s <= sub; ++s) {
                Complex w = w_from + (w_to - w_from) * (static_cast<double>(s) / sub);
                z = solve_to(map, w, z, opts);
            }
            return {z, k};
        } catch (const NumericError&) {
            // path likely crossed a critical value; try another exit vertex
        }
    }
    throw PullbackEscaped("no branch path from the base to the target curve");
}

struct Trace {
    std::vector<Complex> pts;
    int wraps = 1;
};

// Continuation of the preimage curve over the target polyline until it closes;
// the number of target wraps is the local covering degree.
Trace trace_preimage(const AHPLMap& map, const std::vector<Complex>& target, Seed seed,
                     const NestOptions& opts) {
    Trace out;
    out.pts.push_back(seed.z);
    Complex z = seed.z;
    std::size_t N = target.size();
    double close_tol = 1e-5 * map.c_V;
    for (int wrap = 1; wrap <= opts.max_wraps; ++wrap) {
        for (std::size_t k = 1; k <= N; ++k) {
            Complex w_prev = target[(seed.start_index + k - 1) % N];
            Complex w = target[(seed.start_index + k) % N];
            Mat2 D = map.G_and_DG_rescaled(z).second;
            if (std::abs(D.det()) < 1e-300)
                throw BranchAmbiguity("curve passes through a critical point");
            z += D.inverse().apply(w - w_prev);
            z = solve_to(map, w, z, opts);
            if (k < N || wrap < opts.max_wraps) out.pts.push_back(z);
        }
        if (std::abs(z - seed.z) < close_tol) {
            out.pts.pop_back();  // drop the duplicated closing vertex
            out.wraps = wrap;
            return out;
        }
    }
    throw BranchAmbiguity("preimage curve failed to close within the wrap cap");
}

void decimate(std::vector<Complex>& pts, int cap) {
    if (static_cast<int>(pts.size()) <= cap) return;
    int stride = static_cast<int>((pts.size() + cap - 1) / cap);
    std::vector<Complex> out;
    for (std::size_t i = 0; i < pts.size(); i += static_cast<std::size_t>(stride))
        out.push_back(pts[i]);
    pts = std::move(out);
}

double euclid_diam(const std::vector<Complex>& pts) {
    std::size_t stride = std::max<std::size_t>(1, pts.size() / 256);
    double d = 0;
    for (std::size_t i = 0; i < pts.size(); i += stride)
        for (std::size_t j = i + stride; j < pts.size(); j += stride)
            d = std::max(d, std::abs(pts[i] - pts[j]));
    return d;
}

Curve make_curve(std::vector<Complex> pts, const AHPLMap& map) {
    Curve c;
    c.pts = std::move(pts);
    c.diam_euclid = euclid_diam(c.pts);
    hyperbolic::HyperbolicDomain V =
        hyperbolic::HyperbolicDomain::disk(Complex(0, 0), map.c_V);
    double dh = 0.0;
    bool inside = true;
    std::size_t stride = std::max<std::size_t>(1, c.pts.size() / 64);
    for (std::size_t i = 0; i < c.pts.size() && inside; i += stride)
        if (!V.contains(c.pts[i])) inside = false;
    if (inside) {
        for (std::size_t i = 0; i < c.pts.size(); i += stride)
            for (std::size_t j = i + stride; j < c.pts.size(); j += stride)
                dh = std::max(dh, V.dist(c.pts[i], c.pts[j]));
        c.diam_hyp = dh;
    } else {
        c.diam_hyp = std::numeric_limits<double>::infinity();
    }
    return c;
}

std::vector<Complex> circle_curve(double radius, int n) {
    std::vector<Complex> pts;
    pts.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        pts.push_back(std::polar(radius, 6.283185307179586 * i / n));
    return pts;
}

// Pull `target` back to the component around `base` (one application of G).
std::vector<Complex> pullback_around(const AHPLMap& map, const std::vector<Complex>& target,
                                     Complex base, const NestOptions& opts) {
    Complex critval = map.G_rescaled(Complex(0, 0));
    bool crit_inside = point_in_polyline(target, critval);
    if (crit_inside) {
        // the critical component covers the target degree-d; trace it first
        Seed seed = seed_from_real_axis(map, target, 0.0, opts);
        Trace tr = trace_preimage(map, target, seed, opts);
        if (tr.wraps != map.degree && std::abs(base) < 1e-9)
            throw BranchAmbiguity("critical pullback has unexpected covering degree");
        if (std::abs(base) < 1e-9 || point_in_polyline(tr.pts, base)) {
            decimate(tr.pts, 4 * opts.vertices);
            return tr.pts;
        }
    }
    Seed seed = std::abs(base.imag()) < 1e-12
                    ? seed_from_real_axis(map, target, base.real(), opts)
                    : seed_from_interior(map, target, base, opts);
    Trace tr = trace_preimage(map, target, seed, opts);
    decimate(tr.pts, 4 * opts.vertices);
    return tr.pts;
}

}  // namespace

Nest equipotential_nest(const AHPLMap& map, Complex base, int depth, const NestOptions& opts) {
    if (!map.in_V_rescaled(base)) throw PullbackEscaped("nest base outside V");
    Nest nest;
    nest.base = base;
    std::vector<Complex> x0 = circle_curve(map.c_V, opts.vertices);
    nest.levels.push_back(make_curve(x0, map));
    nest.levels.back().diam_hyp = std::numeric_limits<double>::infinity();

    if (std::abs(base) < 1e-9) {
        // critical nest: K_j = comp_0 G^{-1}(K_{j-1})
        std::vector<Complex> cur = x0;
        for (int j = 1; j <= depth; ++j) {
            cur = pullback_around(map, cur, Complex(0, 0), opts);
            nest.levels.push_back(make_curve(cur, map));
        }
        return nest;
    }

    // general base: pull back along the orbit chain
    for (int j = 1; j <= depth; ++j) {
        std::vector<Complex> orbit{base};
        for (int i = 0; i < j; ++i) orbit.push_back(map.G_rescaled(orbit.back()));
        std::vector<Complex> cur = x0;
        for (int i = j - 1; i >= 0; --i)
            cur = pullback_around(map, cur, orbit[static_cast<std::size_t>(i)], opts);
        if (!point_in_polyline(cur, base))
            throw BranchAmbiguity("nest piece does not surround its base point");
        nest.levels.push_back(make_curve(cur, map));
    }
    return nest;
}

BetaResult beta_fixed_point(const unimodal::Tower& tower, int n) {
    const unimodal::TowerLevel& lv = tower.level(n);
    const unimodal::UnimodalMap& f = tower.base;
    auto iterate_with_deriv = [&](double x, double& v, double& dv) {
        v = x;
        dv = 1.0;
        for (long long i = 0; i < lv.q; ++i) {
            double fv, fd;
            f.value_and_deriv(v, fv, fd);
            dv *= fd;
            v = fv;
        }
    };
    double guard = 2.5 * std::abs(lv.lambda);
    for (double x0 : {-std::abs(lv.lambda), std::abs(lv.lambda)}) {
        double x = x0;
        bool ok = false;
        double tol_res = std::max(5e-14, 1e-10 * std::abs(lv.lambda));
        for (int it = 0; it < 100; ++it) {
            double v, dv;
            iterate_with_deriv(x, v, dv);
            double g = v - x, gp = dv - 1.0;
            if (std::abs(g) < tol_res) {
                ok = true;
                break;
            }
            if (gp == 0.0) break;
            double step = g / gp;
            x -= step;
            if (std::abs(x) > guard) break;
        }
        if (!ok) continue;
        double v, dv;
        iterate_with_deriv(x, v, dv);
        if (dv > 1.0) return {x, dv};  // orientation preserving and repelling
    }
    throw NoConvergence("no orientation-preserving repelling fixed point found");
}

Ray polynomial_ray(double a, double angle, int steps, const RayOptions& opts) {
    // conjugate frame: w = -a z, P(w) = w^2 + c with c = -a
    const Complex c(-a, 0.0);
    const double two_pi = 6.283185307179586476925287;

    // angle-doubling sequence
    std::vector<double> ang(static_cast<std::size_t>(steps) + 1);
    ang[0] = angle - std::floor(angle);
    for (int j = 1; j <= steps; ++j) {
        ang[static_cast<std::size_t>(j)] = 2.0 * ang[static_cast<std::size_t>(j - 1)];
        ang[static_cast<std::size_t>(j)] -= std::floor(ang[static_cast<std::size_t>(j)]);
    }

    std::vector<Complex> prev;  // prev[j]: ray 2^j angle at depth (n-1-j)
    std::vector<Complex> ray_w;
    for (int n = 1; n <= steps; ++n) {
        std::vector<Complex> cur(static_cast<std::size_t>(n) + 1);
        cur[static_cast<std::size_t>(n)] =
            std::polar(opts.outer_radius, two_pi * ang[static_cast<std::size_t>(n)]);
        for (int j = n - 1; j >= 0; --j) {
            Complex up = cur[static_cast<std::size_t>(j + 1)] - c;
            Complex root = std::sqrt(up);
            if (!std::isfinite(root.real()) || !std::isfinite(root.imag()))
                throw TraceStalled("square-root branch blew up");
            Complex ref;
            if (static_cast<std::size_t>(j) < prev.size())
                ref = prev[static_cast<std::size_t>(j)];
            else
                ref = std::polar(1.0, two_pi * ang[static_cast<std::size_t>(j)]);
            if (root.real() * ref.real() + root.imag() * ref.imag() < 0) root = -root;
            cur[static_cast<std::size_t>(j)] = root;
        }
        ray_w.push_back(cur[0]);
        prev = std::move(cur);
    }

    Ray ray;
    ray.angle = ang[0];
    for (Complex w : ray_w) ray.pts.push_back(w / (-a));

    // landing: accumulation diameter over the last third
    std::size_t tail = ray.pts.size() - ray.pts.size() / 3;
    double diam = 0;
    for (std::size_t i = tail; i < ray.pts.size(); ++i)
        for (std::size_t j = i + 1; j < ray.pts.size(); ++j)
            diam = std::max(diam, std::abs(ray.pts[i] - ray.pts[j]));
    ray.accumulation_diameter = diam;
    ray.landed = diam < opts.tol_land;
    if (ray.landed) ray.landing_point = ray.pts.back();
    return ray;
}

ShrinkTable shrinking_diagnostic(const AHPLMap& map, std::span<const Complex> samples,
                                 int depth, const NestOptions& opts) {
    // Desk shadow of the shrinking-neighbourhood argument: around an off-axis
    // sample, pull a small disk centred on the forward orbit back along the
    // orbit chain; hyperbolic expansion makes the chain diameters decay.  The
    // critical point itself delegates to the equipotential nest.
    ShrinkTable table;
    Complex critval = map.G_rescaled(Complex(0, 0));
    for (Complex z : samples) {
        ShrinkRow row;
        row.z = z;
        try {
            if (std::abs(z) < 1e-9) {
                Nest nest = equipotential_nest(map, z, depth, opts);
                for (const Curve& c : nest.levels) row.diams.push_back(c.diam_euclid);
            } else {
                if (std::abs(z.imag()) < 1e-12) throw OrbitHitRealAxis("sample on the real axis");
                std::vector<Complex> orbit{z};
                double clearance = 1e300;
                for (int t = 0; t < depth; ++t) {
                    Complex cur = orbit.back();
                    if (!map.in_U_rescaled(cur)) throw OrbitEscaped("sample orbit left U");
                    clearance = std::min({clearance, std::abs(cur.imag()),
                                          std::abs(cur - critval)});
                    orbit.push_back(map.G_rescaled(cur));
                    if (std::abs(orbit.back().imag()) < 1e-12)
                        throw OrbitHitRealAxis("sample orbit hit the real axis");
                }
                double r0 = std::min(0.4 * clearance, 0.2 * map.c_V);
                int nv = std::max(48, opts.vertices / 4);
                std::vector<Complex> cur;
                for (int i = 0; i < nv; ++i)
                    cur.push_back(orbit[static_cast<std::size_t>(depth)] +
                                  std::polar(r0, 6.283185307179586 * i / nv));
                row.diams.push_back(euclid_diam(cur));
                for (int i = depth - 1; i >= 0; --i) {
                    Complex base = orbit[static_cast<std::size_t>(i)];
                    Complex pred =
                        base + map.G_and_DG_rescaled(base).second.inverse().apply(
                                   cur[0] - orbit[static_cast<std::size_t>(i + 1)]);
                    Seed seed{solve_to(map, cur[0], pred, opts), 0};
                    Trace tr = trace_preimage(map, cur, seed, opts);
                    if (!point_in_polyline(tr.pts, base))
                        throw BranchAmbiguity("chain piece does not surround its orbit point");
                    cur = std::move(tr.pts);
                    decimate(cur, 4 * opts.vertices);
                    row.diams.push_back(euclid_diam(cur));
                }
            }
            double acc = 0.0;
            int cnt = 0;
            for (std::size_t j = 2; j < row.diams.size(); ++j) {
                acc += std::log(row.diams[j] / row.diams[j - 1]);
                ++cnt;
            }
            row.fitted_ratio = std::exp(acc / std::max(1, cnt));
            row.ok = true;
        } catch (const NumericError& e) {
            row.reason = e.what();
            ++table.failed;
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

ConjugacyReport conjugacy_evidence(const AHPLMap& map, double poly_a, int length) {
    ConjugacyReport rep;
    rep.length = length;
    double x = 1.0, y = 1.0;  // critical values of both normalized maps
    for (int k = 0; k < length; ++k) {
        int sx = x > 0 ? 1 : (x < 0 ? -1 : 0);
        int sy = y > 0 ? 1 : (y < 0 ? -1 : 0);
        if (sx != sy) {
            rep.first_disagreement = k;
            return rep;
        }
        Complex gx = map.G_rescaled(Complex(x, 0.0));
        x = gx.real();
        y = 1.0 - poly_a * y * y;
        if (std::abs(x) > 1.0 + 1e-9 || std::abs(y) > 1.0 + 1e-9)
            throw OrbitLeftInterval("itinerary orbit left [-1,1] at step " + std::to_string(k));
    }
    return rep;
}

}  // namespace ahpl::puzzles
