#include "ahpl/realbounds.hpp"

#include <algorithm>
#include <cmath>

#include "ahpl/errors.hpp"

namespace ahpl::realbounds {

using unimodal::RenormalizedMap;
using unimodal::TowerLevel;

std::pair<double, double> scaling_ratios(const Tower& tower, int n) {
    const TowerLevel& parent = tower.level(n);
    const TowerLevel& child = tower.level(n + 1);
    double lo = 1e300, hi = 0.0;
    for (const Interval& J : child.intervals) {
        const Interval* host = nullptr;
        for (const Interval& D : parent.intervals) {
            if (D.contains(J, 1e-11)) {
                host = &D;
                break;
            }
        }
        if (!host) throw NumericError("scaling_ratios: unnested child interval");
        double r = J.length() / host->length();
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    return {lo, hi};
}

double compute_Sn(const Tower& tower, int n) {
    const TowerLevel& lv = tower.level(n);
    CompensatedSum s;
    for (std::size_t i = 1; i < lv.intervals.size(); ++i) {
        const Interval& J = lv.intervals[i];
        s.add(J.length() / J.dist_to_zero());
    }
    return s.value();
}

double compute_Sn_reversed(const Tower& tower, int n) {
    const TowerLevel& lv = tower.level(n);
    CompensatedSum s;
    for (std::size_t i = lv.intervals.size(); i-- > 1;) {
        const Interval& J = lv.intervals[i];
        s.add(J.length() / J.dist_to_zero());
    }
    return s.value();
}

double compute_Sn_star(const Tower& tower, int n, int d) {
    const TowerLevel& lv = tower.level(n);
    long long q = lv.q;
    CompensatedSum s;
    for (long long i = 1; i < q; ++i) {
        const Interval& J = lv.intervals[static_cast<std::size_t>(i)];
        const Interval& next = lv.intervals[static_cast<std::size_t>((i + 1) % q)];
        double term = J.length() * J.length() / next.length();
        if (d != 2) term *= std::pow(J.dist_to_zero(), d - 2);
        s.add(term);
    }
    return s.value();
}

double derivative_comparability(const Tower& tower, int n, const KhatOptions& opts) {
    const TowerLevel& lv = tower.level(n);
    long long q = lv.q;
    if (q < 3) return 1.0;
    Rng rng(opts.seed + static_cast<std::uint64_t>(n));

    long long total_pairs = (q - 1) * (q - 2) / 2;
    int pairs = static_cast<int>(std::min<long long>(opts.max_pairs, total_pairs));
    double khat = 1.0;
    const unimodal::UnimodalMap& f = tower.base;
    for (int t = 0; t < pairs; ++t) {
        long long i = 1 + rng.index(static_cast<int>(q - 2));
        long long j = i + 1 + rng.index(static_cast<int>(q - 1 - i));
        const Interval& Di = lv.intervals[static_cast<std::size_t>(i)];
        const Interval& Dj = lv.intervals[static_cast<std::size_t>(j)];
        double len_ratio = Di.length() / Dj.length();
        for (int s = 0; s < opts.samples_per_interval; ++s) {
            double x = rng.uniform(Di.lo, Di.hi);
            double v = x, dv = 1.0;
            for (long long k = 0; k < j - i; ++k) {
                double fv, fd;
                f.value_and_deriv(v, fv, fd);
                dv *= fd;
                v = fv;
            }
            double r = std::abs(dv) * len_ratio;
            khat = std::max(khat, std::max(r, 1.0 / r));
        }
    }
    return khat;
}

namespace {

void scan_sup(const RenormalizedMap& rn, double lo, double hi, int pts, C2Norms& acc) {
    for (int i = 0; i <= pts; ++i) {
        double x = lo + (hi - lo) * i / pts;
        unimodal::Jet1 j = rn.real_jet(x, 2);
        acc.c0 = std::max(acc.c0, std::abs(j.deriv(0)));
        acc.c1 = std::max(acc.c1, std::abs(j.deriv(1)));
        acc.c2 = std::max(acc.c2, std::abs(j.deriv(2)));
    }
}

}  // namespace

C2Norms renorm_c2_norm(const Tower& tower, int n, int grid) {
    RenormalizedMap rn = tower.renormalization(n);
    C2Norms norms;
    scan_sup(rn, -1.0, 1.0, grid, norms);
    // derivative extremes live at the critical point and the endpoints
    int fine = grid / 4;
    scan_sup(rn, -0.05, 0.05, fine, norms);
    scan_sup(rn, -1.0, -0.9, fine, norms);
    scan_sup(rn, 0.9, 1.0, fine, norms);
    return norms;
}

BoundsReport bounds_report(const Tower& tower, int n_max, const KhatOptions& opts, int grid) {
    if (n_max > tower.depth()) throw LevelMissing("bounds_report beyond tower depth");
    BoundsReport rep;
    for (int n = 0; n <= n_max; ++n) {
        BoundsLevel row;
        row.n = n;
        row.q = tower.level(n).q;
        row.lambda = tower.level(n).lambda;
        if (n < n_max) {
            auto [a, b] = scaling_ratios(tower, n);
            row.alpha_hat = a;
            row.beta_hat = b;
        }
        row.K_hat = derivative_comparability(tower, n, opts);
        row.Sn = compute_Sn(tower, n);
        row.Sn_star = compute_Sn_star(tower, n, tower.base.d());
        C2Norms c = renorm_c2_norm(tower, n, grid);
        row.c0 = c.c0;
        row.c1 = c.c1;
        row.c2 = c.c2;
        rep.rows.push_back(row);
    }
    return rep;
}

double fit_critical_coefficient(const unimodal::UnimodalMap& f, int samples) {
    double c0 = 1e300;
    for (int i = 1; i <= samples; ++i) {
        double x = static_cast<double>(i) / samples;  // even map: one side suffices
        double denom = std::pow(x, f.d() - 1);
        c0 = std::min(c0, std::abs(f.deriv(1, x)) / denom);
    }
    return c0;
}

}  // namespace ahpl::realbounds
