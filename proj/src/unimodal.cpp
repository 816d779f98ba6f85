#include "ahpl/unimodal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

namespace ahpl::unimodal {

// ---------------------------------------------------------------------------
// Jet1

Jet1 Jet1::constant(double v, int ord) {
    Jet1 j;
    j.ord = ord;
    j.c[0] = v;
    return j;
}

Jet1 Jet1::variable(double x0, int ord) {
    Jet1 j;
    j.ord = ord;
    j.c[0] = x0;
    if (ord >= 1) j.c[1] = 1.0;
    return j;
}

double Jet1::deriv(int k) const {
    if (k < 0 || k > ord) throw InsufficientJets("jet order " + std::to_string(ord) +
                                                 " lacks derivative " + std::to_string(k));
    double fact = 1.0;
    for (int i = 2; i <= k; ++i) fact *= i;
    return c[static_cast<std::size_t>(k)] * fact;
}

Jet1 Jet1::operator+(const Jet1& o) const {
    Jet1 r;
    r.ord = std::min(ord, o.ord);
    for (int k = 0; k <= r.ord; ++k) r.c[k] = c[k] + o.c[k];
    return r;
}

Jet1 Jet1::operator-(const Jet1& o) const {
    Jet1 r;
    r.ord = std::min(ord, o.ord);
    for (int k = 0; k <= r.ord; ++k) r.c[k] = c[k] - o.c[k];
    return r;
}

Jet1 Jet1::operator*(const Jet1& o) const {
    Jet1 r;
    r.ord = std::min(ord, o.ord);
    for (int k = 0; k <= r.ord; ++k) {
        double s = 0;
        for (int i = 0; i <= k; ++i) s += c[i] * o.c[k - i];
        r.c[k] = s;
    }
    return r;
}

Jet1 Jet1::scaled(double s) const {
    Jet1 r = *this;
    for (int k = 0; k <= ord; ++k) r.c[k] *= s;
    return r;
}

Jet1 Jet1::pow_int(int n) const {
    Jet1 acc = Jet1::constant(1.0, ord);
    Jet1 base = *this;
    int e = n;
    while (e > 0) {
        if (e & 1) acc = acc * base;
        base = base * base;
        e >>= 1;
    }
    return acc;
}

Jet1 Jet1::pow_real(double p) const {
    double u0 = c[0];
    if (u0 == 0.0) throw InsufficientJets("pow_real at zero base value");
    // |u|^p = |u0|^p (1+w)^p with w = (u-u0)/u0; recurrence from (1+w) y' = p w' y.
    Jet1 w;
    w.ord = ord;
    for (int k = 1; k <= ord; ++k) w.c[k] = c[k] / u0;
    Jet1 y;
    y.ord = ord;
    y.c[0] = 1.0;
    for (int k = 1; k <= ord; ++k) {
        double s = 0;
        for (int i = 1; i <= k; ++i) s += p * i * w.c[i] * y.c[k - i];
        for (int i = 1; i <= k - 1; ++i) s -= (k - i) * w.c[i] * y.c[k - i];
        y.c[k] = s / k;
    }
    return y.scaled(std::pow(std::abs(u0), p));
}

// ---------------------------------------------------------------------------
// UnimodalMap

UnimodalMap::UnimodalMap(double a, int d) : a_(a), d_(d) {
    if (d < 2 || d % 2 != 0) throw ConfigError("critical order d must be an even integer >= 2");
}

double UnimodalMap::perturb_abs_pow(double x) const {
    return std::pow(std::abs(x), pm_ + 0.5);
}

double UnimodalMap::perturb_abs_pow_deriv(double x) const {
    double p = pm_ + 0.5;
    if (x == 0.0) return 0.0;
    return p * std::pow(std::abs(x), p - 1.0) * (x > 0 ? 1.0 : -1.0);
}

double UnimodalMap::deriv(int k, double x) const {
    double r = 0.0;
    if (k == 0) {
        r = 1.0 - a_ * std::pow(x, d_);
    } else if (k <= d_) {
        double coef = -a_;
        for (int i = 0; i < k; ++i) coef *= (d_ - i);
        r = coef * std::pow(x, d_ - k);
    }
    if (eps_ != 0.0) {
        double p = pm_ + 0.5;
        if (x == 0.0) {
            if (k > pm_) throw InsufficientJets("perturbed map lacks derivative " +
                                                std::to_string(k) + " at 0");
        } else {
            double coef = eps_;
            for (int i = 0; i < k; ++i) coef *= (p - i);
            double sgn = (x > 0 || k % 2 == 0) ? 1.0 : -1.0;
            if (x < 0 && k % 2 == 1) sgn = -1.0;
            r += coef * std::pow(std::abs(x), p - k) * sgn;
        }
    }
    return r;
}

Jet1 UnimodalMap::apply_jet(const Jet1& u) const {
    Jet1 out = Jet1::constant(1.0, u.ord) - u.pow_int(d_).scaled(a_);
    if (eps_ != 0.0) {
        if (std::abs(u.value()) < 1e-300) {
            if (u.ord > pm_)
                throw InsufficientJets("perturbed jet through the critical point");
            // all perturbation derivatives up to pm vanish at 0
        } else {
            out = out + u.pow_real(pm_ + 0.5).scaled(eps_);
        }
    }
    return out;
}

Jet1 UnimodalMap::real_jet(double x, int ord) const {
    if (ord > kMaxJetOrder) throw InsufficientJets("jet order cap exceeded");
    return apply_jet(Jet1::variable(x, ord));
}

Jet1 RenormalizedMap::real_jet(double x, int ord) const {
    if (ord > kMaxJetOrder) throw InsufficientJets("jet order cap exceeded");
    Jet1 j = Jet1::variable(x, ord).scaled(lambda_);
    for (long long i = 0; i < q_; ++i) j = base_.apply_jet(j);
    return j.scaled(1.0 / lambda_);
}

// ---------------------------------------------------------------------------
// Detection core, templated on the scalar and on a map providing value() and
// value_and_deriv().

namespace {

struct RealMapAdapter {
    const RealMap1D& f;
    double value(double x) const { return f.value(x); }
    void value_and_deriv(double x, double& v, double& dv) const {
        Jet1 j = f.real_jet(x, 1);
        v = j.c[0];
        dv = j.c[1];
    }
};

template <class S>
struct ScaledIterateView {
    const UnimodalMap& f;
    S lambda;
    long long q;

    S value(S x) const {
        S y = lambda * x;
        for (long long i = 0; i < q; ++i) y = f.value(y);
        return y / lambda;
    }
    void value_and_deriv(S x, S& v, S& dv) const {
        S y = lambda * x;
        S dy = lambda;
        for (long long i = 0; i < q; ++i) {
            S fv, fd;
            f.value_and_deriv(y, fv, fd);
            dy = fd * dy;
            y = fv;
        }
        v = y / lambda;
        dv = dy / lambda;
    }
};

template <class S, class Map>
bool unimodal_on_side(const Map& f, int p, double endpoint, int samples) {
    int sign = 0;
    for (int i = 1; i <= samples; ++i) {
        S x(endpoint * i / samples);
        S v = x, dv(1.0);
        for (int k = 0; k < p; ++k) {
            S fv, fd;
            f.value_and_deriv(v, fv, fd);
            dv = fd * dv;
            v = fv;
        }
        double dd = to_double(dv);
        int s = dd > 0 ? 1 : (dd < 0 ? -1 : 0);
        if (s == 0) return false;
        if (sign == 0)
            sign = s;
        else if (s != sign)
            return false;
    }
    return true;
}

template <class S, class Map>
std::optional<std::pair<int, S>> detect_core(const Map& f, const DetectOptions& opts) {
    S x = f.value(S(0.0));
    for (int p = 2; p <= opts.p_max; ++p) {
        x = f.value(x);  // f^p(0)
        S lam = x;
        double alam = std::abs(to_double(lam));
        if (alam <= opts.superstable_tol)
            throw SuperstableDegenerate("f^p(0) = 0 at p = " + std::to_string(p) +
                                        " (rescale undefined)");
        S e(alam);
        for (int i = 0; i < p; ++i) e = f.value(e);
        if (std::abs(to_double(e)) > alam + opts.endpoint_slack) continue;
        if (!unimodal_on_side<S>(f, p, alam, opts.unimodality_samples)) continue;
        return std::make_pair(p, lam);
    }
    return std::nullopt;
}

}  // namespace

std::optional<DetectResult> detect_renormalization(const RealMap1D& f, const DetectOptions& opts) {
    RealMapAdapter ad{f};
    auto r = detect_core<double>(ad, opts);
    if (!r) return std::nullopt;
    return DetectResult{r->first, r->second};
}

std::shared_ptr<RealMap1D> renormalize(const UnimodalMap& f, const DetectOptions& opts) {
    FamilyMapView view(f);
    auto r = detect_renormalization(view, opts);
    if (!r) throw NotRenormalizable("no period p <= " + std::to_string(opts.p_max));
    return std::make_shared<RenormalizedMap>(f, r->lambda, r->p);
}

// ---------------------------------------------------------------------------
// Towers

namespace {

template <class S>
void append_level(Tower& t, int p_detected, const TowerOptions& opts) {
    const TowerLevel& cur = t.levels.back();
    TowerLevel next;
    next.n = cur.n + 1;
    next.q = cur.q * p_detected;
    if (next.q < (1LL << next.n))
        throw NumericError("tower: q_n < 2^n, period below 2 detected");

    // lambda_{n+1} = f^{q_{n+1}}(0), computed as one orbit in scalar S.
    S x(0.0);
    for (long long i = 0; i < next.q; ++i) x = t.base.value(x);
    next.lambda = to_double(x);
    if (std::abs(next.lambda) < opts.precision_floor)
        throw PrecisionExhausted("lambda at level " + std::to_string(next.n) + " below floor");

    // Interval endpoints: Delta_0 = [-|lambda|, |lambda|]; the first image is
    // [f(|lambda|), f(0)], after which f is monotone on each interval.
    double al = std::abs(next.lambda);
    next.intervals.resize(static_cast<std::size_t>(next.q));
    next.intervals[0] = {-al, al};
    S lo(al), hi(0.0);
    lo = t.base.value(lo);
    hi = t.base.value(hi);
    for (long long i = 1; i < next.q; ++i) {
        double l = to_double(lo), h = to_double(hi);
        if (l > h) std::swap(l, h);
        next.intervals[static_cast<std::size_t>(i)] = {l, h};
        if (i + 1 < next.q) {
            S nl = t.base.value(S(l));
            S nh = t.base.value(S(h));
            lo = nl;
            hi = nh;
        }
    }
    t.levels.push_back(std::move(next));
}

void verify_level_invariants(const Tower& t, double tol) {
    const TowerLevel& lv = t.levels.back();
    // pairwise disjoint interiors
    std::vector<Interval> sorted = lv.intervals;
    std::sort(sorted.begin(), sorted.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        if (sorted[i - 1].hi - sorted[i].lo > tol)
            throw NumericError("tower: overlapping intervals at level " +
                               std::to_string(lv.n));
    }
    // nesting into the previous level
    const TowerLevel& up = t.levels[t.levels.size() - 2];
    for (const Interval& J : lv.intervals) {
        bool inside = false;
        for (const Interval& D : up.intervals) {
            if (D.contains(J, tol)) {
                inside = true;
                break;
            }
        }
        if (!inside)
            throw NumericError("tower: level " + std::to_string(lv.n) +
                               " interval not nested in level " + std::to_string(up.n));
    }
}

}  // namespace

Tower build_tower(const UnimodalMap& f, int depth, const TowerOptions& opts) {
    Tower t{f, {}};
    TowerLevel l0;
    l0.n = 0;
    l0.q = 1;
    l0.lambda = 1.0;
    l0.intervals = {{-1.0, 1.0}};
    t.levels.push_back(std::move(l0));

    for (int n = 0; n < depth; ++n) {
        TowerLevel& cur = t.levels.back();
        std::optional<std::pair<int, double>> det;
        if (opts.use_dd) {
            ScaledIterateView<DD> view{f, DD(cur.lambda), cur.q};
            auto r = detect_core<DD>(view, opts.detect);
            if (r) det = std::make_pair(r->first, to_double(r->second));
        } else {
            ScaledIterateView<double> view{f, cur.lambda, cur.q};
            auto r = detect_core<double>(view, opts.detect);
            if (r) det = std::make_pair(r->first, r->second);
        }
        if (!det)
            throw NotRenormalizable("level " + std::to_string(n + 1) + ": no period p <= " +
                                    std::to_string(opts.detect.p_max));
        cur.period = det->first;
        if (opts.use_dd)
            append_level<DD>(t, det->first, opts);
        else
            append_level<double>(t, det->first, opts);
        verify_level_invariants(t, 1e-11);
    }
    return t;
}

// ---------------------------------------------------------------------------
// Parameter search

namespace {

// Critical orbit value x_Q = f_a^Q(0) with derivative in the parameter.
template <class S>
S cascade_value(const FamilySpec& fam, S a, long long steps, S* da_out) {
    S x(0.0), dx(0.0);
    for (long long i = 0; i < steps; ++i) {
        S xp1(1.0);  // x^(d-1)
        for (int k = 1; k < fam.d; ++k) xp1 = xp1 * x;
        S xd = xp1 * x;
        S nx = S(1.0) - a * xd;
        if (fam.perturb_eps != 0.0) {
            double xv = to_double(x);
            nx = nx + S(fam.perturb_eps * std::pow(std::abs(xv), fam.perturb_m + 0.5));
        }
        if (da_out) {
            // d/da of 1 - a x^d = -x^d - a d x^{d-1} dx (perturbation treated as
            // parameter-independent)
            S ndx = -xd - a * S(static_cast<double>(fam.d)) * xp1 * dx;
            if (fam.perturb_eps != 0.0) {
                double xv = to_double(x);
                double p = fam.perturb_m + 0.5;
                double g = (xv == 0.0) ? 0.0
                                       : fam.perturb_eps * p * std::pow(std::abs(xv), p - 1.0) *
                                             (xv > 0 ? 1.0 : -1.0);
                ndx = ndx + S(g) * dx;
            }
            dx = ndx;
        }
        x = nx;
    }
    if (da_out) *da_out = dx;
    return x;
}

double bisect_orbit_zero(const FamilySpec& fam, long long steps, double lo, double hi,
                         double flo) {
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = to_double(cascade_value<double>(fam, mid, steps, nullptr));
        if ((flo <= 0) == (fm <= 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

DD newton_polish_dd(const FamilySpec& fam, long long steps, DD a0) {
    DD a = a0;
    for (int it = 0; it < 12; ++it) {
        DD da;
        DD h = cascade_value<DD>(fam, a, steps, &da);
        if (std::abs(to_double(da)) < 1e-300) break;
        DD step = h / da;
        a = a - step;
        if (std::abs(to_double(step)) < 1e-28 * std::abs(to_double(a))) break;
    }
    return a;
}

// Superstable ladder s_1..s_n for the period-doubling cascade, in dd.
std::vector<DD> superstable_ladder(const FamilySpec& fam, int levels, double lo, double hi) {
    if (levels < 1) throw ConfigError("superstable ladder needs level >= 1");
    if (!(lo < 1.0 && 1.0 < hi))
        throw BracketInvalid("bracket must straddle the superstable period-2 parameter");
    std::vector<DD> s;
    s.push_back(newton_polish_dd(fam, 2, DD(1.0)));  // root of f_a^2(0) near 1
    if (levels == 1) return s;

    // bootstrap s_2 by a scan for the first sign change beyond s_1
    {
        long long steps = 4;
        double s1 = to_double(s[0]);
        double prev_a = s1 + 1e-4;
        double prev_v = to_double(cascade_value<double>(fam, prev_a, steps, nullptr));
        double found = -1;
        for (int i = 1; i <= 4096; ++i) {
            double aa = s1 + 1e-4 + (hi - s1 - 1e-4) * i / 4096.0;
            double v = to_double(cascade_value<double>(fam, aa, steps, nullptr));
            if ((prev_v <= 0) != (v <= 0)) {
                found = bisect_orbit_zero(fam, steps, prev_a, aa, prev_v);
                break;
            }
            prev_a = aa;
            prev_v = v;
        }
        if (found < 0) throw BracketInvalid("no superstable period-4 parameter in bracket");
        s.push_back(newton_polish_dd(fam, steps, DD(found)));
    }

    double delta_est = fam.d == 2 ? 4.669 : 7.0;  // refined from measured gaps below
    for (int n = 3; n <= levels; ++n) {
        long long steps = 1LL << n;
        DD gap = s[s.size() - 1] - s[s.size() - 2];
        if (s.size() >= 3) {
            DD prev_gap = s[s.size() - 2] - s[s.size() - 3];
            double r = to_double(prev_gap) / to_double(gap);
            if (r > 1.5 && r < 100) delta_est = r;
        }
        DD guess = s.back() + gap * DD(1.0 / delta_est);
        DD refined = newton_polish_dd(fam, steps, guess);
        // safeguard: must land strictly beyond s_{n-1} and within ~one old gap
        double g = to_double(refined - s.back());
        double gold = to_double(gap);
        if (!(g > 0) || g > 0.9 * std::abs(gold)) {
            double lo2 = to_double(s.back()) + 0.01 * std::abs(gold);
            double hi2 = to_double(s.back()) + 0.9 * std::abs(gold);
            double flo = to_double(cascade_value<double>(fam, lo2, steps, nullptr));
            double fhi = to_double(cascade_value<double>(fam, hi2, steps, nullptr));
            if ((flo <= 0) == (fhi <= 0))
                throw NoConvergence("superstable ladder lost the cascade at level " +
                                    std::to_string(n));
            refined = newton_polish_dd(fam, steps, DD(bisect_orbit_zero(fam, steps, lo2, hi2, flo)));
        }
        s.push_back(refined);
    }
    return s;
}

}  // namespace

double superstable_parameter(const FamilySpec& family, int level, double bracket_lo,
                             double bracket_hi) {
    auto s = superstable_ladder(family, level, bracket_lo, bracket_hi);
    return to_double(s.back());
}

double find_feigenbaum(const FamilySpec& family, double tol, double bracket_lo,
                       double bracket_hi) {
    const int n_max = 18;
    auto s = superstable_ladder(family, n_max, bracket_lo, bracket_hi);
    DD g1 = s[s.size() - 1] - s[s.size() - 2];
    DD g0 = s[s.size() - 2] - s[s.size() - 3];
    double rho = to_double(g1) / to_double(g0);
    if (!(rho > 0 && rho < 1)) throw NoConvergence("cascade gaps not geometric");
    DD a_star = s.back() + g1 * DD(rho / (1.0 - rho));
    double tail = std::abs(to_double(g1) * rho / (1.0 - rho));
    if (tail * rho > tol)
        throw NoConvergence("feigenbaum extrapolation tail above requested tolerance");
    return to_double(a_star);
}

std::vector<double> feigenbaum_scalings_dd(const FamilySpec& family, double a, int depth) {
    std::vector<double> lambdas;
    lambdas.push_back(1.0);
    DD x(0.0);
    long long done = 0;
    for (int n = 1; n <= depth; ++n) {
        long long target = 1LL << n;
        while (done < target) {
            DD xp1(1.0);
            for (int k = 1; k < family.d; ++k) xp1 = xp1 * x;
            x = DD(1.0) - DD(a) * (xp1 * x);
            if (family.perturb_eps != 0.0)
                x = x + DD(family.perturb_eps *
                           std::pow(std::abs(to_double(x)), family.perturb_m + 0.5));
            ++done;
        }
        lambdas.push_back(to_double(x));
    }
    return lambdas;
}

namespace {

std::vector<int> tower_periods(const UnimodalMap& f, int depth) {
    std::vector<int> periods;
    try {
        Tower t = build_tower(f, depth);
        for (int n = 0; n < depth; ++n) periods.push_back(t.levels[static_cast<std::size_t>(n)].period);
    } catch (const NumericError&) {
        // partial or empty period list signals failure to the caller
    }
    return periods;
}

bool periods_match(const UnimodalMap& f, const std::vector<int>& want) {
    auto got = tower_periods(f, static_cast<int>(want.size()));
    return got.size() == want.size() && std::equal(got.begin(), got.end(), want.begin());
}

}  // namespace

double find_parameter(const FamilySpec& family, const std::vector<int>& prefix, double tol,
                      double bracket_lo, double bracket_hi) {
    if (!(bracket_lo < bracket_hi)) throw BracketInvalid("empty bracket");
    if (prefix.empty()) return 0.5 * (bracket_lo + bracket_hi);
    for (int p : prefix)
        if (p < 2) throw ConfigError("combinatorics entries must be >= 2");

    bool all_two = std::all_of(prefix.begin(), prefix.end(), [](int p) { return p == 2; });
    if (all_two) {
        int k = static_cast<int>(prefix.size());
        if (k >= 16) return find_feigenbaum(family, tol, bracket_lo, bracket_hi);
        return superstable_parameter(family, k + 1, bracket_lo, bracket_hi);
    }

    // Window walk: at step j locate the superstable center of prefix[0..j],
    // then narrow the bracket to its renormalization window.
    double wlo = bracket_lo, whi = bracket_hi;
    long long q = 1;
    int k = static_cast<int>(prefix.size());
    for (int j = 0; j <= k; ++j) {
        int p = (j < k) ? prefix[static_cast<std::size_t>(j)] : 2;
        long long Q = q * p;
        const int grid = 1024;
        double root = -1;
        double prev_a = wlo, prev_v = to_double(cascade_value<double>(family, wlo, Q, nullptr));
        for (int i = 1; i <= grid && root < 0; ++i) {
            double aa = wlo + (whi - wlo) * i / grid;
            double v = to_double(cascade_value<double>(family, aa, Q, nullptr));
            if ((prev_v <= 0) != (v <= 0)) {
                double r = bisect_orbit_zero(family, Q, prev_a, aa, prev_v);
                // minimal critical period must be exactly Q
                bool minimal = true;
                double x = 0.0;
                UnimodalMap fr = family.make(r);
                for (long long t = 1; t < Q && minimal; ++t) {
                    x = fr(x);
                    if (std::abs(x) < 1e-6) minimal = false;
                }
                if (minimal && (j == 0 || periods_match(fr, std::vector<int>(prefix.begin(),
                                                                             prefix.begin() + j))))
                    root = r;
            }
            prev_a = aa;
            prev_v = v;
        }
        if (root < 0)
            throw BracketInvalid("no window for combinatorics entry " + std::to_string(j));
        if (j == k) {
            (void)tol;
            return root;
        }

        // Narrow to the window around the root where the first j+1 periods match.
        std::vector<int> want(prefix.begin(), prefix.begin() + (j + 1));
        auto pred = [&](double aa) { return periods_match(family.make(aa), want); };
        double step = (whi - wlo) / grid;
        double in_lo = root - 0.05 * step, in_hi = root + 0.05 * step;
        while (!pred(in_lo) && root - in_lo > 1e-14) in_lo = root - 0.5 * (root - in_lo);
        while (!pred(in_hi) && in_hi - root > 1e-14) in_hi = root + 0.5 * (in_hi - root);
        if (!pred(in_lo) || !pred(in_hi))
            throw BracketInvalid("window around combinatorics root vanished");
        double out_lo = std::max(wlo, root - 4 * step);
        while (pred(out_lo) && out_lo > wlo + 1e-14) out_lo = std::max(wlo, out_lo - step);
        double out_hi = std::min(whi, root + 4 * step);
        while (pred(out_hi) && out_hi < whi - 1e-14) out_hi = std::min(whi, out_hi + step);
        for (int it = 0; it < 60; ++it) {
            double m = 0.5 * (out_lo + in_lo);
            (pred(m) ? in_lo : out_lo) = m;
        }
        for (int it = 0; it < 60; ++it) {
            double m = 0.5 * (in_hi + out_hi);
            (pred(m) ? in_hi : out_hi) = m;
        }
        double margin = 1e-3 * (in_hi - in_lo);
        wlo = in_lo + margin;
        whi = in_hi - margin;
        q = Q;
    }
    throw BracketInvalid("unreachable");
}

}  // namespace ahpl::unimodal
