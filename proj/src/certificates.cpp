#include "ahpl/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ahpl/errors.hpp"
#include "ahpl/hyperbolic.hpp"

namespace ahpl::certificates {

using dynamics::AHPLMap;
using hyperbolic::HyperbolicDomain;
using matcalc::Mat2;

void ControlParams::validate() const {
    if (!(alpha > 1.0)) throw ConfigError("alpha must exceed 1");
    if (!(delta >= 0.0 && delta < 1.0)) throw ConfigError("delta must lie in [0,1)");
    if (!(theta >= 0.0 && theta < 1.0)) throw ConfigError("theta must lie in [0,1)");
    if (!(M >= 1.0)) throw ConfigError("M must be >= 1");
    if (!(r > 1.0)) throw ConfigError("r must exceed 1");
    if (!(C_alpha >= 0.0)) throw ConfigError("C_alpha must be non-negative");
}

double compute_K1(const ControlParams& p) {
    p.validate();
    double inv = 1.0 / (1.0 - 1.0 / (2.0 * p.alpha));
    return (1.0 / 3.0) * std::exp(-2.0 * p.C_alpha) * std::exp(-2.0 * inv * std::log(p.M));
}

double compute_K2(const ControlParams& p) {
    p.validate();
    return p.C_theta * std::pow(p.alpha * p.M, (1.0 - p.r) * (1.0 - p.theta));
}

double compute_xi(const ControlParams& p, int n) {
    double K1 = compute_K1(p), K2 = compute_K2(p);
    double lam = p.lambda();
    double inv = 1.0 / (1.0 - 1.0 / (2.0 * p.alpha));
    double grow = 1.0 + K1 * std::pow(lam, 2.0 * n * inv);
    double shrink = 1.0 - K2 * std::pow(lam, (n - 1.0) * (p.r - 1.0) * (1.0 - p.theta));
    return grow * shrink;
}

double compute_xi_minus_one(const ControlParams& p, int n) {
    double K1 = compute_K1(p), K2 = compute_K2(p);
    double lam = p.lambda();
    double inv = 1.0 / (1.0 - 1.0 / (2.0 * p.alpha));
    double la = std::log(K1) + 2.0 * n * inv * std::log(lam);
    double lb = std::log(K2) + (n - 1.0) * (p.r - 1.0) * (1.0 - p.theta) * std::log(lam);
    double a = std::exp(la), b = std::exp(lb);
    if (a > 0.0 || b > 0.0) return a - b - a * b;
    // both corrections underflow; the sign survives in log space
    return la > lb ? std::exp(-700.0) : -std::exp(-700.0);
}

ThresholdResult check_threshold(const ControlParams& p) {
    if (p.n0 < 2) throw InvalidN0("threshold requires n0 >= 2");
    p.validate();
    ThresholdResult res;
    res.rhs = 1.0 + 4.0 * p.n0 * p.alpha /
                        ((p.n0 - 1.0) * (1.0 - p.theta) * (2.0 * p.alpha - 1.0));
    res.margin = p.r - res.rhs;
    res.pass = res.margin > 0.0;
    return res;
}

XiTable xi_table(const ControlParams& p, int n_max) {
    XiTable table;
    table.all_above_one = true;
    double lam = p.lambda();
    std::vector<bool> lower_bound_ok;
    for (int n = p.n0; n <= n_max; ++n) {
        double ximinus = compute_xi_minus_one(p, n);
        table.rows.emplace_back(n, ximinus);
        if (!(ximinus > 0.0)) table.all_above_one = false;
        // 1 + M (lambda^{n-1}/(alpha M))^{r-1} <= xi_n, compared as differences
        double lhs = p.M * std::exp((p.r - 1.0) * ((n - 1.0) * std::log(lam) -
                                                   std::log(p.alpha * p.M)));
        lower_bound_ok.push_back(lhs <= ximinus);
    }
    // least N such that the lower bound holds from N to the cap
    int idx = static_cast<int>(lower_bound_ok.size());
    for (int i = static_cast<int>(lower_bound_ok.size()) - 1; i >= 0; --i) {
        if (!lower_bound_ok[static_cast<std::size_t>(i)]) break;
        idx = i;
    }
    if (idx < static_cast<int>(lower_bound_ok.size())) table.minimal_N = p.n0 + idx;
    return table;
}

// ---------------------------------------------------------------------------

namespace {

Complex mu_of(const Mat2& D) {
    Complex dz = D.dz();
    if (std::abs(dz) < 1e-300) return Complex(1.0, 0.0);  // degenerate, |mu| = 1
    return D.dzbar() / dz;
}

std::vector<Complex> sample_in_U(const AHPLMap& map, int count, Rng& rng, double y_min) {
    std::vector<Complex> pts;
    int tries = 0;
    while (static_cast<int>(pts.size()) < count && tries < 1000 * count) {
        ++tries;
        Complex zh(rng.uniform(-map.c_V, map.c_V), rng.uniform(-map.c_V, map.c_V));
        if (std::abs(zh.imag()) < y_min) continue;
        if (!map.in_U_rescaled(zh)) continue;
        pts.push_back(zh);
    }
    return pts;
}

}  // namespace

CertificateReport check_controlled(const AHPLMap& map, ControlParams params,
                                   const CertifyOptions& opts) {
    CertificateReport rep;
    rep.threshold = check_threshold(params);  // validates n0 as well

    HyperbolicDomain Y = HyperbolicDomain::slit_disk(Complex(0, 0), map.c_V);
    Rng rng(opts.seed);

    // (i) diam(V) <= M and mod(V \ U) >= 1/M
    {
        ConditionResult c;
        c.id = "i";
        double diam = 2.0 * map.c_V;
        c.measured = std::max(diam, 1.0 / map.mod_lower);
        c.pass = diam <= params.M && map.mod_lower >= 1.0 / params.M;
        c.note = "diam(V) and 1/mod(V\\U)";
        rep.conditions.push_back(c);
    }

    // (ii) C2 norm of the return map on U (stand-in for the Stoilow factor)
    {
        ConditionResult c;
        c.id = "ii";
        auto pts = sample_in_U(map, opts.samples / 2, rng, 0.0);
        double norm = 0.0;
        for (Complex zh : pts) {
            matcalc::Jet2 j = map.G_jet2_rescaled(zh);
            norm = std::max(norm, std::abs(j.value));
            norm = std::max(norm, matcalc::op_norm(j.D));
            norm = std::max(norm, matcalc::op_norm(j.D2));
        }
        c.measured = norm;
        c.pass = norm <= params.M;
        c.note = "C2 norm of F^q itself (Stoilow factor not computed)";
        rep.conditions.push_back(c);
    }

    // samples off the real axis for the dilatation conditions
    auto off_axis = sample_in_U(map, opts.samples, rng, 1e-6 * map.c_V);

    // (iii) sup |mu| <= delta
    {
        ConditionResult c;
        c.id = "iii";
        double sup = 0.0;
        for (Complex zh : off_axis) {
            Mat2 D = map.G_and_DG_rescaled(zh).second;
            sup = std::max(sup, std::abs(mu_of(D)));
        }
        c.measured = sup;
        c.pass = sup <= params.delta;
        c.note = "sup |mu_F| on U off R";
        rep.conditions.push_back(c);
    }

    // (iv) |mu(z)| <= M |Im z|^{r-1}
    {
        ConditionResult c;
        c.id = "iv";
        double sup = 0.0;
        for (Complex zh : off_axis) {
            Mat2 D = map.G_and_DG_rescaled(zh).second;
            double am = std::abs(mu_of(D));
            sup = std::max(sup, am / std::pow(std::abs(zh.imag()), params.r - 1.0));
        }
        c.measured = sup;
        c.pass = sup <= params.M;
        c.note = "sup |mu| / |Im z|^{r-1}";
        rep.conditions.push_back(c);
    }

    // (v) D(z_alpha, |Im z_alpha|) inside Y for z in U_alpha
    {
        ConditionResult c;
        c.id = "v";
        double strip = 1.0 / (params.alpha * params.M);
        double worst = 0.0;
        for (Complex zh : off_axis) {
            if (std::abs(zh.imag()) > strip) continue;
            Complex za(zh.real(), params.alpha * zh.imag());
            double reach = std::abs(za) + std::abs(za.imag());
            worst = std::max(worst, reach);
        }
        c.measured = worst;
        c.pass = worst < map.c_V;
        c.note = "max |z_alpha| + |Im z_alpha| over U_alpha";
        rep.conditions.push_back(c);
    }

    // (vi) imaginary-part and density ratios between z and F(z)
    {
        ConditionResult c;
        c.id = "vi";
        double worst = 1.0;
        for (Complex zh : off_axis) {
            Complex gz = map.G_rescaled(zh);
            if (gz.imag() == 0.0 || !Y.contains(gz)) continue;
            double r1 = std::abs(zh.imag()) / std::abs(gz.imag());
            double r2 = Y.rho(zh) / Y.rho(gz);
            worst = std::max({worst, r1, 1.0 / r1, r2, 1.0 / r2});
        }
        c.measured = worst;
        c.pass = worst <= params.M;
        c.note = "max two-sided Im and density ratio";
        rep.conditions.push_back(c);
    }

    // diam_Y(U \ U_alpha), one component, sampled
    double diam_ua = 0.0;
    {
        // log-uniform heights so the thin region just above the strip is seen
        double strip = 1.0 / (params.alpha * params.M);
        double span = std::log(map.c_V / strip);
        std::vector<Complex> pts;
        int tries = 0;
        while (static_cast<int>(pts.size()) < opts.samples && tries < 2000 * opts.samples) {
            ++tries;
            double y = strip * std::exp(rng.uniform(0.0, span));
            Complex zh(rng.uniform(-map.c_V, map.c_V), y);
            if (zh.imag() <= strip) continue;
            if (!map.in_U_rescaled(zh)) continue;
            pts.push_back(zh);
        }
        diam_ua = Y.diameter(pts);
        if (params.C_alpha == 0.0) params.C_alpha = diam_ua;
    }
    rep.params = params;
    rep.K1 = compute_K1(params);
    rep.K2 = compute_K2(params);
    rep.xi = xi_table(params, opts.xi_n_max);

    // (vii) Phi(diam_Y(U \ U_alpha) + 2 n0 log M) < 1 - C_theta delta^{1-theta}
    {
        ConditionResult c;
        c.id = "vii";
        double s = diam_ua + 2.0 * params.n0 * std::log(params.M);
        double rhs = params.C_theta * std::pow(params.delta, 1.0 - params.theta);
        c.measured = s;
        c.pass = s > 0 && hyperbolic::mcmullen_one_minus_phi(s) > rhs;
        c.note = "Phi argument; passes iff 1 - Phi exceeds C_theta delta^{1-theta}";
        rep.conditions.push_back(c);
    }

    // Remark: diam_Y(U \ U_alpha) <= C + log alpha
    {
        ConditionResult c;
        c.id = "remark";
        c.measured = diam_ua;
        c.pass = diam_ua <= opts.C_remark + std::log(params.alpha);
        c.note = "diam_Y(U \\ U_alpha) against C + log alpha";
        rep.conditions.push_back(c);
    }

    rep.all_pass = true;
    for (const auto& c : rep.conditions)
        if (c.id != "remark" && !c.pass) rep.all_pass = false;
    return rep;
}

// ---------------------------------------------------------------------------

std::vector<Complex> sample_chain_seeds(const AHPLMap& map, int count, int steps,
                                        std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Complex> out;
    int tries = 0;
    while (static_cast<int>(out.size()) < count && tries < 20000 * count) {
        ++tries;
        Complex zh(rng.uniform(-map.c_V, map.c_V), rng.uniform(-map.c_V, map.c_V));
        if (std::abs(zh.imag()) < 1e-4 * map.c_V) continue;
        if (!map.in_U_rescaled(zh)) continue;
        Complex w = zh;
        bool ok = true;
        for (int k = 0; k < steps && ok; ++k) {
            w = map.G_rescaled(w);
            if (std::abs(w.imag()) < 1e-13 || !map.in_U_rescaled(w)) ok = false;
        }
        if (ok) out.push_back(zh);
    }
    return out;
}

ChainReport chain_expansion_constant(const AHPLMap& map, const std::vector<Complex>& seeds,
                                     const ChainOptions& opts) {
    HyperbolicDomain Y = HyperbolicDomain::slit_disk(Complex(0, 0), map.c_V);
    dynamics::ScaleIndex strips{opts.scale_params.alpha, opts.scale_params.M};
    Rng rng(opts.seed);

    ChainReport rep;
    rep.c = std::numeric_limits<double>::infinity();
    bool any_dilatation = false;

    for (Complex seed : seeds) {
        // probes around the seed: the sampled set A = B_0 of the chain
        std::vector<Complex> probes{seed};
        for (int i = 0; i < 4; ++i) probes.push_back(rng.in_disk(seed, opts.probe_radius));

        double inf_log_r = 1e300, sup_log_K = 0.0;
        int strip_span = 0;
        int probes_used = 0;
        bool seed_valid = true;
        for (std::size_t pi = 0; pi < probes.size(); ++pi) {
            Complex z = probes[pi];
            bool is_seed = pi == 0;
            Mat2 D = Mat2::identity();
            Complex v(1.0, 0.0);
            double log_growth = 0.0;
            bool ok = std::abs(z.imag()) > 1e-13;
            double rho0 = ok ? Y.rho(z) : 0.0;
            int k_lo = ok ? strips.k(z) : 0, k_hi = k_lo;
            for (int k = 0; ok && k < opts.steps; ++k) {
                if (!map.in_U_rescaled(z)) {
                    // the seed orbit defines the chain; a stray probe only
                    // shrinks the sampled set
                    if (is_seed)
                        throw ChainInvalid("seed orbit left U; B_j is not a preimage component");
                    ok = false;
                    break;
                }
                auto [nz, DJ] = map.G_and_DG_rescaled(z);
                D = DJ * D;
                Complex nv = DJ.apply(v);
                log_growth += std::log(std::abs(nv));
                v = nv / std::abs(nv);
                z = nz;
                if (std::abs(z.imag()) < 1e-13) {
                    ok = false;
                    break;
                }
                int kk = strips.k(z);
                if (kk != dynamics::ScaleIndex::kRealAxis) {
                    k_lo = std::min(k_lo, kk);
                    k_hi = std::max(k_hi, kk);
                }
            }
            if (!ok) {
                if (is_seed) seed_valid = false;
                continue;
            }
            ++probes_used;
            double log_r = std::log(Y.rho(z)) - std::log(rho0) + log_growth;
            inf_log_r = std::min(inf_log_r, log_r);
            double am = std::abs(mu_of(D));
            if (am > 0) any_dilatation = true;
            sup_log_K = std::max(sup_log_K, std::log((1.0 + am) / (1.0 - am)));
            strip_span = std::max(strip_span, k_hi - k_lo + 1);
        }
        if (!seed_valid || probes_used == 0 || strip_span > opts.max_strips) {
            ++rep.chains_excluded;
            continue;
        }
        ++rep.chains_used;
        if (sup_log_K > 0) rep.c = std::min(rep.c, inf_log_r / sup_log_K);
    }
    rep.holomorphic = !any_dilatation;
    return rep;
}

}  // namespace ahpl::certificates
