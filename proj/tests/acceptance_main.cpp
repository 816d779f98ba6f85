// Acceptance suite: one line per criterion, PASS/FAIL, with the measured
// quantities that justify the verdict.  Exit code is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "ahpl/certificates.hpp"
#include "ahpl/dynamics.hpp"
#include "ahpl/errors.hpp"
#include "ahpl/extension.hpp"
#include "ahpl/hyperbolic.hpp"
#include "ahpl/matcalc.hpp"
#include "ahpl/puzzles.hpp"
#include "ahpl/realbounds.hpp"
#include "ahpl/unimodal.hpp"

using namespace ahpl;
using namespace ahpl::unimodal;

namespace {

struct Check {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << "[failed: " << what << "] ";
        }
    }
};

struct SharedState {
    double a = 0.0;
    std::unique_ptr<Tower> tower;  // depth 13
    std::shared_ptr<const extension::AHExtension> ext;
    std::unique_ptr<dynamics::AHPLMap> map8;  // level 8, c_V = 2
    std::string cli_path;
};

SharedState state;

double ls_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= xs.size();
    my /= ys.size();
    double num = 0, den = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        num += (xs[i] - mx) * (ys[i] - my);
        den += (xs[i] - mx) * (xs[i] - mx);
    }
    return num / den;
}

// 1. Renormalization fidelity
Check criterion_fidelity() {
    Check c;
    FamilySpec quad;
    state.a = find_feigenbaum(quad, 1e-12);
    c.require(std::abs(state.a - 1.4011551890920506) < 1e-9, "parameter vs reference");
    c.detail << "a = " << state.a << "; ";

    state.tower = std::make_unique<Tower>(build_tower(quad.make(state.a), 13));
    for (int n = 0; n < 13; ++n) c.require(state.tower->level(n).period == 2, "a_n = 2");
    for (int n = 0; n <= 13; ++n)
        c.require(state.tower->level(n).q == (1LL << n), "q_n = 2^n");

    // independent high-precision orbit as the scaling oracle
    auto dd = feigenbaum_scalings_dd(quad, state.a, 13);
    double worst = 0.0;
    for (int n = 8; n <= 12; ++n) {
        double ratio = std::abs(dd[n + 1] / dd[n]);
        worst = std::max(worst, std::abs(ratio - 0.399535));
        double ratio_b64 =
            std::abs(state.tower->level(n + 1).lambda / state.tower->level(n).lambda);
        c.require(std::abs(ratio - ratio_b64) < 1e-6, "binary64 tower vs dd oracle");
    }
    c.require(worst < 1e-3, "ratio within 1e-3 of 0.399535");
    c.detail << "max |ratio - 0.399535| = " << worst;
    return c;
}

// 2. Real bounds evidence
Check criterion_realbounds() {
    Check c;
    const Tower& t = *state.tower;
    for (int n = 3; n <= 10; ++n) {
        auto [lo, hi] = realbounds::scaling_ratios(t, n);
        c.require(lo > 0.1 && hi < 0.9, "scaling ratios in (0.1, 0.9)");
    }
    std::vector<double> ns, lk;
    for (int n = 3; n <= 10; ++n) {
        ns.push_back(n);
        lk.push_back(std::log(realbounds::derivative_comparability(t, n)));
    }
    double slope = ls_slope(ns, lk);
    c.require(std::abs(slope) < 0.02, "K_hat log-slope within 0.02");
    c.detail << "K_hat slope = " << slope << "; ";

    double smax_early = 0.0;
    for (int n = 3; n <= 5; ++n) smax_early = std::max(smax_early, realbounds::compute_Sn(t, n));
    for (int n = 1; n <= 12; ++n)
        c.require(realbounds::compute_Sn(t, n) <= 1.5 * smax_early, "S_n bounded");
    for (int n = 0; n <= 11; ++n) {
        auto [alpha, beta] = realbounds::scaling_ratios(t, n);
        double lhs = realbounds::compute_Sn(t, n + 1);
        c.require(lhs <= beta * realbounds::compute_Sn(t, n) + 1.0 / alpha + 1e-12,
                  "S recursion at level " + std::to_string(n));
    }
    c.detail << "max S_n(3..5) = " << smax_early;
    return c;
}

// 3. C2 bounds evidence
Check criterion_c2() {
    Check c;
    double c2min = 1e300, c2max = 0, c1min = 1e300, c1max = 0;
    for (int n = 2; n <= 9; ++n) {
        realbounds::C2Norms norms = realbounds::renorm_c2_norm(*state.tower, n);
        c2min = std::min(c2min, norms.c2);
        c2max = std::max(c2max, norms.c2);
        c1min = std::min(c1min, norms.c1);
        c1max = std::max(c1max, norms.c1);
    }
    c.require(c2max / c2min < 10.0, "C2 max/min < 10");
    c.require(c1max / c1min < 10.0, "C1 max/min < 10");
    c.detail << "C2 in [" << c2min << ", " << c2max << "]";
    return c;
}

// 4. Chain-rule correctness
Check criterion_chainrule() {
    Check c;
    using namespace ahpl::matcalc;
    auto holo_jet = [](Complex value, Complex dp, Complex ddp) {
        Jet2 j;
        j.value = value;
        j.D = Mat2::conformal(dp);
        double A = ddp.real(), B = ddp.imag();
        j.D2.set_hess(0, Mat2{{{A, -B}, {-B, -A}}});
        j.D2.set_hess(1, Mat2{{{B, A}, {A, -B}}});
        return j;
    };
    Complex cc(0.1, 0.05);
    auto mapval = [&](Complex z) { return 0.5 * z * z + cc; };
    auto step = [&](Complex z) { return holo_jet(mapval(z), z, Complex(1.0, 0.0)); };

    Rng rng(424242);
    double worst_fold = 0.0;
    for (int t = 0; t < 10; ++t) {
        Complex z(rng.uniform(-1.2, 1.2), rng.uniform(-1.2, 1.2));
        Jet2 folded = step(z);
        for (int k = 2; k <= 20; ++k) {
            folded = compose_jet2(step(folded.value), folded);
            Jet2 it = iterate_jet2(step, z, k);
            worst_fold = std::max(worst_fold, it.D2.max_abs_diff(folded.D2));
            worst_fold = std::max(worst_fold, std::abs(it.value - folded.value));
        }
    }
    c.require(worst_fold < 1e-12, "iterate vs fold < 1e-12");
    c.detail << "max fold dev = " << worst_fold << "; ";

    double worst_fd = 0.0;
    for (int t = 0; t < 100; ++t) {
        Complex z(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
        int k = 2 + static_cast<int>(rng.bits() % 3);
        Jet2 it = iterate_jet2(step, z, k);
        auto kfold = [&](Complex w) {
            for (int i = 0; i < k; ++i) w = mapval(w);
            return w;
        };
        Jet2 fd = fd_jet2(kfold, z, 1e-4);
        double scale = std::max(1.0, op_norm(it.D2));
        worst_fd = std::max(worst_fd, it.D2.max_abs_diff(fd.D2) / scale);
    }
    c.require(worst_fd < 1e-5, "iterate vs finite differences < 1e-5 (100 cases)");
    c.detail << "max fd rel dev = " << worst_fd;
    return c;
}

// 5. Extension order
Check criterion_extension() {
    Check c;
    Tower t2 = build_tower(FamilySpec{}.make(state.a), 2);
    auto r1 = std::make_shared<RenormalizedMap>(t2.renormalization(1));
    auto r2 = std::make_shared<RenormalizedMap>(t2.renormalization(2));
    for (int m : {2, 3}) {
        extension::OrderFit fit = extension::verify_order(extension::AHExtension(r1, m));
        c.require(std::abs(fit.slope - m) < 0.05, "slope m = " + std::to_string(m));
        c.detail << "m=" << m << ": " << fit.slope << "; ";
    }
    extension::OrderFit fit6 = extension::verify_order(extension::AHExtension(r2, 6));
    c.require(std::abs(fit6.slope - 6.0) < 0.05, "slope m = 6");
    c.detail << "m=6: " << fit6.slope;
    return c;
}

// 6. Hyperbolic toolkit exactness
Check criterion_hyperbolic() {
    Check c;
    using namespace ahpl::hyperbolic;
    HyperbolicDomain D = HyperbolicDomain::unit_disk();
    c.require(std::abs(D.rho(Complex(0, 0)) - 2.0) < 1e-12, "rho(0) = 2");
    c.require(std::abs(D.dist(Complex(0, 0), Complex(0.5, 0)) - std::log(3.0)) < 1e-12,
              "d(0, 1/2) = log 3");

    HyperbolicDomain Y = HyperbolicDomain::slit_disk(Complex(0, 0), 1.0);
    Rng rng(6067);
    int sandwich_bad = 0, tested = 0;
    while (tested < 10000) {
        double x0 = rng.uniform(-0.6, 0.6);
        double h = rng.uniform(0.02, 0.45);
        if (std::abs(Complex(x0, h)) + h >= 0.999) continue;
        double y = rng.uniform(1e-4, h);
        double r = Y.rho(Complex(x0, y));
        if (r < 1.0 / y - 1e-9 / y) ++sandwich_bad;
        if (r > (1.0 / y) / (1.0 - 0.5 * y / h) + 1e-9 / y) ++sandwich_bad;
        ++tested;
    }
    c.require(sandwich_bad == 0, "slit-domain sandwich at 1e4 points");

    int phi_bad = 0;
    double s0 = 0.5 * std::log(2.0);
    for (int i = 1; i <= 10000; ++i) {
        double s = s0 + (20.0 - s0) * i / 10000.0;
        if (!(mcmullen_phi_gap(s) > 0.0)) ++phi_bad;
    }
    c.require(phi_bad == 0, "Phi bound on 1e4-point grid");
    c.detail << "sandwich violations " << sandwich_bad << ", phi violations " << phi_bad;
    return c;
}

// 7. Certificate arithmetic
Check criterion_certificates() {
    Check c;
    using namespace ahpl::certificates;
    ControlParams p;
    p.alpha = 10.0;
    p.theta = 0.1;
    p.n0 = 2;
    p.r = 4.0;
    p.M = 2.0;
    p.C_alpha = 1.0;
    ThresholdResult t = check_threshold(p);
    c.require(std::abs(t.rhs - 5.678362573099415) < 1e-3, "threshold anchor 5.678");
    c.detail << "rhs = " << t.rhs << "; ";

    double prev = 1e300;
    for (double scale : {1e1, 1e2, 1e3, 1e4, 1e6}) {
        ControlParams q = p;
        q.n0 = static_cast<int>(scale);
        q.alpha = scale;
        q.theta = 1.0 / scale;
        double rhs = check_threshold(q).rhs;
        c.require(rhs < prev, "limit sweep decreasing");
        prev = rhs;
    }
    c.require(std::abs(prev - 3.0) < 1e-3, "limit sweep reaches 3");
    c.detail << "limit rhs = " << prev << "; ";

    int tuples = 0, minimal_Ns = 0;
    for (double alpha : {20.0, 60.0, 150.0})
        for (double theta : {0.02, 0.1, 0.25})
            for (int n0 : {2, 3, 6, 12})
                for (double M : {1.5, 2.0, 4.0})
                    for (double r : {4.0, 5.0, 6.5}) {
                        ControlParams q;
                        q.alpha = alpha;
                        q.theta = theta;
                        q.n0 = n0;
                        q.M = M;
                        q.r = r;
                        q.C_theta = 1.0;
                        q.C_alpha = 1.0 + std::log(alpha);
                        if (!check_threshold(q).pass) continue;
                        if (!(2.0 * compute_K2(q) < compute_K1(q))) continue;
                        XiTable table = xi_table(q, 200);
                        c.require(table.all_above_one, "xi > 1 on [n0, 200]");
                        c.require(table.minimal_N >= q.n0, "minimal N finite");
                        ++tuples;
                        minimal_Ns = std::max(minimal_Ns, table.minimal_N);
                    }
    c.require(tuples > 20, "enough admissible tuples sampled");
    c.detail << tuples << " tuples, max minimal N = " << minimal_Ns;
    return c;
}

// 8. Dynamics at level 8
Check criterion_dynamics() {
    Check c;
    FamilySpec quad;
    state.ext = std::make_shared<extension::AHExtension>(extension::extend(quad.make(state.a), 3));
    state.map8 = std::make_unique<dynamics::AHPLMap>(
        dynamics::build_domains(state.ext, *state.tower, 8, 2.0));
    const dynamics::AHPLMap& map = *state.map8;

    // winding: the image of the traced boundary winds degree times around 0
    double total_arg = 0.0;
    Complex prev = map.G(map.boundary[0]);
    for (std::size_t j = 1; j <= map.boundary.size(); ++j) {
        Complex cur = map.G(map.boundary[j % map.boundary.size()]);
        double d = std::arg(cur / prev);
        total_arg += d;
        prev = cur;
    }
    int winding = static_cast<int>(std::lround(total_arg / 6.283185307179586));
    c.require(winding == 2, "winding 2");
    c.require(map.mod_lower >= 0.05, "modulus estimate >= 0.05");
    c.detail << "winding " << winding << ", mod " << map.mod_lower << "; ";

    int found = 0;
    for (int p = 1; p <= 4; ++p) {
        auto pts = dynamics::find_periodic(map, p);
        for (const auto& pt : pts) {
            c.require(pt.expanding, "periodic point expanding (p = " + std::to_string(p) + ")");
            ++found;
        }
    }
    c.require(found >= 10, "periodic points found");
    c.detail << found << " periodic points (p <= 4, duplicates across p); ";

    auto seeds = certificates::sample_chain_seeds(map, 64, 40, 1234);
    c.require(seeds.size() == 64, "64-orbit corpus");
    double min_eta = 1e300;
    int increasing = 0;
    for (Complex z : seeds) {
        dynamics::ExpansionReport rep = dynamics::orbit_expansion(map, z, Complex(1, 0), 40);
        min_eta = std::min(min_eta, rep.eta_hat);
        if (rep.increasing_tail) ++increasing;
    }
    c.require(min_eta > 0.0, "eta_hat > 0");
    c.require(increasing == static_cast<int>(seeds.size()), "increasing tails");
    c.detail << "min eta = " << min_eta << ", increasing " << increasing << "/64";
    return c;
}

// 9. Topology evidence
Check criterion_topology() {
    Check c;
    // escape-field interior fraction halves when max_iter and resolution
    // double; measured in the low-iteration canopy regime (c_V = 1.45), where
    // the decay rate sits at the predicted one-half (deeper caps decay faster)
    dynamics::AHPLMap thin = dynamics::build_domains(state.ext, *state.tower, 8, 1.45);
    dynamics::EscapeField f1 = dynamics::filled_julia(thin, 256, 2);
    dynamics::EscapeField f2 = dynamics::filled_julia(thin, 512, 4);
    double a1 = f1.interior_fraction(), a2 = f2.interior_fraction();
    c.require(a1 > 0, "base interior fraction positive");
    double ratio = a2 / a1;
    c.require(ratio >= 0.4 && ratio <= 0.6, "interior fraction halves within 20%");
    c.detail << "interior " << a1 << " -> " << a2 << " (ratio " << ratio << "); ";

    const dynamics::AHPLMap& map = *state.map8;
    std::vector<Complex> samples;
    for (int p = 3; p <= 7 && samples.size() < 64; ++p) {
        auto pts = dynamics::find_periodic(map, p);
        for (const auto& pt : pts)
            if (!pt.real_point && std::abs(pt.z.imag()) > 0.02 && samples.size() < 64)
                samples.push_back(pt.z);
    }
    c.require(samples.size() == 64, "64 off-axis samples");
    puzzles::ShrinkTable shrink = puzzles::shrinking_diagnostic(map, samples, 8);
    c.require(shrink.failed == 0, "all sample nests traced");
    double worst_ratio = 0.0;
    for (const auto& row : shrink.rows) {
        if (row.ok) worst_ratio = std::max(worst_ratio, row.fitted_ratio);
        c.require(row.ok && row.fitted_ratio < 0.95, "fitted ratio < 0.95");
    }
    c.detail << "worst shrink ratio " << worst_ratio << "; ";

    puzzles::ConjugacyReport conj = puzzles::conjugacy_evidence(map, state.a, 2048);
    c.require(conj.first_disagreement == -1, "itineraries agree to 2048");
    c.detail << "conjugacy agrees to " << conj.length;
    return c;
}

// 10. Determinism
Check criterion_determinism() {
    Check c;
    if (state.cli_path.empty()) {
        c.require(false, "CLI path not supplied (pass as argv[1])");
        return c;
    }
    std::string cmd = state.cli_path + " --help > /dev/null 2>&1";
    c.require(std::system(cmd.c_str()) == 0, "CLI runs");

    auto slurp = [](const std::string& p) {
        FILE* f = std::fopen(p.c_str(), "rb");
        if (!f) return std::string();
        std::string s;
        char buf[65536];
        std::size_t n;
        while ((n = std::fread(buf, 1, sizeof(buf), f)) > 0) s.append(buf, n);
        std::fclose(f);
        return s;
    };
    if (std::system("rm -rf acceptance_det_runs") != 0)
        c.detail << "[stale run dir not removed] ";
    std::string common = " --depth 6 --level 5 --grid 192 --max-iter 64 --seed 9 ";
    for (const std::string& sub : {std::string("julia"), std::string("renorm")}) {
        std::string c1 = state.cli_path + " " + sub + common +
                         "--threads 1 --out acceptance_det_runs/" + sub + "1 > /dev/null 2>&1";
        std::string c2 = state.cli_path + " " + sub + common +
                         "--threads 8 --out acceptance_det_runs/" + sub + "8 > /dev/null 2>&1";
        c.require(std::system(c1.c_str()) == 0, sub + " run 1");
        c.require(std::system(c2.c_str()) == 0, sub + " run 8");
    }
    for (const char* f : {"julia.ppm", "julia_exits.csv", "domain.json", "config.json"}) {
        std::string x = slurp("acceptance_det_runs/julia1/" + std::string(f));
        std::string y = slurp("acceptance_det_runs/julia8/" + std::string(f));
        c.require(!x.empty() && x == y, std::string("julia byte-identical: ") + f);
    }
    for (const char* f : {"tower.json", "tower.csv"}) {
        std::string x = slurp("acceptance_det_runs/renorm1/" + std::string(f));
        std::string y = slurp("acceptance_det_runs/renorm8/" + std::string(f));
        c.require(!x.empty() && x == y, std::string("renorm byte-identical: ") + f);
    }
    c.detail << "outputs byte-identical across reruns and worker counts";
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc > 1) state.cli_path = argv[1];
    struct Entry {
        int id;
        const char* name;
        std::function<Check()> fn;
        double budget_s;  // 0: no stated budget
    };
    std::vector<Entry> entries{
        {1, "renormalization fidelity", criterion_fidelity, 10.0},
        {2, "real bounds evidence", criterion_realbounds, 30.0},
        {3, "C2 bounds evidence", criterion_c2, 60.0},
        {4, "chain-rule correctness", criterion_chainrule, 0.0},
        {5, "extension order", criterion_extension, 0.0},
        {6, "hyperbolic toolkit exactness", criterion_hyperbolic, 0.0},
        {7, "certificate arithmetic", criterion_certificates, 0.0},
        {8, "dynamics at level 8", criterion_dynamics, 300.0},
        {9, "topology evidence", criterion_topology, 0.0},
        {10, "determinism", criterion_determinism, 0.0},
    };
    int failures = 0;
    for (auto& e : entries) {
        auto t0 = std::chrono::steady_clock::now();
        Check c;
        try {
            c = e.fn();
        } catch (const std::exception& ex) {
            c.pass = false;
            c.detail << "[exception: " << ex.what() << "]";
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (e.budget_s > 0 && secs > e.budget_s) {
            c.pass = false;
            c.detail << " [over budget " << e.budget_s << " s]";
        }
        std::printf("[%2d] %s  %-28s (%.1f s)  %s\n", e.id, c.pass ? "PASS" : "FAIL", e.name,
                    secs, c.detail.str().c_str());
        std::fflush(stdout);
        if (!c.pass) ++failures;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(entries.size()) - failures,
                entries.size());
    return failures;
}
