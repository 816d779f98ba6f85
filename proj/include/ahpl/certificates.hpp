#pragma once

#include <string>
#include <vector>

#include "ahpl/dynamics.hpp"

namespace ahpl::certificates {

struct ControlParams {
    double alpha = 10.0;   // > 1
    double delta = 0.5;    // (0, 1)
    double theta = 0.1;    // (0, 1)
    double M = 2.0;        // > 1
    int n0 = 2;
    double r = 4.0;        // smoothness order, > 1
    double b0 = 1.0;
    double C_theta = 1.0;  // empirical quasi-isometry constant
    double C_alpha = 0.0;  // diam_Y(U \ U_alpha), measured
    double C0 = 1.0;       // Taylor-remainder knob inside B_theta

    double lambda() const { return 1.0 / M; }
    void validate() const;
};

// K1 = (1/3) e^{-2 C_alpha} exp(-2 (1 - 1/(2 alpha))^{-1} log M); always < 1.
double compute_K1(const ControlParams& p);

// K2 = C_theta (alpha M)^{(1-r)(1-theta)}.
double compute_K2(const ControlParams& p);

// xi_n = (1 + K1 lambda^{2n (1-1/(2 alpha))^{-1}}) (1 - K2 lambda^{(n-1)(r-1)(1-theta)}).
double compute_xi(const ControlParams& p, int n);
// xi_n - 1 without the catastrophic cancellation of the product form; the
// sign is decided in log space when the correction terms underflow.
double compute_xi_minus_one(const ControlParams& p, int n);

struct ThresholdResult {
    double rhs = 0.0;     // 1 + 4 n0 alpha / ((n0-1)(1-theta)(2 alpha - 1))
    double margin = 0.0;  // r - rhs
    bool pass = false;
};
ThresholdResult check_threshold(const ControlParams& p);  // throws InvalidN0 for n0 < 2

struct XiTable {
    std::vector<std::pair<int, double>> rows;  // (n, xi_n - 1) for n in [n0, n_max]
    bool all_above_one = false;
    int minimal_N = -1;  // least N with 1 + M (lambda^{n-1}/(alpha M))^{r-1} <= xi_n
                         // for every n in [N, n_max]; -1 when none
};
XiTable xi_table(const ControlParams& p, int n_max = 200);

struct ConditionResult {
    std::string id;
    bool pass = false;
    double measured = 0.0;
    std::string note;
};

struct CertificateReport {
    ControlParams params;
    double K1 = 0.0, K2 = 0.0;
    ThresholdResult threshold;
    XiTable xi;
    std::vector<ConditionResult> conditions;  // "i".."vii" plus "remark"
    bool all_pass = false;
    bool c2_substituted = true;  // condition (ii) measured on F itself
};

struct CertifyOptions {
    int samples = 512;
    std::uint64_t seed = 0xCE57;
    double C_remark = 25.0;  // ceiling constant in diam <= C + log alpha
    int xi_n_max = 200;
};

// Measures the seven controlled-map conditions on the (rescaled) AHPL map,
// with F standing in for the diffeomorphic Stoilow factor.
CertificateReport check_controlled(const dynamics::AHPLMap& map, ControlParams params,
                                   const CertifyOptions& opts = {});

// ---------------------------------------------------------------------------
// Chain expansion: c with  c sup log K_{G^n} <= inf log |DG^n v|_Y per chain.

struct ChainOptions {
    int chains = 100;
    int steps = 12;
    int max_strips = 16;     // chains meeting more scale strips are excluded
    double probe_radius = 1e-3;
    std::uint64_t seed = 0xC4A1;
    ControlParams scale_params;  // alpha, M for the strip decomposition
};

struct ChainReport {
    int chains_used = 0;
    int chains_excluded = 0;
    bool holomorphic = false;  // sup log K == 0 on every chain
    double c = 0.0;            // +inf sentinel when holomorphic
};

ChainReport chain_expansion_constant(const dynamics::AHPLMap& map,
                                     const std::vector<Complex>& seeds,
                                     const ChainOptions& opts = {});

// Seed corpus: points in U off the real axis whose orbits stay in U and off R
// for the requested number of steps.
std::vector<Complex> sample_chain_seeds(const dynamics::AHPLMap& map, int count, int steps,
                                        std::uint64_t seed);

}  // namespace ahpl::certificates
