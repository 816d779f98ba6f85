#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ahpl/unimodal.hpp"

namespace ahpl::realbounds {

using unimodal::Tower;

struct BoundsLevel {
    int n = 0;
    long long q = 1;
    double lambda = 1.0;
    double alpha_hat = 0.0;  // min |child| / |parent|
    double beta_hat = 0.0;   // max |child| / |parent|
    double K_hat = 0.0;
    double Sn = 0.0;
    double Sn_star = 0.0;
    double c0 = 0.0, c1 = 0.0, c2 = 0.0;
};

struct BoundsReport {
    std::vector<BoundsLevel> rows;
};

// min and max of |Delta| / |Delta*| over nested pairs between levels n+1 and n.
std::pair<double, double> scaling_ratios(const Tower& tower, int n);

// S_n = sum over non-central level-n intervals of |Delta| / d(0, Delta),
// compensated summation.
double compute_Sn(const Tower& tower, int n);
double compute_Sn_reversed(const Tower& tower, int n);  // reversed order, for reproducibility checks

// S_n* = sum_{i=1}^{q_n-1} (|Delta_i|^2 / |Delta_{i+1}|) d(0, Delta_i)^{d-2},
// index q_n read as 0.
double compute_Sn_star(const Tower& tower, int n, int d);

struct KhatOptions {
    int samples_per_interval = 8;
    int max_pairs = 200;
    std::uint64_t seed = 0x4b6861744b6e61ULL;
};

// max over sampled (i < j, x in Delta_i) of the two-sided derivative
// comparability ratio |(f^{j-i})'(x)| |Delta_i| / |Delta_j| and its reciprocal.
double derivative_comparability(const Tower& tower, int n, const KhatOptions& opts = {});

struct C2Norms {
    double c0 = 0.0, c1 = 0.0, c2 = 0.0;
};

// Sup norms of R^n f and its first two derivatives on [-1, 1], over a uniform
// grid refined near 0 and the endpoints.
C2Norms renorm_c2_norm(const Tower& tower, int n, int grid = 4096);

BoundsReport bounds_report(const Tower& tower, int n_max, const KhatOptions& opts = {},
                           int grid = 4096);

// Fit C0 in |f'(x)| >= C0 |x|^{d-1} over [-1, 1] (infimum of the ratio).
double fit_critical_coefficient(const unimodal::UnimodalMap& f, int samples = 512);

}  // namespace ahpl::realbounds
