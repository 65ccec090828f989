#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "gaplab/torus_signal.hpp"

namespace gaplab {

/// Alternating binomial bump train: sum_j (-1)^j C(order, j) on consecutive
/// width-epsilon half-open intervals starting at 0.  The piecewise-constant
/// profile has order+1 blocks and 2*ceil(order/2) cyclic sign changes.
struct StencilFamily {
    int order;
    double epsilon;
    std::vector<long long> coefficients;  // (-1)^j C(order, j), j = 0..order
};

/// Requires 1 <= order <= 40 and (order + 1) * epsilon < 2 pi.
StencilFamily make_stencil(int order, double epsilon);

/// Samples the stencil profile.  n_samples = 0 picks the smallest power of
/// two with at least 64 samples per epsilon-block (and at least 4096 total);
/// an explicit n_samples must meet the same density.
PeriodicSignal stencil_function(int order, double epsilon, std::size_t n_samples = 0);

/// Closed-form raw coefficients of the stencil profile for modes 0..max_mode.
/// Quadrature-free, so block widths far below the sample spacing stay exact.
FourierSeries stencil_series_exact(const StencilFamily& family, std::size_t max_mode);

/// Closed-form norms: l1 = 2^order * eps, l2 = sqrt(C(2 order, order) * eps),
/// linf = C(order, floor(order/2)).
Norms stencil_norms_exact(const StencilFamily& family);

/// Harmonic conjugate on the mode window: sin k -> -cos k, cos k -> sin k,
/// constant dropped.
FourierSeries hilbert_transform(const FourierSeries& series);

/// Turns of the closed curve t -> (f(t), Hf(t)) around the origin.  The curve
/// is the band-limited interpolant of the samples; angle steps larger than
/// pi/2 are resolved by bisecting with exact series evaluation.
int winding_number(const PeriodicSignal& f, double margin = 1e-6);

struct Lemma1Verdict {
    bool hypothesis_met;     // all modes 0..n below tol * ||f||_L2
    int sign_count;
    int winding;             // evaluated only when the hypothesis holds
    int min_sign_changes;    // 2n + 2
    int min_winding;         // n + 1
    bool conclusion_ok;      // vacuously true when the hypothesis fails
};

/// Checks the low-mode orthogonality hypothesis on raw coefficients, then the
/// two topological conclusions (sign changes and winding).
Lemma1Verdict lemma1_check(const PeriodicSignal& f, int n, double tol = 1e-9);

struct RatioRecord {
    int n;            // cyclic sign change count used for the mode window
    double lhs;       // sum of |a_k| + |b_k| over k <= floor(n/2)
    double l1;
    double linf;
    double rhs_core;  // l1^{n+1} / linf^n
    double ratio;     // lhs / rhs_core
};

/// Low-mode coefficient mass against the norm-ratio core, with the mode
/// window set by the sign change count of f.
RatioRecord theorem2_ratio(const PeriodicSignal& f, double dead_band = kSignDeadBand);

/// Same record computed entirely from closed forms for a stencil profile.
/// Immune to sampling resolution, so it stays meaningful for block widths
/// approaching or below the grid spacing of any sampled representation.
RatioRecord theorem2_ratio_exact(const StencilFamily& family);

struct Interval {
    double lo;
    double hi;
};

struct Lemma4Witness {
    std::vector<double> coefficients;  // unit-norm polynomial, degree <= n-1
    double value;                      // attained |integral of p * f|
    double pairing_det;                // determinant of the moment pairing matrix
};

/// For f = sum_j sign_j * indicator(I_j) on pairwise disjoint nondegenerate
/// intervals, returns the unit-norm polynomial of degree < n maximizing the
/// pairing integral, computed from the moment vector.
Lemma4Witness lemma4_witness(const std::vector<std::pair<Interval, int>>& intervals);

}  // namespace gaplab
