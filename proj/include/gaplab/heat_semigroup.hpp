#pragma once

#include <cstddef>
#include <vector>

#include "gaplab/torus_signal.hpp"

namespace gaplab {

/// Evolution time plus the mode cutoff used when the periodic heat kernel is
/// evaluated as a cosine series.  The minimal cutoff keeps every discarded
/// term below exp(-40).
struct HeatParams {
    double time;
    std::size_t truncation;

    explicit HeatParams(double t);
    HeatParams(double t, std::size_t cutoff);

    static std::size_t min_truncation(double t);
};

/// Periodic heat kernel value 1/(2 pi) + (1/pi) sum_{k<=cutoff} e^{-k^2 t} cos(k x).
double theta_eval(const HeatParams& params, double x);

/// Spectral heat flow: mode k is damped by e^{-k^2 t} when k <= cutoff and
/// dropped beyond the cutoff.  Grid size is preserved.
PeriodicSignal heat_evolve(const PeriodicSignal& f, const HeatParams& params);

struct DecayBound {
    double lhs;       // measured norm of the evolved signal at t = 1
    double rhs;       // predicted lower bound
    double quotient;  // raw exponent argument before the constant is applied
};

/// Lower bound for ||heat_evolve(f, 1)||_L2 driven by the L1 norm of f':
/// rhs = exp(-c * ||f'||_L1^4 / ||f||_L2^4) * ||f||_L2.  The constant c
/// defaults to 1 for reporting purposes.
DecayBound decay_lower_bound_l1(const PeriodicSignal& f, double c = 1.0);

/// Rayleigh-quotient form: rhs = exp(-c * ||f'||_L2^2 / ||f||_L2^2) * ||f||_L2.
/// With c = 1 the bound is an exact consequence of spectral decomposition, so
/// lhs >= rhs holds up to rounding for every signal.
DecayBound decay_lower_bound_l2(const PeriodicSignal& f, double c = 1.0);

struct MonotonicityReport {
    int initial;              // sign changes of f itself
    std::vector<int> counts;  // sign changes at each requested time
    bool nonincreasing;       // true when counts never rise along the schedule
};

/// Evolves f through an increasing time schedule and tracks the sign change
/// count, which the heat flow can only shrink.
MonotonicityReport sign_change_monotonicity_check(const PeriodicSignal& f,
                                                  const std::vector<double>& times,
                                                  double dead_band = kSignDeadBand);

}  // namespace gaplab
