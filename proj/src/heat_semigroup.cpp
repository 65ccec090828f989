#include "gaplab/heat_semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "gaplab/detail/fft.hpp"
#include "gaplab/error.hpp"

namespace gaplab {

std::size_t HeatParams::min_truncation(double t) {
    // Discarded tail terms satisfy e^{-k^2 t} <= e^{-40}.
    return static_cast<std::size_t>(std::ceil(std::sqrt(40.0 / t)));
}

HeatParams::HeatParams(double t) : time(t), truncation(0) {
    if (!(t > 0.0)) throw Error(ErrorKind::InvalidArgument, "heat time must be positive");
    truncation = min_truncation(t);
}

HeatParams::HeatParams(double t, std::size_t cutoff) : time(t), truncation(cutoff) {
    if (!(t > 0.0)) throw Error(ErrorKind::InvalidArgument, "heat time must be positive");
    if (cutoff < min_truncation(t)) {
        throw Error(ErrorKind::InvalidArgument,
                    "kernel cutoff " + std::to_string(cutoff) + " below the minimum " +
                        std::to_string(min_truncation(t)) + " for t = " + std::to_string(t));
    }
}

double theta_eval(const HeatParams& params, double x) {
    double sum = 1.0 / kTwoPi;
    for (std::size_t k = 1; k <= params.truncation; ++k) {
        const double kk = static_cast<double>(k);
        sum += std::exp(-kk * kk * params.time) * std::cos(kk * x) / kPi;
    }
    return sum;
}

PeriodicSignal heat_evolve(const PeriodicSignal& f, const HeatParams& params) {
    const std::size_t n = f.size();
    const auto multiplier = [&](std::size_t k) -> double {
        if (k > params.truncation) return 0.0;
        const double kk = static_cast<double>(k);
        return std::exp(-kk * kk * params.time);
    };

    if (detail::is_power_of_two(n)) {
        std::vector<std::complex<double>> spectrum(n);
        for (std::size_t j = 0; j < n; ++j) spectrum[j] = f[j];
        detail::fft_inplace(spectrum, false);
        for (std::size_t k = 1; k < n / 2; ++k) {
            const double m = multiplier(k);
            spectrum[k] *= m;
            spectrum[n - k] *= m;
        }
        spectrum[n / 2] *= multiplier(n / 2);
        detail::fft_inplace(spectrum, true);
        std::vector<double> samples(n);
        for (std::size_t j = 0; j < n; ++j) samples[j] = spectrum[j].real();
        return PeriodicSignal(std::move(samples));
    }

    const std::size_t kmax = (n - 1) / 2;
    FourierSeries s = fourier_coefficients(f, kmax);
    for (std::size_t k = 1; k <= kmax; ++k) {
        const double m = multiplier(k);
        s.a[k] *= m;
        s.b[k] *= m;
    }
    return synthesize(s, n);
}

namespace {

DecayBound decay_bound_common(const PeriodicSignal& f, double c, bool quartic_l1) {
    if (!(c > 0.0)) throw Error(ErrorKind::InvalidArgument, "decay constant must be positive");
    const double l2 = norm_l2(f);
    if (l2 == 0.0) {
        throw Error(ErrorKind::ZeroFunction, "decay bound undefined for the zero signal");
    }
    const PeriodicSignal df = derivative(f);
    double quotient;
    if (quartic_l1) {
        const double d1 = norm_l1(df);
        quotient = std::pow(d1 / l2, 4.0);
    } else {
        const double d2 = norm_l2(df);
        quotient = (d2 * d2) / (l2 * l2);
    }
    const double lhs = norm_l2(heat_evolve(f, HeatParams(1.0)));
    const double rhs = std::exp(-c * quotient) * l2;
    return DecayBound{lhs, rhs, quotient};
}

}  // namespace

DecayBound decay_lower_bound_l1(const PeriodicSignal& f, double c) {
    return decay_bound_common(f, c, true);
}

DecayBound decay_lower_bound_l2(const PeriodicSignal& f, double c) {
    return decay_bound_common(f, c, false);
}

MonotonicityReport sign_change_monotonicity_check(const PeriodicSignal& f,
                                                  const std::vector<double>& times,
                                                  double dead_band) {
    if (times.empty()) throw Error(ErrorKind::InvalidArgument, "time schedule is empty");
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(times[i] > 0.0)) {
            throw Error(ErrorKind::InvalidArgument, "times must be positive");
        }
        if (i > 0 && !(times[i] > times[i - 1])) {
            throw Error(ErrorKind::InvalidArgument, "times must be strictly increasing");
        }
    }
    MonotonicityReport report;
    report.initial = sign_changes(f, dead_band);
    report.counts.reserve(times.size());
    int previous = report.initial;
    report.nonincreasing = true;
    for (double t : times) {
        const int count = sign_changes(heat_evolve(f, HeatParams(t)), dead_band);
        report.counts.push_back(count);
        if (count > previous) report.nonincreasing = false;
        previous = count;
    }
    return report;
}

}  // namespace gaplab
