#include "gaplab/torus_signal.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>

#include "gaplab/detail/fft.hpp"
#include "gaplab/detail/rng.hpp"
#include "gaplab/error.hpp"

namespace gaplab {

namespace {

void format_double(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
}

std::vector<std::complex<double>> forward_spectrum(const PeriodicSignal& f) {
    std::vector<std::complex<double>> data(f.size());
    for (std::size_t j = 0; j < f.size(); ++j) data[j] = f[j];
    detail::fft_inplace(data, false);
    return data;
}

}  // namespace

PeriodicSignal::PeriodicSignal(std::vector<double> samples) : samples_(std::move(samples)) {
    if (samples_.size() < 8) {
        throw Error(ErrorKind::InvalidArgument, "signal needs at least 8 samples");
    }
    for (double v : samples_) {
        if (!std::isfinite(v)) {
            throw Error(ErrorKind::InvalidArgument, "signal samples must be finite");
        }
    }
}

PeriodicSignal PeriodicSignal::from_function(const std::function<double(double)>& f,
                                             std::size_t n) {
    if (n < 8) throw Error(ErrorKind::InvalidArgument, "signal needs at least 8 samples");
    std::vector<double> samples(n);
    for (std::size_t j = 0; j < n; ++j) {
        samples[j] = f(kTwoPi * static_cast<double>(j) / static_cast<double>(n));
    }
    return PeriodicSignal(std::move(samples));
}

double FourierSeries::eval(double x) const {
    if (b.empty()) return 0.0;
    double sum = b[0] / kTwoPi;
    const std::complex<double> z(std::cos(x), std::sin(x));
    std::complex<double> w = z;  // z^k for the current mode
    for (std::size_t k = 1; k < b.size(); ++k) {
        sum += (a[k] * w.imag() + b[k] * w.real()) / kPi;
        w *= z;
    }
    return sum;
}

FourierSeries FourierSeries::derivative() const {
    FourierSeries d;
    d.a.assign(a.size(), 0.0);
    d.b.assign(b.size(), 0.0);
    for (std::size_t k = 1; k < b.size(); ++k) {
        const double kk = static_cast<double>(k);
        d.a[k] = -kk * b[k];
        d.b[k] = kk * a[k];
    }
    return d;
}

double inner_product(const PeriodicSignal& f, const PeriodicSignal& g) {
    if (f.size() != g.size()) {
        throw Error(ErrorKind::DimensionMismatch, "inner product needs equal sample counts");
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) sum += f[j] * g[j];
    return sum * kTwoPi / static_cast<double>(f.size());
}

FourierSeries fourier_coefficients(const PeriodicSignal& f, std::size_t max_mode) {
    const std::size_t n = f.size();
    if (2 * max_mode >= n) {
        throw Error(ErrorKind::Aliasing, "max_mode " + std::to_string(max_mode) +
                                             " not resolvable with " + std::to_string(n) +
                                             " samples; need max_mode < N/2");
    }
    FourierSeries s;
    s.a.assign(max_mode + 1, 0.0);
    s.b.assign(max_mode + 1, 0.0);
    const double scale = kTwoPi / static_cast<double>(n);

    if (detail::is_power_of_two(n)) {
        const auto spectrum = forward_spectrum(f);
        for (std::size_t k = 0; k <= max_mode; ++k) {
            s.b[k] = scale * spectrum[k].real();
            if (k > 0) s.a[k] = -scale * spectrum[k].imag();
        }
        return s;
    }

    for (std::size_t k = 0; k <= max_mode; ++k) {
        const double step = -kTwoPi * static_cast<double>(k) / static_cast<double>(n);
        const std::complex<double> dz(std::cos(step), std::sin(step));
        std::complex<double> w(1.0, 0.0);
        std::complex<double> acc(0.0, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            acc += f[j] * w;
            w *= dz;
        }
        s.b[k] = scale * acc.real();
        if (k > 0) s.a[k] = -scale * acc.imag();
    }
    return s;
}

PeriodicSignal synthesize(const FourierSeries& series, std::size_t n) {
    if (n < 8) throw Error(ErrorKind::InvalidArgument, "signal needs at least 8 samples");
    const std::size_t kmax = series.max_mode();
    if (2 * kmax >= n) {
        throw Error(ErrorKind::Aliasing, "series with max mode " + std::to_string(kmax) +
                                             " does not fit on " + std::to_string(n) + " samples");
    }
    if (series.a.size() != series.b.size()) {
        throw Error(ErrorKind::DimensionMismatch, "series arrays must have equal length");
    }

    if (detail::is_power_of_two(n)) {
        // f = (1/2pi) sum_k c_k e^{ikx} with c_k = b_k - i a_k, c_{-k} = conj(c_k).
        std::vector<std::complex<double>> spectrum(n, {0.0, 0.0});
        const double scale = static_cast<double>(n) / kTwoPi;
        spectrum[0] = scale * std::complex<double>(series.b[0], 0.0);
        for (std::size_t k = 1; k <= kmax; ++k) {
            const std::complex<double> ck(series.b[k], -series.a[k]);
            spectrum[k] = scale * ck;
            spectrum[n - k] = scale * std::conj(ck);
        }
        detail::fft_inplace(spectrum, true);
        std::vector<double> samples(n);
        for (std::size_t j = 0; j < n; ++j) samples[j] = spectrum[j].real();
        return PeriodicSignal(std::move(samples));
    }

    std::vector<double> samples(n);
    for (std::size_t j = 0; j < n; ++j) {
        samples[j] = series.eval(kTwoPi * static_cast<double>(j) / static_cast<double>(n));
    }
    return PeriodicSignal(std::move(samples));
}

int sign_changes(const PeriodicSignal& f, double dead_band) {
    if (dead_band < 0.0) {
        throw Error(ErrorKind::InvalidArgument, "dead band must be nonnegative");
    }
    const double peak = norm_linf(f);
    if (peak == 0.0) return 0;
    const double threshold = dead_band * peak;

    std::vector<int> signs;
    signs.reserve(f.size());
    for (std::size_t j = 0; j < f.size(); ++j) {
        if (std::abs(f[j]) > threshold) signs.push_back(f[j] > 0.0 ? 1 : -1);
    }
    if (signs.size() < 2) return 0;
    int count = 0;
    for (std::size_t j = 0; j < signs.size(); ++j) {
        if (signs[j] != signs[(j + 1) % signs.size()]) ++count;
    }
    return count;
}

Norms norms(const PeriodicSignal& f) {
    const double weight = kTwoPi / static_cast<double>(f.size());
    double l1 = 0.0, l2sq = 0.0, linf = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) {
        const double v = f[j];
        l1 += std::abs(v);
        l2sq += v * v;
        linf = std::max(linf, std::abs(v));
    }
    return Norms{l1 * weight, std::sqrt(l2sq * weight), linf};
}

double norm_l1(const PeriodicSignal& f) { return norms(f).l1; }
double norm_l2(const PeriodicSignal& f) { return norms(f).l2; }
double norm_linf(const PeriodicSignal& f) { return norms(f).linf; }

PeriodicSignal derivative(const PeriodicSignal& f) {
    const std::size_t n = f.size();
    if (detail::is_power_of_two(n)) {
        auto spectrum = forward_spectrum(f);
        spectrum[0] = 0.0;
        for (std::size_t k = 1; k < n / 2; ++k) {
            const std::complex<double> ik(0.0, static_cast<double>(k));
            spectrum[k] *= ik;
            spectrum[n - k] *= -ik;
        }
        // The Nyquist bin has no well-defined odd derivative; drop it.
        spectrum[n / 2] = 0.0;
        detail::fft_inplace(spectrum, true);
        std::vector<double> samples(n);
        for (std::size_t j = 0; j < n; ++j) samples[j] = spectrum[j].real();
        return PeriodicSignal(std::move(samples));
    }
    const std::size_t kmax = (n - 1) / 2;
    return synthesize(fourier_coefficients(f, kmax).derivative(), n);
}

PeriodicSignal band_limited_random(std::uint64_t seed, std::size_t min_mode,
                                   std::size_t max_mode, std::size_t n) {
    if (min_mode > max_mode) {
        throw Error(ErrorKind::InvalidArgument, "min_mode must not exceed max_mode");
    }
    if (2 * max_mode >= n) {
        throw Error(ErrorKind::Aliasing, "mode window does not fit on the sample grid");
    }
    detail::SplitMix64 rng(seed);
    FourierSeries s;
    s.a.assign(max_mode + 1, 0.0);
    s.b.assign(max_mode + 1, 0.0);
    for (std::size_t k = min_mode; k <= max_mode; ++k) {
        if (k == 0) {
            s.b[0] = kTwoPi * rng.normal();
            continue;
        }
        // Draw order (sin then cos, modes ascending) is part of the contract.
        s.a[k] = kPi * rng.normal();
        s.b[k] = kPi * rng.normal();
    }
    return synthesize(s, n);
}

void write_csv(std::ostream& out, const PeriodicSignal& f) {
    std::string line;
    out << "x,value\n";
    for (std::size_t j = 0; j < f.size(); ++j) {
        line.clear();
        format_double(line, f.x(j));
        line += ',';
        format_double(line, f[j]);
        line += '\n';
        out << line;
    }
    if (!out) throw Error(ErrorKind::Io, "failed writing signal csv");
}

PeriodicSignal read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorKind::Io, "empty signal csv");
    std::vector<double> values;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw Error(ErrorKind::Io, "malformed signal csv row");
        char* end = nullptr;
        const double v = std::strtod(line.c_str() + comma + 1, &end);
        if (end == line.c_str() + comma + 1) {
            throw Error(ErrorKind::Io, "malformed signal csv value");
        }
        values.push_back(v);
    }
    if (values.size() < 8) throw Error(ErrorKind::Io, "signal csv has fewer than 8 rows");
    return PeriodicSignal(std::move(values));
}

}  // namespace gaplab
