#include "gaplab/harmonic_disk.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "gaplab/error.hpp"

namespace gaplab {

namespace {

// Re(i^k) and Im(i^k) cycle with period 4.
constexpr int kReIk[4] = {1, 0, -1, 0};
constexpr int kImIk[4] = {0, 1, 0, -1};

double factorial(std::size_t k) {
    double f = 1.0;
    for (std::size_t i = 2; i <= k; ++i) f *= static_cast<double>(i);
    return f;
}

double mode_magnitude(const FourierSeries& s, std::size_t k) {
    return std::hypot(s.a[k], s.b[k]);
}

}  // namespace

DiskHarmonic::DiskHarmonic(PeriodicSignal boundary, std::size_t max_mode)
    : boundary_(std::move(boundary)) {
    const std::size_t cap = boundary_.size() / 2 - 1;
    if (max_mode == 0) {
        max_mode = cap;
    } else if (max_mode > cap) {
        throw Error(ErrorKind::Aliasing, "requested band exceeds the boundary sample grid");
    }
    series_ = fourier_coefficients(boundary_, max_mode);
}

double poisson_extend(const DiskHarmonic& u, double r, double theta) {
    if (!(r >= 0.0) || r >= 1.0) {
        throw Error(ErrorKind::InvalidArgument, "radius must satisfy 0 <= r < 1");
    }
    const FourierSeries& s = u.series();
    double sum = s.b[0] / kTwoPi;
    double rk = 1.0;
    for (std::size_t k = 1; k < s.b.size(); ++k) {
        rk *= r;
        if (rk == 0.0) break;
        sum += rk * (s.a[k] * std::sin(static_cast<double>(k) * theta) +
                     s.b[k] * std::cos(static_cast<double>(k) * theta)) /
               kPi;
    }
    return sum;
}

std::vector<std::pair<double, double>> origin_derivatives(const DiskHarmonic& u, std::size_t m) {
    if (m > u.max_mode()) {
        throw Error(ErrorKind::InsufficientBand,
                    "derivative order " + std::to_string(m) + " exceeds the stored band " +
                        std::to_string(u.max_mode()));
    }
    if (m > 170) {
        throw Error(ErrorKind::InvalidArgument, "derivative order overflows double factorials");
    }
    const FourierSeries& s = u.series();
    std::vector<std::pair<double, double>> out;
    out.reserve(m + 1);
    const double center = s.b[0] / kTwoPi;
    out.emplace_back(center, center);
    for (std::size_t k = 1; k <= m; ++k) {
        const double fk = factorial(k) / kPi;
        const double dx = fk * s.b[k];
        const double dy = fk * (s.b[k] * kReIk[k % 4] + s.a[k] * kImIk[k % 4]);
        out.emplace_back(dx, dy);
    }
    return out;
}

int order_of_vanishing(const DiskHarmonic& u, double tol) {
    if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be positive");
    const double l2 = norm_l2(u.boundary());
    if (l2 == 0.0) throw Error(ErrorKind::ZeroFunction, "zero boundary has no vanishing order");
    const FourierSeries& s = u.series();
    for (std::size_t k = 0; k < s.b.size(); ++k) {
        if (mode_magnitude(s, k) > tol * l2) return static_cast<int>(k) - 1;
    }
    throw Error(ErrorKind::ZeroFunction,
                "all stored modes sit below tolerance; vanishing order exceeds the band");
}

Lemma5Verdict lemma5_check(const DiskHarmonic& u) {
    Lemma5Verdict verdict;
    verdict.order = order_of_vanishing(u);
    verdict.sign_count = sign_changes(u.boundary());
    verdict.required = 2 * (verdict.order + 1);
    verdict.center_nonvanishing = verdict.order == -1;
    verdict.satisfied = verdict.center_nonvanishing || verdict.sign_count >= verdict.required;
    return verdict;
}

Corollary3Record corollary3_ratio(const DiskHarmonic& u) {
    const Norms nm = norms(u.boundary());
    if (nm.linf == 0.0) {
        throw Error(ErrorKind::ZeroFunction, "ratio undefined for the zero boundary");
    }
    const int n_sc = sign_changes(u.boundary());
    const auto n_half = static_cast<std::size_t>(n_sc) / 2;
    if (n_half > u.max_mode()) {
        throw Error(ErrorKind::InsufficientBand,
                    "sign count needs derivatives beyond the stored band");
    }
    const auto derivs = origin_derivatives(u, n_half);
    double lhs = std::abs(derivs[0].first);  // center value enters once
    for (std::size_t k = 1; k <= n_half; ++k) {
        lhs += std::abs(derivs[k].first) + std::abs(derivs[k].second);
    }

    const double log_core = (static_cast<double>(n_sc) + 1.0) * std::log(nm.l1) -
                            static_cast<double>(n_sc) * std::log(nm.linf);
    Corollary3Record record;
    record.n = n_sc;
    record.lhs = lhs;
    record.l1 = nm.l1;
    record.linf = nm.linf;
    record.rhs_core = std::exp(log_core);
    record.ratio = lhs * std::exp(-log_core);
    return record;
}

double dictionary_mass(const FourierSeries& series, std::size_t n_half) {
    if (n_half >= series.b.size()) {
        throw Error(ErrorKind::InsufficientBand, "series does not carry the requested modes");
    }
    double mass = std::abs(series.b[0]) / kTwoPi;
    for (std::size_t k = 1; k <= n_half; ++k) {
        const double fk = factorial(k) / kPi;
        const double dx = fk * series.b[k];
        const double dy = fk * (series.b[k] * kReIk[k % 4] + series.a[k] * kImIk[k % 4]);
        mass += std::abs(dx) + std::abs(dy);
    }
    return mass;
}

void write_polar_csv(std::ostream& out, const DiskHarmonic& u, std::size_t nr,
                     std::size_t ntheta) {
    if (nr == 0 || ntheta == 0) {
        throw Error(ErrorKind::InvalidArgument, "polar grid must be nonempty");
    }
    out << "r,theta,value\n";
    char buf[128];
    for (std::size_t i = 0; i < nr; ++i) {
        const double r = static_cast<double>(i) / static_cast<double>(nr);
        for (std::size_t j = 0; j < ntheta; ++j) {
            const double theta = kTwoPi * static_cast<double>(j) / static_cast<double>(ntheta);
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", r, theta,
                          poisson_extend(u, r, theta));
            out << buf;
        }
    }
    if (!out) throw Error(ErrorKind::Io, "failed writing polar csv");
}

}  // namespace gaplab
