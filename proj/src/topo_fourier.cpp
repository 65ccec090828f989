#include "gaplab/topo_fourier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gaplab/error.hpp"

namespace gaplab {

namespace {

std::vector<long long> pascal_row(int n) {
    std::vector<long long> row(static_cast<std::size_t>(n) + 1, 1);
    for (int j = 1; j <= n; ++j) {
        // C(n, j) = C(n, j-1) * (n - j + 1) / j, exact in integer arithmetic.
        row[static_cast<std::size_t>(j)] =
            row[static_cast<std::size_t>(j - 1)] * (n - j + 1) / j;
    }
    return row;
}

std::size_t next_power_of_two(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

struct Vec {
    double x;
    double y;
};

double angle_step(const Vec& u, const Vec& v) {
    return std::atan2(u.x * v.y - u.y * v.x, u.x * v.x + u.y * v.y);
}

}  // namespace

StencilFamily make_stencil(int order, double epsilon) {
    if (order < 1 || order > 40) {
        throw Error(ErrorKind::InvalidArgument, "stencil order must be in [1, 40]");
    }
    if (!(epsilon > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "stencil width must be positive");
    }
    if (!((order + 1) * epsilon < kTwoPi)) {
        throw Error(ErrorKind::InvalidArgument,
                    "stencil support (order + 1) * epsilon must fit inside one period");
    }
    StencilFamily family;
    family.order = order;
    family.epsilon = epsilon;
    family.coefficients = pascal_row(order);
    for (std::size_t j = 1; j < family.coefficients.size(); j += 2) {
        family.coefficients[j] = -family.coefficients[j];
    }
    return family;
}

PeriodicSignal stencil_function(int order, double epsilon, std::size_t n_samples) {
    const StencilFamily family = make_stencil(order, epsilon);
    const double required = 64.0 * kTwoPi / epsilon;
    if (n_samples == 0) {
        if (required > 1.6e7) {
            throw Error(ErrorKind::Resolution,
                        "block width needs more than 2^24 samples; use the closed forms");
        }
        n_samples = next_power_of_two(static_cast<std::size_t>(std::ceil(required)));
        n_samples = std::max<std::size_t>(n_samples, kDefaultGridSize);
    } else if (static_cast<double>(n_samples) < required) {
        throw Error(ErrorKind::Resolution,
                    "need at least 64 samples per block: " + std::to_string(n_samples) +
                        " < " + std::to_string(required));
    }
    std::vector<double> samples(n_samples, 0.0);
    for (std::size_t j = 0; j < n_samples; ++j) {
        const double x = kTwoPi * static_cast<double>(j) / static_cast<double>(n_samples);
        const auto block = static_cast<long long>(std::floor(x / epsilon));
        if (block >= 0 && block <= order) {
            samples[j] = static_cast<double>(family.coefficients[static_cast<std::size_t>(block)]);
        }
    }
    return PeriodicSignal(std::move(samples));
}

FourierSeries stencil_series_exact(const StencilFamily& family, std::size_t max_mode) {
    FourierSeries s;
    s.a.assign(max_mode + 1, 0.0);
    s.b.assign(max_mode + 1, 0.0);
    const double eps = family.epsilon;

    long double b0 = 0.0L;
    for (std::size_t j = 0; j < family.coefficients.size(); ++j) {
        b0 += static_cast<long double>(family.coefficients[j]) * eps;
    }
    s.b[0] = static_cast<double>(b0);

    for (std::size_t k = 1; k <= max_mode; ++k) {
        const long double kk = static_cast<long double>(k);
        long double ak = 0.0L, bk = 0.0L;
        for (std::size_t j = 0; j < family.coefficients.size(); ++j) {
            const long double v = static_cast<long double>(family.coefficients[j]);
            const long double left = kk * static_cast<long double>(j) * eps;
            const long double right = kk * static_cast<long double>(j + 1) * eps;
            bk += v * (std::sin(right) - std::sin(left)) / kk;
            ak += v * (std::cos(left) - std::cos(right)) / kk;
        }
        s.a[k] = static_cast<double>(ak);
        s.b[k] = static_cast<double>(bk);
    }
    return s;
}

Norms stencil_norms_exact(const StencilFamily& family) {
    const int n = family.order;
    const double l1 = std::ldexp(family.epsilon, n);  // 2^n * eps
    long double central = 1.0L;                       // C(2n, n) via product form
    for (int i = 1; i <= n; ++i) {
        central = central * static_cast<long double>(n + i) / static_cast<long double>(i);
    }
    const double l2 = std::sqrt(static_cast<double>(central) * family.epsilon);
    const double linf =
        static_cast<double>(std::abs(family.coefficients[static_cast<std::size_t>(n / 2)]));
    return Norms{l1, l2, linf};
}

FourierSeries hilbert_transform(const FourierSeries& series) {
    if (series.a.size() != series.b.size()) {
        throw Error(ErrorKind::DimensionMismatch, "series arrays must have equal length");
    }
    FourierSeries h;
    h.a.assign(series.a.size(), 0.0);
    h.b.assign(series.b.size(), 0.0);
    for (std::size_t k = 1; k < series.b.size(); ++k) {
        h.a[k] = series.b[k];
        h.b[k] = -series.a[k];
    }
    return h;
}

namespace {

struct WindingWalker {
    const FourierSeries& fs;
    const FourierSeries& hs;
    double min_abs;
    double max_abs;
    int depth_limit = 48;

    Vec eval(double t) const { return Vec{fs.eval(t), hs.eval(t)}; }

    void observe(const Vec& v) {
        const double r = std::hypot(v.x, v.y);
        min_abs = std::min(min_abs, r);
        max_abs = std::max(max_abs, r);
    }

    double sweep(double t0, const Vec& v0, double t1, const Vec& v1, int depth) {
        const double step = angle_step(v0, v1);
        if (std::abs(step) <= 1.0) return step;
        if (depth >= depth_limit) {
            throw Error(ErrorKind::IllConditionedWinding,
                        "curve turns too sharply near the origin to count");
        }
        const double tm = 0.5 * (t0 + t1);
        const Vec vm = eval(tm);
        observe(vm);
        return sweep(t0, v0, tm, vm, depth + 1) + sweep(tm, vm, t1, v1, depth + 1);
    }
};

}  // namespace

int winding_number(const PeriodicSignal& f, double margin) {
    if (!(margin > 0.0) || margin >= 1.0) {
        throw Error(ErrorKind::InvalidArgument, "winding margin must lie in (0, 1)");
    }
    const std::size_t n = f.size();
    const std::size_t kmax = n / 2 - 1;
    const FourierSeries fs = fourier_coefficients(f, kmax);
    const FourierSeries hs = hilbert_transform(fs);
    const PeriodicSignal hgrid = synthesize(hs, n);

    // The curve samples come from the same band-limited interpolant the
    // refinement evaluates, so grid and refined points are consistent.
    const PeriodicSignal fgrid = synthesize(fs, n);

    WindingWalker walker{fs, hs, std::numeric_limits<double>::infinity(), 0.0};
    std::vector<Vec> pts(n);
    for (std::size_t j = 0; j < n; ++j) {
        pts[j] = Vec{fgrid[j], hgrid[j]};
        walker.observe(pts[j]);
    }
    if (walker.max_abs == 0.0) {
        throw Error(ErrorKind::ZeroFunction, "winding undefined for the zero curve");
    }
    if (walker.min_abs < margin * walker.max_abs) {
        throw Error(ErrorKind::IllConditionedWinding,
                    "curve passes within margin of the origin");
    }

    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double t0 = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
        const double t1 = kTwoPi * static_cast<double>(j + 1) / static_cast<double>(n);
        total += walker.sweep(t0, pts[j], t1, pts[(j + 1) % n], 0);
    }
    if (walker.min_abs < margin * walker.max_abs) {
        throw Error(ErrorKind::IllConditionedWinding,
                    "refined curve passes within margin of the origin");
    }

    const double turns = total / kTwoPi;
    const double rounded = std::round(turns);
    if (std::abs(turns - rounded) > 1e-6) {
        throw Error(ErrorKind::IllConditionedWinding,
                    "accumulated turning is not an integer: " + std::to_string(turns));
    }
    return static_cast<int>(rounded);
}

Lemma1Verdict lemma1_check(const PeriodicSignal& f, int n, double tol) {
    if (n < 0) throw Error(ErrorKind::InvalidArgument, "mode bound must be nonnegative");
    if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be positive");
    const double l2 = norm_l2(f);
    if (l2 == 0.0) throw Error(ErrorKind::ZeroFunction, "zero signal has no mode structure");

    const FourierSeries s = fourier_coefficients(f, static_cast<std::size_t>(n));
    bool hypothesis = true;
    for (std::size_t k = 0; k <= static_cast<std::size_t>(n) && hypothesis; ++k) {
        if (std::abs(s.a[k]) > tol * l2 || std::abs(s.b[k]) > tol * l2) hypothesis = false;
    }

    Lemma1Verdict verdict;
    verdict.hypothesis_met = hypothesis;
    verdict.sign_count = sign_changes(f);
    verdict.min_sign_changes = 2 * n + 2;
    verdict.min_winding = n + 1;
    verdict.winding = 0;
    verdict.conclusion_ok = true;
    if (hypothesis) {
        verdict.winding = winding_number(f);
        verdict.conclusion_ok = verdict.sign_count >= verdict.min_sign_changes &&
                                verdict.winding >= verdict.min_winding;
    }
    return verdict;
}

namespace {

RatioRecord assemble_ratio(int n_sc, double lhs, const Norms& norms) {
    if (!(norms.linf > 0.0)) {
        throw Error(ErrorKind::ZeroFunction, "ratio undefined for the zero signal");
    }
    // Logs keep the core finite for large sign counts.
    const double log_core = (static_cast<double>(n_sc) + 1.0) * std::log(norms.l1) -
                            static_cast<double>(n_sc) * std::log(norms.linf);
    RatioRecord record;
    record.n = n_sc;
    record.lhs = lhs;
    record.l1 = norms.l1;
    record.linf = norms.linf;
    record.rhs_core = std::exp(log_core);
    record.ratio = lhs * std::exp(-log_core);
    return record;
}

double low_mode_mass(const FourierSeries& s) {
    double lhs = 0.0;
    for (std::size_t k = 0; k < s.b.size(); ++k) lhs += std::abs(s.a[k]) + std::abs(s.b[k]);
    return lhs;
}

}  // namespace

RatioRecord theorem2_ratio(const PeriodicSignal& f, double dead_band) {
    const Norms nm = norms(f);
    if (nm.linf == 0.0) {
        throw Error(ErrorKind::ZeroFunction, "ratio undefined for the zero signal");
    }
    const int n_sc = sign_changes(f, dead_band);
    const std::size_t kmax = static_cast<std::size_t>(n_sc) / 2;
    if (2 * kmax >= f.size()) {
        throw Error(ErrorKind::Aliasing, "sign count exceeds the resolvable mode window");
    }
    const FourierSeries s = fourier_coefficients(f, kmax);
    return assemble_ratio(n_sc, low_mode_mass(s), nm);
}

RatioRecord theorem2_ratio_exact(const StencilFamily& family) {
    const int n_sc = 2 * ((family.order + 1) / 2);
    const auto kmax = static_cast<std::size_t>(n_sc / 2);
    const FourierSeries s = stencil_series_exact(family, kmax);
    return assemble_ratio(n_sc, low_mode_mass(s), stencil_norms_exact(family));
}

Lemma4Witness lemma4_witness(const std::vector<std::pair<Interval, int>>& intervals) {
    if (intervals.empty()) {
        throw Error(ErrorKind::InvalidArgument, "need at least one interval");
    }
    for (const auto& [iv, sign] : intervals) {
        if (!(iv.hi > iv.lo)) {
            throw Error(ErrorKind::Geometry, "intervals must have positive length");
        }
        if (sign == 0) {
            throw Error(ErrorKind::InvalidArgument, "interval signs must be nonzero");
        }
    }
    auto sorted = intervals;
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& p, const auto& q) { return p.first.lo < q.first.lo; });
    for (std::size_t j = 1; j < sorted.size(); ++j) {
        if (sorted[j].first.lo < sorted[j - 1].first.hi) {
            throw Error(ErrorKind::Geometry, "intervals must be pairwise disjoint");
        }
    }

    const std::size_t n = sorted.size();
    // moments[i] = integral of x^i against the signed indicator profile.
    std::vector<double> moments(n, 0.0);
    std::vector<std::vector<double>> pairing(n, std::vector<double>(n, 0.0));
    for (std::size_t j = 0; j < n; ++j) {
        const double sgn = sorted[j].second > 0 ? 1.0 : -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double p = static_cast<double>(i) + 1.0;
            const double cell =
                sgn * (std::pow(sorted[j].first.hi, p) - std::pow(sorted[j].first.lo, p)) / p;
            moments[i] += cell;
            pairing[j][i] = cell;
        }
    }

    double norm_sq = 0.0;
    for (double m : moments) norm_sq += m * m;
    const double norm = std::sqrt(norm_sq);
    if (!(norm > 0.0)) {
        throw Error(ErrorKind::Geometry, "moment system is degenerate");
    }

    Lemma4Witness witness;
    witness.coefficients.resize(n);
    for (std::size_t i = 0; i < n; ++i) witness.coefficients[i] = moments[i] / norm;
    witness.value = norm;

    // Determinant of the pairing matrix by partial-pivot elimination.
    double det = 1.0;
    auto m = pairing;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
        }
        if (m[pivot][col] == 0.0) {
            det = 0.0;
            break;
        }
        if (pivot != col) {
            std::swap(m[pivot], m[col]);
            det = -det;
        }
        det *= m[col][col];
        for (std::size_t r = col + 1; r < n; ++r) {
            const double factor = m[r][col] / m[col][col];
            for (std::size_t c = col; c < n; ++c) m[r][c] -= factor * m[col][c];
        }
    }
    witness.pairing_det = det;
    return witness;
}

}  // namespace gaplab
