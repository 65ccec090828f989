#include <cmath>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "gaplab/error.hpp"
#include "gaplab/torus_signal.hpp"

using namespace gaplab;

namespace {

bool throws_kind(ErrorKind kind, const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind() == kind;
    }
    return false;
}

}  // namespace

TEST_CASE("signal construction validates input") {
    CHECK(throws_kind(ErrorKind::InvalidArgument,
                      [] { (void)PeriodicSignal(std::vector<double>{1.0, 2.0}); }));
    std::vector<double> bad(16, 0.0);
    bad[3] = std::nan("");
    CHECK(throws_kind(ErrorKind::InvalidArgument, [&] { (void)PeriodicSignal(bad); }));
    const PeriodicSignal ok = PeriodicSignal::from_function([](double x) { return std::sin(x); });
    CHECK(ok.size() == kDefaultGridSize);
    CHECK(ok.x(0) == 0.0);
}

TEST_CASE("inner product matches the square-wave pairing") {
    const PeriodicSignal f = PeriodicSignal::from_function(
        [](double x) { return std::sin(x) >= 0.0 ? 1.0 : -1.0; });
    const PeriodicSignal g = PeriodicSignal::from_function([](double x) { return std::sin(x); });
    // Riemann quadrature against a jump integrand converges at h^2.
    CHECK(std::abs(inner_product(f, g) - 4.0) < 1e-5);

    const PeriodicSignal h = PeriodicSignal::from_function([](double x) { return std::sin(x); }, 512);
    CHECK(throws_kind(ErrorKind::DimensionMismatch, [&] { inner_product(f, h); }));
}

TEST_CASE("coefficients of a sparse trigonometric polynomial") {
    const PeriodicSignal f = PeriodicSignal::from_function(
        [](double x) { return 2.0 * std::sin(3.0 * x) + std::cos(5.0 * x); });
    const FourierSeries s = fourier_coefficients(f, 16);
    CHECK(s.a.size() == 17);
    for (std::size_t k = 0; k <= 16; ++k) {
        const double ea = k == 3 ? 2.0 * kPi : 0.0;
        const double eb = k == 5 ? kPi : 0.0;
        CHECK(std::abs(s.a[k] - ea) < 1e-9);
        CHECK(std::abs(s.b[k] - eb) < 1e-9);
    }

    CHECK(throws_kind(ErrorKind::Aliasing, [&] { fourier_coefficients(f, f.size() / 2); }));
}

TEST_CASE("non power-of-two grids agree with the transform path") {
    auto fn = [](double x) { return 2.0 * std::sin(3.0 * x) + std::cos(5.0 * x) - 0.25; };
    const PeriodicSignal odd = PeriodicSignal::from_function(fn, 1000);
    const FourierSeries s = fourier_coefficients(odd, 8);
    CHECK(std::abs(s.b[0] - (-0.25) * kTwoPi) < 1e-9);
    CHECK(std::abs(s.a[3] - 2.0 * kPi) < 1e-9);
    CHECK(std::abs(s.b[5] - kPi) < 1e-9);
    CHECK(std::abs(s.a[1]) < 1e-9);
}

TEST_CASE("synthesis round-trips band-limited signals") {
    const PeriodicSignal f = band_limited_random(42, 1, 12);
    const FourierSeries s = fourier_coefficients(f, 12);
    const PeriodicSignal g = synthesize(s, f.size());
    double sup = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) sup = std::max(sup, std::abs(f[j] - g[j]));
    CHECK(sup < 1e-10);
}

TEST_CASE("series evaluation and derivative") {
    FourierSeries s;
    s.a = {0.0, 0.5, 0.0};
    s.b = {kTwoPi, 0.0, -1.0};
    // f = 1 + (0.5 sin x - cos 2x) / pi
    const double x = 0.83;
    const double expect = 1.0 + (0.5 * std::sin(x) - std::cos(2.0 * x)) / kPi;
    CHECK(s.eval(x) == doctest::Approx(expect).epsilon(1e-12));

    const FourierSeries d = s.derivative();
    const double dexpect = (0.5 * std::cos(x) + 2.0 * std::sin(2.0 * x)) / kPi;
    CHECK(d.eval(x) == doctest::Approx(dexpect).epsilon(1e-12));
}

TEST_CASE("spectral derivative of a sine") {
    const PeriodicSignal f = PeriodicSignal::from_function([](double x) { return std::sin(x); });
    const PeriodicSignal d = derivative(f);
    double sup = 0.0;
    for (std::size_t j = 0; j < d.size(); ++j) {
        sup = std::max(sup, std::abs(d[j] - std::cos(d.x(j))));
    }
    CHECK(sup < 1e-9);
}

TEST_CASE("sign changes count cyclic alternations") {
    for (int k : {1, 3, 5}) {
        const PeriodicSignal f = PeriodicSignal::from_function(
            [k](double x) { return std::sin(k * x); });
        CHECK(sign_changes(f) == 2 * k);
    }
    const PeriodicSignal c = PeriodicSignal::from_function([](double) { return 3.0; });
    CHECK(sign_changes(c) == 0);

    std::vector<double> alt(8);
    for (std::size_t j = 0; j < alt.size(); ++j) alt[j] = (j % 2 == 0) ? 1.0 : -1.0;
    CHECK(sign_changes(PeriodicSignal(alt)) == 8);

    const PeriodicSignal z = PeriodicSignal::from_function([](double) { return 0.0; });
    CHECK(sign_changes(z) == 0);
}

TEST_CASE("norms of the unit sine") {
    const Norms n = norms(PeriodicSignal::from_function([](double x) { return std::sin(x); }));
    CHECK(std::abs(n.l1 - 4.0) < 1e-5);
    CHECK(std::abs(n.l2 - std::sqrt(kPi)) < 1e-10);
    CHECK(n.linf == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("energy identity between samples and coefficients") {
    const PeriodicSignal f = band_limited_random(7, 0, 20);
    const FourierSeries s = fourier_coefficients(f, 20);
    double mass = s.b[0] * s.b[0] / (2.0 * kPi);
    for (std::size_t k = 1; k < s.b.size(); ++k) {
        mass += (s.a[k] * s.a[k] + s.b[k] * s.b[k]) / kPi;
    }
    const double direct = norm_l2(f) * norm_l2(f);
    CHECK(mass == doctest::Approx(direct).epsilon(1e-9));
}

TEST_CASE("seeded generator is reproducible and band-limited") {
    const PeriodicSignal f1 = band_limited_random(123, 2, 9, 1024);
    const PeriodicSignal f2 = band_limited_random(123, 2, 9, 1024);
    const PeriodicSignal g = band_limited_random(124, 2, 9, 1024);
    bool identical = true;
    bool differs = false;
    for (std::size_t j = 0; j < f1.size(); ++j) {
        identical = identical && f1[j] == f2[j];
        differs = differs || f1[j] != g[j];
    }
    CHECK(identical);
    CHECK(differs);

    const FourierSeries s = fourier_coefficients(f1, 40);
    for (std::size_t k = 0; k <= 40; ++k) {
        if (k >= 2 && k <= 9) continue;
        CHECK(std::abs(s.a[k]) < 1e-9);
        CHECK(std::abs(s.b[k]) < 1e-9);
    }
}

TEST_CASE("csv writes round-trip exactly") {
    const PeriodicSignal f = band_limited_random(5, 1, 30, 256);
    std::ostringstream out;
    write_csv(out, f);
    std::istringstream in(out.str());
    const PeriodicSignal g = read_csv(in);
    REQUIRE(g.size() == f.size());
    for (std::size_t j = 0; j < f.size(); ++j) CHECK(f[j] == g[j]);
}
