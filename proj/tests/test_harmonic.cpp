#include <cmath>
#include <functional>
#include <sstream>

#include "doctest.h"
#include "gaplab/error.hpp"
#include "gaplab/harmonic_disk.hpp"

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

DiskHarmonic pure_mode(int k, bool sine = false, std::size_t n = kDefaultGridSize) {
    return DiskHarmonic(PeriodicSignal::from_function(
        [k, sine](double x) {
            return sine ? std::sin(k * x) : std::cos(k * x);
        },
        n));
}

}  // namespace

TEST_CASE("harmonic extension reproduces interior values") {
    const DiskHarmonic u(PeriodicSignal::from_function(
        [](double t) { return 1.0 + std::cos(t); }));
    CHECK(poisson_extend(u, 0.0, 0.3) == doctest::Approx(1.0).epsilon(1e-12));
    // mode k extends as r^k: u(r, 0) = 1 + r.
    CHECK(poisson_extend(u, 0.5, 0.0) == doctest::Approx(1.5).epsilon(1e-10));
    CHECK(poisson_extend(u, 0.9, kPi) == doctest::Approx(0.1).epsilon(1e-9));
    CHECK(throws_kind(ErrorKind::InvalidArgument, [&] { poisson_extend(u, 1.0, 0.0); }));
    CHECK(throws_kind(ErrorKind::InvalidArgument, [&] { poisson_extend(u, -0.1, 0.0); }));
}

TEST_CASE("axis derivatives at the origin follow the coefficient dictionary") {
    {
        const DiskHarmonic u = pure_mode(3);
        const auto d = origin_derivatives(u, 3);
        REQUIRE(d.size() == 4);
        CHECK(d[0].first == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(d[3].first == doctest::Approx(6.0).epsilon(1e-9));   // x^3 direction of Re z^3
        CHECK(d[3].second == doctest::Approx(0.0).epsilon(1e-9));
    }
    {
        // r^3 sin(3t) = 3x^2 y - y^3, whose third y-derivative is -6.
        const DiskHarmonic u = pure_mode(3, true);
        const auto d = origin_derivatives(u, 3);
        CHECK(d[3].first == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(d[3].second == doctest::Approx(-6.0).epsilon(1e-9));
    }
    {
        const DiskHarmonic u(PeriodicSignal::from_function([](double t) {
            return std::cos(t) + 0.7 * std::cos(2.0 * t) + 0.4 * std::sin(3.0 * t) +
                   0.2 * std::cos(4.0 * t);
        }));
        const auto d = origin_derivatives(u, 4);
        CHECK(d[1].first == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(d[2].first == doctest::Approx(1.4).epsilon(1e-10));
        CHECK(d[4].first == doctest::Approx(4.8).epsilon(1e-10));
        CHECK(d[3].second == doctest::Approx(-2.4).epsilon(1e-10));

        // finite-difference spot check along the x-axis
        const double h = 1e-4;
        const double fd = (poisson_extend(u, h, 0.0) - poisson_extend(u, h, kPi)) / (2.0 * h);
        CHECK(fd == doctest::Approx(d[1].first).epsilon(1e-6));
    }
    const DiskHarmonic low(PeriodicSignal::from_function(
        [](double t) { return std::cos(t); }, 64));
    CHECK(throws_kind(ErrorKind::InsufficientBand, [&] { origin_derivatives(low, 40); }));
}

TEST_CASE("order of vanishing counts the leading silent modes") {
    for (int k = 1; k <= 10; ++k) {
        CHECK(order_of_vanishing(pure_mode(k)) == k - 1);
    }
    const DiskHarmonic c(PeriodicSignal::from_function([](double) { return 1.0; }));
    CHECK(order_of_vanishing(c) == -1);
    CHECK(throws_kind(ErrorKind::ZeroFunction, [] {
        (void)order_of_vanishing(DiskHarmonic(PeriodicSignal::from_function(
            [](double) { return 0.0; })));
    }));
}

TEST_CASE("interior vanishing forces boundary oscillation") {
    for (int k = 1; k <= 10; ++k) {
        const Lemma5Verdict v = lemma5_check(pure_mode(k));
        CHECK(v.order == k - 1);
        CHECK(v.sign_count == 2 * k);
        CHECK(v.required == 2 * k);
        CHECK(v.satisfied);
        CHECK_FALSE(v.center_nonvanishing);
    }
    const Lemma5Verdict c = lemma5_check(DiskHarmonic(PeriodicSignal::from_function(
        [](double t) { return 2.0 + std::cos(t); })));
    CHECK(c.center_nonvanishing);
    CHECK(c.satisfied);
}

TEST_CASE("derivative mass agrees with the coefficient dictionary") {
    const DiskHarmonic one(PeriodicSignal::from_function([](double) { return 1.0; }));
    const Corollary3Record r = corollary3_ratio(one);
    CHECK(r.n == 0);
    CHECK(r.lhs == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.ratio == doctest::Approx(1.0 / kTwoPi).epsilon(1e-12));

    for (std::uint64_t seed : {11ull, 12ull, 13ull}) {
        const DiskHarmonic u(band_limited_random(seed, 2, 9));
        const Corollary3Record rr = corollary3_ratio(u);
        const double dict = dictionary_mass(u.series(), static_cast<std::size_t>(rr.n) / 2);
        CHECK(std::abs(rr.lhs - dict) <= 1e-12 * std::abs(rr.lhs));
    }
}

TEST_CASE("polar csv has the requested sample count") {
    const DiskHarmonic u = pure_mode(2);
    std::ostringstream out;
    write_polar_csv(out, u, 4, 16);
    std::istringstream in(out.str());
    std::string line;
    std::size_t lines = 0;
    while (std::getline(in, line)) {
        if (!line.empty()) ++lines;
    }
    CHECK(lines == 1 + 4 * 16);
}
