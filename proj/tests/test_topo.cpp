#include <cmath>
#include <functional>
#include <vector>

#include "doctest.h"
#include "gaplab/error.hpp"
#include "gaplab/topo_fourier.hpp"

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

TEST_CASE("stencil construction and closed-form norms") {
    const StencilFamily f = make_stencil(4, 0.1);
    CHECK(f.coefficients == std::vector<long long>{1, -4, 6, -4, 1});
    CHECK(throws_kind(ErrorKind::InvalidArgument, [] { make_stencil(0, 0.1); }));
    CHECK(throws_kind(ErrorKind::InvalidArgument, [] { make_stencil(41, 0.01); }));
    CHECK(throws_kind(ErrorKind::InvalidArgument, [] { make_stencil(3, 2.0); }));

    struct Case {
        int n;
        double l1, l2sq, linf;
    };
    const double eps = 0.125;
    for (const Case& c : {Case{1, 2 * eps, 2 * eps, 1}, Case{2, 4 * eps, 6 * eps, 2},
                          Case{3, 8 * eps, 20 * eps, 3}}) {
        const Norms n = stencil_norms_exact(make_stencil(c.n, eps));
        CHECK(n.l1 == doctest::Approx(c.l1).epsilon(1e-14));
        CHECK(n.l2 == doctest::Approx(std::sqrt(c.l2sq)).epsilon(1e-14));
        CHECK(n.linf == doctest::Approx(c.linf).epsilon(1e-14));
    }
}

TEST_CASE("sampled stencil tracks the closed forms at fat widths") {
    const int n = 2;
    const double eps = 0.25;
    const PeriodicSignal f = stencil_function(n, eps);
    const Norms sampled = norms(f);
    const Norms exact = stencil_norms_exact(make_stencil(n, eps));
    CHECK(sampled.l1 == doctest::Approx(exact.l1).epsilon(0.01));
    CHECK(sampled.l2 == doctest::Approx(exact.l2).epsilon(0.01));
    CHECK(sampled.linf == doctest::Approx(exact.linf).epsilon(1e-12));

    const FourierSeries se = stencil_series_exact(make_stencil(n, eps), 8);
    const FourierSeries ss = fourier_coefficients(f, 8);
    for (std::size_t k = 0; k <= 8; ++k) {
        CHECK(std::abs(se.a[k] - ss.a[k]) < 0.02);
        CHECK(std::abs(se.b[k] - ss.b[k]) < 0.02);
    }
}

TEST_CASE("sampling guard rejects unresolvable block widths") {
    CHECK(throws_kind(ErrorKind::Resolution, [] { stencil_function(2, 1e-6); }));
    CHECK(throws_kind(ErrorKind::Resolution, [] { stencil_function(2, 0.01, 4096); }));
}

TEST_CASE("harmonic conjugate swaps the phase") {
    const PeriodicSignal f = PeriodicSignal::from_function([](double x) { return std::cos(x); });
    const FourierSeries hs = hilbert_transform(fourier_coefficients(f, 4));
    const PeriodicSignal h = synthesize(hs, f.size());
    double sup = 0.0;
    for (std::size_t j = 0; j < h.size(); ++j) {
        sup = std::max(sup, std::abs(h[j] - std::sin(h.x(j))));
    }
    CHECK(sup < 1e-10);

    const PeriodicSignal g = PeriodicSignal::from_function([](double x) { return std::sin(2.0 * x); });
    const FourierSeries hg = hilbert_transform(fourier_coefficients(g, 4));
    const PeriodicSignal hh = synthesize(hg, g.size());
    sup = 0.0;
    for (std::size_t j = 0; j < hh.size(); ++j) {
        sup = std::max(sup, std::abs(hh[j] + std::cos(2.0 * hh.x(j))));
    }
    CHECK(sup < 1e-10);
}

TEST_CASE("winding numbers of analytic test curves") {
    CHECK(winding_number(PeriodicSignal::from_function(
              [](double x) { return std::cos(x); })) == 1);
    CHECK(winding_number(PeriodicSignal::from_function(
              [](double x) { return std::sin(3.0 * x); })) == 3);
    CHECK(winding_number(PeriodicSignal::from_function([](double x) {
              return std::cos(2.0 * x) + 0.3 * std::cos(5.0 * x);
          })) == 2);
}

TEST_CASE("degenerate winding inputs are rejected") {
    CHECK(throws_kind(ErrorKind::ZeroFunction, [] {
        winding_number(PeriodicSignal::from_function([](double) { return 0.0; }));
    }));
    // 1 + cos x together with its conjugate sin x passes through the origin.
    CHECK(throws_kind(ErrorKind::IllConditionedWinding, [] {
        winding_number(PeriodicSignal::from_function(
            [](double x) { return 1.0 + std::cos(x); }));
    }));
}

TEST_CASE("high-pass verdicts meet the oscillation floors") {
    const PeriodicSignal f = PeriodicSignal::from_function(
        [](double x) { return std::sin(4.0 * x); });
    const Lemma1Verdict v = lemma1_check(f, 3);
    CHECK(v.hypothesis_met);
    CHECK(v.min_sign_changes == 8);
    CHECK(v.min_winding == 4);
    CHECK(v.sign_count == 8);
    CHECK(v.winding == 4);
    CHECK(v.conclusion_ok);

    const Lemma1Verdict w = lemma1_check(f, 4);
    CHECK_FALSE(w.hypothesis_met);
    CHECK(w.conclusion_ok);
}

TEST_CASE("coefficient-mass ratio on reference signals") {
    const RatioRecord one = theorem2_ratio(PeriodicSignal::from_function([](double) { return 1.0; }));
    CHECK(one.n == 0);
    CHECK(one.ratio == doctest::Approx(1.0).epsilon(1e-12));

    const RatioRecord sine = theorem2_ratio(PeriodicSignal::from_function(
        [](double x) { return std::sin(x); }));
    CHECK(sine.n == 2);
    CHECK(std::abs(sine.ratio - kPi / 64.0) < 1e-6);

    CHECK(throws_kind(ErrorKind::ZeroFunction, [] {
        theorem2_ratio(PeriodicSignal::from_function([](double) { return 0.0; }));
    }));
}

TEST_CASE("closed-form ratio stays stable across block widths") {
    double lo = 1e300, hi = 0.0;
    for (int p = 4; p <= 9; ++p) {
        const RatioRecord r = theorem2_ratio_exact(make_stencil(2, std::ldexp(1.0, -p)));
        CHECK(r.n == 2);
        lo = std::min(lo, r.ratio);
        hi = std::max(hi, r.ratio);
        if (p == 4) CHECK(std::abs(r.ratio - 0.068043) < 2e-6);
    }
    CHECK(hi / lo < 1.1);
}

TEST_CASE("moment witness for interval step functions") {
    {
        const Lemma4Witness w = lemma4_witness({{{-1.0, 0.0}, +1}, {{0.0, 1.0}, -1}});
        REQUIRE(w.coefficients.size() == 2);
        CHECK(std::abs(w.coefficients[0] - 0.0) < 1e-12);
        CHECK(std::abs(w.coefficients[1] - (-1.0)) < 1e-12);
        CHECK(w.value == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(w.pairing_det == doctest::Approx(-1.0).epsilon(1e-12));

        // Riemann cross-check of the attained pairing.
        const std::size_t steps = 200000;
        double acc = 0.0;
        for (std::size_t i = 0; i < steps; ++i) {
            const double x = -1.0 + 2.0 * (static_cast<double>(i) + 0.5) / steps;
            const double p = w.coefficients[0] + w.coefficients[1] * x;
            const double f = x < 0.0 ? 1.0 : -1.0;
            acc += p * f * (2.0 / steps);
        }
        CHECK(std::abs(acc) == doctest::Approx(w.value).epsilon(1e-4));
    }
    {
        const Lemma4Witness w = lemma4_witness({{{0.0, 1.0}, +1}});
        REQUIRE(w.coefficients.size() == 1);
        CHECK(w.coefficients[0] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(w.value == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(throws_kind(ErrorKind::Geometry,
                      [] { lemma4_witness({{{0.0, 2.0}, +1}, {{1.0, 3.0}, -1}}); }));
    CHECK(throws_kind(ErrorKind::Geometry, [] { lemma4_witness({{{0.5, 0.5}, +1}}); }));
    CHECK(throws_kind(ErrorKind::InvalidArgument, [] { lemma4_witness({{{0.0, 1.0}, 0}}); }));
}
