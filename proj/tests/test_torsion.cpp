#include <cmath>
#include <functional>
#include <vector>

#include "doctest.h"
#include "gaplab/detail/rng.hpp"
#include "gaplab/error.hpp"
#include "gaplab/geometry.hpp"
#include "gaplab/torsion_solver.hpp"

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

double sup_against(const GridField& f, const std::function<double(double, double)>& exact) {
    double sup = 0.0;
    for (std::size_t j = 0; j < f.ny; ++j) {
        for (std::size_t i = 0; i < f.nx; ++i) {
            const std::size_t k = f.index(i, j);
            if (f.mask[k] == NodeClass::exterior) continue;
            sup = std::max(sup, std::abs(f.values[k] - exact(f.x(i), f.y(j))));
        }
    }
    return sup;
}

}  // namespace

TEST_CASE("quadratic torsion fields are reproduced to solver precision") {
    // disk: u = (1 - r^2) / 4
    const GridField disk = solve_torsion(make_ellipse(1.0, 1.0), 1.0 / 16.0);
    CHECK(disk.info.relative_residual < 1e-11);
    CHECK(sup_against(disk, [](double x, double y) {
              return 0.25 * (1.0 - x * x - y * y);
          }) < 1e-9);

    // ellipse: u = (a^2 b^2 / (2 (a^2 + b^2))) (1 - x^2/a^2 - y^2/b^2)
    const GridField ell = solve_torsion(make_ellipse(2.0, 1.0), 1.0 / 16.0);
    CHECK(sup_against(ell, [](double x, double y) {
              return 0.4 * (1.0 - 0.25 * x * x - y * y);
          }) < 1e-9);

    // positivity inside
    for (std::size_t k = 0; k < ell.values.size(); ++k) {
        if (ell.mask[k] != NodeClass::exterior) CHECK(ell.values[k] > 0.0);
    }
}

TEST_CASE("rectangle solve tracks the series field at second order") {
    const double h = 1.0 / 32.0;
    const GridField num = solve_torsion(make_rectangle(1.0, 1.0), h);
    const GridField ref = rect_torsion_exact_field(1.0, 1.0, h);
    REQUIRE(num.nx == ref.nx);
    REQUIRE(num.ny == ref.ny);
    double sup = 0.0;
    for (std::size_t k = 0; k < num.values.size(); ++k) {
        if (num.mask[k] == NodeClass::exterior) continue;
        sup = std::max(sup, std::abs(num.values[k] - ref.values[k]));
    }
    CHECK(sup < 20.0 * h * h);
    CHECK(sup > 0.0);
}

TEST_CASE("exact rectangle series: boundary, symmetry, center value") {
    CHECK(std::abs(rect_torsion_exact(1.0, 1.0, 1.0, 0.3)) < 1e-12);
    CHECK(std::abs(rect_torsion_exact(1.0, 1.0, -0.4, 1.0)) < 1e-12);
    CHECK(rect_torsion_exact(2.0, 1.0, 0.7, 0.2) ==
          rect_torsion_exact(2.0, 1.0, -0.7, 0.2));
    CHECK(rect_torsion_exact(1.0, 1.0, 0.0, 0.0) > 0.0);
    CHECK(throws_kind(ErrorKind::InvalidArgument,
                      [] { rect_torsion_exact(1.0, 1.0, 1.5, 0.0); }));
}

TEST_CASE("center curvature of the square is exactly -1/2") {
    const DxxBounds db = rect_dxx_center(1.0, 1.0);
    CHECK(std::abs(db.value + 0.5) < 1e-12);
    for (int aspect = 2; aspect <= 12; ++aspect) {
        const DxxBounds d = rect_dxx_center(static_cast<double>(aspect), 1.0);
        CHECK(d.lower <= d.value);
        CHECK(d.value <= d.upper);
        CHECK(d.upper < 0.0);
    }
    CHECK(throws_kind(ErrorKind::InvalidArgument, [] { rect_dxx_center(1.0, 2.0); }));
}

TEST_CASE("domain monotonicity for nested rectangles") {
    const double h = 1.0 / 16.0;
    const GridField small = solve_torsion(make_rectangle(1.5, 0.75), h);
    const GridField big = solve_torsion(make_rectangle(2.0, 1.0), h);
    detail::SplitMix64 rng(4);
    for (int t = 0; t < 50; ++t) {
        const Vec2 p{(rng.uniform() * 2.0 - 1.0) * 1.3, (rng.uniform() * 2.0 - 1.0) * 0.6};
        CHECK(interpolate(small, p) <= interpolate(big, p) + 1e-9);
    }
}

TEST_CASE("maximum location and Hessian on the disk") {
    const GridField disk = solve_torsion(make_ellipse(1.0, 1.0), 1.0 / 16.0);
    const MaxLocation m = locate_max(disk);
    CHECK(std::abs(m.point.x) < 1e-7);
    CHECK(std::abs(m.point.y) < 1e-7);
    CHECK(m.value == doctest::Approx(0.25).epsilon(1e-8));

    const HessianReport r = hessian_at_max(disk);
    CHECK(r.hessian.xx == doctest::Approx(-0.5).epsilon(1e-7));
    CHECK(r.hessian.yy == doctest::Approx(-0.5).epsilon(1e-7));
    CHECK(std::abs(r.hessian.xy) < 1e-7);
    CHECK(r.trace_residual < 1e-7);
    CHECK(r.aspect == doctest::Approx(2.0));
}

TEST_CASE("trace identity within the discretization budget") {
    const double h = 1.0 / 16.0;
    const GridField st = solve_torsion(make_stadium(1.0, 0.8), h);
    const HessianReport r = hessian_at_max(st);
    CHECK(r.trace_residual <= 10.0 * h * h + 1e-8);
}

TEST_CASE("scaling symmetry holds to solver precision") {
    const GridField small = solve_torsion(make_ellipse(1.5, 1.0), 1.0 / 24.0);
    const GridField big = solve_torsion(scaled(make_ellipse(1.5, 1.0), 2.0), 1.0 / 12.0);
    REQUIRE(small.nx == big.nx);
    REQUIRE(small.ny == big.ny);
    double worst = 0.0;
    for (std::size_t k = 0; k < small.values.size(); ++k) {
        if (small.mask[k] == NodeClass::exterior) continue;
        worst = std::max(worst, std::abs(big.values[k] - 4.0 * small.values[k]));
    }
    CHECK(worst < 1e-9);

    const HessianReport rs = hessian_at_max(small);
    const HessianReport rb = hessian_at_max(big);
    CHECK(rb.lambda_max == doctest::Approx(rs.lambda_max).epsilon(1e-9));
}

TEST_CASE("self-convergence is second order on a smooth domain") {
    const ConvexDomain st = make_stadium(1.0, 0.8);
    const GridField f1 = solve_torsion(st, 1.0 / 16.0);
    const GridField f2 = solve_torsion(st, 1.0 / 32.0);
    const GridField f3 = solve_torsion(st, 1.0 / 64.0);

    // probe at an interior node of the coarsest lattice
    const std::size_t i = f1.nx / 2 + 3;
    const std::size_t j = f1.ny / 2 + 2;
    REQUIRE(f1.mask[f1.index(i, j)] != NodeClass::exterior);
    const Vec2 p{f1.x(i), f1.y(j)};
    const double u1 = interpolate(f1, p);
    const double u2 = interpolate(f2, p);
    const double u3 = interpolate(f3, p);
    const double d1 = std::abs(u1 - u2);
    const double d2 = std::abs(u2 - u3);
    REQUIRE(d2 > 0.0);
    const double order = std::log2(d1 / d2);
    CHECK(order >= 1.9);
    CHECK(order <= 2.8);
}

TEST_CASE("Richardson extrapolation sharpens the center curvature") {
    const HessianReport r = hessian_richardson(make_rectangle(2.0, 1.0), 1.0 / 32.0);
    const double exact = rect_dxx_center(2.0, 1.0).value;
    CHECK(std::abs(r.hessian.xx - exact) / std::abs(exact) < 0.02);
    CHECK(r.trace_residual < 1e-2);
}

TEST_CASE("concavity defect is constant on the disk") {
    const double h = 1.0 / 32.0;
    const GridField disk = solve_torsion(make_ellipse(1.0, 1.0), h);
    const GridField p = makar_limanov(disk);
    double dev = 0.0;
    std::size_t counted = 0;
    for (std::size_t k = 0; k < p.values.size(); ++k) {
        if (p.mask[k] == NodeClass::exterior) continue;
        dev = std::max(dev, std::abs(p.values[k] - 0.125));
        ++counted;
    }
    CHECK(counted > 1000);
    CHECK(dev < 1e-6);
}

TEST_CASE("curvature-normalized constant on solved domains") {
    const GridField disk = solve_torsion(make_ellipse(1.0, 1.0), 1.0 / 32.0);
    const Prop1Verdict v = prop1_check(make_ellipse(1.0, 1.0), disk);
    CHECK(v.c_hat == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(v.kappa_min == doctest::Approx(1.0));

    // closed-form check for the 2:1 ellipse: a^5 / ((a^2 + b^2) b^3) = 6.4
    const SymMat2 hess = ellipse_hessian_exact(2.0, 1.0);
    const EigenPair eig = eigen_sym2(hess);
    const double chat = std::abs(eig.lambda_max) * 1.0 * 1.0 * 8.0 / 0.25;
    CHECK(chat == doctest::Approx(6.4).epsilon(1e-12));
}

TEST_CASE("eccentric rectangles satisfy the exponential bound") {
    const GridField f = solve_torsion(make_rectangle(3.0, 1.0), 1.0 / 32.0);
    const Theorem1Verdict v = theorem1_check(make_rectangle(3.0, 1.0), f);
    CHECK(v.satisfied);
    CHECK(v.lambda_max < 0.0);
    CHECK(v.bound_rhs < 0.0);
    CHECK(v.aspect == doctest::Approx(2.0 * std::sqrt(10.0)));
}

TEST_CASE("solver guards resolution and problem size") {
    CHECK(throws_kind(ErrorKind::Resolution,
                      [] { solve_torsion(make_rectangle(1.0, 1.0), 0.5); }));
    CHECK(throws_kind(ErrorKind::Resolution,
                      [] { solve_torsion(make_rectangle(1.0, 1.0), 1e-5); }));
}

TEST_CASE("symmetric eigenvalues are ordered") {
    const EigenPair e = eigen_sym2(SymMat2{-0.8, 0.0, -0.2});
    CHECK(e.lambda_max == doctest::Approx(-0.2));
    CHECK(e.lambda_min == doctest::Approx(-0.8));

    const EigenPair r = eigen_sym2(SymMat2{1.0, 2.0, 1.0});
    CHECK(r.lambda_max == doctest::Approx(3.0));
    CHECK(r.lambda_min == doctest::Approx(-1.0));
}
