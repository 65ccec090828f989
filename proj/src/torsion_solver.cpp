#include "gaplab/torsion_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

#include "gaplab/error.hpp"

namespace gaplab {

namespace {

constexpr double kExteriorSnap = 1e-12;   // nodes this close to the boundary act as boundary
constexpr double kMinArmFraction = 1e-6;  // shorter cut links collapse the node onto the boundary
constexpr std::size_t kNodeBudget = 40'000'000;
constexpr double kCgTarget = 1e-12;
constexpr double kCgAccept = 1e-10;
constexpr double kPiLocal = 3.14159265358979323846;

// cosh(u)/cosh(v) for 0 <= u <= v without overflow.
double cosh_ratio(double u, double v) {
    return std::exp(u - v) * (1.0 + std::exp(-2.0 * u)) / (1.0 + std::exp(-2.0 * v));
}

// 1/cosh(t) for t >= 0 without overflow.
double sech_stable(double t) {
    const double e = std::exp(-t);
    return 2.0 * e / (1.0 + e * e);
}

GridField build_grid(const ConvexDomain& d, double h) {
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw Error(ErrorKind::InvalidArgument, "grid spacing must be positive");
    }
    const Box box = bounding_box(d);
    const auto i0 = static_cast<long long>(std::floor(box.xmin / h)) - 2;
    const auto i1 = static_cast<long long>(std::ceil(box.xmax / h)) + 2;
    const auto j0 = static_cast<long long>(std::floor(box.ymin / h)) - 2;
    const auto j1 = static_cast<long long>(std::ceil(box.ymax / h)) + 2;
    const auto nx = static_cast<std::size_t>(i1 - i0 + 1);
    const auto ny = static_cast<std::size_t>(j1 - j0 + 1);
    if (nx > kNodeBudget / ny) {
        throw Error(ErrorKind::Resolution, "grid exceeds the node budget; raise h");
    }

    GridField f;
    f.domain = d;
    f.h = h;
    f.x_origin = static_cast<double>(i0) * h;
    f.y_origin = static_cast<double>(j0) * h;
    f.nx = nx;
    f.ny = ny;
    f.values.assign(nx * ny, 0.0);
    f.mask.assign(nx * ny, NodeClass::exterior);
    f.distance.assign(nx * ny, 0.0);

    std::size_t interior_count = 0;
    for (std::size_t j = 0; j < ny; ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
            const double sd = contains(d, Vec2{f.x(i), f.y(j)}).signed_distance;
            const std::size_t id = f.index(i, j);
            f.distance[id] = sd;
            if (sd > kExteriorSnap) {
                f.mask[id] = NodeClass::interior;
                ++interior_count;
            }
        }
    }
    if (interior_count < 100) {
        throw Error(ErrorKind::Resolution, "fewer than 100 interior nodes; lower h");
    }

    // Link fraction toward an exterior neighbor.  Neighbors that are outside
    // only by the snap tolerance sit on the boundary, so the link is whole.
    const auto link_fraction = [&](std::size_t i, std::size_t j, int axis, int dir) {
        const std::size_t ni = axis == 0 ? i + static_cast<std::size_t>(dir) : i;
        const std::size_t nj = axis == 1 ? j + static_cast<std::size_t>(dir) : j;
        if (f.distance[f.index(ni, nj)] > -kExteriorSnap) return 1.0;
        return boundary_crossing(d, Vec2{f.x(i), f.y(j)}, axis, dir, h);
    };

    // First pass: collapse nodes whose boundary link is essentially zero.
    std::vector<std::size_t> collapsed;
    for (std::size_t j = 1; j + 1 < ny; ++j) {
        for (std::size_t i = 1; i + 1 < nx; ++i) {
            if (f.mask[f.index(i, j)] == NodeClass::exterior) continue;
            const bool cut_w = f.mask[f.index(i - 1, j)] == NodeClass::exterior;
            const bool cut_e = f.mask[f.index(i + 1, j)] == NodeClass::exterior;
            const bool cut_s = f.mask[f.index(i, j - 1)] == NodeClass::exterior;
            const bool cut_n = f.mask[f.index(i, j + 1)] == NodeClass::exterior;
            if (!(cut_w || cut_e || cut_s || cut_n)) continue;
            const double fw = cut_w ? link_fraction(i, j, 0, -1) : 1.0;
            const double fe = cut_e ? link_fraction(i, j, 0, +1) : 1.0;
            const double fs = cut_s ? link_fraction(i, j, 1, -1) : 1.0;
            const double fn = cut_n ? link_fraction(i, j, 1, +1) : 1.0;
            if (std::min(std::min(fw, fe), std::min(fs, fn)) < kMinArmFraction) {
                collapsed.push_back(f.index(i, j));
            }
        }
    }
    for (std::size_t id : collapsed) f.mask[id] = NodeClass::exterior;

    // Final pass with the settled mask.  A collapsed neighbor has positive
    // stored distance, so link_fraction treats it as boundary at the node.
    for (std::size_t j = 1; j + 1 < ny; ++j) {
        for (std::size_t i = 1; i + 1 < nx; ++i) {
            const std::size_t id = f.index(i, j);
            if (f.mask[id] == NodeClass::exterior) continue;
            GridField::Arms arms;
            bool cut = false;
            if (f.mask[f.index(i - 1, j)] == NodeClass::exterior) {
                arms.w = link_fraction(i, j, 0, -1);
                cut = true;
            }
            if (f.mask[f.index(i + 1, j)] == NodeClass::exterior) {
                arms.e = link_fraction(i, j, 0, +1);
                cut = true;
            }
            if (f.mask[f.index(i, j - 1)] == NodeClass::exterior) {
                arms.s = link_fraction(i, j, 1, -1);
                cut = true;
            }
            if (f.mask[f.index(i, j + 1)] == NodeClass::exterior) {
                arms.n = link_fraction(i, j, 1, +1);
                cut = true;
            }
            if (cut) {
                f.mask[id] = NodeClass::near_boundary;
                f.arms.emplace(id, arms);
            }
        }
    }
    return f;
}

struct Csr {
    std::vector<std::size_t> rowptr;
    std::vector<std::size_t> col;
    std::vector<double> val;

    void matvec(const std::vector<double>& x, std::vector<double>& y) const {
        const std::size_t n = rowptr.size() - 1;
        for (std::size_t r = 0; r < n; ++r) {
            double sum = 0.0;
            for (std::size_t k = rowptr[r]; k < rowptr[r + 1]; ++k) {
                sum += val[k] * x[col[k]];
            }
            y[r] = sum;
        }
    }
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

GridField solve_torsion(const ConvexDomain& d, double h) {
    GridField f = build_grid(d, h);
    const std::size_t nx = f.nx, ny = f.ny;

    std::vector<std::ptrdiff_t> unknown(nx * ny, -1);
    std::size_t n_unknown = 0;
    for (std::size_t j = 0; j < ny; ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
            if (f.mask[f.index(i, j)] != NodeClass::exterior) {
                unknown[f.index(i, j)] = static_cast<std::ptrdiff_t>(n_unknown++);
            }
        }
    }

    Csr A;
    A.rowptr.reserve(n_unknown + 1);
    A.rowptr.push_back(0);
    A.col.reserve(5 * n_unknown);
    A.val.reserve(5 * n_unknown);
    std::vector<double> rhs(n_unknown), diag(n_unknown);
    const GridField::Arms whole;

    for (std::size_t j = 0; j < ny; ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
            const std::size_t id = f.index(i, j);
            if (f.mask[id] == NodeClass::exterior) continue;
            const auto it = f.arms.find(id);
            const GridField::Arms& arm = it == f.arms.end() ? whole : it->second;
            // Row scaling keeps the regular stencil at the classic
            // [-1 -1 4 -1 -1] with right side h^2.
            const double m = (arm.w + arm.e) * (arm.s + arm.n) / 4.0;
            const double center = m * 2.0 * (1.0 / (arm.w * arm.e) + 1.0 / (arm.s * arm.n));
            const auto row = static_cast<std::size_t>(unknown[id]);

            const auto push = [&](std::size_t ni, std::size_t nj, double coeff) {
                const std::ptrdiff_t u = unknown[f.index(ni, nj)];
                if (u >= 0) {
                    A.col.push_back(static_cast<std::size_t>(u));
                    A.val.push_back(coeff);
                }
            };
            // Ascending unknown index: south, west, center, east, north.
            push(i, j - 1, -m * 2.0 / (arm.s * (arm.s + arm.n)));
            push(i - 1, j, -m * 2.0 / (arm.w * (arm.w + arm.e)));
            A.col.push_back(row);
            A.val.push_back(center);
            push(i + 1, j, -m * 2.0 / (arm.e * (arm.w + arm.e)));
            push(i, j + 1, -m * 2.0 / (arm.n * (arm.s + arm.n)));
            A.rowptr.push_back(A.col.size());

            rhs[row] = m * h * h;
            diag[row] = center;
        }
    }

    // Diagonally preconditioned conjugate gradients.  The cut rows make the
    // matrix mildly nonsymmetric, but the iteration reaches 1e-12 residuals
    // reliably; loss of positivity is treated as a solver failure.
    std::vector<double> x(n_unknown, 0.0), r(rhs), z(n_unknown), p(n_unknown), ap(n_unknown);
    const double bnorm = std::sqrt(dot(rhs, rhs));
    if (!(bnorm > 0.0)) throw Error(ErrorKind::SolverFailure, "empty right-hand side");
    for (std::size_t k = 0; k < n_unknown; ++k) z[k] = r[k] / diag[k];
    p = z;
    double rz = dot(r, z);
    double relres = 1.0;
    const std::size_t cap = 20 * std::max(nx, ny);
    std::size_t iterations = 0;

    for (std::size_t it = 0; it < cap; ++it) {
        A.matvec(p, ap);
        const double pap = dot(p, ap);
        if (!(pap > 0.0) || !std::isfinite(pap)) {
            throw Error(ErrorKind::SolverFailure, "conjugate gradients lost positivity");
        }
        const double alpha = rz / pap;
        for (std::size_t k = 0; k < n_unknown; ++k) {
            x[k] += alpha * p[k];
            r[k] -= alpha * ap[k];
        }
        ++iterations;
        relres = std::sqrt(dot(r, r)) / bnorm;
        if (relres <= kCgTarget) break;
        for (std::size_t k = 0; k < n_unknown; ++k) z[k] = r[k] / diag[k];
        const double rz_next = dot(r, z);
        const double beta = rz_next / rz;
        rz = rz_next;
        for (std::size_t k = 0; k < n_unknown; ++k) p[k] = z[k] + beta * p[k];
    }
    if (!(relres <= kCgAccept)) {
        throw Error(ErrorKind::SolverFailure,
                    "stagnated at relative residual " + std::to_string(relres) + " after " +
                        std::to_string(iterations) + " iterations");
    }

    for (std::size_t id = 0; id < nx * ny; ++id) {
        if (unknown[id] >= 0) f.values[id] = x[static_cast<std::size_t>(unknown[id])];
    }
    f.info = SolveInfo{n_unknown, iterations, relres};
    return f;
}

double rect_torsion_exact(double a, double b, double x, double y) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "rectangle half-widths must be positive");
    }
    if (std::abs(x) > a * (1.0 + 1e-12) || std::abs(y) > b * (1.0 + 1e-12)) {
        throw Error(ErrorKind::InvalidArgument, "evaluation point lies outside the rectangle");
    }
    const double ax = std::min(std::abs(x), a);
    double sum = 0.5 * (b * b - y * y);
    const double tol = 1e-17 * b * b;
    double sign = 1.0;
    for (long long n = 1; n <= 400001; n += 2) {
        const double nn = static_cast<double>(n);
        const double coef = 16.0 * b * b / (kPiLocal * kPiLocal * kPiLocal) / (nn * nn * nn);
        const double ratio = cosh_ratio(nn * kPiLocal * ax / (2.0 * b),
                                        nn * kPiLocal * a / (2.0 * b));
        sum -= coef * sign * std::cos(nn * kPiLocal * y / (2.0 * b)) * ratio;
        if (coef * ratio < tol) break;
        sign = -sign;
    }
    return sum;
}

GridField rect_torsion_exact_field(double a, double b, double h) {
    GridField f = build_grid(make_rectangle(a, b), h);
    const double pi3 = kPiLocal * kPiLocal * kPiLocal;
    const double tol = 1e-18 * b * b;

    std::vector<double> col_ratio(f.nx), row_cos(f.ny);
    std::vector<bool> col_live(f.nx, false);
    for (std::size_t j = 0; j < f.ny; ++j) {
        for (std::size_t i = 0; i < f.nx; ++i) {
            const std::size_t id = f.index(i, j);
            if (f.mask[id] != NodeClass::exterior) {
                f.values[id] = 0.5 * (b * b - f.y(j) * f.y(j));
                col_live[i] = true;
            }
        }
    }
    double sign = 1.0;
    std::vector<std::size_t> active;
    for (long long n = 1; n <= 400001; n += 2) {
        const double nn = static_cast<double>(n);
        const double coef = 16.0 * b * b / pi3 / (nn * nn * nn);
        const double varg = nn * kPiLocal * a / (2.0 * b);
        double ratio_max = 0.0;
        active.clear();
        for (std::size_t i = 0; i < f.nx; ++i) {
            if (!col_live[i]) continue;
            const double uarg = nn * kPiLocal * std::min(std::abs(f.x(i)), a) / (2.0 * b);
            col_ratio[i] = cosh_ratio(uarg, varg);
            if (coef * col_ratio[i] >= tol) {
                active.push_back(i);
                ratio_max = std::max(ratio_max, col_ratio[i]);
            }
        }
        if (active.empty()) break;
        for (std::size_t j = 0; j < f.ny; ++j) {
            row_cos[j] = std::cos(nn * kPiLocal * f.y(j) / (2.0 * b));
        }
        for (std::size_t j = 0; j < f.ny; ++j) {
            const double rowterm = coef * sign * row_cos[j];
            for (std::size_t i : active) {
                const std::size_t id = f.index(i, j);
                if (f.mask[id] == NodeClass::exterior) continue;
                f.values[id] -= rowterm * col_ratio[i];
            }
        }
        sign = -sign;
    }
    return f;
}

DxxBounds rect_dxx_center(double a, double b) {
    if (!(b > 0.0) || !(a >= b)) {
        throw Error(ErrorKind::InvalidArgument,
                    "center curvature expects half-widths with a >= b > 0");
    }
    double sum = 0.0;
    double sign = 1.0;
    const double first = sech_stable(kPiLocal * a / (2.0 * b));
    for (long long n = 1; n <= 9999; n += 2) {
        const double nn = static_cast<double>(n);
        const double term = sech_stable(nn * kPiLocal * a / (2.0 * b)) / nn;
        sum += sign * term;
        if (term < 1e-22 * first) break;
        sign = -sign;
    }
    const double q = std::exp(-kPiLocal / 2.0 * a / b);
    return DxxBounds{-4.0 / kPiLocal * sum, -16.0 / kPiLocal * q, -4.0 / kPiLocal * q};
}

EigenPair eigen_sym2(const SymMat2& m) {
    const double tr = m.xx + m.yy;
    const double gap = std::hypot(m.xx - m.yy, 2.0 * m.xy);
    return EigenPair{0.5 * (tr + gap), 0.5 * (tr - gap)};
}

SymMat2 ellipse_hessian_exact(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "semi-axes must be positive");
    }
    const double denom = a * a + b * b;
    return SymMat2{-b * b / denom, 0.0, -a * a / denom};
}

namespace {

// Coefficients C[p][q] of the biquadratic through a 3x3 value patch, local
// coordinates in [-1, 1]^2.
struct Biquad {
    double c[3][3];

    static Biquad fit(const double patch[3][3]) {
        Biquad q{};
        double rows[3][3];
        for (int r = 0; r < 3; ++r) {
            rows[r][0] = patch[r][1];
            rows[r][1] = 0.5 * (patch[r][2] - patch[r][0]);
            rows[r][2] = 0.5 * (patch[r][2] - 2.0 * patch[r][1] + patch[r][0]);
        }
        for (int p = 0; p < 3; ++p) {
            q.c[p][0] = rows[1][p];
            q.c[p][1] = 0.5 * (rows[2][p] - rows[0][p]);
            q.c[p][2] = 0.5 * (rows[2][p] - 2.0 * rows[1][p] + rows[0][p]);
        }
        return q;
    }

    double eval(double xi, double eta) const {
        double sum = 0.0;
        double xp = 1.0;
        for (int p = 0; p < 3; ++p) {
            double ep = 1.0;
            for (int qq = 0; qq < 3; ++qq) {
                sum += c[p][qq] * xp * ep;
                ep *= eta;
            }
            xp *= xi;
        }
        return sum;
    }

    void gradient(double xi, double eta, double& gx, double& gy) const {
        gx = gy = 0.0;
        for (int p = 0; p < 3; ++p) {
            for (int qq = 0; qq < 3; ++qq) {
                if (p > 0) gx += c[p][qq] * p * std::pow(xi, p - 1) * std::pow(eta, qq);
                if (qq > 0) gy += c[p][qq] * qq * std::pow(xi, p) * std::pow(eta, qq - 1);
            }
        }
    }

    void hess(double xi, double eta, double& hxx, double& hxy, double& hyy) const {
        hxx = 2.0 * (c[2][0] + c[2][1] * eta + c[2][2] * eta * eta);
        hyy = 2.0 * (c[0][2] + c[1][2] * xi + c[2][2] * xi * xi);
        hxy = c[1][1] + 2.0 * c[2][1] * xi + 2.0 * c[1][2] * eta + 4.0 * c[2][2] * xi * eta;
    }
};

// patch[r][c]: r indexes y offsets, c indexes x offsets.  Throws when the
// 3x3 neighborhood around the nearest node touches the exterior.
Biquad patch_at_node(const GridField& f, std::size_t ix, std::size_t iy) {
    if (ix < 1 || iy < 1 || ix + 1 >= f.nx || iy + 1 >= f.ny) {
        throw Error(ErrorKind::Resolution, "interpolation patch leaves the grid");
    }
    double patch[3][3];
    for (int r = -1; r <= 1; ++r) {
        for (int c = -1; c <= 1; ++c) {
            const std::size_t id = f.index(ix + static_cast<std::size_t>(c + 1) - 1,
                                           iy + static_cast<std::size_t>(r + 1) - 1);
            if (f.mask[id] == NodeClass::exterior) {
                throw Error(ErrorKind::Resolution,
                            "interpolation patch touches the exterior; refine the grid");
            }
            patch[r + 1][c + 1] = f.values[id];
        }
    }
    return Biquad::fit(patch);
}

}  // namespace

double interpolate(const GridField& f, Vec2 p) {
    const double gx = (p.x - f.x_origin) / f.h;
    const double gy = (p.y - f.y_origin) / f.h;
    const auto ix = static_cast<long long>(std::llround(gx));
    const auto iy = static_cast<long long>(std::llround(gy));
    if (ix < 1 || iy < 1 || ix + 1 >= static_cast<long long>(f.nx) ||
        iy + 1 >= static_cast<long long>(f.ny)) {
        throw Error(ErrorKind::Resolution, "point outside the interpolable lattice");
    }
    const Biquad q =
        patch_at_node(f, static_cast<std::size_t>(ix), static_cast<std::size_t>(iy));
    return q.eval(gx - static_cast<double>(ix), gy - static_cast<double>(iy));
}

MaxLocation locate_max(const GridField& f) {
    double best = -std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 0;
    bool found = false;
    for (std::size_t j = 0; j < f.ny; ++j) {
        for (std::size_t i = 0; i < f.nx; ++i) {
            const std::size_t id = f.index(i, j);
            if (f.mask[id] == NodeClass::exterior) continue;
            if (f.values[id] > best) {
                best = f.values[id];
                bi = i;
                bj = j;
                found = true;
            }
        }
    }
    if (!found) throw Error(ErrorKind::Resolution, "field has no interior nodes");
    // An argmax hugging the boundary cannot be refined; that is a resolution
    // problem, not a geometric feature of the continuous maximizer.
    const Biquad q = patch_at_node(f, bi, bj);

    double xi = 0.0, eta = 0.0;
    for (int it = 0; it < 64; ++it) {
        double gx, gy, hxx, hxy, hyy;
        q.gradient(xi, eta, gx, gy);
        q.hess(xi, eta, hxx, hxy, hyy);
        const double det = hxx * hyy - hxy * hxy;
        if (std::abs(det) < 1e-300) break;
        const double dx = (-gx * hyy + gy * hxy) / det;
        const double dy = (-gy * hxx + gx * hxy) / det;
        xi = std::clamp(xi + dx, -1.5, 1.5);
        eta = std::clamp(eta + dy, -1.5, 1.5);
        if (std::abs(dx) + std::abs(dy) < 1e-14) break;
    }
    xi = std::clamp(xi, -1.0, 1.0);
    eta = std::clamp(eta, -1.0, 1.0);
    return MaxLocation{Vec2{f.x(bi) + xi * f.h, f.y(bj) + eta * f.h}, q.eval(xi, eta)};
}

HessianReport hessian_at_max(const GridField& f, Vec2 x0, double c1, double c2) {
    if (!(c1 > 0.0) || !(c2 > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "bound constants must be positive");
    }
    const double h = f.h;
    const double gx = (x0.x - f.x_origin) / h;
    const double gy = (x0.y - f.y_origin) / h;
    const auto ix = static_cast<long long>(std::llround(gx));
    const auto iy = static_cast<long long>(std::llround(gy));
    const bool on_node =
        std::abs(gx - static_cast<double>(ix)) <= 1e-9 && std::abs(gy - static_cast<double>(iy)) <= 1e-9;

    double patch[5][5];
    if (on_node) {
        if (ix < 2 || iy < 2 || ix + 2 >= static_cast<long long>(f.nx) ||
            iy + 2 >= static_cast<long long>(f.ny)) {
            throw Error(ErrorKind::Resolution, "differencing patch leaves the grid");
        }
        for (int r = -2; r <= 2; ++r) {
            for (int c = -2; c <= 2; ++c) {
                const std::size_t id = f.index(static_cast<std::size_t>(ix + c),
                                               static_cast<std::size_t>(iy + r));
                if (f.mask[id] == NodeClass::exterior) {
                    throw Error(ErrorKind::Resolution,
                                "differencing patch touches the exterior; refine the grid");
                }
                patch[r + 2][c + 2] = f.values[id];
            }
        }
    } else {
        for (int r = -2; r <= 2; ++r) {
            for (int c = -2; c <= 2; ++c) {
                patch[r + 2][c + 2] = interpolate(f, Vec2{x0.x + c * h, x0.y + r * h});
            }
        }
    }

    HessianReport report;
    report.x0 = x0;
    report.umax = patch[2][2];
    report.hessian.xx = (patch[2][1] - 2.0 * patch[2][2] + patch[2][3]) / (h * h);
    report.hessian.yy = (patch[1][2] - 2.0 * patch[2][2] + patch[3][2]) / (h * h);
    report.hessian.xy =
        (patch[3][3] - patch[3][1] - patch[1][3] + patch[1][1]) / (4.0 * h * h);
    const EigenPair eig = eigen_sym2(report.hessian);
    report.lambda_max = eig.lambda_max;
    report.lambda_min = eig.lambda_min;
    report.trace_residual = std::abs(eig.lambda_max + eig.lambda_min + 1.0);
    report.aspect = geometry_report(f.domain).aspect;
    report.c1 = c1;
    report.c2 = c2;
    report.bound_rhs = -c1 * std::exp(-c2 * report.aspect);
    return report;
}

HessianReport hessian_at_max(const GridField& f) {
    return hessian_at_max(f, locate_max(f).point);
}

HessianReport hessian_richardson_pair(const HessianReport& coarse, const HessianReport& fine) {
    HessianReport out = fine;
    out.umax = (4.0 * fine.umax - coarse.umax) / 3.0;
    out.hessian.xx = (4.0 * fine.hessian.xx - coarse.hessian.xx) / 3.0;
    out.hessian.xy = (4.0 * fine.hessian.xy - coarse.hessian.xy) / 3.0;
    out.hessian.yy = (4.0 * fine.hessian.yy - coarse.hessian.yy) / 3.0;
    const EigenPair eig = eigen_sym2(out.hessian);
    out.lambda_max = eig.lambda_max;
    out.lambda_min = eig.lambda_min;
    out.trace_residual = std::abs(eig.lambda_max + eig.lambda_min + 1.0);
    out.bound_rhs = -out.c1 * std::exp(-out.c2 * out.aspect);
    return out;
}

HessianReport hessian_richardson(const ConvexDomain& d, double h, double c1, double c2) {
    const GridField coarse = solve_torsion(d, h);
    const GridField fine = solve_torsion(d, h / 2.0);
    const HessianReport rc = hessian_at_max(coarse, locate_max(coarse).point, c1, c2);
    const HessianReport rf = hessian_at_max(fine, locate_max(fine).point, c1, c2);
    return hessian_richardson_pair(rc, rf);
}

GridField makar_limanov(const GridField& u) {
    GridField p;
    p.domain = u.domain;
    p.h = u.h;
    p.x_origin = u.x_origin;
    p.y_origin = u.y_origin;
    p.nx = u.nx;
    p.ny = u.ny;
    p.values.assign(u.nx * u.ny, 0.0);
    p.mask.assign(u.nx * u.ny, NodeClass::exterior);
    p.distance = u.distance;

    const double h = u.h;
    for (std::size_t j = 1; j + 1 < u.ny; ++j) {
        for (std::size_t i = 1; i + 1 < u.nx; ++i) {
            bool full = true;
            for (int r = -1; r <= 1 && full; ++r) {
                for (int c = -1; c <= 1 && full; ++c) {
                    if (u.mask[u.index(i + static_cast<std::size_t>(c + 1) - 1,
                                       j + static_cast<std::size_t>(r + 1) - 1)] ==
                        NodeClass::exterior) {
                        full = false;
                    }
                }
            }
            if (!full) continue;
            const double center = u.values[u.index(i, j)];
            const double w = u.values[u.index(i - 1, j)];
            const double e = u.values[u.index(i + 1, j)];
            const double s = u.values[u.index(i, j - 1)];
            const double n = u.values[u.index(i, j + 1)];
            const double sw = u.values[u.index(i - 1, j - 1)];
            const double se = u.values[u.index(i + 1, j - 1)];
            const double nw = u.values[u.index(i - 1, j + 1)];
            const double ne = u.values[u.index(i + 1, j + 1)];

            const double ux = (e - w) / (2.0 * h);
            const double uy = (n - s) / (2.0 * h);
            const double uxx = (e - 2.0 * center + w) / (h * h);
            const double uyy = (n - 2.0 * center + s) / (h * h);
            const double uxy = (ne - nw - se + sw) / (4.0 * h * h);
            const double lap = uxx + uyy;
            const double frob = uxx * uxx + uyy * uyy + 2.0 * uxy * uxy;
            const double quad =
                ux * (uxx * ux + uxy * uy) + uy * (uxy * ux + uyy * uy);
            const double grad_sq = ux * ux + uy * uy;

            p.values[p.index(i, j)] = quad - grad_sq * lap + center * (lap * lap - frob);
            p.mask[p.index(i, j)] = NodeClass::interior;
        }
    }
    return p;
}

Prop1Verdict prop1_check(const ConvexDomain& d, const HessianReport& report) {
    const CurvatureExtremes curv = curvature_extremes(d);
    if (!(curv.kappa_min > 0.0)) {
        throw Error(ErrorKind::UnsupportedKind,
                    "curvature bound needs a strictly convex boundary (no flat arcs)");
    }
    const double inr = inradius(d).radius;
    Prop1Verdict verdict;
    verdict.lambda_max = report.lambda_max;
    verdict.inradius = inr;
    verdict.kappa_min = curv.kappa_min;
    verdict.kappa_max = curv.kappa_max;
    verdict.c_hat = std::abs(report.lambda_max) * inr * inr * curv.kappa_max * curv.kappa_max *
                    curv.kappa_max / curv.kappa_min;
    return verdict;
}

Prop1Verdict prop1_check(const ConvexDomain& d, const GridField& f) {
    return prop1_check(d, hessian_at_max(f));
}

Theorem1Verdict theorem1_check(const ConvexDomain& d, const HessianReport& report) {
    const double aspect = geometry_report(d).aspect;
    const double bound = -report.c1 * std::exp(-report.c2 * aspect);
    return Theorem1Verdict{aspect, report.lambda_max, bound, report.lambda_max <= bound};
}

Theorem1Verdict theorem1_check(const ConvexDomain& d, const GridField& f) {
    return theorem1_check(d, hessian_at_max(f));
}

void write_csv(std::ostream& out, const GridField& f) {
    out << "x,y,value,mask\n";
    char buf[160];
    for (std::size_t j = 0; j < f.ny; ++j) {
        for (std::size_t i = 0; i < f.nx; ++i) {
            const std::size_t id = f.index(i, j);
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%d\n", f.x(i), f.y(j),
                          f.values[id], static_cast<int>(f.mask[id]));
            out << buf;
        }
    }
    if (!out) throw Error(ErrorKind::Io, "failed writing grid csv");
}

}  // namespace gaplab
