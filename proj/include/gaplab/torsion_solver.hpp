#pragma once

#include <cstdint>
#include <iosfwd>
#include <unordered_map>
#include <vector>

#include "gaplab/geometry.hpp"

namespace gaplab {

/// Default constants for the exponential Hessian bound -c1 exp(-c2 aspect),
/// calibrated so long rectangles meet it with equality up to the first
/// series term.
inline constexpr double kC1Default = 4.0 / 3.14159265358979323846;
inline constexpr double kC2Default = 3.14159265358979323846 / 2.0;

enum class NodeClass : std::uint8_t { exterior = 0, interior = 1, near_boundary = 2 };

struct SolveInfo {
    std::size_t unknowns = 0;
    std::size_t iterations = 0;
    double relative_residual = 0.0;
};

/// Scalar field sampled on a uniform lattice h * Z^2 clipped to a bounding
/// box around the domain.  Exterior nodes carry value 0.  Interior nodes
/// adjacent to the boundary are classed near_boundary and store, per arm,
/// the fraction of h at which the boundary cuts the link to the neighbor.
struct GridField {
    ConvexDomain domain;
    double h = 0.0;
    double x_origin = 0.0;  // coordinates of lattice node (i, j) = (0, 0)
    double y_origin = 0.0;
    std::size_t nx = 0;
    std::size_t ny = 0;
    std::vector<double> values;
    std::vector<NodeClass> mask;
    std::vector<double> distance;  // signed boundary distance at each node

    struct Arms {
        double w = 1.0, e = 1.0, s = 1.0, n = 1.0;
    };
    std::unordered_map<std::size_t, Arms> arms;
    SolveInfo info;

    std::size_t index(std::size_t i, std::size_t j) const { return j * nx + i; }
    double x(std::size_t i) const { return x_origin + static_cast<double>(i) * h; }
    double y(std::size_t j) const { return y_origin + static_cast<double>(j) * h; }
    bool interior(std::size_t i, std::size_t j) const {
        return mask[index(i, j)] != NodeClass::exterior;
    }
};

/// Dirichlet Poisson problem -Lap u = 1, u = 0 on the boundary, discretized
/// with boundary-fitted (cut-link) differences and solved by diagonally
/// preconditioned conjugate gradients to relative residual 1e-12.
GridField solve_torsion(const ConvexDomain& d, double h);

/// Exact series solution on the rectangle |x| <= a, |y| <= b.
double rect_torsion_exact(double a, double b, double x, double y);

/// The exact rectangle solution sampled on the same lattice solve_torsion
/// would use, for direct field comparisons.
GridField rect_torsion_exact_field(double a, double b, double h);

struct DxxBounds {
    double value;  // exact u_xx at the center
    double lower;  // -(16/pi) exp(-(pi/2) a/b)
    double upper;  //  -(4/pi) exp(-(pi/2) a/b)
};

/// Center second derivative along the long axis for aspect >= 1 rectangles,
/// with the exponential sandwich it lies in.
DxxBounds rect_dxx_center(double a, double b);

struct SymMat2 {
    double xx = 0.0, xy = 0.0, yy = 0.0;
};

struct EigenPair {
    double lambda_max;
    double lambda_min;
};

EigenPair eigen_sym2(const SymMat2& m);

/// Hessian of the exact ellipse torsion function (constant in space).
SymMat2 ellipse_hessian_exact(double a, double b);

struct MaxLocation {
    Vec2 point;
    double value;
};

/// Grid argmax refined by a biquadratic fit on the surrounding 3x3 patch.
/// An argmax whose 3x3 neighborhood touches the exterior is rejected as
/// under-resolved.
MaxLocation locate_max(const GridField& f);

/// Biquadratic interpolation of the field at an arbitrary interior point.
double interpolate(const GridField& f, Vec2 p);

struct HessianReport {
    Vec2 x0;
    double umax = 0.0;
    SymMat2 hessian;
    double lambda_max = 0.0;
    double lambda_min = 0.0;
    double trace_residual = 0.0;  // |lambda_max + lambda_min + 1|
    double aspect = 0.0;          // diameter / inradius of the field's domain
    double bound_rhs = 0.0;       // -c1 exp(-c2 aspect)
    double c1 = kC1Default;
    double c2 = kC2Default;
};

/// Second-order centered Hessian on a 5x5 patch of spacing h centered at x0,
/// assembled by biquadratic interpolation when x0 is off-node.
HessianReport hessian_at_max(const GridField& f, Vec2 x0, double c1 = kC1Default,
                             double c2 = kC2Default);

/// Convenience: locate the max first, then difference there.
HessianReport hessian_at_max(const GridField& f);

/// Combines reports from spacings h and h/2 entrywise as (4 fine - coarse)/3,
/// cancelling the leading O(h^2) error.  Location and constants come from the
/// fine report.
HessianReport hessian_richardson_pair(const HessianReport& coarse, const HessianReport& fine);

/// Solves at h and h/2 and Richardson-extrapolates the Hessian entries.
HessianReport hessian_richardson(const ConvexDomain& d, double h, double c1 = kC1Default,
                                 double c2 = kC2Default);

/// Pointwise concavity-defect field
///   P = <grad u, (D^2 u) grad u> - |grad u|^2 Lap u + u ((Lap u)^2 - |D^2 u|_F^2)
/// computed by centered differences wherever the full 3x3 value patch is
/// interior.  Nodes without one are marked exterior in the result.
GridField makar_limanov(const GridField& u);

struct Prop1Verdict {
    double lambda_max;
    double inradius;
    double kappa_min;
    double kappa_max;
    double c_hat;  // |lambda_max| inradius^2 kappa_max^3 / kappa_min
};

/// Curvature-normalized Hessian bound for smooth strictly convex domains.
Prop1Verdict prop1_check(const ConvexDomain& d, const HessianReport& report);
Prop1Verdict prop1_check(const ConvexDomain& d, const GridField& f);

struct Theorem1Verdict {
    double aspect;
    double lambda_max;
    double bound_rhs;
    bool satisfied;
};

/// The eccentricity bound: the top Hessian eigenvalue at the maximum stays
/// below -c1 exp(-c2 aspect).
Theorem1Verdict theorem1_check(const ConvexDomain& d, const HessianReport& report);
Theorem1Verdict theorem1_check(const ConvexDomain& d, const GridField& f);

/// CSV with header "x,y,value,mask" over the full lattice, row-major in j.
void write_csv(std::ostream& out, const GridField& f);

}  // namespace gaplab
