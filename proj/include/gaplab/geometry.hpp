#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace gaplab {

struct Vec2 {
    double x;
    double y;
};

/// Axis-aligned box |x| <= a, |y| <= b (half-widths).
struct Rectangle {
    double a;
    double b;
};

/// x^2/a^2 + y^2/b^2 <= 1 with a >= b > 0.  A circle is the a == b case.
struct Ellipse {
    double a;
    double b;
};

/// Points within distance radius of the segment from (-length, 0) to
/// (length, 0): a rectangle with semicircular caps.
struct Stadium {
    double length;
    double radius;
};

/// Strictly convex polygon, vertices in counterclockwise order.
struct Polygon {
    std::vector<Vec2> vertices;
};

using ConvexDomain = std::variant<Rectangle, Ellipse, Stadium, Polygon>;

ConvexDomain make_rectangle(double a, double b);
ConvexDomain make_ellipse(double a, double b);
ConvexDomain make_stadium(double length, double radius);
ConvexDomain make_polygon(std::vector<Vec2> vertices);

std::string kind_name(const ConvexDomain& d);

double diameter(const ConvexDomain& d);

struct InradiusResult {
    double radius;
    Vec2 center;
    bool unique;  // false when the maximal inscribed disk can slide
};

InradiusResult inradius(const ConvexDomain& d);

struct CurvatureExtremes {
    double kappa_min;
    double kappa_max;
};

/// Boundary curvature range.  Defined for ellipses (closed form) and stadiums
/// (0 on the straight sides, 1/radius on the caps); rectangles and polygons
/// have no classical curvature and are rejected.
CurvatureExtremes curvature_extremes(const ConvexDomain& d);

struct ContainsResult {
    bool inside;             // strictly inside; boundary points report false
    double signed_distance;  // positive inside, zero on the boundary
};

ContainsResult contains(const ConvexDomain& d, Vec2 p);

/// Fraction in (0, 1] of the step from an interior point toward an exterior
/// neighbor at distance h along the axis (0 = x, 1 = y) in direction dir
/// (+1 or -1) at which the boundary is crossed.
double boundary_crossing(const ConvexDomain& d, Vec2 inside_point, int axis, int dir, double h);

/// The domain dilated by lambda > 0 about the origin.
ConvexDomain scaled(const ConvexDomain& d, double lambda);

struct Box {
    double xmin, xmax, ymin, ymax;
};

Box bounding_box(const ConvexDomain& d);

struct GeometryReport {
    double diameter;
    double inradius;
    double aspect;  // diameter / inradius
    std::optional<CurvatureExtremes> curvature;
};

GeometryReport geometry_report(const ConvexDomain& d);

}  // namespace gaplab
