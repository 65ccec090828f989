#include "gaplab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gaplab/error.hpp"

namespace gaplab {

namespace {

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw Error(ErrorKind::Geometry, std::string(what) + " must be positive and finite");
    }
}

double cross(Vec2 u, Vec2 v) { return u.x * v.y - u.y * v.x; }

Vec2 sub(Vec2 u, Vec2 v) { return Vec2{u.x - v.x, u.y - v.y}; }

double dist(Vec2 u, Vec2 v) { return std::hypot(u.x - v.x, u.y - v.y); }

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
    const Vec2 ab = sub(b, a);
    const double len_sq = ab.x * ab.x + ab.y * ab.y;
    double t = len_sq > 0.0 ? ((p.x - a.x) * ab.x + (p.y - a.y) * ab.y) / len_sq : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(p.x - (a.x + t * ab.x), p.y - (a.y + t * ab.y));
}

/// Distance from a first-quadrant point to the ellipse x^2/a^2 + y^2/b^2 = 1,
/// valid for interior and exterior points.  The foot parameter t solves
/// (a px / (t + a^2))^2 + (b py / (t + b^2))^2 = 1 on (-b^2, inf), where the
/// left side is strictly decreasing.
double ellipse_distance_quadrant(double a, double b, double px, double py) {
    if (py == 0.0) {
        if (a == b) return std::abs(px - a);
        const double split = (a * a - b * b) / a;
        if (px < split) {
            const double xc = a * a * px / (a * a - b * b);
            const double yc = b * std::sqrt(std::max(0.0, 1.0 - (xc / a) * (xc / a)));
            return std::hypot(px - xc, yc);
        }
        return std::abs(px - a);
    }
    if (px == 0.0) {
        // With a >= b the nearest boundary point on the minor axis is (0, b).
        return std::abs(py - b);
    }

    const auto f = [&](double t) {
        const double u = a * px / (t + a * a);
        const double v = b * py / (t + b * b);
        return u * u + v * v - 1.0;
    };
    double lo = -b * b;  // f -> +inf at the pole, so the sign bracket holds
    double hi = std::max(a * px, b * py);
    while (f(hi) > 0.0) hi = 2.0 * hi + 1.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (f(mid) > 0.0 ? lo : hi) = mid;
    }
    const double t = 0.5 * (lo + hi);
    const double xc = a * a * px / (t + a * a);
    const double yc = b * b * py / (t + b * b);
    return std::hypot(px - xc, py - yc);
}

const Polygon& as_polygon(const ConvexDomain& d) { return std::get<Polygon>(d); }

std::size_t polygon_size(const Polygon& poly) { return poly.vertices.size(); }

struct EdgeConstraint {
    Vec2 normal;  // outward unit normal
    double offset;  // normal . v for points v on the edge line
};

std::vector<EdgeConstraint> edge_constraints(const Polygon& poly) {
    std::vector<EdgeConstraint> cs;
    const std::size_t m = polygon_size(poly);
    cs.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        const Vec2 v0 = poly.vertices[i];
        const Vec2 v1 = poly.vertices[(i + 1) % m];
        const Vec2 e = sub(v1, v0);
        const double len = std::hypot(e.x, e.y);
        const Vec2 n{e.y / len, -e.x / len};
        cs.push_back(EdgeConstraint{n, n.x * v0.x + n.y * v0.y});
    }
    return cs;
}

double coordinate_scale(const Polygon& poly) {
    double s = 1.0;
    for (const Vec2& v : poly.vertices) {
        s = std::max({s, std::abs(v.x), std::abs(v.y)});
    }
    return s;
}

}  // namespace

ConvexDomain make_rectangle(double a, double b) {
    require_positive(a, "rectangle half-width");
    require_positive(b, "rectangle half-height");
    return Rectangle{a, b};
}

ConvexDomain make_ellipse(double a, double b) {
    require_positive(a, "ellipse semi-axis");
    require_positive(b, "ellipse semi-axis");
    if (a < b) {
        throw Error(ErrorKind::Geometry, "ellipse expects the semi-major axis first (a >= b)");
    }
    return Ellipse{a, b};
}

ConvexDomain make_stadium(double length, double radius) {
    require_positive(length, "stadium half-length");
    require_positive(radius, "stadium radius");
    return Stadium{length, radius};
}

ConvexDomain make_polygon(std::vector<Vec2> vertices) {
    if (vertices.size() < 3) {
        throw Error(ErrorKind::Geometry, "polygon needs at least three vertices");
    }
    double scale = 1.0;
    for (const Vec2& v : vertices) {
        if (!std::isfinite(v.x) || !std::isfinite(v.y)) {
            throw Error(ErrorKind::Geometry, "polygon vertices must be finite");
        }
        scale = std::max({scale, std::abs(v.x), std::abs(v.y)});
    }
    const std::size_t m = vertices.size();
    for (std::size_t i = 0; i < m; ++i) {
        const Vec2 e0 = sub(vertices[(i + 1) % m], vertices[i]);
        const Vec2 e1 = sub(vertices[(i + 2) % m], vertices[(i + 1) % m]);
        if (cross(e0, e1) <= 1e-12 * scale * scale) {
            throw Error(ErrorKind::Geometry,
                        "polygon must be strictly convex with counterclockwise vertices");
        }
    }
    return Polygon{std::move(vertices)};
}

std::string kind_name(const ConvexDomain& d) {
    switch (d.index()) {
        case 0: return "rectangle";
        case 1: return "ellipse";
        case 2: return "stadium";
        default: return "polygon";
    }
}

double diameter(const ConvexDomain& d) {
    return std::visit(
        [](const auto& shape) -> double {
            using T = std::decay_t<decltype(shape)>;
            if constexpr (std::is_same_v<T, Rectangle>) {
                return 2.0 * std::hypot(shape.a, shape.b);
            } else if constexpr (std::is_same_v<T, Ellipse>) {
                return 2.0 * shape.a;
            } else if constexpr (std::is_same_v<T, Stadium>) {
                return 2.0 * (shape.length + shape.radius);
            } else {
                double best = 0.0;
                for (std::size_t i = 0; i < shape.vertices.size(); ++i) {
                    for (std::size_t j = i + 1; j < shape.vertices.size(); ++j) {
                        best = std::max(best, dist(shape.vertices[i], shape.vertices[j]));
                    }
                }
                return best;
            }
        },
        d);
}

InradiusResult inradius(const ConvexDomain& d) {
    if (const auto* rect = std::get_if<Rectangle>(&d)) {
        return InradiusResult{std::min(rect->a, rect->b), Vec2{0.0, 0.0}, rect->a == rect->b};
    }
    if (const auto* ell = std::get_if<Ellipse>(&d)) {
        return InradiusResult{ell->b, Vec2{0.0, 0.0}, true};
    }
    if (const auto* stad = std::get_if<Stadium>(&d)) {
        // The inscribed disk slides along the core segment.
        return InradiusResult{stad->radius, Vec2{0.0, 0.0}, false};
    }

    // Chebyshev center of a polygon: the optimum of max r subject to
    // n_i . c + r <= n_i . v_i is attained with three active edges (or on a
    // face whose endpoints are such triples), so enumerating triples is exact.
    const Polygon& poly = as_polygon(d);
    const auto cs = edge_constraints(poly);
    const std::size_t m = cs.size();
    const double scale = coordinate_scale(poly);
    const double feas_tol = 1e-9 * scale;

    double best_r = -1.0;
    std::vector<Vec2> best_centers;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            for (std::size_t k = j + 1; k < m; ++k) {
                // Solve the 3x3 active system by elimination.
                double mat[3][4] = {
                    {cs[i].normal.x, cs[i].normal.y, 1.0, cs[i].offset},
                    {cs[j].normal.x, cs[j].normal.y, 1.0, cs[j].offset},
                    {cs[k].normal.x, cs[k].normal.y, 1.0, cs[k].offset},
                };
                bool singular = false;
                for (int col = 0; col < 3 && !singular; ++col) {
                    int pivot = col;
                    for (int r = col + 1; r < 3; ++r) {
                        if (std::abs(mat[r][col]) > std::abs(mat[pivot][col])) pivot = r;
                    }
                    if (std::abs(mat[pivot][col]) < 1e-14) {
                        singular = true;
                        break;
                    }
                    if (pivot != col) std::swap(mat[pivot], mat[col]);
                    for (int r = 0; r < 3; ++r) {
                        if (r == col) continue;
                        const double f = mat[r][col] / mat[col][col];
                        for (int c = col; c < 4; ++c) mat[r][c] -= f * mat[col][c];
                    }
                }
                if (singular) continue;
                const double cx = mat[0][3] / mat[0][0];
                const double cy = mat[1][3] / mat[1][1];
                const double r = mat[2][3] / mat[2][2];
                if (!(r > 0.0)) continue;
                bool feasible = true;
                for (std::size_t q = 0; q < m && feasible; ++q) {
                    if (cs[q].normal.x * cx + cs[q].normal.y * cy + r >
                        cs[q].offset + feas_tol) {
                        feasible = false;
                    }
                }
                if (!feasible) continue;
                if (r > best_r + feas_tol) {
                    best_r = r;
                    best_centers.assign(1, Vec2{cx, cy});
                } else if (r > best_r - feas_tol) {
                    best_centers.push_back(Vec2{cx, cy});
                }
            }
        }
    }
    if (best_r <= 0.0) {
        throw Error(ErrorKind::Geometry, "failed to locate an inscribed disk");
    }
    bool unique = true;
    for (const Vec2& c : best_centers) {
        if (dist(c, best_centers.front()) > 1e-7 * scale) unique = false;
    }
    return InradiusResult{best_r, best_centers.front(), unique};
}

CurvatureExtremes curvature_extremes(const ConvexDomain& d) {
    if (const auto* ell = std::get_if<Ellipse>(&d)) {
        return CurvatureExtremes{ell->b / (ell->a * ell->a), ell->a / (ell->b * ell->b)};
    }
    if (const auto* stad = std::get_if<Stadium>(&d)) {
        return CurvatureExtremes{0.0, 1.0 / stad->radius};
    }
    throw Error(ErrorKind::UnsupportedKind,
                "curvature extremes are defined for ellipses and stadiums only");
}

ContainsResult contains(const ConvexDomain& d, Vec2 p) {
    double sd = 0.0;
    if (const auto* rect = std::get_if<Rectangle>(&d)) {
        const double qx = std::abs(p.x) - rect->a;
        const double qy = std::abs(p.y) - rect->b;
        if (qx <= 0.0 && qy <= 0.0) {
            sd = std::min(-qx, -qy);
        } else {
            sd = -std::hypot(std::max(qx, 0.0), std::max(qy, 0.0));
        }
    } else if (const auto* ell = std::get_if<Ellipse>(&d)) {
        const double px = std::abs(p.x), py = std::abs(p.y);
        const double level = (px / ell->a) * (px / ell->a) + (py / ell->b) * (py / ell->b);
        const double dd = ellipse_distance_quadrant(ell->a, ell->b, px, py);
        sd = level < 1.0 ? dd : (level > 1.0 ? -dd : 0.0);
    } else if (const auto* stad = std::get_if<Stadium>(&d)) {
        const double qx = std::max(std::abs(p.x) - stad->length, 0.0);
        sd = stad->radius - std::hypot(qx, p.y);
    } else {
        const Polygon& poly = as_polygon(d);
        const std::size_t m = polygon_size(poly);
        double min_edge = std::numeric_limits<double>::infinity();
        double min_cross = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < m; ++i) {
            const Vec2 v0 = poly.vertices[i];
            const Vec2 v1 = poly.vertices[(i + 1) % m];
            min_edge = std::min(min_edge, point_segment_distance(p, v0, v1));
            min_cross = std::min(min_cross, cross(sub(v1, v0), sub(p, v0)));
        }
        sd = min_cross > 0.0 ? min_edge : (min_cross < 0.0 ? -min_edge : 0.0);
    }
    return ContainsResult{sd > 0.0, sd};
}

double boundary_crossing(const ConvexDomain& d, Vec2 inside_point, int axis, int dir, double h) {
    if (axis != 0 && axis != 1) throw Error(ErrorKind::InvalidArgument, "axis must be 0 or 1");
    if (dir != 1 && dir != -1) throw Error(ErrorKind::InvalidArgument, "dir must be +-1");
    require_positive(h, "step length");
    if (!(contains(d, inside_point).signed_distance > 0.0)) {
        throw Error(ErrorKind::Geometry, "crossing requires a strictly interior start point");
    }
    const auto at = [&](double s) {
        Vec2 q = inside_point;
        (axis == 0 ? q.x : q.y) += s * h * static_cast<double>(dir);
        return contains(d, q).signed_distance;
    };
    if (at(1.0) > 0.0) {
        throw Error(ErrorKind::Geometry, "step endpoint is interior; nothing to cross");
    }
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        (at(mid) > 0.0 ? lo : hi) = mid;
    }
    return std::clamp(0.5 * (lo + hi), 1e-12, 1.0);
}

ConvexDomain scaled(const ConvexDomain& d, double lambda) {
    require_positive(lambda, "scale factor");
    return std::visit(
        [&](const auto& shape) -> ConvexDomain {
            using T = std::decay_t<decltype(shape)>;
            if constexpr (std::is_same_v<T, Rectangle>) {
                return Rectangle{shape.a * lambda, shape.b * lambda};
            } else if constexpr (std::is_same_v<T, Ellipse>) {
                return Ellipse{shape.a * lambda, shape.b * lambda};
            } else if constexpr (std::is_same_v<T, Stadium>) {
                return Stadium{shape.length * lambda, shape.radius * lambda};
            } else {
                Polygon out = shape;
                for (Vec2& v : out.vertices) {
                    v.x *= lambda;
                    v.y *= lambda;
                }
                return out;
            }
        },
        d);
}

Box bounding_box(const ConvexDomain& d) {
    return std::visit(
        [](const auto& shape) -> Box {
            using T = std::decay_t<decltype(shape)>;
            if constexpr (std::is_same_v<T, Rectangle>) {
                return Box{-shape.a, shape.a, -shape.b, shape.b};
            } else if constexpr (std::is_same_v<T, Ellipse>) {
                return Box{-shape.a, shape.a, -shape.b, shape.b};
            } else if constexpr (std::is_same_v<T, Stadium>) {
                const double w = shape.length + shape.radius;
                return Box{-w, w, -shape.radius, shape.radius};
            } else {
                Box box{shape.vertices[0].x, shape.vertices[0].x, shape.vertices[0].y,
                        shape.vertices[0].y};
                for (const Vec2& v : shape.vertices) {
                    box.xmin = std::min(box.xmin, v.x);
                    box.xmax = std::max(box.xmax, v.x);
                    box.ymin = std::min(box.ymin, v.y);
                    box.ymax = std::max(box.ymax, v.y);
                }
                return box;
            }
        },
        d);
}

GeometryReport geometry_report(const ConvexDomain& d) {
    GeometryReport report;
    report.diameter = diameter(d);
    report.inradius = inradius(d).radius;
    report.aspect = report.diameter / report.inradius;
    if (std::holds_alternative<Ellipse>(d) || std::holds_alternative<Stadium>(d)) {
        report.curvature = curvature_extremes(d);
    }
    return report;
}

}  // namespace gaplab
